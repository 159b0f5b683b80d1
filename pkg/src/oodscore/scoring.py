"""Per-sample ID scores: nearest-centroid distance deficit and baselines.

Every score is oriented so that HIGHER means more in-distribution; a single
threshold rule (score <= lambda -> OOD) then serves all methods. Baselines
whose native convention is lower-is-ID (entropy, k-NN distance) are negated.

All arithmetic is float64 even though features are stored as float32; the
reduction order within one sample is fixed, so results do not depend on how
callers chunk or parallelize across samples.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .centroid import CentroidModel
from .errors import (
    DimensionMismatch,
    EmptyTrainSet,
    KTooLarge,
    MissingLogits,
    SingleClassNonNearest,
    ZeroL1Norm,
)
from .featureset import FeatureSet


class Method(str, enum.Enum):
    NCDD = "ncdd"
    MSP = "msp"
    MAXLOGIT = "maxlogit"
    ENERGY = "energy"
    ENTROPY = "entropy"
    KNN = "knn"


class NcddVariant(str, enum.Enum):
    WEIGHTED = "weighted"                 # alpha*D_nonnearest - beta*D_nearest
    UNWEIGHTED_DIFF = "unweighted_diff"   # D_nonnearest - D_nearest
    NONNEAREST_ONLY = "nonnearest_only"   # D_nonnearest
    NEG_NEAREST_ONLY = "neg_nearest_only" # -D_nearest


class LogBase(str, enum.Enum):
    NATURAL = "natural"
    BASE10 = "base10"


@dataclass(frozen=True)
class ScoreConfig:
    method: Method = Method.NCDD
    variant: NcddVariant = NcddVariant.WEIGHTED
    alpha1: float = -1.0
    alpha2: float = 0.0
    log_base: LogBase = LogBase.NATURAL
    k: int | None = None          # None -> min(50, N_train) at score time
    temperature: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "variant", NcddVariant(self.variant))
        object.__setattr__(self, "log_base", LogBase(self.log_base))
        if not (math.isfinite(self.alpha1) and math.isfinite(self.alpha2)):
            raise ValueError("alpha1/alpha2 must be finite")
        if self.k is not None and self.k < 1:
            raise ValueError("k must be >= 1")
        if not (self.temperature > 0 and math.isfinite(self.temperature)):
            raise ValueError("temperature must be a finite positive real")

    def to_dict(self) -> dict:
        return {
            "method": self.method.value,
            "variant": self.variant.value,
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "log_base": self.log_base.value,
            "k": self.k,
            "temperature": self.temperature,
        }


@dataclass(frozen=True)
class ScoreVector:
    scores: np.ndarray
    config_echo: ScoreConfig
    model_fingerprint: str = ""


def distances_to_centroids(z: np.ndarray, m: CentroidModel) -> np.ndarray:
    """Euclidean distance from one feature vector to every class centroid."""
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (m.n_features,):
        raise DimensionMismatch(m.n_features, z.shape[0] if z.ndim == 1 else -1)
    out = np.empty(m.n_classes, dtype=np.float64)
    for c in range(m.n_classes):
        diff = m.centroids[c] - z
        acc = 0.0
        for v in diff:                     # fixed sequential reduction order
            acc += v * v
        out[c] = math.sqrt(acc)
    return out


def _nearest_split(dists: np.ndarray) -> tuple[int, float, float]:
    """Return (nearest index, nearest distance, sum of the other distances).

    Ties on the minimum go to the smallest index.
    """
    n_star = int(np.argmin(dists))         # np.argmin returns the first minimum
    d_near = float(dists[n_star])
    d_rest = 0.0
    for c in range(dists.shape[0]):
        if c != n_star:
            d_rest += float(dists[c])
    return n_star, d_near, d_rest


def ncdd_score(z: np.ndarray, m: CentroidModel, cfg: ScoreConfig) -> float:
    """Nearest-centroid distance deficit of one sample, per cfg.variant."""
    dists = distances_to_centroids(z, m)
    _, d_near, d_rest = _nearest_split(dists)

    variant = cfg.variant
    if variant in (NcddVariant.WEIGHTED, NcddVariant.UNWEIGHTED_DIFF,
                   NcddVariant.NONNEAREST_ONLY) and m.n_classes < 2:
        raise SingleClassNonNearest()

    if variant is NcddVariant.UNWEIGHTED_DIFF:
        return d_rest - d_near
    if variant is NcddVariant.NONNEAREST_ONLY:
        return d_rest
    if variant is NcddVariant.NEG_NEAREST_ONLY:
        return -d_near

    l1 = 0.0
    for v in np.asarray(z, dtype=np.float64):
        l1 += abs(v)
    if l1 == 0.0:
        raise ZeroL1Norm()
    log = math.log if cfg.log_base is LogBase.NATURAL else math.log10
    alpha = log(l1 / 10.0 ** cfg.alpha1)
    beta = log(l1 / 10.0 ** cfg.alpha2)
    return alpha * d_rest - beta * d_near


def _check_logits(logits) -> np.ndarray:
    if logits is None:
        raise MissingLogits()
    return np.asarray(logits, dtype=np.float64)


def _softmax(logits: np.ndarray, temperature: float) -> np.ndarray:
    x = logits / temperature
    x = x - x.max()
    e = np.exp(x)
    return e / e.sum()


def msp_score(logits, cfg: ScoreConfig = ScoreConfig(method=Method.MSP)) -> float:
    """Maximum softmax probability; in (0, 1]."""
    x = _check_logits(logits)
    return float(_softmax(x, cfg.temperature).max())


def maxlogit_score(logits) -> float:
    x = _check_logits(logits)
    return float(x.max())


def energy_score(logits, cfg: ScoreConfig = ScoreConfig(method=Method.ENERGY)) -> float:
    """T * logsumexp(logits / T), computed in overflow-safe form."""
    x = _check_logits(logits) / cfg.temperature
    m = float(x.max())
    return cfg.temperature * (m + math.log(float(np.exp(x - m).sum())))


def entropy_score(logits, cfg: ScoreConfig = ScoreConfig(method=Method.ENTROPY)) -> float:
    """Negative Shannon entropy (nats) of softmax(logits / T); 0*log0 := 0."""
    p = _softmax(_check_logits(logits), cfg.temperature)
    h = 0.0
    for v in p:
        if v > 0.0:
            h -= float(v) * math.log(float(v))
    return -h


def _l2_normalize_rows(x: np.ndarray) -> np.ndarray:
    norms = np.sqrt((x * x).sum(axis=1))
    zero = norms == 0.0
    if zero.any():
        warnings.warn("zero-norm rows left unnormalized in k-NN scoring", RuntimeWarning)
        norms = np.where(zero, 1.0, norms)
    return x / norms[:, None]


def knn_score(z: np.ndarray, train_features: np.ndarray,
              cfg: ScoreConfig = ScoreConfig(method=Method.KNN)) -> float:
    """Negative distance to the k-th nearest L2-normalized training row."""
    if train_features is None or len(train_features) == 0:
        raise EmptyTrainSet()
    train = np.asarray(train_features, dtype=np.float64)
    n_train = train.shape[0]
    k = cfg.k if cfg.k is not None else min(50, n_train)
    if k > n_train:
        raise KTooLarge(k, n_train)
    z = np.asarray(z, dtype=np.float64)
    if z.shape != (train.shape[1],):
        raise DimensionMismatch(train.shape[1], z.shape[0] if z.ndim == 1 else -1)
    zn = float(np.sqrt((z * z).sum()))
    if zn == 0.0:
        warnings.warn("zero-norm query left unnormalized in k-NN scoring", RuntimeWarning)
        zn = 1.0
    zhat = z / zn
    diffs = _l2_normalize_rows(train) - zhat
    dists = np.sqrt((diffs * diffs).sum(axis=1))
    kth = float(np.partition(dists, k - 1)[k - 1])
    return -kth


def score_set(
    test: FeatureSet,
    m: CentroidModel | None,
    cfg: ScoreConfig,
    train: FeatureSet | None = None,
) -> ScoreVector:
    """Score every row of a FeatureSet; one plain sequential loop, so the
    result is trivially independent of any caller-side chunking."""
    n = test.n_samples
    scores = np.empty(n, dtype=np.float64)
    fingerprint = ""

    if cfg.method is Method.NCDD:
        if m is None:
            raise EmptyTrainSet()
        if test.n_features != m.n_features:
            raise DimensionMismatch(m.n_features, test.n_features)
        fingerprint = m.fit_fingerprint
        for i in range(n):
            try:
                scores[i] = ncdd_score(test.features[i], m, cfg)
            except ZeroL1Norm:
                raise ZeroL1Norm(row=i) from None
    elif cfg.method is Method.KNN:
        if train is None or train.n_samples == 0:
            raise EmptyTrainSet()
        if test.n_features != train.n_features:
            raise DimensionMismatch(train.n_features, test.n_features)
        for i in range(n):
            scores[i] = knn_score(test.features[i], train.features, cfg)
    else:
        if test.logits is None:
            raise MissingLogits()
        per_sample = {
            Method.MSP: lambda x: msp_score(x, cfg),
            Method.MAXLOGIT: maxlogit_score,
            Method.ENERGY: lambda x: energy_score(x, cfg),
            Method.ENTROPY: lambda x: entropy_score(x, cfg),
        }[cfg.method]
        for i in range(n):
            scores[i] = per_sample(test.logits[i])

    return ScoreVector(scores=scores, config_echo=cfg, model_fingerprint=fingerprint)
