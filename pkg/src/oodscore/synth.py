"""Seeded synthetic feature-space data so the whole suite runs without any
images, model, or dataset.

Geometry: class c has mean  s * e_c + s * 1  (unit axis direction scaled by
the separation, plus a strictly positive +s offset on every coordinate so
the L1 norm stays bounded away from zero, mirroring non-negative
post-activation deep features). ID rows add isotropic Gaussian noise sigma.
OOD rows depend on the mode:

  EQUIDISTANT_SHELL  barycenter of class means + s * (random unit direction
                     projected orthogonal to the span of the centroid offsets
                     from the barycenter) + Gaussian sigma: exactly
                     equidistant from all centroids before the noise term.
  INTERPOLATED       midpoint of two distinct class means + Gaussian sigma.
  UNIFORM_BOX        uniform over [0, 2s] per coordinate.

Portable PRNG (bit-reproducible across languages):
  * state update: 64-bit LCG, state = state * 6364136223846793005
    + 1442695040888963407 (mod 2^64); the updated state is the output word.
  * stream seeding: stream k of master seed S starts from
    splitmix64(S + k * 0x9E3779B97F4A7C15) with the standard splitmix64
    finalizer (shift-xor-multiply constants 0xBF58476D1CE4E5B9,
    0x94D049BB133111EB).
  * uniform in [0, 1): top 53 bits, (word >> 11) * 2^-53.
  * Gaussian: Box-Muller on (u1 in (0, 1], u2 in [0, 1)), cosine branch
    first, sine branch cached and returned next.
  * streams: 0 = train, 1 = test_id, 2 = test_ood. Within a stream, values
    are drawn row by row, dimension by dimension.
Generated coordinates are computed in float64 and stored as float32.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import SpecInvalid
from .featureset import FeatureSet

_MASK = (1 << 64) - 1
_LCG_MULT = 6364136223846793005
_LCG_INC = 1442695040888963407
_GOLDEN = 0x9E3779B97F4A7C15


def _splitmix64(x: int) -> int:
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


class PortableRng:
    """64-bit LCG with Box-Muller Gaussians; see module docstring."""

    def __init__(self, seed: int, stream: int = 0):
        self.state = _splitmix64((seed + stream * _GOLDEN) & _MASK)
        self._spare: float | None = None

    def next_u64(self) -> int:
        self.state = (self.state * _LCG_MULT + _LCG_INC) & _MASK
        return self.state

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * 2.0 ** -53

    def gauss(self) -> float:
        if self._spare is not None:
            v, self._spare = self._spare, None
            return v
        u1 = ((self.next_u64() >> 11) + 1) * 2.0 ** -53   # (0, 1]
        u2 = self.uniform()
        r = math.sqrt(-2.0 * math.log(u1))
        self._spare = r * math.sin(2.0 * math.pi * u2)
        return r * math.cos(2.0 * math.pi * u2)

    def unit_vector(self, d: int) -> np.ndarray:
        while True:
            v = np.array([self.gauss() for _ in range(d)], dtype=np.float64)
            n = math.sqrt(float((v * v).sum()))
            if n > 0.0:
                return v / n


class OodMode(str, enum.Enum):
    EQUIDISTANT_SHELL = "equidistant_shell"
    INTERPOLATED = "interpolated"
    UNIFORM_BOX = "uniform_box"


@dataclass(frozen=True)
class SynthSpec:
    n_classes: int = 3
    dim: int = 64
    per_class_n: int = 500
    id_std: float = 1.0
    separation: float = 10.0
    ood_mode: OodMode = OodMode.EQUIDISTANT_SHELL
    ood_n: int = 500
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "ood_mode", OodMode(self.ood_mode))
        if self.n_classes < 1 or self.per_class_n < 1 or self.ood_n < 1:
            raise SpecInvalid("counts must be >= 1")
        if self.dim < self.n_classes:
            raise SpecInvalid(f"dim {self.dim} < n_classes {self.n_classes}")
        if not self.id_std > 0:
            raise SpecInvalid("id_std must be > 0")
        if not self.separation > 0:
            raise SpecInvalid("separation must be > 0")


def _class_means(spec: SynthSpec) -> np.ndarray:
    s = spec.separation
    means = np.full((spec.n_classes, spec.dim), s, dtype=np.float64)
    for c in range(spec.n_classes):
        means[c, c] += s
    return means


def _id_block(spec: SynthSpec, rng: PortableRng, means: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rows = np.empty((spec.n_classes * spec.per_class_n, spec.dim), dtype=np.float64)
    labels = np.empty(spec.n_classes * spec.per_class_n, dtype=np.int32)
    i = 0
    for c in range(spec.n_classes):
        for _ in range(spec.per_class_n):
            rows[i] = means[c] + spec.id_std * np.array(
                [rng.gauss() for _ in range(spec.dim)])
            labels[i] = c
            i += 1
    return rows, labels


def _ood_block(spec: SynthSpec, rng: PortableRng, means: np.ndarray) -> np.ndarray:
    s = spec.separation
    bary = means.mean(axis=0)
    C = spec.n_classes
    rows = np.empty((spec.ood_n, spec.dim), dtype=np.float64)
    for i in range(spec.ood_n):
        if spec.ood_mode is OodMode.EQUIDISTANT_SHELL:
            # The centroid offsets from the barycenter span the zero-sum
            # subspace of the first C coordinates; projecting a direction
            # orthogonal to that span just averages those coordinates.
            # The resulting shell point is exactly equidistant from all
            # centroids before the noise term. Closed form keeps the output
            # bit-portable (no linear algebra library involved).
            while True:
                u = rng.unit_vector(spec.dim)
                u[:C] = u[:C].sum() / C
                norm = math.sqrt(float((u * u).sum()))
                if norm > 1e-12:
                    u = u / norm
                    break
            noise = np.array([rng.gauss() for _ in range(spec.dim)])
            rows[i] = bary + s * u + spec.id_std * noise
        elif spec.ood_mode is OodMode.INTERPOLATED:
            a = int(rng.next_u64() % spec.n_classes)
            b = int(rng.next_u64() % spec.n_classes)
            while b == a and spec.n_classes > 1:
                b = int(rng.next_u64() % spec.n_classes)
            noise = np.array([rng.gauss() for _ in range(spec.dim)])
            rows[i] = 0.5 * (means[a] + means[b]) + spec.id_std * noise
        else:  # UNIFORM_BOX
            rows[i] = np.array([2.0 * s * rng.uniform() for _ in range(spec.dim)])
    return rows


def generate(spec: SynthSpec) -> tuple[FeatureSet, FeatureSet, FeatureSet]:
    """Produce (train, test_id, test_ood); train and test_id each hold
    per_class_n rows per class, drawn independently."""
    means = _class_means(spec)
    tag = f"synth:seed={spec.seed}"

    train_rows, train_labels = _id_block(spec, PortableRng(spec.seed, stream=0), means)
    test_rows, test_labels = _id_block(spec, PortableRng(spec.seed, stream=1), means)
    ood_rows = _ood_block(spec, PortableRng(spec.seed, stream=2), means)

    train = FeatureSet(features=train_rows.astype(np.float32), n_classes=spec.n_classes,
                       labels=train_labels, source_tag=tag + ":train")
    test_id = FeatureSet(features=test_rows.astype(np.float32), n_classes=spec.n_classes,
                         labels=test_labels, source_tag=tag + ":test_id")
    test_ood = FeatureSet(features=ood_rows.astype(np.float32), n_classes=spec.n_classes,
                          source_tag=tag + ":test_ood")
    return train, test_id, test_ood
