"""Per-class centroid estimation and JSON persistence of the fitted model.

Each centroid is the arithmetic mean of its class's training feature rows,
accumulated in float64 in ascending row-index order so fits are
bit-reproducible across runs.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimZero, EmptyClass, IoFailure, MissingLabels, SchemaMismatch
from .featureset import FeatureSet

MODEL_VERSION = "1"


@dataclass(frozen=True, eq=False)
class CentroidModel:
    centroids: np.ndarray           # (C, d) float64
    class_counts: np.ndarray        # (C,) int64
    fit_fingerprint: str
    class_names: tuple[str, ...] | None = None

    def __post_init__(self):
        cents = np.ascontiguousarray(self.centroids, dtype=np.float64)
        counts = np.ascontiguousarray(self.class_counts, dtype=np.int64)
        if cents.ndim != 2 or cents.shape[0] < 1 or cents.shape[1] < 1:
            raise ValueError(f"centroids must be a non-empty (C, d) matrix, got {cents.shape}")
        if counts.shape != (cents.shape[0],) or (counts < 1).any():
            raise ValueError("class_counts must hold one count >= 1 per class")
        if not np.isfinite(cents).all():
            raise ValueError("centroid rows must be finite")
        object.__setattr__(self, "centroids", cents)
        object.__setattr__(self, "class_counts", counts)
        if self.class_names is not None:
            object.__setattr__(self, "class_names", tuple(self.class_names))

    @property
    def n_classes(self) -> int:
        return self.centroids.shape[0]

    @property
    def n_features(self) -> int:
        return self.centroids.shape[1]

    @property
    def single_class_warning(self) -> bool:
        # With C = 1 the sum over non-nearest centroids is empty; scoring
        # rejects variants that need it.
        return self.n_classes == 1

    def __eq__(self, other) -> bool:
        if not isinstance(other, CentroidModel):
            return NotImplemented
        return (
            np.array_equal(self.centroids, other.centroids)
            and np.array_equal(self.class_counts, other.class_counts)
            and self.fit_fingerprint == other.fit_fingerprint
            and self.class_names == other.class_names
        )


def _fingerprint(train: FeatureSet) -> str:
    h = hashlib.sha256()
    h.update(b"centroid-model-v" + MODEL_VERSION.encode())
    h.update(train.features.astype("<f4").tobytes())
    h.update(train.labels.astype("<i4").tobytes())
    return h.hexdigest()[:16]


def fit_centroids(train: FeatureSet) -> CentroidModel:
    """Fit one centroid per class from a labeled training FeatureSet."""
    if train.labels is None:
        raise MissingLabels()
    if train.n_features == 0:
        raise DimZero()
    C, d = train.n_classes, train.n_features
    centroids = np.empty((C, d), dtype=np.float64)
    counts = np.empty(C, dtype=np.int64)
    for c in range(C):
        rows = train.features[train.labels == c]
        if rows.shape[0] == 0:
            raise EmptyClass(c)
        acc = np.zeros(d, dtype=np.float64)
        for row in rows:                      # sequential, ascending row index
            acc += row
        centroids[c] = acc / rows.shape[0]
        counts[c] = rows.shape[0]
    return CentroidModel(
        centroids=centroids,
        class_counts=counts,
        fit_fingerprint=_fingerprint(train),
        class_names=train.class_names,
    )


def save_model(m: CentroidModel, path: str | Path) -> None:
    """Serialize to JSON; floats use shortest round-trip decimals (lossless)."""
    doc = {
        "version": MODEL_VERSION,
        "n_classes": m.n_classes,
        "n_features": m.n_features,
        "class_counts": [int(x) for x in m.class_counts],
        "class_names": list(m.class_names) if m.class_names is not None else None,
        "centroids": [[float(v) for v in row] for row in m.centroids],
        "fit_fingerprint": m.fit_fingerprint,
    }
    try:
        Path(path).write_text(json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n",
                              encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def load_model(path: str | Path) -> CentroidModel:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaMismatch(f"unparsable JSON: {e}") from e
    if not isinstance(doc, dict):
        raise SchemaMismatch("document is not an object")
    for key in ("version", "n_classes", "n_features", "class_counts", "centroids",
                "fit_fingerprint"):
        if key not in doc:
            raise SchemaMismatch(f"missing key {key!r}")
    if doc["version"] != MODEL_VERSION:
        raise SchemaMismatch(f"unsupported version {doc['version']!r}")
    cents = np.asarray(doc["centroids"], dtype=np.float64)
    if cents.ndim != 2 or cents.shape != (int(doc["n_classes"]), int(doc["n_features"])):
        raise SchemaMismatch(
            f"centroids shape {cents.shape} != ({doc['n_classes']}, {doc['n_features']})"
        )
    names = doc.get("class_names")
    try:
        return CentroidModel(
            centroids=cents,
            class_counts=np.asarray(doc["class_counts"], dtype=np.int64),
            fit_fingerprint=str(doc["fit_fingerprint"]),
            class_names=tuple(names) if names is not None else None,
        )
    except ValueError as e:
        raise SchemaMismatch(str(e)) from e
