"""Feature container, its FSET1 on-disk binary format, and CSV interop.

FSET1 layout (all integers little-endian):

    bytes 0..4   magic b"FSET1"
    bytes 5..8   u32 header_length
    next header_length bytes: UTF-8 JSON metadata (sorted keys, no spaces)
    then raw sections, in fixed order: features, labels?, logits?
        features: n_samples * n_features  float32 LE, row-major
        labels:   n_samples               int32 LE   (only if has_labels)
        logits:   n_samples * n_classes   float32 LE (only if has_logits)

The metadata declares each present section's byte size; declared sizes must
sum to the exact remaining file length.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import (
    BadMagic,
    HeaderMismatch,
    IoFailure,
    LabelOutOfRange,
    MetaSectionMismatch,
    NonFiniteValue,
    RaggedRow,
    TruncatedFile,
    UnparsableNumber,
)

MAGIC = b"FSET1"


@dataclass(frozen=True, eq=False)
class FeatureSet:
    """Immutable table of feature vectors with optional labels and logits."""

    features: np.ndarray
    n_classes: int = 1
    labels: np.ndarray | None = None
    logits: np.ndarray | None = None
    class_names: tuple[str, ...] | None = None
    source_tag: str = ""

    def __post_init__(self):
        feats = np.ascontiguousarray(self.features, dtype=np.float32)
        if feats.ndim != 2 or feats.shape[0] < 1 or feats.shape[1] < 1:
            raise ValueError(f"features must be a non-empty 2-D matrix, got shape {feats.shape}")
        object.__setattr__(self, "features", feats)
        if self.n_classes < 1:
            raise ValueError("n_classes must be >= 1")
        bad = np.where(~np.isfinite(feats).all(axis=1))[0]
        if bad.size:
            raise NonFiniteValue("features", int(bad[0]))
        if self.labels is not None:
            labels = np.ascontiguousarray(self.labels, dtype=np.int32)
            if labels.shape != (feats.shape[0],):
                raise ValueError("labels length must equal n_samples")
            off = np.where((labels < 0) | (labels >= self.n_classes))[0]
            if off.size:
                r = int(off[0])
                raise LabelOutOfRange(r, int(labels[r]), self.n_classes)
            object.__setattr__(self, "labels", labels)
        if self.logits is not None:
            logits = np.ascontiguousarray(self.logits, dtype=np.float32)
            if logits.shape != (feats.shape[0], self.n_classes):
                raise ValueError(
                    f"logits shape {logits.shape} != ({feats.shape[0]}, {self.n_classes})"
                )
            bad = np.where(~np.isfinite(logits).all(axis=1))[0]
            if bad.size:
                raise NonFiniteValue("logits", int(bad[0]))
            object.__setattr__(self, "logits", logits)
        if self.class_names is not None:
            names = tuple(self.class_names)
            if len(names) != self.n_classes or any(not n for n in names):
                raise ValueError("class_names must hold exactly n_classes non-empty strings")
            object.__setattr__(self, "class_names", names)

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, FeatureSet):
            return NotImplemented
        def arr_eq(a, b):
            if a is None or b is None:
                return (a is None) == (b is None)
            return a.shape == b.shape and np.array_equal(a, b)
        return (
            self.n_classes == other.n_classes
            and self.class_names == other.class_names
            and self.source_tag == other.source_tag
            and arr_eq(self.features, other.features)
            and arr_eq(self.labels, other.labels)
            and arr_eq(self.logits, other.logits)
        )


def _meta_for(fs: FeatureSet) -> dict:
    sections = [["features", fs.n_samples * fs.n_features * 4]]
    if fs.labels is not None:
        sections.append(["labels", fs.n_samples * 4])
    if fs.logits is not None:
        sections.append(["logits", fs.n_samples * fs.n_classes * 4])
    return {
        "dtype": "f32",
        "layout": "row-major",
        "endianness": "little",
        "n_samples": fs.n_samples,
        "n_features": fs.n_features,
        "n_classes": fs.n_classes,
        "has_labels": fs.labels is not None,
        "has_logits": fs.logits is not None,
        "class_names": list(fs.class_names) if fs.class_names is not None else None,
        "source_tag": fs.source_tag,
        "sections": sections,
    }


def save_fset(fs: FeatureSet, path: str | Path) -> None:
    """Write an FSET1 container; identical inputs produce identical bytes."""
    meta = json.dumps(_meta_for(fs), sort_keys=True, separators=(",", ":")).encode("utf-8")
    try:
        with open(path, "wb") as f:
            f.write(MAGIC)
            f.write(np.uint32(len(meta)).astype("<u4").tobytes())
            f.write(meta)
            f.write(fs.features.astype("<f4").tobytes())
            if fs.labels is not None:
                f.write(fs.labels.astype("<i4").tobytes())
            if fs.logits is not None:
                f.write(fs.logits.astype("<f4").tobytes())
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def load_fset(path: str | Path) -> FeatureSet:
    """Read an FSET1 container, rejecting any malformed file with a typed error."""
    try:
        blob = Path(path).read_bytes()
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e

    if len(blob) < 5:
        raise TruncatedFile(5, len(blob), 0)
    if blob[:5] != MAGIC:
        raise BadMagic(blob[:5])
    if len(blob) < 9:
        raise TruncatedFile(9, len(blob), 5)
    header_len = int(np.frombuffer(blob[5:9], dtype="<u4")[0])
    if len(blob) < 9 + header_len:
        raise TruncatedFile(9 + header_len, len(blob), 9)
    try:
        meta = json.loads(blob[9 : 9 + header_len].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise MetaSectionMismatch(f"unparsable JSON header: {e}") from e
    if not isinstance(meta, dict):
        raise MetaSectionMismatch("JSON header is not an object")

    for key, want in (("dtype", "f32"), ("layout", "row-major"), ("endianness", "little")):
        if meta.get(key) != want:
            raise MetaSectionMismatch(f"{key}={meta.get(key)!r}, expected {want!r}")
    try:
        n = int(meta["n_samples"])
        d = int(meta["n_features"])
        c = int(meta["n_classes"])
        has_labels = bool(meta["has_labels"])
        has_logits = bool(meta["has_logits"])
        sections = meta["sections"]
    except (KeyError, TypeError, ValueError) as e:
        raise MetaSectionMismatch(f"missing or malformed field: {e}") from e
    if n < 1 or d < 1 or c < 1:
        raise MetaSectionMismatch(f"bad counts n={n} d={d} C={c}")

    expected_sections = [["features", n * d * 4]]
    if has_labels:
        expected_sections.append(["labels", n * 4])
    if has_logits:
        expected_sections.append(["logits", n * c * 4])
    if [list(s) for s in sections] != expected_sections:
        raise MetaSectionMismatch(f"declared sections {sections} != expected {expected_sections}")
    payload = blob[9 + header_len :]
    total = sum(size for _, size in expected_sections)
    if total != len(payload):
        raise MetaSectionMismatch(
            f"declared section sizes sum to {total}, actual payload is {len(payload)} bytes"
        )

    off = 0
    features = np.frombuffer(payload, dtype="<f4", count=n * d, offset=off).reshape(n, d)
    off += n * d * 4
    labels = None
    if has_labels:
        labels = np.frombuffer(payload, dtype="<i4", count=n, offset=off)
        off += n * 4
    logits = None
    if has_logits:
        logits = np.frombuffer(payload, dtype="<f4", count=n * c, offset=off).reshape(n, c)

    names = meta.get("class_names")
    return FeatureSet(
        features=features,
        n_classes=c,
        labels=labels,
        logits=logits,
        class_names=tuple(names) if names is not None else None,
        source_tag=str(meta.get("source_tag", "")),
    )


def _csv_header_for(d: int, has_labels: bool, n_logits: int) -> list[str]:
    header = [f"feat_{j}" for j in range(d)]
    if has_labels:
        header.append("label")
    header += [f"logit_{j}" for j in range(n_logits)]
    return header


def import_csv(path: str | Path, n_classes: int) -> FeatureSet:
    """Parse the CSV dialect `feat_0..feat_{d-1}[,label][,logit_0..logit_{C-1}]`."""
    try:
        with open(path, newline="", encoding="utf-8") as f:
            rows = list(csv.reader(f))
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    if not rows:
        raise HeaderMismatch("empty file, header row required")

    header = rows[0]
    d = 0
    while d < len(header) and header[d] == f"feat_{d}":
        d += 1
    if d == 0:
        raise HeaderMismatch(f"expected feat_0 first, found {header[:1]}")
    rest = header[d:]
    has_labels = bool(rest) and rest[0] == "label"
    if has_labels:
        rest = rest[1:]
    n_logits = len(rest)
    if rest != [f"logit_{j}" for j in range(n_logits)]:
        raise HeaderMismatch(f"unexpected trailing columns {rest}")
    if n_logits not in (0, n_classes):
        raise HeaderMismatch(f"{n_logits} logit columns but n_classes={n_classes}")

    width = len(header)
    feats, labels, logits = [], [], []
    for i, row in enumerate(rows[1:]):
        if len(row) != width:
            raise RaggedRow(i, width, len(row))

        def num(col: int) -> float:
            try:
                return float(row[col])
            except ValueError:
                raise UnparsableNumber(i, col, row[col]) from None

        feats.append([num(j) for j in range(d)])
        if has_labels:
            try:
                labels.append(int(row[d]))
            except ValueError:
                raise UnparsableNumber(i, d, row[d]) from None
        if n_logits:
            base = d + (1 if has_labels else 0)
            logits.append([num(base + j) for j in range(n_logits)])

    if not feats:
        raise HeaderMismatch("no data rows")
    return FeatureSet(
        features=np.asarray(feats, dtype=np.float32),
        n_classes=n_classes,
        labels=np.asarray(labels, dtype=np.int32) if has_labels else None,
        logits=np.asarray(logits, dtype=np.float32) if n_logits else None,
    )


def export_csv(fs: FeatureSet, path: str | Path) -> None:
    """Write a FeatureSet as CSV; float32 values round-trip exactly via repr."""
    header = _csv_header_for(fs.n_features, fs.labels is not None,
                             fs.n_classes if fs.logits is not None else 0)
    try:
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(header)
            for i in range(fs.n_samples):
                row = [repr(float(v)) for v in fs.features[i]]
                if fs.labels is not None:
                    row.append(str(int(fs.labels[i])))
                if fs.logits is not None:
                    row += [repr(float(v)) for v in fs.logits[i]]
                w.writerow(row)
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e
