"""Standalone FSET1 writer.

Format: 5-byte magic "FSET1", u32 little-endian JSON header length, UTF-8
JSON metadata (sorted keys, compact separators), then raw little-endian
sections in fixed order: features (f32), labels (i32, optional), logits
(f32, optional). The metadata declares each present section's byte size.
Kept independent of the scoring toolkit on purpose: the binary format is
the interface between the two packages.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

MAGIC = b"FSET1"


def write_fset(
    path: str | Path,
    features: np.ndarray,
    n_classes: int,
    labels: np.ndarray | None = None,
    logits: np.ndarray | None = None,
    class_names: list[str] | None = None,
    source_tag: str = "",
) -> None:
    features = np.ascontiguousarray(features, dtype="<f4")
    n, d = features.shape
    if not np.isfinite(features).all():
        raise ValueError("non-finite feature values")
    sections = [["features", n * d * 4]]
    if labels is not None:
        labels = np.ascontiguousarray(labels, dtype="<i4")
        assert labels.shape == (n,)
        sections.append(["labels", n * 4])
    if logits is not None:
        logits = np.ascontiguousarray(logits, dtype="<f4")
        assert logits.shape == (n, n_classes)
        sections.append(["logits", n * n_classes * 4])
    meta = {
        "dtype": "f32",
        "layout": "row-major",
        "endianness": "little",
        "n_samples": n,
        "n_features": d,
        "n_classes": n_classes,
        "has_labels": labels is not None,
        "has_logits": logits is not None,
        "class_names": class_names,
        "source_tag": source_tag,
        "sections": sections,
    }
    blob = json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8")
    with open(path, "wb") as f:
        f.write(MAGIC)
        f.write(len(blob).to_bytes(4, "little"))
        f.write(blob)
        f.write(features.tobytes())
        if labels is not None:
            f.write(labels.tobytes())
        if logits is not None:
            f.write(logits.tobytes())
