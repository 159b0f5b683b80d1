"""Penultimate-feature extraction from class-per-subdirectory image folders
into FSET1 containers.

Class indices follow lexicographic subdirectory order; the emitted
class_names record that mapping. Extraction runs the backbone in eval mode
under no_grad, so re-running the same job writes identical bytes.
"""

from __future__ import annotations

import csv
import hashlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
from PIL import Image, UnidentifiedImageError

from .backbones import FEATURE_DIMS, build_backbone
from .errors import UndecodableImage
from .fset_writer import write_fset

IMAGE_EXTS = {".png", ".jpg", ".jpeg", ".bmp", ".gif", ".tif", ".tiff", ".webp"}

# ImageNet normalization, the convention all four backbones assume
_MEAN = np.array([0.485, 0.456, 0.406], dtype=np.float32)
_STD = np.array([0.229, 0.224, 0.225], dtype=np.float32)


@dataclass
class ExtractionJob:
    image_root: str
    backbone: str = "resnet18"
    weights: str = "random-init"
    input_size: int = 224
    batch_size: int = 16
    output: str = "features.fset"
    split_manifest: str | None = None
    split: str | None = None
    seed: int = 0

    def __post_init__(self):
        if self.backbone not in FEATURE_DIMS:
            raise ValueError(f"unknown backbone {self.backbone!r}")
        if self.input_size != 224:
            raise ValueError("input_size must be 224")


def list_class_images(root: str | Path, manifest: str | None = None,
                      split: str | None = None) -> tuple[list[str], list[tuple[Path, int]]]:
    """Return (class_names, [(image_path, class_index)]) in deterministic order."""
    root = Path(root)
    class_dirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not class_dirs:
        raise ValueError(f"no class subdirectories under {root}")
    keep = None
    if manifest is not None:
        keep = set()
        with open(manifest, newline="", encoding="utf-8") as f:
            for row in csv.reader(f):
                if len(row) >= 2 and (split is None or row[1] == split):
                    keep.add(row[0])
    names, items = [], []
    for ci, cdir in enumerate(class_dirs):
        names.append(cdir.name)
        files = sorted(p for p in cdir.iterdir()
                       if p.suffix.lower() in IMAGE_EXTS)
        if not files:
            raise ValueError(f"class directory {cdir} holds no images")
        for p in files:
            if keep is not None and p.name not in keep:
                continue
            items.append((p, ci))
    return names, items


def load_image_tensor(path: Path, size: int) -> torch.Tensor:
    try:
        with Image.open(path) as im:
            im = im.convert("RGB").resize((size, size), Image.BILINEAR)
            arr = np.asarray(im, dtype=np.float32) / 255.0
    except (UnidentifiedImageError, OSError) as e:
        raise UndecodableImage(path) from e
    arr = (arr - _MEAN) / _STD
    return torch.from_numpy(arr.transpose(2, 0, 1))


def extract(job: ExtractionJob) -> str:
    """Run the job; returns the output path. Fails before writing anything
    if any image is undecodable."""
    names, items = list_class_images(job.image_root, job.split_manifest, job.split)
    model = build_backbone(job.backbone, len(names), job.weights, seed=job.seed)

    # decode everything first: one bad file must not leave partial output
    tensors = [load_image_tensor(p, job.input_size) for p, _ in items]
    labels = np.array([c for _, c in items], dtype=np.int32)

    feats_out, logits_out = [], []
    with torch.no_grad():
        for i in range(0, len(tensors), job.batch_size):
            batch = torch.stack(tensors[i : i + job.batch_size])
            feats, logits = model(batch)
            feats_out.append(feats.numpy())
            logits_out.append(logits.numpy())

    weights_id = job.weights
    if weights_id not in ("random-init", "pretrained-default"):
        weights_id = hashlib.sha256(Path(job.weights).read_bytes()).hexdigest()[:12]
    write_fset(
        job.output,
        features=np.concatenate(feats_out),
        n_classes=len(names),
        labels=labels,
        logits=np.concatenate(logits_out),
        class_names=names,
        source_tag=f"{job.backbone}:{weights_id}",
    )
    return job.output
