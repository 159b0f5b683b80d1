"""Synthetic validation-OOD image corruption.

Per image: one axis-aligned rectangle, with area fraction drawn uniformly
from rect_area_frac_range, is filled with uniform random values per channel;
then multiplicative speckle noise x * (1 + n) with n ~ N(0, sigma^2) is
applied and the result is clipped to [0, 255]. Seeded and reproducible.
Output is written as PNG so the pixel values survive re-encoding exactly.
"""

from __future__ import annotations

import hashlib
import math
from pathlib import Path

import numpy as np
from PIL import Image, UnidentifiedImageError

from .errors import UndecodableImage
from .extract import IMAGE_EXTS


def corrupt_array(
    arr: np.ndarray,
    rng: np.random.Generator,
    rect_area_frac_range: tuple[float, float] = (0.1, 0.5),
    speckle_sigma: float = 0.3,
) -> np.ndarray:
    """Corrupt one HxWx3 uint8 array; returns a new uint8 array."""
    h, w, _ = arr.shape
    out = arr.astype(np.float32)

    lo, hi = rect_area_frac_range
    if not (0.0 <= lo <= hi <= 1.0):
        raise ValueError(f"bad rectangle area range {rect_area_frac_range}")
    frac = rng.uniform(lo, hi)
    if frac > 0.0:
        # pick rectangle dims whose product approximates frac * h * w
        area = frac * h * w
        aspect = rng.uniform(0.5, 2.0)
        rh = min(h, max(1, round(math.sqrt(area * aspect))))
        rw = min(w, max(1, round(area / rh)))
        y0 = rng.integers(0, h - rh + 1)
        x0 = rng.integers(0, w - rw + 1)
        out[y0 : y0 + rh, x0 : x0 + rw, :] = rng.uniform(
            0.0, 255.0, size=(rh, rw, 3)).astype(np.float32)

    if speckle_sigma > 0.0:
        noise = rng.normal(0.0, speckle_sigma, size=out.shape).astype(np.float32)
        out = out * (1.0 + noise)

    return np.clip(np.rint(out), 0, 255).astype(np.uint8)


def corrupt(
    in_dir: str | Path,
    out_dir: str | Path,
    seed: int,
    rect_area_frac_range: tuple[float, float] = (0.1, 0.5),
    speckle_sigma: float = 0.3,
) -> list[Path]:
    """Corrupt every image under in_dir (recursively), mirroring the
    directory layout under out_dir with .png outputs. Returns the files
    written, in deterministic order."""
    in_dir, out_dir = Path(in_dir), Path(out_dir)
    files = sorted(p for p in in_dir.rglob("*")
                   if p.is_file() and p.suffix.lower() in IMAGE_EXTS)
    written = []
    for src in files:
        try:
            with Image.open(src) as im:
                arr = np.asarray(im.convert("RGB"))
        except (UnidentifiedImageError, OSError) as e:
            raise UndecodableImage(src) from e
        # stream keyed by relative path, so a file's corruption does not
        # depend on which other files happen to be present
        rel = str(src.relative_to(in_dir)).encode("utf-8")
        key = int.from_bytes(hashlib.sha256(rel).digest()[:8], "little")
        rng = np.random.default_rng([seed, key])
        out_arr = corrupt_array(arr, rng, rect_area_frac_range, speckle_sigma)
        dst = out_dir / src.relative_to(in_dir)
        dst = dst.with_suffix(".png")
        dst.parent.mkdir(parents=True, exist_ok=True)
        Image.fromarray(out_arr).save(dst, format="PNG")
        written.append(dst)
    return written
