from pathlib import Path

import numpy as np
import pytest
from PIL import Image


def make_image_folder(root: Path, class_names, per_class=4, size=32, seed=0):
    """Build a class-per-subdirectory image folder of random PNGs."""
    rng = np.random.default_rng(seed)
    for name in class_names:
        d = root / name
        d.mkdir(parents=True)
        for i in range(per_class):
            arr = rng.integers(0, 256, size=(size, size, 3), dtype=np.uint8)
            Image.fromarray(arr).save(d / f"img_{i:03d}.png")
    return root


@pytest.fixture
def image_folder_factory():
    return make_image_folder


@pytest.fixture
def three_class_folder(tmp_path):
    return make_image_folder(tmp_path / "images", ["antrum", "cecum", "pylorus"])
