"""Shared test helpers."""

import numpy as np

from oodscore import FeatureSet


def random_featureset(rng: np.random.Generator, with_labels=True, with_logits=True,
                      n=None, d=None, n_classes=None) -> FeatureSet:
    n = n or int(rng.integers(1, 20))
    d = d or int(rng.integers(1, 10))
    n_classes = n_classes or int(rng.integers(1, 5))
    return FeatureSet(
        features=rng.normal(size=(n, d)).astype(np.float32),
        n_classes=n_classes,
        labels=rng.integers(0, n_classes, size=n).astype(np.int32) if with_labels else None,
        logits=rng.normal(size=(n, n_classes)).astype(np.float32) if with_logits else None,
        source_tag="test",
    )
