import numpy as np
import pytest

from support import random_featureset
from oodscore import FeatureSet, fit_centroids, load_model, save_model
from oodscore.errors import EmptyClass, MissingLabels, SchemaMismatch


def make_fs(features, labels, n_classes):
    return FeatureSet(features=np.asarray(features, dtype=np.float32),
                      n_classes=n_classes,
                      labels=np.asarray(labels, dtype=np.int32))


def test_two_point_mean():
    fs = make_fs([[1, 0], [3, 0], [0, 2]], [0, 0, 1], 2)
    m = fit_centroids(fs)
    assert np.allclose(m.centroids, [[2, 0], [0, 2]])
    assert m.class_counts.tolist() == [2, 1]


def test_single_sample_per_class_identity():
    fs = make_fs([[1.5, -2.25], [4.0, 8.0]], [0, 1], 2)
    m = fit_centroids(fs)
    assert np.array_equal(m.centroids, np.asarray(fs.features, dtype=np.float64))


def test_against_naive_per_class_mean(rng):
    feats = rng.normal(size=(1000, 16)).astype(np.float32)
    labels = rng.integers(0, 4, size=1000).astype(np.int32)
    labels[:4] = [0, 1, 2, 3]  # every class present
    fs = make_fs(feats, labels, 4)
    m = fit_centroids(fs)
    for c in range(4):
        naive = feats[labels == c].astype(np.float64).mean(axis=0)
        assert np.allclose(m.centroids[c], naive, rtol=1e-12, atol=0)


def test_permutation_invariance(rng):
    fs = random_featureset(rng, n=200, d=8, n_classes=3, with_logits=False)
    m1 = fit_centroids(fs)
    perm = rng.permutation(fs.n_samples)
    fs2 = make_fs(fs.features[perm], fs.labels[perm], 3)
    m2 = fit_centroids(fs2)
    assert np.allclose(m1.centroids, m2.centroids, rtol=1e-12)


def test_affine_consistency(rng):
    # features on a 1/16 grid so the affine map is exact in float32
    feats = (rng.integers(-128, 128, size=(150, 6)) / 16.0).astype(np.float32)
    labels = rng.integers(0, 2, size=150).astype(np.int32)
    labels[:2] = [0, 1]
    a, b = 2.0, -0.75
    m1 = fit_centroids(make_fs(feats, labels, 2))
    m2 = fit_centroids(make_fs(a * feats.astype(np.float64) + b, labels, 2))
    assert np.allclose(a * m1.centroids + b, m2.centroids, rtol=1e-12, atol=1e-12)


def test_class_isolation(rng):
    fs = random_featureset(rng, n=100, d=4, n_classes=3, with_logits=False)
    m1 = fit_centroids(fs)
    feats = fs.features.copy()
    feats[fs.labels == 1] += 100.0
    m2 = fit_centroids(make_fs(feats, fs.labels, 3))
    assert np.array_equal(m1.centroids[0], m2.centroids[0])
    assert np.array_equal(m1.centroids[2], m2.centroids[2])
    assert not np.array_equal(m1.centroids[1], m2.centroids[1])


def test_missing_labels():
    fs = FeatureSet(features=np.ones((2, 2), dtype=np.float32), n_classes=2)
    with pytest.raises(MissingLabels):
        fit_centroids(fs)


def test_empty_class_named():
    fs = make_fs([[1, 1]], [0], 2)
    with pytest.raises(EmptyClass) as exc:
        fit_centroids(fs)
    assert exc.value.class_index == 1


def test_single_class_warning_flag():
    fs = make_fs([[1, 1], [2, 2]], [0, 0], 1)
    m = fit_centroids(fs)
    assert m.single_class_warning


def test_model_json_roundtrip_bit_exact(tmp_path, rng):
    fs = random_featureset(rng, n=60, d=7, n_classes=3, with_logits=False)
    m = fit_centroids(fs)
    p = tmp_path / "model.json"
    save_model(m, p)
    back = load_model(p)
    assert back == m
    assert np.array_equal(back.centroids, m.centroids)  # bit-exact


def test_model_json_layout(tmp_path):
    fs = make_fs([[1, 0], [0, 1]], [0, 1], 2)
    p = tmp_path / "m.json"
    save_model(fit_centroids(fs), p)
    import json
    doc = json.loads(p.read_text())
    assert doc["n_classes"] == 2 and doc["n_features"] == 2
    assert len(doc["centroids"]) == 2 and len(doc["centroids"][0]) == 2


def test_load_rejects_bad_schema(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"version": "1", "n_classes": 2}')
    with pytest.raises(SchemaMismatch):
        load_model(p)


def test_refit_determinism(tmp_path, rng):
    fs = random_featureset(rng, n=80, d=5, n_classes=2, with_logits=False)
    p1, p2 = tmp_path / "a.json", tmp_path / "b.json"
    save_model(fit_centroids(fs), p1)
    save_model(fit_centroids(fs), p2)
    assert p1.read_bytes() == p2.read_bytes()
