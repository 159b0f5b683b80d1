import json
import struct

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from support import random_featureset
from oodscore import FeatureSet, export_csv, import_csv, load_fset, save_fset
from oodscore.errors import (
    BadMagic,
    HeaderMismatch,
    LabelOutOfRange,
    MetaSectionMismatch,
    NonFiniteValue,
    RaggedRow,
    TruncatedFile,
    UnparsableNumber,
)


def test_minimal_container_roundtrip(tmp_path):
    fs = FeatureSet(features=np.arange(6, dtype=np.float32).reshape(2, 3))
    p = tmp_path / "a.fset"
    save_fset(fs, p)
    back = load_fset(p)
    assert back.n_samples == 2 and back.n_features == 3
    assert back == fs


def test_single_scalar_file_size(tmp_path):
    fs = FeatureSet(features=np.array([[0.0]], dtype=np.float32))
    p = tmp_path / "one.fset"
    save_fset(fs, p)
    blob = p.read_bytes()
    header_len = struct.unpack("<I", blob[5:9])[0]
    assert len(blob) == 5 + 4 + header_len + 4


def test_section_order_features_labels_logits(tmp_path):
    fs = FeatureSet(
        features=np.ones((2, 2), dtype=np.float32),
        n_classes=2,
        labels=np.array([0, 1], dtype=np.int32),
        logits=np.zeros((2, 2), dtype=np.float32),
    )
    p = tmp_path / "s.fset"
    save_fset(fs, p)
    blob = p.read_bytes()
    header_len = struct.unpack("<I", blob[5:9])[0]
    meta = json.loads(blob[9 : 9 + header_len])
    assert [s[0] for s in meta["sections"]] == ["features", "labels", "logits"]


def test_bad_magic(tmp_path):
    fs = FeatureSet(features=np.zeros((1, 1), dtype=np.float32))
    p = tmp_path / "m.fset"
    save_fset(fs, p)
    blob = bytearray(p.read_bytes())
    blob[4] = ord("0")  # FSET1 -> FSET0
    p.write_bytes(bytes(blob))
    with pytest.raises(BadMagic):
        load_fset(p)


def test_truncated_file(tmp_path):
    fs = FeatureSet(features=np.zeros((3, 3), dtype=np.float32))
    p = tmp_path / "t.fset"
    save_fset(fs, p)
    blob = p.read_bytes()
    p.write_bytes(blob[:7])
    with pytest.raises(TruncatedFile):
        load_fset(p)


def test_payload_size_mismatch(tmp_path):
    fs = FeatureSet(features=np.zeros((2, 2), dtype=np.float32))
    p = tmp_path / "x.fset"
    save_fset(fs, p)
    p.write_bytes(p.read_bytes() + b"\x00\x00\x00\x00")
    with pytest.raises(MetaSectionMismatch):
        load_fset(p)


def test_nonfinite_payload_rejected(tmp_path):
    fs = FeatureSet(features=np.ones((2, 1), dtype=np.float32))
    p = tmp_path / "nan.fset"
    save_fset(fs, p)
    blob = bytearray(p.read_bytes())
    nan = struct.pack("<f", float("nan"))
    blob[-4:] = nan
    p.write_bytes(bytes(blob))
    with pytest.raises(NonFiniteValue) as exc:
        load_fset(p)
    assert exc.value.row == 1


def test_label_out_of_range_in_file(tmp_path):
    fs = FeatureSet(features=np.ones((1, 1), dtype=np.float32), n_classes=2,
                    labels=np.array([1], dtype=np.int32))
    p = tmp_path / "l.fset"
    save_fset(fs, p)
    blob = bytearray(p.read_bytes())
    blob[-4:] = struct.pack("<i", 7)
    p.write_bytes(bytes(blob))
    with pytest.raises(LabelOutOfRange):
        load_fset(p)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_roundtrip_and_byte_determinism(seed, tmp_path_factory):
    rng = np.random.default_rng(seed)
    fs = random_featureset(rng, with_labels=bool(seed % 2), with_logits=bool(seed % 3))
    base = tmp_path_factory.mktemp("rt")
    p1, p2 = base / "a.fset", base / "b.fset"
    save_fset(fs, p1)
    back = load_fset(p1)
    assert back == fs
    save_fset(back, p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_csv_minimal(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("feat_0,feat_1,label\n1.0,2.0,0\n")
    fs = import_csv(p, n_classes=3)
    assert fs.n_samples == 1 and fs.n_features == 2
    assert fs.labels.tolist() == [0]


def test_csv_label_out_of_range(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("feat_0,label\n1.0,5\n")
    with pytest.raises(LabelOutOfRange):
        import_csv(p, n_classes=3)


def test_csv_header_mismatch(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("x,y\n1,2\n")
    with pytest.raises(HeaderMismatch):
        import_csv(p, n_classes=1)


def test_csv_ragged_row(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("feat_0,feat_1\n1.0,2.0\n3.0\n")
    with pytest.raises(RaggedRow) as exc:
        import_csv(p, n_classes=1)
    assert exc.value.row == 1


def test_csv_unparsable_number(tmp_path):
    p = tmp_path / "a.csv"
    p.write_text("feat_0\nnotanumber\n")
    with pytest.raises(UnparsableNumber) as exc:
        import_csv(p, n_classes=1)
    assert (exc.value.row, exc.value.col) == (0, 0)


def test_csv_roundtrip_exact_f32(tmp_path, rng):
    fs = random_featureset(rng, n=13, d=5, n_classes=4)
    p = tmp_path / "rt.csv"
    export_csv(fs, p)
    back = import_csv(p, n_classes=4)
    assert np.array_equal(back.features, fs.features)
    assert np.array_equal(back.labels, fs.labels)
    assert np.array_equal(back.logits, fs.logits)


def test_constructor_rejects_nan():
    with pytest.raises(NonFiniteValue):
        FeatureSet(features=np.array([[np.nan]], dtype=np.float32))


def test_constructor_rejects_bad_label():
    with pytest.raises(LabelOutOfRange):
        FeatureSet(features=np.ones((1, 1), dtype=np.float32), n_classes=2,
                   labels=np.array([2], dtype=np.int32))
