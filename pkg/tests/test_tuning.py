import numpy as np
import pytest

from oodscore import (
    FeatureSet,
    Method,
    NcddVariant,
    ScoreConfig,
    SynthSpec,
    TuneGrid,
    fit_centroids,
    generate,
    score_set,
    tune,
)
from oodscore.errors import DimensionMismatch
from oodscore.metrics import auroc, fpr_at_tpr


@pytest.fixture(scope="module")
def fitted():
    train, val_id, val_ood = generate(SynthSpec(
        n_classes=3, dim=16, per_class_n=60, id_std=2.0, separation=6.0,
        ood_n=120, seed=99))
    return fit_centroids(train), val_id, val_ood


def test_single_cell_grid(fitted):
    model, val_id, val_ood = fitted
    grid = TuneGrid(alpha1_values=(-1.0,), alpha2_values=(0.0,))
    res = tune(model, val_id, val_ood, grid)
    assert (res.best_alpha1, res.best_alpha2) == (-1.0, 0.0)
    assert len(res.full_table) == 1


def test_default_grid_exhaustive(fitted):
    model, val_id, val_ood = fitted
    res = tune(model, val_id, val_ood)
    assert len(res.full_table) == 16
    cells = {(r[0], r[1]) for r in res.full_table}
    assert cells == {(a1, a2) for a1 in (-2, -1, 0, 1) for a2 in (-2, -1, 0, 1)}


def test_best_row_in_table_and_is_min(fitted):
    model, val_id, val_ood = fitted
    res = tune(model, val_id, val_ood)
    fprs = [r[2] for r in res.full_table]
    assert res.best_objective == min(fprs)
    assert any(r[:2] == (res.best_alpha1, res.best_alpha2) for r in res.full_table)


def test_winner_reevaluates_identically(fitted):
    model, val_id, val_ood = fitted
    res = tune(model, val_id, val_ood)
    cfg = ScoreConfig(method=Method.NCDD, variant=NcddVariant.WEIGHTED,
                      alpha1=res.best_alpha1, alpha2=res.best_alpha2)
    ids = score_set(val_id, model, cfg).scores
    oods = score_set(val_ood, model, cfg).scores
    assert fpr_at_tpr(ids, oods, 0.95) == res.best_objective


def test_oracle_argmin_over_cells(fitted):
    model, val_id, val_ood = fitted
    grid = TuneGrid(alpha1_values=(-2.0, 0.0, 1.0), alpha2_values=(-1.0, 0.5))
    res = tune(model, val_id, val_ood, grid)
    # independently evaluate every cell and pick the argmin with the tie chain
    best = None
    for a1 in grid.alpha1_values:
        for a2 in grid.alpha2_values:
            cfg = ScoreConfig(method=Method.NCDD, variant=NcddVariant.WEIGHTED,
                              alpha1=a1, alpha2=a2)
            ids = score_set(val_id, model, cfg).scores
            oods = score_set(val_ood, model, cfg).scores
            key = (fpr_at_tpr(ids, oods, 0.95), -auroc(ids, oods), a1, a2)
            if best is None or key < best[0]:
                best = (key, a1, a2)
    assert (res.best_alpha1, res.best_alpha2) == (best[1], best[2])
    assert res.best_objective == best[0][0]


def test_determinism(fitted):
    model, val_id, val_ood = fitted
    r1 = tune(model, val_id, val_ood)
    r2 = tune(model, val_id, val_ood)
    assert r1 == r2


def test_auroc_objective(fitted):
    model, val_id, val_ood = fitted
    grid = TuneGrid(alpha1_values=(-1.0, 0.0), alpha2_values=(-1.0, 0.0),
                    objective="auroc")
    res = tune(model, val_id, val_ood, grid)
    assert res.best_objective == max(r[3] for r in res.full_table)


def test_dimension_mismatch(fitted):
    model, val_id, _ = fitted
    bad = FeatureSet(features=np.ones((3, 2), dtype=np.float32))
    with pytest.raises(DimensionMismatch):
        tune(model, val_id, bad)


def test_table_sorted_by_alphas(fitted):
    model, val_id, val_ood = fitted
    res = tune(model, val_id, val_ood)
    pairs = [(r[0], r[1]) for r in res.full_table]
    assert pairs == sorted(pairs)
