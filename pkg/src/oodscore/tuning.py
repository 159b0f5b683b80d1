"""Exhaustive grid search over the (alpha1, alpha2) weight exponents of the
weighted centroid-deficit score, minimizing FPR at the TPR target (or
maximizing AUROC) on a validation ID / validation OOD pair.
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from pathlib import Path

from .centroid import CentroidModel
from .errors import DimensionMismatch, EmptyValidationSet, IoFailure
from .featureset import FeatureSet
from .metrics import auroc, fpr_at_tpr
from .scoring import Method, NcddVariant, ScoreConfig, score_set

DEFAULT_ALPHAS = (-2.0, -1.0, 0.0, 1.0)


class Objective(str, enum.Enum):
    FPR95 = "fpr95"
    AUROC = "auroc"


@dataclass(frozen=True)
class TuneGrid:
    alpha1_values: tuple[float, ...] = DEFAULT_ALPHAS
    alpha2_values: tuple[float, ...] = DEFAULT_ALPHAS
    objective: Objective = Objective.FPR95
    tpr_target: float = 0.95

    def __post_init__(self):
        if not self.alpha1_values or not self.alpha2_values:
            raise ValueError("alpha value lists must be non-empty")
        object.__setattr__(self, "alpha1_values", tuple(sorted(self.alpha1_values)))
        object.__setattr__(self, "alpha2_values", tuple(sorted(self.alpha2_values)))
        object.__setattr__(self, "objective", Objective(self.objective))


@dataclass(frozen=True)
class TuneResult:
    best_alpha1: float
    best_alpha2: float
    best_objective: float
    full_table: tuple[tuple[float, float, float, float], ...]  # (a1, a2, fpr95, auroc)

    def to_dict(self) -> dict:
        return {
            "best_alpha1": self.best_alpha1,
            "best_alpha2": self.best_alpha2,
            "best_objective": self.best_objective,
            "full_table": [
                {"alpha1": a1, "alpha2": a2, "fpr95": f, "auroc": a}
                for a1, a2, f, a in self.full_table
            ],
        }

    def save(self, path) -> None:
        try:
            Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n",
                                  encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"cannot write {path}: {e}") from e


def tune(model: CentroidModel, val_id: FeatureSet, val_ood: FeatureSet,
         grid: TuneGrid = TuneGrid()) -> TuneResult:
    """Evaluate every grid cell; ties on the objective break toward higher
    AUROC, then smaller alpha1, then smaller alpha2. The table is sorted by
    (alpha1, alpha2), so the result is deterministic."""
    if val_id.n_samples == 0:
        raise EmptyValidationSet("id")
    if val_ood.n_samples == 0:
        raise EmptyValidationSet("ood")
    for fs in (val_id, val_ood):
        if fs.n_features != model.n_features:
            raise DimensionMismatch(model.n_features, fs.n_features)

    table = []
    for a1 in grid.alpha1_values:
        for a2 in grid.alpha2_values:
            cfg = ScoreConfig(method=Method.NCDD, variant=NcddVariant.WEIGHTED,
                              alpha1=a1, alpha2=a2)
            id_scores = score_set(val_id, model, cfg).scores
            ood_scores = score_set(val_ood, model, cfg).scores
            fpr = fpr_at_tpr(id_scores, ood_scores, grid.tpr_target)
            auc = auroc(id_scores, ood_scores)
            table.append((a1, a2, fpr, auc))

    if grid.objective is Objective.FPR95:
        key = lambda row: (row[2], -row[3], row[0], row[1])
    else:
        key = lambda row: (-row[3], -row[3], row[0], row[1])
    best = min(table, key=key)
    best_obj = best[2] if grid.objective is Objective.FPR95 else best[3]
    return TuneResult(
        best_alpha1=best[0],
        best_alpha2=best[1],
        best_objective=best_obj,
        full_table=tuple(table),
    )
