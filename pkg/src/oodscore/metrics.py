"""Evaluation stack: AUROC, FPR at a TPR target, threshold selection, and
the binary ID/OOD decision (score <= lambda -> OOD; ID is the positive class).
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.stats import rankdata

from .errors import BadTarget, EmptyScoreSet, IoFailure


class Decision(str, enum.Enum):
    ID = "ID"
    OOD = "OOD"


@dataclass(frozen=True)
class EvalReport:
    auroc: float
    fpr95: float
    threshold_lambda: float
    n_id: int
    n_ood: int
    tpr_target: float = 0.95
    method: str = ""
    config: dict = field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.auroc <= 1.0 and 0.0 <= self.fpr95 <= 1.0):
            raise ValueError("auroc and fpr95 must lie in [0, 1]")
        if self.n_id < 1 or self.n_ood < 1:
            raise ValueError("n_id and n_ood must be >= 1")

    def to_dict(self) -> dict:
        return {
            "auroc": self.auroc,
            "fpr95": self.fpr95,
            "threshold_lambda": self.threshold_lambda,
            "tpr_target": self.tpr_target,
            "n_id": self.n_id,
            "n_ood": self.n_ood,
            "method": self.method,
            "config": self.config,
        }

    def save(self, path) -> None:
        try:
            Path(path).write_text(json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n",
                                  encoding="utf-8")
        except OSError as e:
            raise IoFailure(f"cannot write {path}: {e}") from e


def _check_scores(x, which: str) -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        raise EmptyScoreSet(which)
    if not np.isfinite(arr).all():
        raise ValueError(f"non-finite values in {which} scores")
    return arr


def auroc(id_scores, ood_scores) -> float:
    """Mann-Whitney AUROC with half credit for ties; ID is the positive class.

    Computed from average ranks in O(n log n); exactly equal to the pairwise
    definition (1 per id>ood pair, 0.5 per tie) / (n_id * n_ood).
    """
    ids = _check_scores(id_scores, "id")
    oods = _check_scores(ood_scores, "ood")
    n_id, n_ood = ids.size, oods.size
    ranks = rankdata(np.concatenate([ids, oods]), method="average")
    u = ranks[:n_id].sum() - n_id * (n_id + 1) / 2.0
    return float(u / (n_id * n_ood))


def _min_retained(n: int, tpr_target: float) -> int:
    """Smallest retained count c with c/n >= tpr_target under float compare."""
    c = min(n, max(0, math.ceil(n * tpr_target)))
    while c > 0 and (c - 1) / n >= tpr_target:
        c -= 1
    while c < n and c / n < tpr_target:
        c += 1
    return c


def threshold_at_tpr(id_scores, tpr_target: float = 0.95) -> float:
    """Largest lambda keeping at least tpr_target of ID scores strictly above it.

    Returns an order statistic of the ID scores when the strict-greater rule
    allows it; on ties it returns the largest representable value below the
    blocking score.
    """
    ids = _check_scores(id_scores, "id")
    if not (0.0 < tpr_target <= 1.0):
        raise BadTarget(tpr_target)
    n = ids.size
    allowed = n - _min_retained(n, tpr_target)   # rows permitted to fall at/below lambda
    s = np.sort(ids)
    if allowed == 0:
        return math.nextafter(float(s[0]), -math.inf)
    if allowed >= n:
        return float(s[-1])
    cand = float(s[allowed - 1])
    if cand < float(s[allowed]):
        return cand
    return math.nextafter(cand, -math.inf)


def fpr_at_tpr(id_scores, ood_scores, tpr_target: float = 0.95) -> float:
    """Fraction of OOD scores mistaken for ID at the TPR-calibrated threshold."""
    oods = _check_scores(ood_scores, "ood")
    lam = threshold_at_tpr(id_scores, tpr_target)
    return float((oods > lam).sum() / oods.size)


def decide(score: float, lam: float) -> Decision:
    """Eq-style decision rule: ties go to OOD."""
    return Decision.OOD if score <= lam else Decision.ID


def evaluate(id_scores, ood_scores, tpr_target: float = 0.95,
             method: str = "", config: dict | None = None) -> EvalReport:
    """Bundle AUROC, FPR at the target TPR, and the threshold into a report."""
    ids = _check_scores(id_scores, "id")
    oods = _check_scores(ood_scores, "ood")
    lam = threshold_at_tpr(ids, tpr_target)
    return EvalReport(
        auroc=auroc(ids, oods),
        fpr95=float((oods > lam).sum() / oods.size),
        threshold_lambda=lam,
        n_id=int(ids.size),
        n_ood=int(oods.size),
        tpr_target=tpr_target,
        method=method,
        config=dict(config or {}),
    )
