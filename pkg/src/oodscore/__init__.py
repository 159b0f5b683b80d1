"""Post-hoc out-of-distribution scoring over pre-extracted features/logits:
centroid-deficit scoring, standard baselines, AUROC/FPR95 evaluation,
threshold calibration, and hyperparameter tuning.
"""

from .centroid import CentroidModel, fit_centroids, load_model, save_model
from .featureset import FeatureSet, export_csv, import_csv, load_fset, save_fset
from .metrics import Decision, EvalReport, auroc, decide, evaluate, fpr_at_tpr, threshold_at_tpr
from .scoring import (
    LogBase,
    Method,
    NcddVariant,
    ScoreConfig,
    ScoreVector,
    distances_to_centroids,
    energy_score,
    entropy_score,
    knn_score,
    maxlogit_score,
    msp_score,
    ncdd_score,
    score_set,
)
from .synth import OodMode, PortableRng, SynthSpec, generate
from .tuning import Objective, TuneGrid, TuneResult, tune

__version__ = "0.1.0"
