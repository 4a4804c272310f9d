"""Network and classifiers used to tell genuine from forged signatures."""

from .vae import VaeConfig, VaeParams, init_params
from .knn import KNeighborsForgeryClassifier, knn_fit, knn_predict
from .forest import ForestConfig, RandomForestForgeryClassifier, rf_fit, rf_predict
from .metrics import EvalReport, evaluate, roc_points
from .features import FEATURE_MODES, FeatureSet, extract_features

__all__ = (
    "VaeConfig",
    "VaeParams",
    "init_params",
    "KNeighborsForgeryClassifier",
    "knn_fit",
    "knn_predict",
    "ForestConfig",
    "RandomForestForgeryClassifier",
    "rf_fit",
    "rf_predict",
    "EvalReport",
    "evaluate",
    "roc_points",
    "FEATURE_MODES",
    "FeatureSet",
    "extract_features",
)
