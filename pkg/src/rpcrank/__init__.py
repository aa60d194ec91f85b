"""Unsupervised ranking of multi-attribute objects with monotone cubic Bezier curves."""
from .baselines import median_rank_aggregation, pca_first_component, pca_scores
from .bezier import bernstein_basis, curve_derivative, evaluate_curve
from .dataset import (
    DataError,
    Dataset,
    NormalizedDataset,
    OrientationVector,
    attribute_rank_lists,
    load_csv,
    normalize,
)
from .fit import FitConfig, FitError, FitReport, fit, fit_best, rank_from_scores
from .metarules import MetaRuleReport, assess
from .projection import ProjectionConfig, project_all, project_point

__version__ = "0.1.0"

__all__ = [
    "DataError", "Dataset", "FitConfig", "FitError", "FitReport", "MetaRuleReport",
    "NormalizedDataset", "OrientationVector", "ProjectionConfig", "assess",
    "attribute_rank_lists", "bernstein_basis", "curve_derivative", "evaluate_curve",
    "fit", "fit_best", "load_csv", "median_rank_aggregation", "normalize",
    "pca_first_component", "pca_scores", "project_all", "project_point", "rank_from_scores",
]
