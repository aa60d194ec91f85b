"""Reference ranking rules: first principal component and median rank aggregation."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import NormalizedDataset, OrientationVector
from .linalg import power_iteration


@dataclass(frozen=True)
class PcaModel:
    w: np.ndarray
    mu: np.ndarray


def _values(X):
    return np.asarray(X.values if isinstance(X, NormalizedDataset) else X, dtype=float)


def pca_first_component(X_norm, alpha: OrientationVector | None = None) -> PcaModel:
    """Leading principal direction, oriented so that ``alpha . w >= 0``.

    Without ``alpha`` (or when ``alpha . w`` is exactly zero) the first
    nonzero loading is made positive.
    """
    X = _values(X_norm)
    if X.shape[0] < 2:
        raise ValueError("PCA needs at least two observations")
    if np.all(X == X[0]):
        raise ValueError("zero covariance: all observations are identical")
    mu = X.mean(axis=0)
    Xc = X - mu
    C = Xc.T @ Xc / (X.shape[0] - 1)
    w, _ = power_iteration(C)
    w = w / np.linalg.norm(w)
    lean = 0.0 if alpha is None else float(alpha.as_array() @ w)
    if lean < 0 or (lean == 0 and w[np.flatnonzero(w)[0]] < 0):
        w = -w
    return PcaModel(w, mu)


def pca_scores(model: PcaModel, X_norm) -> np.ndarray:
    return (_values(X_norm) - model.mu) @ model.w


def median_rank_aggregation(lists) -> np.ndarray:
    """Average position of each object over ``m`` rank lists."""
    lists = [np.asarray(r, dtype=float) for r in lists]
    if not lists:
        raise ValueError("need at least one rank list")
    n = lists[0].shape[0]
    if any(r.shape != (n,) for r in lists):
        raise ValueError("rank lists must all have the same length")
    return np.sum(lists, axis=0) / len(lists)
