"""Learning a ranking curve by alternating minimisation.

Each iteration projects every observation onto the current curve (score
update) and then moves the control points by one preconditioned Richardson
step on the least-squares problem ``min_P ||X - P M Z||_F^2`` (curve update).
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace

import numpy as np

from .bezier import (
    as_control_points,
    basis_matrix,
    corner_endpoints,
    evaluate_curve,
    sample_curve_monotonicity,
    affine_transform_curve,
)
from .dataset import NormalizedDataset, OrientationVector, check_alpha
from .linalg import jacobi_eigenvalues
from .projection import ProjectionConfig, project_all

log = logging.getLogger(__name__)


class FitError(RuntimeError):
    pass


@dataclass(frozen=True)
class FitConfig:
    xi: float = 1e-6
    max_iter: int = 500
    endpoints: str = "free"
    clamp: bool = False
    clamp_margin: float = 1e-6
    seed: int = 0
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    step_rule: str = "preconditioned"

    def __post_init__(self):
        if not self.xi > 0:
            raise ValueError("xi must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if self.endpoints not in ("free", "fixed"):
            raise ValueError("endpoints must be 'free' or 'fixed'")
        if not 0.0 < self.clamp_margin < 0.5:
            raise ValueError("clamp_margin must lie in (0, 0.5)")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        if self.step_rule not in ("preconditioned", "gram"):
            raise ValueError("step_rule must be 'preconditioned' or 'gram'")


@dataclass(frozen=True)
class FitReport:
    j_trajectory: tuple[float, ...]
    iterations: int
    converged: bool
    stopped_on_increase: bool
    explained_variance: float
    monotone: tuple
    residual_norms: np.ndarray
    P_normalized: np.ndarray
    P_original: np.ndarray | None

    @property
    def parameter_size(self) -> int:
        return self.P_normalized.size


def objective_j(P, X, s) -> float:
    """Sum of squared reconstruction errors ``sum_i ||x_i - f(s_i)||^2``."""
    R = np.asarray(X, dtype=float) - evaluate_curve(P, np.asarray(s, dtype=float))
    return float(np.sum(R * R))


def preconditioner(A) -> np.ndarray:
    """Diagonal matrix of the column 2-norms of ``A``."""
    A = np.asarray(A, dtype=float)
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms == 0.0):
        raise FitError("singular preconditioner: zero column in (MZ)(MZ)^T")
    return np.diag(norms)


def step_size_gamma(A) -> float:
    """Richardson step ``2 / (lambda_min + lambda_max)``."""
    lam = jacobi_eigenvalues(A)
    total = lam[0] + lam[-1]
    if not total > 0:
        raise FitError("degenerate score matrix: eigenvalue sum is not positive")
    return 2.0 / total


def _gram(s):
    B = basis_matrix(s)  # n x 4, row i = M z_i
    return B, B.T @ B


def richardson_step(P, X, s, cfg: FitConfig | None = None, alpha=None) -> np.ndarray:
    """One preconditioned Richardson update of the control points.

    ``P - gamma * (P A - X^T B) D^-1`` with ``B`` the Bernstein design matrix
    of the scores ``s``, ``A = B^T B`` and ``D`` the column-norm
    preconditioner of ``A``.

    With the default ``step_rule="preconditioned"`` the step size uses the
    extreme eigenvalues of ``D^-1/2 A D^-1/2`` (the spectrum of the operator
    actually iterated), which keeps every step a descent step.  ``"gram"``
    takes them from ``A`` itself; that overshoots when ``A`` is small, e.g.
    for a handful of observations.
    """
    P = as_control_points(P)
    X = np.asarray(X, dtype=float)
    B, A = _gram(s)
    D = np.diag(preconditioner(A))
    if cfg is None or cfg.step_rule == "preconditioned":
        root = np.sqrt(D)
        gamma = step_size_gamma(A / np.outer(root, root))
    else:
        gamma = step_size_gamma(A)
    grad = P @ A - X.T @ B
    P_new = P - gamma * grad / D
    if cfg is not None:
        if cfg.clamp:
            P_new = np.clip(P_new, cfg.clamp_margin, 1.0 - cfg.clamp_margin)
        if cfg.endpoints == "fixed":
            if alpha is None:
                raise ValueError("fixed endpoints need an orientation")
            lo, hi = corner_endpoints(np.asarray(alpha, dtype=float))
            P_new[:, 0] = lo
            P_new[:, 3] = hi
    return P_new


def least_squares_oracle(X, s) -> np.ndarray:
    """Minimum-norm least-squares control points ``X^T (B^T)^+``."""
    X = np.asarray(X, dtype=float)
    B, A = _gram(s)
    rhs = X.T @ B
    if np.linalg.matrix_rank(A) == 4 and np.linalg.cond(A) < 1e10:
        return np.linalg.solve(A, rhs.T).T
    sol, *_ = np.linalg.lstsq(B, X, rcond=None)
    return sol.T


def initial_control_points(X, alpha: OrientationVector, seed: int) -> np.ndarray:
    """Corner endpoints plus two seeded data rows as inner control points."""
    X = np.asarray(X, dtype=float)
    rng = np.random.default_rng(seed)
    rows = rng.choice(X.shape[0], size=2, replace=X.shape[0] < 2)
    a = alpha.as_array()
    pick = X[rows]
    if a @ pick[0] > a @ pick[1]:
        pick = pick[::-1]
    lo, hi = corner_endpoints(a)
    return np.column_stack([lo, pick[0], pick[1], hi])


def explained_variance(X, J: float) -> float:
    X = np.asarray(X, dtype=float)
    total = float(np.sum((X - X.mean(axis=0)) ** 2))
    if total == 0.0:
        return 1.0 if J == 0.0 else -np.inf
    return 1.0 - J / total


def fit(data, alpha, cfg: FitConfig | None = None):
    """Fit a ranking curve to normalised observations.

    ``data`` is a :class:`NormalizedDataset` or an ``n x d`` array already in
    the unit hypercube.  Returns ``(P, scores, report)``.
    """
    cfg = cfg or FitConfig()
    if isinstance(data, NormalizedDataset):
        X = np.asarray(data.values, dtype=float)
    else:
        X = np.asarray(data, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise ValueError("need an n x d observation table with n >= 1")
    alpha = check_alpha(alpha, X.shape[1])
    a = alpha.as_array()

    P = initial_control_points(X, alpha, cfg.seed)
    s = project_all(P, X, cfg.projection)
    J = objective_j(P, X, s)
    trajectory = [J]
    converged = stopped_on_increase = False
    it = 0
    while it < cfg.max_iter:
        if np.all(s == s[0]) and X.shape[0] > 1:
            raise FitError("all scores collapsed to one value; try a different seed")
        P_next = richardson_step(P, X, s, cfg, a)
        s_next = project_all(P_next, X, cfg.projection)
        J_next = objective_j(P_next, X, s_next)
        it += 1
        dJ = J - J_next
        if dJ < 0:
            stopped_on_increase = True
            log.debug("objective increased at iteration %d; keeping previous iterate", it)
            break
        P, s, J = P_next, s_next, J_next
        trajectory.append(J)
        if dJ / max(J, 1e-12) < cfg.xi:
            converged = True
            break

    # stopping on an increase still lands on a local minimum of the run
    converged = converged or stopped_on_increase
    col_min = getattr(data, "col_min", None)
    P_orig = None
    if col_min is not None:
        P_orig = affine_transform_curve(P, data.col_range, data.col_min)
    residuals = np.linalg.norm(X - evaluate_curve(P, s), axis=1)
    report = FitReport(
        j_trajectory=tuple(trajectory),
        iterations=it,
        converged=converged,
        stopped_on_increase=stopped_on_increase,
        explained_variance=explained_variance(X, J),
        monotone=sample_curve_monotonicity(P, a, 1000),
        residual_norms=residuals,
        P_normalized=P,
        P_original=P_orig,
    )
    return P, s, report


def rank_from_scores(ids, s) -> np.ndarray:
    """Rank 1 for the highest score; exact ties keep input order."""
    s = np.asarray(s, dtype=float)
    if len(ids) != s.shape[0]:
        raise ValueError("ids and scores differ in length")
    order = np.argsort(-s, kind="stable")
    ranks = np.empty(s.shape[0], dtype=int)
    ranks[order] = np.arange(1, s.shape[0] + 1)
    return ranks


def fit_best(data, alpha, cfg: FitConfig | None = None, restarts: int = 1):
    """Run :func:`fit` from ``restarts`` consecutive seeds and keep the lowest objective.

    Seeds are ``cfg.seed, cfg.seed + 1, ...``; ties keep the earliest seed.
    A seed whose starting control points repeat an earlier seed's would
    reproduce that run exactly and is skipped.  A start whose scores
    collapse is skipped unless every start fails.
    """
    cfg = cfg or FitConfig()
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    X = np.asarray(data.values if isinstance(data, NormalizedDataset) else data, dtype=float)
    alpha = check_alpha(alpha, X.shape[1])
    best = None
    last_err = None
    seen = []
    for k in range(restarts):
        run = replace(cfg, seed=cfg.seed + k)
        P0 = initial_control_points(X, alpha, run.seed)
        if any(np.array_equal(P0, other) for other in seen):
            continue
        seen.append(P0)
        try:
            out = fit(data, alpha, run)
        except FitError as err:
            last_err = err
            continue
        if best is None or out[2].j_trajectory[-1] < best[2].j_trajectory[-1]:
            best = out
    if best is None:
        raise last_err
    return best
