"""Cubic Bezier curves in matrix form.

A curve is stored as a ``d x 4`` control-point matrix ``P`` whose columns are
``p0, p1, p2, p3``.  Points on the curve are ``f(s) = P @ M @ (1, s, s^2, s^3)``.
"""
from __future__ import annotations

import numpy as np

# Cubic Bernstein coefficient matrix; column k of M @ z collects the s**k terms.
M = np.array(
    [
        [1.0, -3.0, 3.0, -1.0],
        [0.0, 3.0, -6.0, 3.0],
        [0.0, 0.0, 3.0, -3.0],
        [0.0, 0.0, 0.0, 1.0],
    ]
)
M.setflags(write=False)

CORNER_TOL = 1e-9


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(~np.isfinite(s)) or np.any(s < 0.0) or np.any(s > 1.0):
        raise ValueError("curve parameter s must lie in [0, 1]")
    return s


def as_control_points(P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    if P.ndim != 2 or P.shape[1] != 4:
        raise ValueError(f"control-point matrix must be d x 4, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise ValueError("control-point matrix has non-finite entries")
    return P


def bernstein_basis(s):
    """Cubic Bernstein weights ``(B0, B1, B2, B3)`` at ``s``.

    Accepts a scalar (returns shape ``(4,)``) or an array of parameters
    (returns shape ``s.shape + (4,)``).
    """
    s = _check_s(s)
    t = 1.0 - s
    return np.stack([t * t * t, 3.0 * t * t * s, 3.0 * t * s * s, s * s * s], axis=-1)


def _power_basis(s):
    return np.stack([np.ones_like(s), s, s * s, s * s * s], axis=-1)


def basis_matrix(s) -> np.ndarray:
    """Matrix form of the Bernstein weights, ``(M @ Z).T`` for a score vector.

    Row ``i`` equals ``M @ z_i``.  Kept separate from :func:`bernstein_basis` so
    the two routes can be checked against each other.
    """
    s = _check_s(np.atleast_1d(s))
    return _power_basis(s) @ M.T


def evaluate_curve(P, s):
    """Point(s) on the curve: ``P @ M @ z``.

    Scalar ``s`` gives a ``d``-vector, an array of ``m`` parameters an ``m x d``
    array.
    """
    P = as_control_points(P)
    w = bernstein_basis(s)
    # explicit sum keeps results independent of batch shape
    return (
        w[..., 0, None] * P[:, 0]
        + w[..., 1, None] * P[:, 1]
        + w[..., 2, None] * P[:, 2]
        + w[..., 3, None] * P[:, 3]
    )


def curve_derivative(P, s):
    """Analytic tangent ``f'(s) = 3 * sum_j B_j^2(s) (p_{j+1} - p_j)``."""
    P = as_control_points(P)
    s = _check_s(s)
    t = 1.0 - s
    w = np.stack([t * t, 2.0 * t * s, s * s], axis=-1)
    dp = np.diff(P, axis=1)
    return 3.0 * (
        w[..., 0, None] * dp[:, 0] + w[..., 1, None] * dp[:, 1] + w[..., 2, None] * dp[:, 2]
    )


def affine_transform_curve(P, scale, offset) -> np.ndarray:
    """Control points of the image curve under ``x -> scale * x + offset``."""
    P = as_control_points(P)
    scale = np.asarray(scale, dtype=float)
    offset = np.asarray(offset, dtype=float)
    d = P.shape[0]
    if scale.shape != (d,) or offset.shape != (d,):
        raise ValueError(f"scale and offset must have length {d}")
    return scale[:, None] * P + offset[:, None]


def corner_endpoints(alpha) -> tuple[np.ndarray, np.ndarray]:
    """Start and end corners ``(1 - alpha) / 2`` and ``(1 + alpha) / 2``."""
    a = np.asarray(alpha, dtype=float)
    return 0.5 * (1.0 - a), 0.5 * (1.0 + a)


def check_monotone_admissible(P, alpha) -> bool:
    """Sufficient test: corner endpoints and strictly interior control points."""
    P = as_control_points(P)
    a = np.asarray(alpha, dtype=float)
    if a.shape != (P.shape[0],):
        return False
    lo, hi = corner_endpoints(a)
    if np.max(np.abs(P[:, 0] - lo)) > CORNER_TOL or np.max(np.abs(P[:, 3] - hi)) > CORNER_TOL:
        return False
    inner = P[:, 1:3]
    return bool(np.all((inner > 0.0) & (inner < 1.0)))


def sample_curve_monotonicity(P, alpha, grid_size: int = 1000):
    """Check ``alpha_j * f_j'(s) > 0`` on an equispaced grid.

    Returns ``(True, None)`` on success, otherwise ``(False, (s, j))`` for the
    first offending sample (scanning s, then coordinate).
    """
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    P = as_control_points(P)
    a = np.asarray(alpha, dtype=float)
    s = np.linspace(0.0, 1.0, grid_size)
    signed = curve_derivative(P, s) * a
    bad = np.argwhere(~(signed > 0.0))
    if bad.size == 0:
        return True, None
    i, j = bad[0]
    return False, (float(s[i]), int(j))
