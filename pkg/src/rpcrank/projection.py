"""Nearest-point projection of observations onto a cubic Bezier curve.

The squared distance ``g(s) = ||x - f(s)||^2`` is a degree-6 polynomial and
may have several local minima, so each point is first bracketed on a coarse
grid and then refined by golden section search inside the winning bracket.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .bezier import M, as_control_points

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0
INV_PHI2 = (3.0 - math.sqrt(5.0)) / 2.0
TIE_ULPS = 16
BLOCK_ROWS = 2048
SMALL_ROWS = 8
_PROBE = np.array([INV_PHI, INV_PHI2])


@dataclass(frozen=True)
class ProjectionConfig:
    grid_size: int = 64
    gss_interval_tol: float = 1e-6
    tie_rule: str = "largest s"

    def __post_init__(self):
        if self.grid_size < 3:
            raise ValueError("grid_size must be at least 3")
        if not 0.0 < self.gss_interval_tol < 1.0:
            raise ValueError("gss_interval_tol must lie in (0, 1)")
        if self.tie_rule != "largest s":
            raise ValueError("only the 'largest s' tie rule is supported")


def _sqdist(C, X, s):
    # direct ||x - f(s)||^2; C: power-form coefficients (d x 4), s: (n, k)
    s = s[..., None]
    f = ((C[:, 3] * s + C[:, 2]) * s + C[:, 1]) * s + C[:, 0]
    diff = X[:, None, :] - f
    return np.einsum("nkd,nkd->nk", diff, diff)


def _distance_polynomials(C, X):
    """Coefficients (low to high, n x 7) of the sextic ``||x_i - f(s)||^2``."""
    G = C.T @ C
    curve = np.zeros(7)
    for k in range(4):
        curve[k:k + 4] += G[k]
    # x . C_k and x . x accumulated per coordinate so rows never interact
    xc = X[:, 0, None] * C[0]
    xx = X[:, 0] * X[:, 0]
    for j in range(1, X.shape[1]):
        xc = xc + X[:, j, None] * C[j]
        xx = xx + X[:, j] * X[:, j]
    q = np.empty((X.shape[0], 7))
    q[:] = curve
    q[:, :4] -= 2.0 * xc
    q[:, 0] += xx
    return q


@lru_cache(maxsize=8)
def _grid(size: int) -> np.ndarray:
    g = np.linspace(0.0, 1.0, size)
    g.setflags(write=False)
    return g


def _horner(q, s):
    # q: (n, 7); s: (n,) or (n, k)
    if s.ndim == 2:
        q = q[:, None, :]
    out = q[..., 6]
    for m in range(5, -1, -1):
        out = out * s + q[..., m]
    return out


def _horner_row(c, s):
    # same operation order as _horner, so both paths round identically
    return (((((c[6] * s + c[5]) * s + c[4]) * s + c[3]) * s + c[2]) * s + c[1]) * s + c[0]


def _gss_rows(q, a, h, steps):
    """Golden section search row by row on Python floats.

    For a handful of rows numpy's per-call cost dominates; this loop makes
    exactly the same moves and roundings as the vectorised one.
    """
    out = np.empty((len(a), 3))
    w = h
    for i, (coef, lo) in enumerate(zip(q.tolist(), a.tolist())):
        w = h
        c = lo + INV_PHI2 * w
        d = lo + INV_PHI * w
        gc = _horner_row(coef, c)
        gd = _horner_row(coef, d)
        for _ in range(steps):
            w *= INV_PHI
            if gc < gd:
                probe = lo + INV_PHI2 * w
                c, d, gd = probe, c, gc
                gc = _horner_row(coef, probe)
            else:
                lo = c
                probe = lo + INV_PHI * w
                c, d, gc = d, probe, gd
                gd = _horner_row(coef, probe)
        out[i] = lo, c, d
    return out[:, 0], out[:, 1], out[:, 2], w


def _last_argmin(values):
    """Row-wise argmin that prefers the largest index on exact ties."""
    k = values.shape[1]
    return k - 1 - np.argmin(values[:, ::-1], axis=1)


def project_all(P, X, cfg: ProjectionConfig | None = None) -> np.ndarray:
    """Curve parameter of the nearest curve point for every row of ``X``."""
    cfg = cfg or ProjectionConfig()
    P = as_control_points(P)
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != P.shape[0]:
        raise ValueError(f"X must be n x {P.shape[0]}")
    n = X.shape[0]
    if n == 0:
        return np.empty(0)
    C = P @ M  # power-basis coefficients: f(s) = C @ (1, s, s^2, s^3)
    if n <= BLOCK_ROWS:
        return _project_block(C, X, cfg)
    # fixed-size blocks keep the n x grid work arrays cache-sized
    return np.concatenate(
        [_project_block(C, X[i:i + BLOCK_ROWS], cfg) for i in range(0, n, BLOCK_ROWS)]
    )


def _project_block(P, X, cfg):
    n = X.shape[0]

    grid = _grid(cfg.grid_size)
    q = _distance_polynomials(P, X)
    g_grid = _horner(q, np.broadcast_to(grid, (n, cfg.grid_size)))
    k = _last_argmin(g_grid)
    # every bracket spans two grid cells (shifted inward at the ends), so the
    # interval length is one scalar shared by all rows
    h = 2.0 / (cfg.grid_size - 1)
    a = grid[np.clip(k - 1, 0, cfg.grid_size - 3)]
    steps = max(0, math.ceil(math.log(cfg.gss_interval_tol / h) / math.log(INV_PHI)))

    # golden section search; rows only ever interact through the shared
    # scalar h, so batch and single-point results agree exactly
    if n <= SMALL_ROWS:
        a, c, d, h = _gss_rows(q, a, h, steps)
    else:
        c = a + INV_PHI2 * h
        d = a + INV_PHI * h
        gc = _horner(q, c)
        gd = _horner(q, d)
        for _ in range(steps):
            left = gc < gd
            a = np.where(left, a, c)
            h *= INV_PHI
            # the new probe is the left interior point after a left move, the
            # right one otherwise; one select updates (c, d, g(c), g(d)) together
            probe = a + _PROBE[left.view(np.int8)] * h
            g_new = _horner(q, probe)
            c, d, gc, gd = np.where(left, (probe, c, g_new, gc), (d, probe, gd, g_new))
    b = a + h

    # candidates in increasing s; the refined interior points plus the grid
    # winner and bracket ends guard against boundary minima
    cand = np.stack([a, c, d, b, grid[k]], axis=1)
    cand = np.clip(cand, 0.0, 1.0)
    order = np.argsort(cand, axis=1, kind="stable")
    cand = np.take_along_axis(cand, order, axis=1)
    g_cand = _sqdist(P, X, cand)
    # values within a few rounding units of the minimum count as ties, so a
    # mathematically tied end point is not lost to last-bit noise
    g_min = g_cand.min(axis=1, keepdims=True)
    slack = TIE_ULPS * np.finfo(float).eps * (1.0 + g_min + np.sum(X * X, axis=1, keepdims=True))
    tied = g_cand <= g_min + slack
    best = cand.shape[1] - 1 - np.argmax(tied[:, ::-1], axis=1)
    return cand[np.arange(n), best]


def project_point(P, x, cfg: ProjectionConfig | None = None) -> float:
    """Curve parameter in [0, 1] closest to a single observation ``x``."""
    x = np.asarray(x, dtype=float)
    return float(project_all(P, x[None, :], cfg)[0])
