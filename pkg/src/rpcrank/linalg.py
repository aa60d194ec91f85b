"""Small dense linear-algebra kernels used by the curve fitter."""
from __future__ import annotations

import math

import numpy as np


def jacobi_eigenvalues(A, tol: float = 1e-12, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.

    Sweeps over all off-diagonal pairs until the off-diagonal Frobenius norm
    drops below ``tol`` (relative to ``||A||_F`` when that exceeds one).
    Returned in ascending order.
    """
    a = np.array(A, dtype=float)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("matrix must be square")
    if not np.allclose(a, a.T, atol=1e-10, rtol=0.0):
        raise ValueError("matrix must be symmetric")
    # plain Python floats: for a 4 x 4 matrix this beats numpy's per-call cost
    a = (0.5 * (a + a.T)).tolist()
    scale = max(1.0, math.sqrt(sum(v * v for row in a for v in row)))
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[p][q] ** 2 for p in range(n) for q in range(n) if p != q))
        if off < tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p][q]
                if apq == 0.0:
                    continue
                theta = (a[q][q] - a[p][p]) / (2.0 * apq)
                if theta == 0.0:
                    t = 1.0
                elif abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                # a <- J^T a J with the rotation acting on rows/cols p, q
                for r in range(n):
                    arp, arq = a[r][p], a[r][q]
                    a[r][p] = c * arp - s * arq
                    a[r][q] = s * arp + c * arq
                rp, rq = a[p], a[q]
                for r in range(n):
                    vp, vq = rp[r], rq[r]
                    rp[r] = c * vp - s * vq
                    rq[r] = s * vp + c * vq
                a[p][q] = a[q][p] = 0.0
    else:
        raise RuntimeError("Jacobi sweeps did not converge")
    return np.sort(np.array([a[i][i] for i in range(n)]))


def power_iteration(C, tol: float = 1e-10, max_iter: int = 100_000) -> tuple[np.ndarray, float]:
    """Dominant eigenpair of a symmetric PSD matrix.

    Starts from the normalised ones vector and stops once the direction moves
    by less than ``tol`` between iterations.
    """
    C = np.asarray(C, dtype=float)
    v = np.ones(C.shape[0]) / np.sqrt(C.shape[0])
    w = C @ v
    if np.linalg.norm(w) == 0.0:
        # start vector in the null space; try the coordinate axes
        for j in range(C.shape[0]):
            w = C[:, j].copy()
            if np.linalg.norm(w) > 0.0:
                break
        else:
            raise ValueError("matrix is zero")
    v = w / np.linalg.norm(w)
    for _ in range(max_iter):
        w = C @ v
        w /= np.linalg.norm(w)
        if np.linalg.norm(w - v) < tol:
            v = w
            break
        v = w
    else:
        raise RuntimeError("power iteration did not converge")
    return v, float(v @ C @ v)
