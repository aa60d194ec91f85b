"""Figures written next to the CSV output (Agg backend, no display needed)."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .bezier import evaluate_curve  # noqa: E402

STYLE = {
    "font.size": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 120,
    # fixed metadata keeps re-runs byte-identical
    "svg.hashsalt": "rpcrank",
}


def _save(fig, path) -> None:
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=path.suffix)
    os.close(fd)
    try:
        fig.savefig(tmp, metadata={"Software": None} if path.suffix == ".png" else None)
        os.replace(tmp, path)
    finally:
        plt.close(fig)
        if os.path.exists(tmp):
            os.unlink(tmp)


def plot_fit(X, P, s, names, path, samples: int = 200) -> None:
    """Pairwise scatter of normalized data with the fitted curve overlaid."""
    X = np.asarray(X, dtype=float)
    d = X.shape[1]
    curve = evaluate_curve(P, np.linspace(0.0, 1.0, samples))
    with plt.rc_context(STYLE):
        if d == 1:
            fig, ax = plt.subplots(figsize=(4, 3))
            ax.scatter(s, X[:, 0], s=6, c=s, cmap="viridis")
            ax.plot(np.linspace(0, 1, samples), curve[:, 0], color="k", lw=1)
            ax.set_xlabel("score")
            ax.set_ylabel(names[0])
            _save(fig, path)
            return
        k = d - 1
        fig, axes = plt.subplots(k, k, figsize=(2.2 * k + 0.5, 2.2 * k + 0.5), squeeze=False)
        for i in range(k):
            for j in range(k):
                ax = axes[i, j]
                if j > i:
                    ax.axis("off")
                    continue
                a, b = j, i + 1
                ax.scatter(X[:, a], X[:, b], s=4, c=s, cmap="viridis", vmin=0, vmax=1)
                ax.plot(curve[:, a], curve[:, b], color="k", lw=1)
                ax.plot(P[a], P[b], "o--", color="tab:red", ms=3, lw=0.6)
                ax.set_xlim(-0.05, 1.05)
                ax.set_ylim(-0.05, 1.05)
                if i == k - 1:
                    ax.set_xlabel(names[a])
                if j == 0:
                    ax.set_ylabel(names[b])
        fig.tight_layout()
        _save(fig, path)


def plot_trajectory(j_trajectory, path) -> None:
    J = np.asarray(j_trajectory, dtype=float)
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4, 3))
        ax.plot(np.arange(J.size), J, lw=1)
        if np.all(J > 0):
            ax.set_yscale("log")
        ax.set_xlabel("iteration")
        ax.set_ylabel("objective J")
        fig.tight_layout()
        _save(fig, path)


def plot_scores(ids, scores, path, top: int = 30) -> None:
    """Horizontal bars of the highest scores."""
    scores = np.asarray(scores, dtype=float)
    order = np.argsort(-scores, kind="stable")[:top]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(4, 0.18 * len(order) + 0.8))
        ax.barh(np.arange(len(order))[::-1], scores[order], color="tab:blue")
        ax.set_yticks(np.arange(len(order))[::-1])
        ax.set_yticklabels([str(ids[i]) for i in order])
        ax.set_xlabel("score")
        fig.tight_layout()
        _save(fig, path)
