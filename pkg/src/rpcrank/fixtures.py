"""Deterministic synthetic datasets, also shipped as CSV files in ``data/``.

Run ``python -m rpcrank.fixtures`` to regenerate the bundled copies.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .bezier import evaluate_curve
from .dataset import Dataset, OrientationVector

# S-shaped curve for alpha = (+, +, -, -): first two inner points sit on one
# side of the diagonal, the second on the other.
SCURVE_P = np.array(
    [
        [0.0, 0.15, 0.85, 1.0],
        [0.0, 0.05, 0.95, 1.0],
        [1.0, 0.85, 0.1, 0.0],
        [1.0, 0.95, 0.2, 0.0],
    ]
)
SCURVE_ALPHA = OrientationVector((1, 1, -1, -1))

TRIO_A = np.array([[0.3, 0.25], [0.25, 0.55], [0.7, 0.7]])
TRIO_B = np.array([[0.35, 0.4], [0.25, 0.55], [0.7, 0.7]])


@dataclass(frozen=True)
class Synthetic:
    dataset: Dataset
    alpha: OrientationVector
    true_s: np.ndarray
    true_P: np.ndarray


def from_curve(P, alpha, n: int, sigma: float, seed: int, names=None) -> Synthetic:
    """Sample ``n`` points ``f(s) + N(0, sigma^2)``.

    Parameters are stratified: one uniform draw from the middle 80% of each of
    ``n`` equal cells, so neighbouring objects stay at least ``0.2 / n`` apart.
    """
    rng = np.random.default_rng(seed)
    s = (np.arange(n) + rng.uniform(0.1, 0.9, n)) / n
    X = evaluate_curve(P, s)
    if sigma > 0:
        X = X + sigma * rng.standard_normal(X.shape)
    ds = Dataset.from_array(X, attribute_names=names)
    return Synthetic(ds, OrientationVector(tuple(alpha)), s, np.asarray(P, dtype=float))


def scurve(sigma: float = 0.02, n: int = 200, seed: int = 20140) -> Synthetic:
    return from_curve(SCURVE_P, SCURVE_ALPHA.deltas, n, sigma, seed)


def line(n: int = 50, d: int = 3, seed: int = 3) -> Synthetic:
    """Points on one increasing straight segment (distinct parameters)."""
    rng = np.random.default_rng(seed)
    t = (np.arange(n) + rng.uniform(0.1, 0.9, n)) / n
    start = rng.uniform(0.0, 0.3, d)
    stop = rng.uniform(0.7, 1.0, d)
    X = start + t[:, None] * (stop - start)
    P = np.column_stack([start + k / 3.0 * (stop - start) for k in range(4)])
    return Synthetic(Dataset.from_array(X), OrientationVector((1,) * d), t, P)


def concave(sigma: float = 0.0, n: int = 200, seed: int = 11) -> Synthetic:
    P = np.array([[0.0, 0.1, 0.4, 1.0], [0.0, 0.7, 0.95, 1.0]])
    return from_curve(P, (1, 1), n, sigma, seed)


def trio(variant: str = "a") -> Dataset:
    values = {"a": TRIO_A, "b": TRIO_B}[variant]
    ids = ("A" if variant == "a" else "A'", "B", "C")
    return Dataset(("x1", "x2"), ids, values)


def countries(seed: int = 171) -> tuple[list[str], list[list[str]]]:
    """Life-quality style table: GDP, LEB, IMR, Tuberculosis for 171 objects."""
    P = np.array(
        [
            [0.0, 0.02, 0.08, 1.0],
            [0.0, 0.75, 0.97, 1.0],
            [1.0, 0.25, 0.02, 0.0],
            [1.0, 0.3, 0.03, 0.0],
        ]
    )
    rng = np.random.default_rng(seed)
    s = rng.beta(1.6, 1.2, 171)
    Z = np.clip(evaluate_curve(P, s) + 0.03 * rng.standard_normal((171, 4)), 0.0, 1.0)
    # one object is best on every attribute, so it sits on the ideal corner
    Z[80] = (1.0, 1.0, 0.0, 0.0)
    lo = np.array([538.0, 41.681, 2.0, 2.0])
    hi = np.array([70014.0, 82.5, 422.0, 160.0])
    V = lo + Z * (hi - lo)
    header = ["country", "GDP", "LEB", "IMR", "Tuberculosis"]
    rows = [
        [f"Country {i + 1:03d}", f"{v[0]:.0f}", f"{v[1]:.3f}", f"{v[2]:.0f}", f"{v[3]:.0f}"]
        for i, v in enumerate(V)
    ]
    return header, rows


def journals(seed: int = 451) -> tuple[list[str], list[list[str]]]:
    """Journal-indicator style table with 451 rows, 58 of them incomplete."""
    P = np.array(
        [
            [0.0, 0.1, 0.3, 1.0],
            [0.0, 0.15, 0.35, 1.0],
            [0.0, 0.3, 0.2, 1.0],
            [0.0, 0.05, 0.2, 1.0],
            [0.0, 0.1, 0.4, 1.0],
        ]
    )
    rng = np.random.default_rng(seed)
    n = 451
    s = rng.beta(1.2, 3.0, n)
    Z = np.clip(evaluate_curve(P, s) + 0.02 * np.abs(rng.standard_normal((n, 5))), 0.0, 1.0)
    hi = np.array([9.256, 7.854, 2.682, 0.05237, 4.097])
    V = 0.001 + Z * hi
    header = ["title", "IF", "5-Year IF", "Immediacy Index", "Eigenfactor", "Influence Score"]
    missing = set(rng.choice(n, 58, replace=False).tolist())
    rows = []
    for i, v in enumerate(V):
        cells = [f"{v[0]:.3f}", f"{v[1]:.3f}", f"{v[2]:.3f}", f"{v[3]:.5f}", f"{v[4]:.3f}"]
        if i in missing:
            cells[int(rng.integers(0, 5))] = ""
        rows.append([f"JOURNAL {i + 1:03d}"] + cells)
    return header, rows


def _dataset_rows(ds: Dataset, id_name: str = "id"):
    header = [id_name, *ds.attribute_names]
    rows = [[oid, *(repr(float(v)) for v in row)] for oid, row in zip(ds.object_ids, ds.values)]
    return header, rows


def bundled_tables() -> dict[str, tuple[list[str], list[list[str]], str]]:
    """name -> (header, rows, orientation string) for every shipped CSV."""
    out = {}
    for v in ("a", "b"):
        out[f"trio_{v}"] = (*_dataset_rows(trio(v)), "+,+")
    syn = scurve(0.02)
    out["scurve"] = (*_dataset_rows(syn.dataset), "+,+,-,-")
    syn = scurve(0.0)
    out["scurve_clean"] = (*_dataset_rows(syn.dataset), "+,+,-,-")
    syn = line()
    out["line"] = (*_dataset_rows(syn.dataset), "+,+,+")
    out["countries"] = (*countries(), "+,+,-,-")
    out["journals"] = (*journals(), "+,+,+,+,+")
    return out


def data_path(name: str) -> Path:
    return Path(str(resources.files("rpcrank") / "data" / f"{name}.csv"))


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)


def main() -> None:
    outdir = Path(__file__).parent / "data"
    outdir.mkdir(exist_ok=True)
    for name, (header, rows, alpha) in bundled_tables().items():
        write_csv(outdir / f"{name}.csv", header, rows)
        print(f"{name}.csv  rows={len(rows)}  alpha={alpha}")


if __name__ == "__main__":
    main()
