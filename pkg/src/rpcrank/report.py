"""Output files: ranking CSV, JSON reports, curve samples and control points."""
from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from pathlib import Path

import numpy as np

from .bezier import evaluate_curve
from .fit import FitConfig, FitReport


def atomic_write_text(path, text: str) -> None:
    """Write via a temporary file in the target directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def ranking_rows(ids, scores, ranks):
    order = np.argsort(ranks, kind="stable")
    return [[ids[i], f"{scores[i]:.6f}", int(ranks[i])] for i in order]


def ranking_csv(ids, scores, ranks) -> str:
    return _csv_text(["id", "score", "rank"], ranking_rows(ids, scores, ranks))


def _jsonable(v):
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def config_dict(cfg: FitConfig) -> dict:
    return {
        "xi": cfg.xi,
        "max_iter": cfg.max_iter,
        "endpoints": cfg.endpoints,
        "clamp": cfg.clamp,
        "clamp_margin": cfg.clamp_margin,
        "seed": cfg.seed,
        "step_rule": cfg.step_rule,
        "projection": {
            "grid_size": cfg.projection.grid_size,
            "gss_interval_tol": cfg.projection.gss_interval_tol,
            "tie_rule": cfg.projection.tie_rule,
        },
    }


def fit_report_dict(report: FitReport, nds=None, cfg: FitConfig | None = None, extra=None) -> dict:
    ok, witness = report.monotone
    out = {
        "j_trajectory": list(report.j_trajectory),
        "iterations": report.iterations,
        "converged": report.converged,
        "stopped_on_increase": report.stopped_on_increase,
        "explained_variance": report.explained_variance,
        "monotone": {
            "passed": ok,
            "witness": None if witness is None else {"s": witness[0], "attribute": witness[1]},
        },
        "residual_norms": _jsonable(report.residual_norms),
        "P_normalized": _jsonable(report.P_normalized),
        "P_original": _jsonable(report.P_original),
        "parameter_size": report.parameter_size,
    }
    if nds is not None:
        out["attribute_names"] = list(nds.attribute_names)
        out["col_min"] = _jsonable(nds.col_min)
        out["col_max"] = _jsonable(nds.col_max)
    if cfg is not None:
        out["config"] = config_dict(cfg)
    if extra:
        out.update({k: _jsonable(v) for k, v in extra.items()})
    return out


def json_text(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_jsonable) + "\n"


def curve_csv(P, samples: int = 200) -> str:
    """``s, f_1, ..., f_d`` on ``samples`` equispaced parameters (normalized units)."""
    s = np.linspace(0.0, 1.0, samples)
    F = evaluate_curve(P, s)
    d = F.shape[1]
    header = ["s", *(f"f_{j + 1}" for j in range(d))]
    rows = [[repr(float(si)), *(repr(float(v)) for v in row)] for si, row in zip(s, F)]
    return _csv_text(header, rows)


def control_points_csv(P_normalized, P_original, attribute_names) -> str:
    rows = []
    for space, P in (("normalized", P_normalized), ("original", P_original)):
        if P is None:
            continue
        for r in range(4):
            rows.append([f"p{r}", space, *(repr(float(v)) for v in P[:, r])])
    return _csv_text(["point", "space", *attribute_names], rows)


def read_curve_csv(path) -> tuple[np.ndarray, np.ndarray]:
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return data[:, 0], data[:, 1:]
