"""Command line front end: ``rpcrank {fit,baseline,assess,emit-curve}``.

Exit codes: 0 success, 1 input or configuration error, 2 fit did not
converge (files are still written), 3 a monotonicity or meta-rule check failed.
"""
from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import median_rank_aggregation, pca_first_component, pca_scores
from .dataset import DataError, OrientationVector, attribute_rank_lists, check_alpha, load_csv, normalize
from .fit import FitConfig, FitError, fit_best, rank_from_scores
from .metarules import assess
from .projection import ProjectionConfig
from .report import (
    atomic_write_text,
    control_points_csv,
    curve_csv,
    fit_report_dict,
    json_text,
    ranking_csv,
)

EXIT_OK, EXIT_INPUT, EXIT_NOT_CONVERGED, EXIT_CHECK_FAILED = 0, 1, 2, 3
SEED_ENV = "RPCRANK_SEED"

log = logging.getLogger("rpcrank")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for non-convergence here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="CSV file with a header row")
    p.add_argument("--alpha", required=True, help='orientation per attribute, e.g. "+,+,-,-"')
    p.add_argument("--id-col", default=None, help="name of the identifier column")
    p.add_argument("--output", default=None, help="ranking CSV path (stdout if omitted)")
    p.add_argument("--seed", type=int, default=None, help=f"random seed (falls back to ${SEED_ENV}, then 0)")
    p.add_argument("-v", "--verbose", action="store_true")


def _fit_flags(p: argparse.ArgumentParser) -> None:
    d = FitConfig()
    g = p.add_argument_group("fit")
    g.add_argument("--tol", type=float, default=d.xi, help="relative objective decrease to stop at")
    g.add_argument("--max-iter", type=int, default=d.max_iter)
    g.add_argument("--grid", type=int, default=d.projection.grid_size, help="projection grid size")
    g.add_argument("--gss-tol", type=float, default=d.projection.gss_interval_tol)
    g.add_argument("--endpoints", choices=("free", "fixed"), default=d.endpoints)
    g.add_argument("--clamp", action="store_true", help="keep control points inside the unit box")
    g.add_argument("--clamp-margin", type=float, default=d.clamp_margin)
    g.add_argument("--step-rule", choices=("preconditioned", "gram"), default=d.step_rule)
    g.add_argument("--restarts", type=int, default=1, help="fit from this many seeds, keep the best")
    g.add_argument("--report", default=None, help="JSON fit report path")
    g.add_argument("--emit-curve", default=None, metavar="PATH", help="curve samples CSV path")
    g.add_argument("--curve-samples", type=int, default=200)
    g.add_argument("--strict", action="store_true", help="exit 3 if the curve is not strictly monotone")
    g.add_argument("--plot", action="store_true", help="render PNG figures next to the output")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="rpcrank", description="Unsupervised ranking with monotone Bezier principal curves.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("fit", help="fit a ranking curve and write the ranking")
    _common(p)
    _fit_flags(p)

    p = sub.add_parser("baseline", help="rank with a reference method")
    _common(p)
    p.add_argument("--method", choices=("pca", "rankagg"), required=True)

    p = sub.add_parser("assess", help="check the ranking design rules on a dataset")
    _common(p)
    _fit_flags(p)
    p.add_argument("--trials", type=int, default=5, help="random affine transforms to try")

    p = sub.add_parser("emit-curve", help="fit and write only the sampled curve")
    _common(p)
    _fit_flags(p)
    return ap


def resolve_seed(flag) -> int:
    if flag is not None:
        seed = flag
    else:
        raw = os.environ.get(SEED_ENV, "").strip()
        if not raw:
            return 0
        try:
            seed = int(raw)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None
    if seed < 0:
        raise UsageError("seed must be non-negative")
    return seed


def fit_config(args) -> FitConfig:
    if args.curve_samples < 2:
        raise UsageError("--curve-samples must be at least 2")
    if args.restarts < 1:
        raise UsageError("--restarts must be at least 1")
    return FitConfig(
        xi=args.tol,
        max_iter=args.max_iter,
        endpoints=args.endpoints,
        clamp=args.clamp,
        clamp_margin=args.clamp_margin,
        seed=resolve_seed(args.seed),
        projection=ProjectionConfig(grid_size=args.grid, gss_interval_tol=args.gss_tol),
        step_rule=args.step_rule,
    )


def _load(args):
    ds = load_csv(args.input, args.id_col)
    try:
        alpha = OrientationVector.parse(args.alpha)
    except ValueError as err:
        raise UsageError(f"bad --alpha: {err}") from None
    alpha = check_alpha(alpha, ds.d)
    return ds, alpha


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write_text(path, text)


def _sibling(args, suffix: str) -> Path:
    base = args.output or args.report or args.emit_curve
    base = Path(base) if base else Path("rpcrank")
    return base.with_name(base.stem + suffix)


def run_fit(args) -> int:
    cfg = fit_config(args)
    ds, alpha = _load(args)
    nds = normalize(ds)
    P, s, rep = fit_best(nds, alpha, cfg, args.restarts)
    ranks = rank_from_scores(ds.object_ids, s)
    ok = rep.monotone[0]

    if args.command == "emit-curve":
        _emit(curve_csv(P, args.curve_samples), args.emit_curve or args.output)
    else:
        _emit(ranking_csv(ds.object_ids, s, ranks), args.output)
        if args.emit_curve:
            atomic_write_text(args.emit_curve, curve_csv(P, args.curve_samples))
    if args.emit_curve:
        cp = Path(args.emit_curve)
        atomic_write_text(cp.with_name(cp.stem + ".control.csv"),
                          control_points_csv(rep.P_normalized, rep.P_original, ds.attribute_names))
    if args.report:
        extra = {"n": ds.n, "d": ds.d, "dropped_rows": ds.dropped_rows, "alpha": list(alpha.deltas),
                 "restarts": args.restarts}
        atomic_write_text(args.report, json_text(fit_report_dict(rep, nds, cfg, extra)))
    if args.plot:
        from .plotting import plot_fit, plot_scores, plot_trajectory

        plot_fit(nds.values, P, s, ds.attribute_names, _sibling(args, ".curve.png"), args.curve_samples)
        plot_trajectory(rep.j_trajectory, _sibling(args, ".trajectory.png"))
        plot_scores(ds.object_ids, s, _sibling(args, ".scores.png"))

    log.info("J=%.6g  EV=%.4f  iterations=%d  converged=%s  monotone=%s",
             rep.j_trajectory[-1], rep.explained_variance, rep.iterations, rep.converged, ok)
    if args.strict and not ok:
        w = rep.monotone[1]
        print(f"rpcrank: curve not strictly monotone (attribute {w[1]} at s={w[0]:.6g})", file=sys.stderr)
        return EXIT_CHECK_FAILED
    if not rep.converged:
        print(f"rpcrank: not converged after {rep.iterations} iterations", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def run_baseline(args) -> int:
    ds, alpha = _load(args)
    nds = normalize(ds)
    if args.method == "pca":
        scores = pca_scores(pca_first_component(nds, alpha), nds)
    else:
        scores = median_rank_aggregation(attribute_rank_lists(nds, alpha))
    _emit(ranking_csv(ds.object_ids, scores, rank_from_scores(ds.object_ids, scores)), args.output)
    return EXIT_OK


def run_assess(args) -> int:
    cfg = fit_config(args)
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    ds, alpha = _load(args)
    rep = assess(ds, alpha, cfg, trials=args.trials)
    _emit(json_text(rep.as_dict()), args.report or args.output)
    return EXIT_OK if rep.passed else EXIT_CHECK_FAILED


COMMANDS = {"fit": run_fit, "emit-curve": run_fit, "baseline": run_baseline, "assess": run_assess}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="rpcrank: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except (UsageError, DataError, FitError, ValueError, OSError) as err:
        msg = " ".join(str(err).split()) or type(err).__name__
        print(f"rpcrank: error: {msg}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
