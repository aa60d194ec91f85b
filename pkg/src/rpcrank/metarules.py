"""Executable checks of the five design rules for unsupervised ranking functions.

Scale/translation invariance is checked by re-running the pipeline on
affinely transformed data.  Monotonicity and smoothness are checked on the
fitted curve.  Linear/nonlinear capacity is checked constructively with a
small battery of noiseless curve families, and the parameter count is
reported (it is always ``4 * d``).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import fixtures
from .bezier import check_monotone_admissible, curve_derivative, evaluate_curve, sample_curve_monotonicity
from .dataset import Dataset, OrientationVector, normalize
from .fit import FitConfig, fit, rank_from_scores

FD_STEP = 1e-6
SMOOTHNESS_TOL = 1e-6
CAPACITY_EV = 0.99


@dataclass(frozen=True)
class Verdict:
    passed: bool
    detail: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MetaRuleReport:
    scale_translation: Verdict
    strict_monotonicity: Verdict
    smoothness: Verdict
    capacity: Verdict
    parameter_size: int
    explicit: bool = True

    @property
    def passed(self) -> bool:
        return all(
            v.passed
            for v in (self.scale_translation, self.strict_monotonicity, self.smoothness, self.capacity)
        ) and self.explicit

    def as_dict(self) -> dict:
        def verdict(v):
            return {"passed": v.passed, **v.detail}

        return {
            "scale_translation": verdict(self.scale_translation),
            "strict_monotonicity": verdict(self.strict_monotonicity),
            "smoothness": verdict(self.smoothness),
            "capacity": verdict(self.capacity),
            "parameter_size": {"passed": self.explicit, "value": self.parameter_size},
            "all_passed": self.passed,
            "scope": (
                "capacity is checked on a fixed battery of curve families and smoothness "
                "against finite differences; both are constructive checks, not proofs"
            ),
        }


def ranking_of(dataset: Dataset, alpha, cfg: FitConfig) -> np.ndarray:
    """normalize -> fit -> rank; returns the object indices from best to worst."""
    _, s, _ = fit(normalize(dataset), alpha, cfg)
    ranks = rank_from_scores(dataset.object_ids, s)
    return np.argsort(ranks)


def assess_scale_translation(dataset: Dataset, alpha, cfg: FitConfig | None = None,
                             trials: int = 5, transforms=None, seed: int = 0) -> Verdict:
    """Compare rankings of ``X`` and ``scale * X + offset`` under one fit seed.

    ``transforms`` may supply explicit ``(scale, offset)`` pairs; otherwise
    ``trials`` random ones are drawn.  Pairs with a non-positive scale would
    reverse an attribute's order and are skipped as invalid, not failed.
    """
    cfg = cfg or FitConfig()
    X = dataset.values
    if transforms is None:
        rng = np.random.default_rng(seed)
        transforms = [
            (np.exp(rng.uniform(-3.0, 3.0, dataset.d)), rng.uniform(-100.0, 100.0, dataset.d))
            for _ in range(trials)
        ]
    base = ranking_of(dataset, alpha, cfg)
    ran = invalid = 0
    mismatches = []
    for k, (scale, offset) in enumerate(transforms):
        scale = np.broadcast_to(np.asarray(scale, dtype=float), (dataset.d,))
        offset = np.broadcast_to(np.asarray(offset, dtype=float), (dataset.d,))
        if np.any(scale <= 0):
            invalid += 1
            continue
        moved = Dataset(dataset.attribute_names, dataset.object_ids, X * scale + offset)
        ran += 1
        if not np.array_equal(ranking_of(moved, alpha, cfg), base):
            mismatches.append(k)
    return Verdict(ran > 0 and not mismatches,
                   {"trials": ran, "invalid_trials": invalid, "mismatched_trials": mismatches})


def assess_strict_monotonicity(P, alpha, grid_size: int = 1000) -> Verdict:
    a = alpha.as_array() if isinstance(alpha, OrientationVector) else np.asarray(alpha, dtype=float)
    if check_monotone_admissible(P, a):
        return Verdict(True, {"method": "admissible control points", "witness": None})
    ok, witness = sample_curve_monotonicity(P, a, grid_size)
    detail = {"method": f"sampled derivative signs ({grid_size} points)", "witness": None}
    if witness is not None:
        detail["witness"] = {"s": witness[0], "attribute": witness[1]}
    return Verdict(ok, detail)


def assess_smoothness(P, derivative=curve_derivative, grid_size: int = 101) -> Verdict:
    """Analytic tangent vs central differences of the curve itself."""
    s = np.linspace(FD_STEP, 1.0 - FD_STEP, grid_size)
    analytic = derivative(P, s)
    numeric = (evaluate_curve(P, s + FD_STEP) - evaluate_curve(P, s - FD_STEP)) / (2 * FD_STEP)
    worst = float(np.max(np.abs(analytic - numeric)))
    return Verdict(bool(np.all(np.isfinite(analytic))) and worst <= SMOOTHNESS_TOL,
                   {"max_fd_discrepancy": worst})


def capacity_battery():
    """(name, synthetic data) pairs spanning straight and curved shapes."""
    return [
        ("linear", fixtures.line(n=100, d=2, seed=5)),
        ("s-curve", fixtures.scurve(sigma=0.0, n=150, seed=8)),
        ("concave", fixtures.concave()),
    ]


def assess_capacity(cfg: FitConfig | None = None, battery=None) -> Verdict:
    cfg = cfg or FitConfig()
    scores = {}
    for name, syn in battery or capacity_battery():
        _, _, rep = fit(normalize(syn.dataset), syn.alpha, cfg)
        scores[name] = rep.explained_variance
    return Verdict(all(v >= CAPACITY_EV for v in scores.values()),
                   {"explained_variance": scores, "threshold": CAPACITY_EV})


def assess(dataset: Dataset, alpha, cfg: FitConfig | None = None, trials: int = 5) -> MetaRuleReport:
    cfg = cfg or FitConfig()
    P, _, _ = fit(normalize(dataset), alpha, cfg)
    return MetaRuleReport(
        scale_translation=assess_scale_translation(dataset, alpha, cfg, trials=trials, seed=cfg.seed),
        strict_monotonicity=assess_strict_monotonicity(P, alpha),
        smoothness=assess_smoothness(P),
        capacity=assess_capacity(cfg),
        parameter_size=P.size,
        explicit=P.size == 4 * dataset.d,
    )
