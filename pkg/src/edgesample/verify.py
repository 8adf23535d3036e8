"""Brute-force checks of the samplers' probability formulas on one graph."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .analysis import (EdgeDistribution, exact_attempt_distribution, pointwise_distance, tv_distance,
                       uniform_distribution)
from .approx import ell_of
from .exact import build_correction, default_delta
from .graph import Graph, classify
from .htable import attempt_probabilities, bound_violations, compute_h

EXACT_LIMIT = 50
TOL = 1e-12


def _slot_array(g: Graph, dist: EdgeDistribution, exact: bool):
    vals = [dist.mass.get(e, 0) for e in g.directed_edges()]
    return np.array(vals, dtype=object) if exact else np.array(vals, dtype=float)


def _max_gap(a, b, exact: bool):
    if exact:
        return max((abs(x - y) for x, y in zip(a, b)), default=Fraction(0))
    return float(np.max(np.abs(a - b))) if len(a) else 0.0


def check_epsilon(g: Graph, epsilon, exact: bool) -> dict:
    cls = classify(g, g.m)
    ell = ell_of(epsilon)
    eps = Fraction(epsilon) if exact else float(epsilon)
    ht = compute_h(g, cls, ell, exact=exact)
    dist = exact_attempt_distribution(g, cls, ell, exact=exact)
    enum = _slot_array(g, dist, exact)
    formula = attempt_probabilities(g, cls, ht)
    literal = attempt_probabilities(g, cls, ht, level=ell)
    gap = _max_gap(enum, formula, exact)
    literal_gap = _max_gap(enum, literal, exact)

    cond = dist.condition()
    uni = uniform_distribution(g.directed_edges(), exact=exact)
    pw = pointwise_distance(cond, uni)
    tv = tv_distance(cond, uni)
    tight = (eps / 2) / (1 - eps / 2)
    violations = bound_violations(ht, cls)
    success = sum(dist.mass.values(), 0 * dist.fail_mass)
    return {
        "epsilon": float(epsilon),
        "ell": ell,
        "theta": cls.theta,
        "exact": exact,
        "formula_gap": float(gap),
        "formula_ok": bool(gap == 0 if exact else gap <= TOL),
        "literal_level_gap": float(literal_gap),
        "literal_level_ok": bool(literal_gap == 0 if exact else literal_gap <= TOL),
        "pointwise": float(pw),
        "pointwise_ok": bool(pw <= eps),
        "tight_bound": float(tight),
        "tight_ok": bool(pw <= tight),
        "tv": float(tv),
        "tv_le_pointwise": bool(tv <= pw),
        "h_violations": len(violations),
        "success_probability": float(success),
        "expected_attempts": float(1 / success),
    }


def check_exactness(g: Graph, delta=None, exact: bool = True) -> dict:
    """Mixture marginal (1 - delta) q + delta r per directed edge, q from enumeration."""
    if delta is None:
        delta = Fraction(1, g.n ** 3) if exact else default_delta(g.n)
        if delta > Fraction(1, 2):
            delta = Fraction(1, 2) if exact else 0.5
    delta = Fraction(delta) if exact else float(delta)
    cls = classify(g, g.m)
    ell = ell_of(delta)
    ht = compute_h(g, cls, ell, exact=exact)
    corr = build_correction(g, ht, delta)
    q = _slot_array(g, exact_attempt_distribution(g, cls, ell, exact=exact).condition(), exact)
    target = Fraction(1, 2 * g.m) if exact else 1.0 / (2 * g.m)
    marg = [(1 - delta) * a + delta * b for a, b in zip(q, corr.weights)]
    gap = max(abs(x - target) for x in marg)
    rsum = sum(corr.weights, 0 * delta)
    return {
        "delta": float(delta),
        "ell": ell,
        "exact": exact,
        "marginal_gap": float(gap),
        "marginal_ok": bool(gap == 0 if exact else gap <= TOL),
        "min_weight": float(min(corr.weights)),
        "weight_sum": float(rsum),
        "weights_ok": bool(min(corr.weights) >= 0 and abs(float(rsum) - 1) <= 1e-9),
    }


def verify_graph(g: Graph, epsilons=(0.5, 0.25, 0.0625), exact: bool | None = None, delta=None) -> dict:
    if exact is None:
        exact = g.n <= EXACT_LIMIT
    eps_reports = [check_epsilon(g, e, exact) for e in epsilons]
    ex = check_exactness(g, delta, exact)
    passed = all(r["formula_ok"] and r["pointwise_ok"] and r["tv_le_pointwise"] and r["h_violations"] == 0
                 for r in eps_reports) and ex["marginal_ok"] and ex["weights_ok"]
    return {"passed": bool(passed), "epsilons": eps_reports, "exactness": ex}
