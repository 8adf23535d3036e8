"""Exact distributions, distances and goodness-of-fit tests for edge samplers."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist

import numpy as np

from .approx import SamplerConfig, ell_of, sample_edges
from .exact import ExactSampler
from .graph import EdgeClassification, Graph
from .htable import EnumerationLimitError
from .oracle import QueryOracle


@dataclass
class EdgeDistribution:
    """Probability per directed edge (v, w).

    Raw single-attempt distributions carry a ``fail_mass``; conditioned ones
    have ``fail_mass == 0`` and total mass 1.
    """
    mass: dict
    fail_mass: object = 0
    conditioned: bool = False

    def total(self):
        return sum(self.mass.values(), 0 * self.fail_mass) + self.fail_mass

    def condition(self) -> "EdgeDistribution":
        s = sum(self.mass.values(), 0 * self.fail_mass)
        if s == 0:
            raise ZeroDivisionError("distribution has no success mass")
        return EdgeDistribution({e: p / s for e, p in self.mass.items()}, 0 * self.fail_mass, True)

    def undirected(self) -> "EdgeDistribution":
        out: dict = {}
        for (v, w), p in self.mass.items():
            key = (v, w) if v < w else (w, v)
            out[key] = out.get(key, 0) + p
        return EdgeDistribution(out, self.fail_mass, self.conditioned)

    def as_array(self, keys) -> np.ndarray:
        return np.array([float(self.mass.get(k, 0.0)) for k in keys])


def uniform_distribution(keys, exact: bool = False) -> EdgeDistribution:
    keys = list(keys)
    p = Fraction(1, len(keys)) if exact else 1.0 / len(keys)
    return EdgeDistribution({k: p for k in keys}, 0 * p, True)


def exact_attempt_distribution(g: Graph, cls: EdgeClassification, ell: int, exact: bool = False,
                               max_work: int = 20_000_000) -> EdgeDistribution:
    """Exact single-attempt output law by forward propagation over walk steps.

    State after step s is the probability that the walk is at x with
    u_1..u_{s-1} heavy; the walk length k is independent of the walk, so every
    k reads off the same state sequence.  Heaviness is taken from the degree
    and ``cls.theta`` only.
    """
    n, theta = g.n, cls.theta
    if 2 * g.m * ell > max_work:
        raise EnumerationLimitError(f"2m * ell = {2 * g.m * ell} exceeds {max_work}")
    one = Fraction(1) if exact else 1.0
    zero = 0 * one
    deg = g.degree.tolist()
    adj = g.adjacency()
    heavy = [d > theta for d in deg]
    step_mass = one / (n * theta)
    pk = one / ell

    mass: dict = {}

    def add(e, p):
        mass[e] = mass.get(e, zero) + p

    # step 1: u0 light, j-th neighbor with j <= d(u0)
    state: dict = {}
    for v in range(n):
        if heavy[v]:
            continue
        for x in adj[v]:
            add((v, x), pk * step_mass)
            state[x] = state.get(x, zero) + step_mass
    for k in range(2, ell + 1):
        nxt: dict = {}
        for x, a in state.items():
            if not heavy[x]:
                continue
            p = a / deg[x]
            for y in adj[x]:
                add((x, y), pk * p)
                nxt[y] = nxt.get(y, zero) + p
        state = nxt
    success = sum(mass.values(), zero)
    return EdgeDistribution(mass, one - success, False)


def analytic_conditional(g: Graph, cls: EdgeClassification, epsilon, exact: bool = False) -> EdgeDistribution:
    """Success-conditioned output law of the approximate sampler at accuracy epsilon."""
    return exact_attempt_distribution(g, cls, ell_of(epsilon), exact=exact).condition()


def _aligned(p: EdgeDistribution, q: EdgeDistribution):
    keys = set(p.mass) | set(q.mass)
    return [(p.mass.get(k, 0), q.mass.get(k, 0)) for k in keys]


def pointwise_distance(p: EdgeDistribution, q: EdgeDistribution):
    """max_e |p(e)/q(e) - 1| over the support of q."""
    if set(k for k, v in p.mass.items() if v != 0) - set(k for k, v in q.mass.items() if v != 0):
        raise ValueError("p has mass outside the support of q")
    worst = 0
    for a, b in _aligned(p, q):
        if b == 0:
            continue
        worst = max(worst, abs(a / b - 1))
    return worst


def tv_distance(p: EdgeDistribution, q: EdgeDistribution):
    return sum((abs(a - b) for a, b in _aligned(p, q)), 0) / 2


# -- empirical tallies and tests ----------------------------------------------

def edge_ids(g: Graph, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """Undirected edge id for each directed pair (src[i], dst[i])."""
    keys = g.slot_sources() * g.n + g.indices
    order = np.argsort(keys)
    want = np.asarray(src) * g.n + np.asarray(dst)
    pos = np.searchsorted(keys[order], want)
    slot = order[np.minimum(pos, len(order) - 1)]
    if len(want) and not np.array_equal(keys[slot], want):
        raise ValueError("sampled pair is not an edge of the graph")
    return g.slot_edge()[slot]


def empirical_distribution(sampler: str, g: Graph, count: int, seed, epsilon: float | None = None,
                           delta: float | None = None) -> np.ndarray:
    """Tally ``count`` samples per undirected edge id (edge order of ``g.edges``).

    ``sampler`` is ``"approx"`` (needs ``epsilon``) or ``"exact"``.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    oracle = QueryOracle(g, seed=seed)
    if sampler == "approx":
        if epsilon is None:
            raise ValueError("the approximate sampler needs epsilon")
        batch = sample_edges(oracle, SamplerConfig.for_oracle(oracle, epsilon), count)
    elif sampler == "exact":
        batch = ExactSampler(oracle, g, delta).sample_batch(count)
    else:
        raise ValueError(f"unknown sampler {sampler!r}")
    return np.bincount(edge_ids(g, batch.src, batch.dst), minlength=g.m)


def chi_square_quantile(df: int, alpha: float) -> float:
    """Upper-alpha quantile of chi-square(df).

    Closed forms for df = 1, 2; Wilson-Hilferty above that.
    """
    if df < 1:
        raise ValueError("df must be >= 1")
    if df == 1:
        return NormalDist().inv_cdf(1.0 - alpha / 2) ** 2
    if df == 2:
        return -2.0 * math.log(alpha)
    z = NormalDist().inv_cdf(1.0 - alpha)
    c = 2.0 / (9.0 * df)
    return df * (1.0 - c + z * math.sqrt(c)) ** 3


@dataclass(frozen=True)
class ChiSquareResult:
    statistic: float
    df: int
    critical: float
    alpha: float

    @property
    def reject(self) -> bool:
        return self.statistic > self.critical


def chi_square_gof(counts, probs, alpha: float = 0.001) -> ChiSquareResult:
    counts = np.asarray(counts, dtype=float)
    probs = np.asarray(probs, dtype=float)
    if counts.shape != probs.shape:
        raise ValueError("counts and probabilities differ in length")
    keep = probs > 0
    if np.any(counts[~keep] > 0):
        return ChiSquareResult(math.inf, int(keep.sum()) - 1, 0.0, alpha)
    expected = counts.sum() * probs[keep] / probs[keep].sum()
    stat = float(((counts[keep] - expected) ** 2 / expected).sum())
    df = int(keep.sum()) - 1
    return ChiSquareResult(stat, df, chi_square_quantile(df, alpha), alpha)


def chi_square_uniform(counts, alpha: float = 0.001) -> ChiSquareResult:
    counts = np.asarray(counts)
    m = len(counts)
    if m < 2:
        raise ValueError("need at least two cells")
    if counts.sum() < 10 * m:
        raise ValueError(f"total count {counts.sum()} below 10 per cell")
    return chi_square_gof(counts, np.full(m, 1.0 / m), alpha)


def binomial_upper_tail(k: int, n: int, p: float) -> float:
    """P[Binomial(n, p) >= k]."""
    return sum(math.comb(n, i) * p ** i * (1 - p) ** (n - i) for i in range(max(k, 0), n + 1))


def geometric_mean_check(samples, p_success: float, sigmas: float = 3.0) -> tuple[bool, float, float]:
    """Is the sample mean of geometric attempt counts within ``sigmas`` standard errors of 1/p?"""
    samples = np.asarray(samples, dtype=float)
    mean = samples.mean()
    expected = 1.0 / p_success
    se = math.sqrt(1.0 - p_success) / p_success / math.sqrt(len(samples))
    return abs(mean - expected) <= sigmas * se, mean, se
