"""Exactly uniform edge sampling by mixing in a correction distribution.

With probability 1 - delta the approximate sampler runs at accuracy delta.
With probability delta an edge is drawn from the correction distribution r,
chosen so that the mixture hits 1/(2m) on every directed edge:

    q(e) = (1 - h[v][ell-1]) / S,     S = sum over directed (u, x) of (1 - h[u][ell-1])
    r(e) = (1/(2m) - (1 - delta) q(e)) / delta

q is the success-conditioned output law of the approximate sampler.  Building
r needs the whole graph (O(m ell) time), so it happens only the first time
the delta branch fires.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .approx import EdgeSample, SampleBatch, SamplerConfig, SamplerError, ell_of, sample_edge, sample_edges
from .graph import Graph, classify
from .htable import HTable, compute_h, edge_weights
from .oracle import QueryOracle


class CorrectionError(ValueError):
    """The correction weights are not a valid distribution."""


@dataclass(frozen=True, eq=False)
class CorrectionDistribution:
    delta: object
    q: np.ndarray        # per directed-edge slot
    weights: np.ndarray  # r, per directed-edge slot
    cumulative: np.ndarray
    sources: np.ndarray
    targets: np.ndarray

    def sample_slot(self, u: float) -> int:
        return int(np.searchsorted(self.cumulative, u * self.cumulative[-1], side="right"))

    def sample_slots(self, rng: np.random.Generator, size: int) -> np.ndarray:
        u = rng.random(size) * self.cumulative[-1]
        return np.minimum(np.searchsorted(self.cumulative, u, side="right"), len(self.cumulative) - 1)

    def write_csv(self, fh) -> None:
        import csv
        w = csv.writer(fh)
        w.writerow(["v", "w", "q", "r"])
        for v, x, q, r in zip(self.sources.tolist(), self.targets.tolist(), self.q, self.weights):
            w.writerow([v, x, repr(float(q)), repr(float(r))])


def build_correction(g: Graph, ht: HTable, delta, check: bool = True) -> CorrectionDistribution:
    """r(e) for every directed edge.

    ``ht`` must have ``ell = ell_of(delta)``; with an exact table and a
    Fraction delta the weights are exact rationals.
    """
    if g.m == 0:
        raise CorrectionError("graph has no edges")
    if ht.ell != ell_of(delta):
        raise ValueError(f"h-table has ell={ht.ell}, delta needs ell={ell_of(delta)}")
    total = 2 * g.m
    wts = edge_weights(g, ht)
    if ht.exact:
        delta = Fraction(delta)
        S = sum(wts, Fraction(0))
        q = np.array([x / S for x in wts], dtype=object)
        r = np.array([(Fraction(1, total) - (1 - delta) * x) / delta for x in q], dtype=object)
        cum = np.cumsum(np.array([float(x) for x in r]))
    else:
        delta = float(delta)
        S = wts.sum()
        q = wts / S
        # same value as (1/total - (1 - delta) q) / delta, without cancelling O(1) terms
        hs = ht.level(ht.ell - 1)[g.slot_sources()]
        r = q + (hs - hs.mean()) / (S * delta)
        # rounding can push exact zeros to about -1e-16
        r = np.where((r < 0) & (r > -1e-9), 0.0, r)
        cum = np.cumsum(r)
    if check:
        low = min(r)
        if low < 0:
            raise CorrectionError(f"negative correction weight {float(low)}; delta too small for this h-table")
        if abs(float(sum(r)) - 1.0) > 1e-9:
            raise CorrectionError(f"correction weights sum to {float(sum(r))}")
    for a in (q, r, cum):
        a.setflags(write=False)
    return CorrectionDistribution(delta, q, r, cum, g.slot_sources(), g.indices)


def default_delta(n: int) -> float:
    return min(0.5, float(n) ** -3) if n > 0 else 0.5


class ExactSampler:
    """Uniform edge sampler over ``oracle``.

    ``graph`` is consulted only on the rare correction branch.  The
    oracle's ``m_est`` must equal the true edge count.
    """

    def __init__(self, oracle: QueryOracle, graph: Graph, delta: float | None = None,
                 max_attempts: int | None = None):
        if oracle.m_est != graph.m:
            raise ValueError(f"exact sampling needs m_est == m ({oracle.m_est} != {graph.m})")
        if graph.m == 0:
            raise SamplerError("cannot sample an edge from an empty graph")
        self.oracle = oracle
        self.graph = graph
        self.delta = default_delta(graph.n) if delta is None else delta
        self.cfg = SamplerConfig.for_oracle(oracle, self.delta, max_attempts)
        self.correction_draws = 0
        self.builds = 0
        self._correction = None
        self._lock = threading.Lock()

    @property
    def correction(self) -> CorrectionDistribution:
        if self._correction is None:
            with self._lock:
                if self._correction is None:
                    cls = classify(self.graph, self.graph.m)
                    ht = compute_h(self.graph, cls, self.cfg.ell)
                    self._correction = build_correction(self.graph, ht, self.delta)
                    self.builds += 1
        return self._correction

    def sample(self) -> EdgeSample:
        if self.oracle.rng.random() >= self.delta:
            return sample_edge(self.oracle, self.cfg)
        self.correction_draws += 1
        c = self.correction
        slot = c.sample_slot(self.oracle.rng.random())
        v, w = int(c.sources[slot]), int(c.targets[slot])
        return EdgeSample((min(v, w), max(v, w)), (v, w), 0, 0, "correction")

    def sample_batch(self, count: int) -> SampleBatch:
        rng = self.oracle.np_rng
        corrected = rng.random(count) < self.delta
        n_corr = int(corrected.sum())
        approx = sample_edges(self.oracle, self.cfg, count - n_corr)
        src = np.empty(count, dtype=np.int64)
        dst = np.empty(count, dtype=np.int64)
        attempts = np.zeros(count, dtype=np.int64)
        queries = np.zeros(count, dtype=np.int64)
        keep = ~corrected
        src[keep], dst[keep] = approx.src, approx.dst
        attempts[keep], queries[keep] = approx.attempts, approx.queries
        if n_corr:
            self.correction_draws += n_corr
            c = self.correction
            slots = c.sample_slots(rng, n_corr)
            src[corrected], dst[corrected] = c.sources[slots], c.targets[slots]
        return SampleBatch(src, dst, attempts, queries, corrected)


def sample_exactly(oracle: QueryOracle, g: Graph, delta: float | None = None) -> EdgeSample:
    """One exactly uniform edge; see :class:`ExactSampler` for repeated use."""
    return ExactSampler(oracle, g, delta).sample()


def mixture_marginal(q, r, delta):
    """(1 - delta) q + delta r, elementwise."""
    return np.array([(1 - delta) * a + delta * b for a, b in zip(q, r)], dtype=object if isinstance(delta, Fraction) else float)
