"""Random-edge queries emulated on top of the standard model, and a coupling testbed.

An :class:`ExtendedOracle` adds ``random_edge()`` to a :class:`QueryOracle`.
:func:`coupled_run` measures how much replacing exactly uniform edges by the
approximate sampler's edges can change a downstream algorithm: it draws
edge pairs (X, Y) from the maximal coupling of the approximate law D and the
uniform law U, for which P[X != Y] = TV(D, U).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .analysis import EdgeDistribution, analytic_conditional, tv_distance, uniform_distribution
from .approx import SamplerConfig, sample_edge
from .exact import ExactSampler
from .graph import Graph, classify
from .oracle import QueryOracle, spawn_seeds


class AccessError(PermissionError):
    """The requested edge source needs full graph access."""


class ExtendedOracle:
    """A standard-model oracle plus a ``random_edge`` query.

    ``source`` is ``("true_uniform",)``, ``("approx", epsilon)`` or
    ``("exact", delta)``; ``delta`` may be None for the default.
    """

    def __init__(self, base: QueryOracle, source, graph: Graph | None = None, full_access: bool = False):
        kind, *params = source if isinstance(source, (tuple, list)) else (source,)
        self.base = base
        self.kind = kind
        self.random_edge_count = 0
        if kind == "true_uniform":
            if not full_access or graph is None:
                raise AccessError("true_uniform edges read the whole graph; pass graph and full_access=True")
            self._edges = graph.edges
        elif kind == "approx":
            (eps,) = params
            self._cfg = SamplerConfig.for_oracle(base, eps)
        elif kind == "exact":
            if graph is None:
                raise AccessError("the exact source needs the graph for its correction branch")
            delta = params[0] if params else None
            self._exact = ExactSampler(base, graph, delta)
        else:
            raise ValueError(f"unknown edge source {kind!r}")

    def random_edge(self) -> tuple[int, int]:
        self.random_edge_count += 1
        if self.kind == "true_uniform":
            u, v = self._edges[self.base.rng.randrange(len(self._edges))]
            return int(u), int(v)
        if self.kind == "approx":
            return sample_edge(self.base, self._cfg).edge
        return self._exact.sample().edge

    # pass-through standard queries
    def random_vertex(self) -> int:
        return self.base.random_vertex()

    def degree(self, v: int) -> int:
        return self.base.degree(v)

    def neighbor(self, v: int, j: int):
        return self.base.neighbor(v, j)

    def pair(self, u: int, v: int) -> bool:
        return self.base.pair(u, v)

    @property
    def counts(self):
        return self.base.counts


def make_extended(base: QueryOracle, source, graph: Graph | None = None, full_access: bool = False) -> ExtendedOracle:
    return ExtendedOracle(base, source, graph, full_access)


# -- maximal coupling ----------------------------------------------------------

class MaximalCoupling:
    """Maximal coupling of two laws on indices 0..K-1."""

    def __init__(self, p, q):
        self.p = np.asarray(p, dtype=float)
        self.q = np.asarray(q, dtype=float)
        if self.p.shape != self.q.shape:
            raise ValueError("laws must share a support")
        self.overlap = np.minimum(self.p, self.q)
        self.omega = float(self.overlap.sum())
        self.res_p = self.p - self.overlap
        self.res_q = self.q - self.overlap

    @property
    def disagreement(self) -> float:
        return 1.0 - self.omega

    def table(self) -> np.ndarray:
        """Joint law J with J[i, j] = P[X = i, Y = j]."""
        J = np.diag(self.overlap)
        if self.disagreement > 0:
            J = J + np.outer(self.res_p, self.res_q) / self.disagreement
        return J

    def sample(self, rng: np.random.Generator, size: int) -> tuple[np.ndarray, np.ndarray]:
        K = len(self.p)
        same = rng.random(size) < self.omega
        x = np.empty(size, dtype=np.int64)
        y = np.empty(size, dtype=np.int64)
        ns = int(same.sum())
        if ns:
            x[same] = y[same] = _draw(rng, self.overlap, ns)
        nd = size - ns
        if nd:
            x[~same] = _draw(rng, self.res_p, nd)
            y[~same] = _draw(rng, self.res_q, nd)
        return x, y


def _draw(rng: np.random.Generator, weights: np.ndarray, size: int) -> np.ndarray:
    cum = np.cumsum(weights)
    idx = np.searchsorted(cum, rng.random(size) * cum[-1], side="right")
    return np.minimum(idx, len(cum) - 1)


@dataclass
class CouplingReport:
    k: int
    trials: int
    tv_analytic: float
    table_disagreement: float
    per_query_disagreement: float
    stream_difference: float
    accept_rate_approx: float
    accept_rate_uniform: float

    @property
    def downstream_divergence(self) -> float:
        return abs(self.accept_rate_approx - self.accept_rate_uniform)

    def as_dict(self) -> dict:
        d = dict(self.__dict__)
        d["downstream_divergence"] = self.downstream_divergence
        return d


def endpoint_degree_sum(g: Graph):
    """Demo downstream algorithm: mean of d(u) + d(v) over the sampled edges.

    Returns ``(algorithm, accept)`` where ``accept`` tests whether an estimate
    lies within 10% of the true mean sum(d^2) / m.
    """
    deg = g.degree
    truth = float((deg.astype(float) ** 2).sum() / g.m)

    def algorithm(edges: np.ndarray, rng: np.random.Generator) -> float:
        return float((deg[edges[:, 0]] + deg[edges[:, 1]]).mean())

    def accept(out: float) -> bool:
        return abs(out - truth) <= 0.1 * truth

    return algorithm, accept


def coupled_run(algorithm: Callable, g: Graph, epsilon, k: int, trials: int, seed=None,
                accept: Callable | None = None, law: EdgeDistribution | None = None) -> CouplingReport:
    """Run ``algorithm`` on coupled approximate / uniform edge streams.

    ``algorithm(edges, rng)`` receives a (k, 2) array of undirected edges and an
    auxiliary generator seeded identically for both streams of a trial.
    ``accept(output)`` decides membership in the target output set; by default
    the output itself is treated as truthy.
    """
    if accept is None:
        accept = bool
    if law is None:
        law = analytic_conditional(g, classify(g, g.m), epsilon).undirected()
    keys = [tuple(e) for e in g.edges.tolist()]
    D = law.as_array(keys)
    U = uniform_distribution(keys).as_array(keys)
    coupling = MaximalCoupling(D, U)
    tv = float(tv_distance(EdgeDistribution(dict(zip(keys, D)), 0.0, True),
                           EdgeDistribution(dict(zip(keys, U)), 0.0, True)))
    J = coupling.table()
    table_dis = float(J.sum() - np.trace(J))

    draw_ss, *aux_ss = spawn_seeds(seed, trials + 1)
    rng = np.random.default_rng(draw_ss)
    X, Y = coupling.sample(rng, k * trials)
    X, Y = X.reshape(trials, k), Y.reshape(trials, k)
    edges = g.edges
    acc_x = acc_y = 0
    for t in range(trials):
        out_x = algorithm(edges[X[t]], np.random.default_rng(aux_ss[t]))
        out_y = algorithm(edges[Y[t]], np.random.default_rng(aux_ss[t]))
        acc_x += bool(accept(out_x))
        acc_y += bool(accept(out_y))
    differ = X != Y
    return CouplingReport(
        k=k,
        trials=trials,
        tv_analytic=tv,
        table_disagreement=table_dis,
        per_query_disagreement=float(differ.mean()),
        stream_difference=float(differ.any(axis=1).mean()),
        accept_rate_approx=acc_x / trials,
        accept_rate_uniform=acc_y / trials,
    )


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / n)
