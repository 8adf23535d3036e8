"""Query-counting access to a graph in the standard sublinear model.

A :class:`QueryOracle` is the only thing the samplers see.  It answers uniform
random vertex, degree, j-th neighbor and pair queries and tallies every one.
Batch variants answer many queries of one kind at once and are tallied
per element, so counts are identical to issuing them one by one.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, fields

import numpy as np

from .graph import Graph, theta_of


class QueryError(ValueError):
    """A query referred to a vertex that does not exist."""


def seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        return seed
    return np.random.SeedSequence(seed)


def spawn_seeds(seed, count: int) -> list[np.random.SeedSequence]:
    """Independent child streams of a master seed."""
    return seed_sequence(seed).spawn(count)


@dataclass
class QueryCounts:
    random_vertex: int = 0
    degree: int = 0
    neighbor: int = 0
    pair: int = 0

    @property
    def total(self) -> int:
        return self.random_vertex + self.degree + self.neighbor + self.pair

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


class QueryOracle:
    """Access-restricted view of ``graph``.

    ``rng`` (a :class:`random.Random`) and ``np_rng`` (a numpy Generator) are
    both derived from ``seed``; samplers draw their own coins from them so a
    fixed seed fixes the whole query transcript.
    """

    def __init__(self, graph: Graph, m_est: int | None = None, seed=None):
        self._g = graph
        self.m_est = graph.m if m_est is None else int(m_est)
        if self.m_est < 1 and graph.m > 0:
            raise ValueError("m_est must be >= 1 for a graph with edges")
        self.n = graph.n
        self.counts = QueryCounts()
        ss = seed_sequence(seed)
        py_ss, np_ss = ss.spawn(2)
        self.rng = random.Random(int(py_ss.generate_state(1, np.uint64)[0]))
        self.np_rng = np.random.default_rng(np_ss)
        self._deg_arr = graph.degree
        self._degree = self._deg_arr.tolist()
        self._adj = graph.adjacency()
        self._adj_sets = None

    @property
    def theta(self) -> int:
        return theta_of(max(self.m_est, 1))

    @property
    def total_queries(self) -> int:
        return self.counts.total

    def _check(self, v) -> int:
        if not (isinstance(v, (int, np.integer)) and 0 <= v < self.n):
            raise QueryError(f"invalid vertex id {v!r}")
        return int(v)

    # -- scalar queries -------------------------------------------------------

    def random_vertex(self) -> int:
        self.counts.random_vertex += 1
        return self.rng.randrange(self.n)

    def degree(self, v: int) -> int:
        v = self._check(v)
        self.counts.degree += 1
        return self._degree[v]

    def neighbor(self, v: int, j: int) -> int | None:
        """The j-th neighbor (1-based) of v, or None when j exceeds the degree."""
        v = self._check(v)
        if j < 1:
            raise QueryError(f"neighbor index must be >= 1, got {j}")
        self.counts.neighbor += 1
        adj = self._adj[v]
        return adj[j - 1] if j <= len(adj) else None

    def pair(self, u: int, v: int) -> bool:
        u, v = self._check(u), self._check(v)
        self.counts.pair += 1
        if self._adj_sets is None:
            self._adj_sets = [frozenset(a) for a in self._adj]
        return v in self._adj_sets[u]

    # -- batch queries --------------------------------------------------------

    def random_vertices(self, size: int) -> np.ndarray:
        self.counts.random_vertex += int(size)
        return self.np_rng.integers(0, self.n, size=size)

    def _check_batch(self, vs: np.ndarray) -> np.ndarray:
        vs = np.asarray(vs, dtype=np.int64)
        if vs.size and (vs.min() < 0 or vs.max() >= self.n):
            raise QueryError("batch contains an invalid vertex id")
        return vs

    def degrees(self, vs) -> np.ndarray:
        vs = self._check_batch(vs)
        self.counts.degree += vs.size
        return self._deg_arr[vs]

    def neighbors(self, vs, js) -> np.ndarray:
        """Batch j-th neighbor (1-based); -1 marks an absent neighbor."""
        vs = self._check_batch(vs)
        js = np.asarray(js, dtype=np.int64)
        if js.size and js.min() < 1:
            raise QueryError("neighbor indices must be >= 1")
        self.counts.neighbor += vs.size
        start = self._g.indptr[vs]
        deg = self._deg_arr[vs]
        present = js <= deg
        out = np.full(vs.shape, -1, dtype=np.int64)
        out[present] = self._g.indices[start[present] + js[present] - 1]
        return out
