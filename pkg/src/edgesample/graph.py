"""Simple undirected graphs, edge-list I/O, generators and light/heavy classification.

Adjacency is stored in CSR form.  The position of a neighbor inside a vertex's
slice is its (0-based) neighbor index, so CSR slot ``indptr[v] + j - 1`` is the
directed edge ``(v, j-th neighbor of v)``.  Slot ids are used throughout the
package as directed-edge ids.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np


class GraphFormatError(ValueError):
    """Malformed edge-list file."""


class GraphValidationError(ValueError):
    """Edge list violates the simple-graph contract."""


@dataclass(frozen=True, eq=False)
class Graph:
    n: int
    indptr: np.ndarray
    indices: np.ndarray
    edges: np.ndarray  # (m, 2), u < v, in load order
    _slot_edge: np.ndarray = field(repr=False)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Sequence[int]]) -> "Graph":
        """Build a graph; neighbor order follows the order edges are given."""
        n = int(n)
        if n < 0:
            raise GraphValidationError("vertex count must be nonnegative")
        pairs = []
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphValidationError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphValidationError(f"edge ({u}, {v}) has a vertex id outside [0, {n})")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise GraphValidationError(f"duplicate edge {key}")
            seen.add(key)
            pairs.append(key)
        m = len(pairs)
        arr = np.asarray(pairs, dtype=np.int64).reshape(m, 2)

        # interleave both directions in edge order, then stable-sort by source
        src = np.empty(2 * m, dtype=np.int64)
        dst = np.empty(2 * m, dtype=np.int64)
        src[0::2], dst[0::2] = arr[:, 0], arr[:, 1]
        src[1::2], dst[1::2] = arr[:, 1], arr[:, 0]
        eid = np.repeat(np.arange(m, dtype=np.int64), 2)
        order = np.argsort(src, kind="stable")
        indices = dst[order]
        slot_edge = eid[order]
        degree = np.bincount(src, minlength=n)
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(degree, out=indptr[1:])
        for a in (indptr, indices, arr, slot_edge):
            a.setflags(write=False)
        return cls(n, indptr, indices, arr, slot_edge)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def degree(self) -> np.ndarray:
        return np.diff(self.indptr)

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def adjacency(self) -> list[list[int]]:
        return [self.neighbors(v).tolist() for v in range(self.n)]

    def slot_sources(self) -> np.ndarray:
        """Source vertex of every directed-edge slot."""
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degree)

    def slot_edge(self) -> np.ndarray:
        """Undirected edge id of every directed-edge slot."""
        return self._slot_edge

    def directed_edges(self) -> list[tuple[int, int]]:
        return list(zip(self.slot_sources().tolist(), self.indices.tolist()))

    def slot_of(self, v: int, w: int) -> int:
        nb = self.neighbors(v)
        hit = np.flatnonzero(nb == w)
        if len(hit) == 0:
            raise KeyError((v, w))
        return int(self.indptr[v] + hit[0])

    def edge_id(self, u: int, v: int) -> int:
        return int(self._slot_edge[self.slot_of(u, v)])

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


# -- file I/O -----------------------------------------------------------------

def parse_edge_list(text: str) -> Graph:
    header = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            a, b = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: expected two integers, got {raw!r}") from None
        if header is None:
            if a < 0 or b < 0:
                raise GraphFormatError(f"line {lineno}: negative header values")
            header = (a, b)
        else:
            edges.append((a, b))
    if header is None:
        raise GraphFormatError("missing 'n m' header line")
    n, m = header
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but {len(edges)} were listed")
    return Graph.from_edges(n, edges)


def load_graph(path: str | os.PathLike) -> Graph:
    with open(path) as fh:
        return parse_edge_list(fh.read())


def format_edge_list(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges.tolist())
    return "\n".join(lines) + "\n"


def save_graph(g: Graph, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        fh.write(format_edge_list(g))


# -- generators ---------------------------------------------------------------

def _from_nx(h: nx.Graph) -> Graph:
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), h.edges())


def star(leaves: int) -> Graph:
    if leaves < 1:
        raise ValueError("star needs at least one leaf")
    return _from_nx(nx.star_graph(leaves))


def double_star(leaves_per_hub: int) -> Graph:
    """Two adjacent hubs 0 and 1, each with its own pendant leaves."""
    if leaves_per_hub < 0:
        raise ValueError("leaves_per_hub must be nonnegative")
    L = leaves_per_hub
    edges = [(0, 1)]
    edges += [(0, 2 + i) for i in range(L)]
    edges += [(1, 2 + L + i) for i in range(L)]
    return Graph.from_edges(2 + 2 * L, edges)


def lollipop(clique_size: int, path_len: int) -> Graph:
    if clique_size < 2 or path_len < 0:
        raise ValueError("lollipop needs clique_size >= 2 and path_len >= 0")
    return _from_nx(nx.lollipop_graph(clique_size, path_len))


def complete_bipartite(a: int, b: int) -> Graph:
    if a < 1 or b < 1:
        raise ValueError("both sides of a complete bipartite graph must be nonempty")
    return _from_nx(nx.complete_bipartite_graph(a, b))


def gnp(n: int, p: float, seed: int | None = None) -> Graph:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"edge probability {p} outside [0, 1]")
    if n < 0:
        raise ValueError("n must be nonnegative")
    if p < 0.05:
        h = nx.fast_gnp_random_graph(n, p, seed=seed)
    else:
        h = nx.gnp_random_graph(n, p, seed=seed)
    return Graph.from_edges(n, h.edges())


GENERATORS = {
    "star": (star, ("leaves",)),
    "double_star": (double_star, ("leaves_per_hub",)),
    "lollipop": (lollipop, ("clique_size", "path_len")),
    "gnp": (gnp, ("n", "p")),
    "complete_bipartite": (complete_bipartite, ("a", "b")),
}


def generate(name: str, *args, seed: int | None = None, **params) -> Graph:
    """Generate a graph by family name, e.g. ``generate("gnp", 100, 0.1, seed=7)``."""
    try:
        fn, names = GENERATORS[name]
    except KeyError:
        raise ValueError(f"unknown generator {name!r}; choose from {sorted(GENERATORS)}") from None
    kwargs = dict(zip(names, args))
    kwargs.update(params)
    unknown = set(kwargs) - set(names)
    if unknown:
        raise ValueError(f"{name} does not take parameters {sorted(unknown)}")
    missing = set(names) - set(kwargs)
    if missing:
        raise ValueError(f"{name} is missing parameters {sorted(missing)}")
    if name == "gnp":
        kwargs["seed"] = seed
    return fn(**kwargs)


def parse_generator_spec(text: str) -> tuple[str, dict]:
    """Parse ``"gnp:n=100,p=0.1"`` into ``("gnp", {"n": 100, "p": 0.1})``."""
    name, _, rest = text.partition(":")
    params = {}
    for item in filter(None, rest.split(",")):
        key, eq, value = item.partition("=")
        if not eq:
            raise ValueError(f"bad generator parameter {item!r}; expected key=value")
        value = value.strip()
        try:
            params[key.strip()] = int(value)
        except ValueError:
            params[key.strip()] = float(value)
    return name.strip(), params


# -- classification -----------------------------------------------------------

def theta_of(m_est: int) -> int:
    """Degree threshold ceil(sqrt(2 m_est)), computed in integer arithmetic."""
    r = math.isqrt(2 * m_est)
    return r if r * r == 2 * m_est else r + 1


@dataclass(frozen=True, eq=False)
class EdgeClassification:
    theta: int
    is_heavy: np.ndarray
    d_heavy: np.ndarray
    heavy_neighbors: list

    @property
    def heavy_vertices(self) -> np.ndarray:
        return np.flatnonzero(self.is_heavy)


def classify(g: Graph, m_est: int | None = None) -> EdgeClassification:
    if m_est is None:
        m_est = g.m
    if m_est < 1:
        if g.m > 0:
            raise ValueError("m_est must be >= 1 for a graph with edges")
        m_est = 1
    theta = theta_of(int(m_est))
    is_heavy = g.degree > theta
    nb_heavy = is_heavy[g.indices]
    d_heavy = np.bincount(g.slot_sources(), weights=nb_heavy, minlength=g.n).astype(np.int64)
    heavy_neighbors = [g.neighbors(v)[nb_heavy[g.indptr[v]:g.indptr[v + 1]]].tolist()
                       for v in range(g.n)]
    is_heavy.setflags(write=False)
    d_heavy.setflags(write=False)
    return EdgeClassification(theta, is_heavy, d_heavy, heavy_neighbors)
