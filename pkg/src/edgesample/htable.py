"""Heavy-walk survival probabilities h[v][i].

h[v][i] is the probability that an i-step uniform random walk started at v
visits only heavy vertices (light v: always 0).  It is computed level by level:

    h[v][1] = d_H(v) / d(v)
    h[v][i] = h[v][1] * sum_{w in N_H(v)} h[w][i-1] / d_H(v)

A single sampling attempt with walk-length cap ell returns the directed edge
(v, w) with probability (1 - h[v][ell-1]) / (ell * n * theta); see
:func:`attempt_probabilities`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .graph import EdgeClassification, Graph


class EnumerationLimitError(RuntimeError):
    """Brute-force enumeration would exceed its resource guard."""


@dataclass(frozen=True, eq=False)
class HTable:
    ell: int
    h: np.ndarray  # shape (n, ell + 1); column 0 is identically 0, column i is level i
    exact: bool = False

    def level(self, i: int) -> np.ndarray:
        if not 0 <= i <= self.ell:
            raise IndexError(f"level {i} outside 0..{self.ell}")
        return self.h[:, i]

    def __getitem__(self, key):
        v, i = key
        return self.level(i)[v]


def compute_h(g: Graph, cls: EdgeClassification, ell: int, exact: bool = False) -> HTable:
    """Fill the table for levels 1..ell in O(m * ell) time.

    With ``exact=True`` the entries are :class:`fractions.Fraction`.
    Level 0 is stored as zeros for convenience.
    """
    if ell < 1:
        raise ValueError("ell must be >= 1")
    deg = g.degree
    dH = cls.d_heavy
    heavy = cls.is_heavy
    if exact:
        h = np.full((g.n, ell + 1), Fraction(0), dtype=object)
        for v in np.flatnonzero(heavy):
            h[v, 1] = Fraction(int(dH[v]), int(deg[v]))
        for i in range(2, ell + 1):
            for v in np.flatnonzero(heavy):
                if dH[v] == 0:
                    continue
                s = sum((h[w, i - 1] for w in cls.heavy_neighbors[v]), Fraction(0))
                h[v, i] = h[v, 1] * s / int(dH[v])
        return HTable(ell, h, exact=True)

    h = np.zeros((g.n, ell + 1))
    safe_deg = np.maximum(deg, 1)
    h[:, 1] = np.where(heavy, dH / safe_deg, 0.0)
    src = g.slot_sources()
    nb_heavy = heavy[g.indices]
    has_dH = heavy & (dH > 0)
    safe_dH = np.maximum(dH, 1)
    for i in range(2, ell + 1):
        contrib = np.where(nb_heavy, h[g.indices, i - 1], 0.0)
        s = np.bincount(src, weights=contrib, minlength=g.n)
        h[:, i] = np.where(has_dH, h[:, 1] * s / safe_dH, 0.0)
    h.setflags(write=False)
    return HTable(ell, h)


def h_walk_oracle(g: Graph, cls: EdgeClassification, v: int, i: int,
                  exact: bool = False, max_paths: int = 1_000_000):
    """Probability that an i-step walk from v stays on heavy vertices.

    Enumerates neighbor sequences explicitly by depth-first search.  A prefix
    that reaches a light vertex contributes nothing, so only all-heavy prefixes
    are expanded; ``max_paths`` bounds the number of expanded prefixes.
    """
    if i < 0:
        raise ValueError("level must be >= 0")
    if not cls.is_heavy[v]:
        return Fraction(0) if exact else 0.0
    deg = g.degree.tolist()
    heavy = cls.is_heavy
    one = Fraction(1) if exact else 1.0
    total = Fraction(0) if exact else 0.0
    expanded = 0
    stack = [(int(v), 0, one)]
    while stack:
        x, steps, prob = stack.pop()
        if steps == i:
            total += prob
            continue
        expanded += 1
        if expanded > max_paths:
            raise EnumerationLimitError(f"more than {max_paths} heavy walk prefixes from {v}")
        step = prob / deg[x]
        for w in g.neighbors(x).tolist():
            if heavy[w]:
                stack.append((w, steps + 1, step))
    return total


def bound_violations(ht: HTable, cls: EdgeClassification, slack: float = 1e-12) -> list[tuple[int, int, float]]:
    """(v, i, h) triples breaking h[v][i] <= 2^-i or, at level 1, h[v][1] <= 1/2.

    The level-1 bound holds whenever heavy vertices are few enough; it is not
    guaranteed for every graph, so this reports rather than raises.
    """
    out = []
    for i in range(1, ht.ell + 1):
        col = ht.level(i)
        limit = 2.0 ** -i
        for v in np.flatnonzero(cls.is_heavy):
            val = col[v]
            if float(val) > limit + slack:
                out.append((int(v), i, float(val)))
    return out


def attempt_probabilities(g: Graph, cls: EdgeClassification, ht: HTable, level: int | None = None):
    """Single-attempt probability of each directed edge, indexed by CSR slot.

    ``level`` selects which h column discounts heavy edges; the default
    ``ell - 1`` is the one a walk-length cap of ``ell`` actually produces.
    Returns floats, or Fractions when the table is exact.
    """
    ell = ht.ell
    if level is None:
        level = ell - 1
    denom = ell * g.n * cls.theta
    col = ht.level(level)[g.slot_sources()]
    if ht.exact:
        return np.array([(1 - x) / denom for x in col], dtype=object)
    return (1.0 - col) / denom


def edge_weights(g: Graph, ht: HTable, level: int | None = None):
    """Unnormalized per-slot weights 1 - h[source][level] (default ell - 1)."""
    if level is None:
        level = ht.ell - 1
    col = ht.level(level)[g.slot_sources()]
    if ht.exact:
        return np.array([1 - x for x in col], dtype=object)
    return 1.0 - col


def write_csv(ht: HTable, fh) -> None:
    import csv
    w = csv.writer(fh)
    w.writerow(["vertex", "level", "value"])
    for v in range(ht.h.shape[0]):
        for i in range(1, ht.ell + 1):
            w.writerow([v, i, repr(float(ht.h[v, i]))])
