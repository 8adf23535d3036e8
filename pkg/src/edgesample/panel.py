"""Named small graphs used for exhaustive verification."""

from __future__ import annotations

from .graph import Graph, complete_bipartite, double_star, gnp, lollipop, star


def hub_core(core: int, leaves: int) -> Graph:
    """Clique on ``core`` hubs, each hub with ``leaves`` pendant leaves."""
    edges = [(a, b) for a in range(core) for b in range(a + 1, core)]
    nxt = core
    for hub in range(core):
        for _ in range(leaves):
            edges.append((hub, nxt))
            nxt += 1
    return Graph.from_edges(nxt, edges)


def shared_hubs(common: int, extra: bool = True) -> Graph:
    """Adjacent hubs 0 and 1 that share ``common`` neighbors, plus one edge between two of those."""
    edges = [(0, 1)]
    for v in range(2, 2 + common):
        edges += [(0, v), (1, v)]
    if extra and common >= 2:
        edges.append((2, 3))
    return Graph.from_edges(2 + common, edges)


def panel() -> list[tuple[str, Graph]]:
    return [
        ("star(9)", star(9)),
        ("star(40)", star(40)),
        ("double_star(6)", double_star(6)),
        ("double_star(24)", double_star(24)),
        ("double_star(80)", double_star(80)),
        ("lollipop(6,10)", lollipop(6, 10)),
        ("lollipop(12,60)", lollipop(12, 60)),
        ("gnp(30,0.2)", gnp(30, 0.2, seed=1)),
        ("gnp(80,0.08)", gnp(80, 0.08, seed=2)),
        ("gnp(200,0.03)", gnp(200, 0.03, seed=3)),
        ("complete_bipartite(3,20)", complete_bipartite(3, 20)),
        ("complete_bipartite(4,40)", complete_bipartite(4, 40)),
        ("hub_core(4,6)", hub_core(4, 6)),
        ("shared_hubs(24)", shared_hubs(24)),
    ]
