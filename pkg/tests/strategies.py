from hypothesis import strategies as st

from edgesample.graph import Graph


@st.composite
def hub_graphs(draw, max_hubs=4, max_leaves=9):
    """Hubs with pendant leaves, random hub-hub edges and a few leaf-leaf edges.

    Random sparse graphs almost never have heavy vertices; this shape does.
    """
    hubs = draw(st.integers(1, max_hubs))
    per_hub = draw(st.lists(st.integers(0, max_leaves), min_size=hubs, max_size=hubs))
    edges = set()
    for a in range(hubs):
        for b in range(a + 1, hubs):
            if draw(st.booleans()):
                edges.add((a, b))
    nxt = hubs
    leaves = []
    for h, cnt in enumerate(per_hub):
        for _ in range(cnt):
            edges.add((h, nxt))
            leaves.append(nxt)
            nxt += 1
    if len(leaves) >= 2:
        extra = draw(st.lists(st.tuples(st.sampled_from(leaves), st.sampled_from(leaves)), max_size=4))
        for u, v in extra:
            if u != v:
                edges.add((min(u, v), max(u, v)))
    if not edges:
        edges.add((0, 1))
        nxt = max(nxt, 2)
    return Graph.from_edges(nxt, sorted(edges))
