from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings

from edgesample.graph import classify, double_star, star
from edgesample.htable import (EnumerationLimitError, attempt_probabilities, bound_violations, compute_h,
                               h_walk_oracle)
from edgesample.panel import hub_core
from strategies import hub_graphs


def test_star_all_zero(star4):
    c = classify(star4)
    ht = compute_h(star4, c, 2)
    assert ht[0, 1] == 0
    assert not ht.h.any()


def test_double_star_values(dstar6):
    c = classify(dstar6)
    ht = compute_h(dstar6, c, 2, exact=True)
    for hub in (0, 1):
        assert ht[hub, 1] == F(1, 7)
        assert ht[hub, 2] == F(1, 49)
    assert all(ht[v, i] == 0 for v in range(2, 14) for i in (1, 2))
    fl = compute_h(dstar6, c, 2)
    assert fl[0, 2] == pytest.approx(1 / 49, abs=1e-15)


def test_walk_oracle_examples(dstar6, star4):
    c = classify(dstar6)
    assert h_walk_oracle(dstar6, c, 0, 1, exact=True) == F(1, 7)
    assert h_walk_oracle(dstar6, c, 0, 2, exact=True) == F(1, 49)
    assert h_walk_oracle(star4, classify(star4), 0, 1) == 0


def test_heavy_without_heavy_neighbors_is_zero():
    g = star(10)
    c = classify(g)
    assert c.is_heavy[0] and c.d_heavy[0] == 0
    assert not compute_h(g, c, 5).h.any()


def test_hub_core_hand_values():
    # K4 core, 6 leaves per hub: degree 9, three heavy neighbors
    g = hub_core(4, 6)
    c = classify(g)
    assert c.theta == 8 and c.is_heavy[:4].all()
    ht = compute_h(g, c, 4, exact=True)
    for i in range(1, 5):
        assert ht[0, i] == F(1, 3) ** i


def test_oracle_equivalence_on_panel(panel_graphs):
    for name, g in panel_graphs:
        c = classify(g)
        ht = compute_h(g, c, 6)
        exact = compute_h(g, c, 6, exact=True) if g.n <= 50 else None
        for v in c.heavy_vertices:
            for i in range(1, 7):
                w = h_walk_oracle(g, c, v, i, exact=exact is not None)
                if exact is not None:
                    assert exact[v, i] == w, (name, v, i)
                assert abs(ht[v, i] - float(w)) <= 1e-12, (name, v, i)


def test_bounds_on_panel(panel_graphs):
    for name, g in panel_graphs:
        c = classify(g)
        ht = compute_h(g, c, 12)
        assert bound_violations(ht, c) == [], name
        heavy = c.is_heavy
        assert np.all(ht.level(1)[heavy] <= 0.5)
        assert not ht.h[~heavy].any()
        for i in range(1, 13):
            assert ht.level(i).max() <= 2.0 ** -i + 1e-12


@given(hub_graphs())
@settings(max_examples=80, deadline=None)
def test_recursion_matches_walk_enumeration(g):
    c = classify(g)
    ht = compute_h(g, c, 5, exact=True)
    for v in range(g.n):
        for i in range(1, 6):
            assert ht[v, i] == h_walk_oracle(g, c, v, i, exact=True)


def test_level_one_bound_can_fail():
    # 10-clique of hubs with 8 leaves each: degree 17 > theta = 16 and 9 of 17 neighbors heavy
    g = hub_core(10, 8)
    c = classify(g)
    assert c.theta == 16
    ht = compute_h(g, c, 2, exact=True)
    assert ht[0, 1] == F(9, 17)
    assert (0, 1, 9 / 17) in bound_violations(ht, c)


def test_walk_oracle_guard():
    g = hub_core(4, 6)
    with pytest.raises(EnumerationLimitError):
        h_walk_oracle(g, classify(g), 0, 12, max_paths=1000)


def test_attempt_probabilities_levels(dstar6):
    c = classify(dstar6)
    ht = compute_h(dstar6, c, 2, exact=True)
    p = attempt_probabilities(dstar6, c, ht)
    literal = attempt_probabilities(dstar6, c, ht, level=2)
    slot = dstar6.slot_of(0, 1)
    assert p[slot] == F(1, 196)
    assert literal[slot] == F(48, 49 * 168)
    assert p[dstar6.slot_of(2, 0)] == F(1, 168)


def test_h_table_levels_rejected(dstar6):
    ht = compute_h(dstar6, classify(dstar6), 2)
    with pytest.raises(IndexError):
        ht.level(3)
    with pytest.raises(ValueError):
        compute_h(dstar6, classify(dstar6), 0)
