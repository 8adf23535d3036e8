import math
import threading
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from edgesample.analysis import chi_square_uniform, edge_ids, empirical_distribution, exact_attempt_distribution
from edgesample.approx import ell_of
from edgesample.exact import (CorrectionError, ExactSampler, build_correction, default_delta, mixture_marginal,
                              sample_exactly)
from edgesample.graph import Graph, classify, gnp
from edgesample.htable import bound_violations, compute_h
from edgesample.oracle import QueryOracle
from edgesample.panel import hub_core
from strategies import hub_graphs


def exact_correction(g, delta):
    delta = F(delta)
    ht = compute_h(g, classify(g), ell_of(delta), exact=True)
    return build_correction(g, ht, delta)


def test_star_correction_uniform(star4):
    c = exact_correction(star4, F(1, 2))
    assert set(c.weights) == {F(1, 8)}
    assert set(c.q) == {F(1, 8)}


def test_double_star_correction(dstar6):
    c = exact_correction(dstar6, F(1, 2))
    src = dstar6.slot_sources()
    hub = np.isin(src, [0, 1])
    # q proportional to 1 for leaf-sourced, 6/7 for hub-sourced; S = 12 + 14 * 6/7 = 24
    assert set(c.q[~hub]) == {F(1, 24)}
    assert set(c.q[hub]) == {F(1, 28)}
    assert set(c.weights[~hub]) == {F(11, 312)}
    assert set(c.weights[hub]) == {F(15, 364)}
    assert sum(c.weights) == 1
    marg = mixture_marginal(c.q, c.weights, F(1, 2))
    assert set(marg) == {F(1, 26)}


def test_double_star_marginal_with_enumerated_q(dstar6):
    delta = F(1, 2)
    c = exact_correction(dstar6, delta)
    q = exact_attempt_distribution(dstar6, classify(dstar6), ell_of(delta), exact=True).condition()
    qs = [q.mass[e] for e in dstar6.directed_edges()]
    assert set(mixture_marginal(qs, c.weights, delta)) == {F(1, 26)}


@given(hub_graphs(), st.sampled_from([F(1, 2), F(1, 8), F(1, 100)]))
@settings(max_examples=60, deadline=None)
def test_exactness_property(g, delta):
    cls = classify(g)
    if bound_violations(compute_h(g, cls, 1), cls):
        return
    c = exact_correction(g, delta)
    assert min(c.weights) >= 0
    assert sum(c.weights) == 1
    q = exact_attempt_distribution(g, cls, ell_of(delta), exact=True).condition()
    qs = [q.mass.get(e, 0) for e in g.directed_edges()]
    assert set(mixture_marginal(qs, c.weights, delta)) == {F(1, 2 * g.m)}


def test_float_correction_close_to_exact():
    g = hub_core(4, 6)
    delta = 1 / 64
    c = build_correction(g, compute_h(g, classify(g), ell_of(delta)), delta)
    e = exact_correction(g, F(1, 64))
    assert np.max(np.abs(c.weights - np.array([float(x) for x in e.weights]))) < 1e-12
    assert abs(c.weights.sum() - 1) <= 1e-9
    marg = (1 - delta) * c.q + delta * c.weights
    assert np.max(np.abs(marg - 1 / (2 * g.m))) <= 1e-12


def test_correction_rejects_wrong_ell(dstar6):
    ht = compute_h(dstar6, classify(dstar6), 3)
    with pytest.raises(ValueError):
        build_correction(dstar6, ht, 0.5)


def test_negative_weights_detected():
    # outside the regime of the level-one bound the default delta is too small
    g = hub_core(10, 8)
    d = default_delta(g.n)
    with pytest.raises(CorrectionError):
        build_correction(g, compute_h(g, classify(g), ell_of(d)), d)


def test_correction_rebuild_identical(dstar6):
    ht = compute_h(dstar6, classify(dstar6), 2)
    a = build_correction(dstar6, ht, 0.5)
    b = build_correction(dstar6, ht, 0.5)
    assert np.array_equal(a.weights, b.weights) and np.array_equal(a.cumulative, b.cumulative)


def test_requires_exact_m(dstar6):
    with pytest.raises(ValueError):
        ExactSampler(QueryOracle(dstar6, m_est=20), dstar6)


def test_sample_exactly_single(dstar6):
    s = sample_exactly(QueryOracle(dstar6, seed=1), dstar6, 0.5)
    assert s.edge in {tuple(e) for e in dstar6.edges.tolist()}


def test_lazy_build(dstar6):
    s = ExactSampler(QueryOracle(dstar6, seed=0), dstar6, 1e-9)
    for _ in range(200):
        s.sample()
    assert s.builds == 0 and s._correction is None
    threads = [threading.Thread(target=lambda: s.correction) for _ in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert s.builds == 1


def test_branch_statistics():
    g = gnp(10, 0.5, seed=4)
    s = ExactSampler(QueryOracle(g, seed=8), g)
    assert s.delta == pytest.approx(1e-3)
    b = s.sample_batch(10 ** 6)
    hits = int(b.corrected.sum())
    sigma = math.sqrt(1e6 * 1e-3 * (1 - 1e-3))
    assert abs(hits - 1000) <= 3 * sigma
    assert s.correction_draws == hits
    assert np.all(b.attempts[b.corrected] == 0)
    assert np.all(b.attempts[~b.corrected] >= 1)


def test_scalar_exact_uniform(dstar6):
    s = ExactSampler(QueryOracle(dstar6, seed=5), dstar6, 0.5)
    N = 26000
    samples = [s.sample() for _ in range(N)]
    ids = edge_ids(dstar6, np.array([x.directed_form[0] for x in samples]),
                   np.array([x.directed_form[1] for x in samples]))
    assert not chi_square_uniform(np.bincount(ids, minlength=13)).reject
    frac = sum(x.branch == "correction" for x in samples) / N
    assert abs(frac - 0.5) < 5 * math.sqrt(0.25 / N)


def test_p3_binomial(p3):
    counts = empirical_distribution("exact", p3, 10 ** 6, seed=2)
    # binomial(1e6, 1/2): sd 500
    assert abs(counts[0] - 500000) <= 4 * 500
    assert counts.sum() == 10 ** 6


def test_empty_graph_rejected():
    g = Graph.from_edges(3, [])
    with pytest.raises(Exception):
        ExactSampler(QueryOracle(g), g)
