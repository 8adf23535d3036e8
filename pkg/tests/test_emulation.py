from fractions import Fraction as F

import numpy as np
import pytest

from edgesample.analysis import EdgeDistribution, analytic_conditional, pointwise_distance, uniform_distribution
from edgesample.emulation import (AccessError, ExtendedOracle, MaximalCoupling, binomial_sigma, coupled_run,
                                  endpoint_degree_sum, make_extended)
from edgesample.graph import classify, double_star
from edgesample.oracle import QueryOracle


@pytest.mark.parametrize("source", [("true_uniform",), ("approx", 0.25), ("exact", None)])
def test_sources_return_edges(dstar6, source):
    ext = ExtendedOracle(QueryOracle(dstar6, seed=1), source, graph=dstar6, full_access=True)
    edges = {tuple(e) for e in dstar6.edges.tolist()}
    for _ in range(100):
        u, v = ext.random_edge()
        assert (u, v) in edges
    assert ext.random_edge_count == 100


def test_true_uniform_needs_full_access(dstar6):
    with pytest.raises(AccessError):
        ExtendedOracle(QueryOracle(dstar6), ("true_uniform",), graph=dstar6)
    with pytest.raises(AccessError):
        ExtendedOracle(QueryOracle(dstar6), ("exact", 0.5))
    with pytest.raises(ValueError):
        ExtendedOracle(QueryOracle(dstar6), ("bogus",))


def test_pass_through_counts(dstar6):
    ext = make_extended(QueryOracle(dstar6, seed=0), ("approx", 0.5))
    v = ext.random_vertex()
    ext.degree(v)
    ext.neighbor(0, 1)
    ext.pair(0, 1)
    assert ext.counts.as_dict() == {"random_vertex": 1, "degree": 1, "neighbor": 1, "pair": 1}
    before = ext.counts.total
    ext.random_edge()
    # emulated edges cost standard queries
    assert ext.counts.total > before


def test_approx_source_close_at_tiny_epsilon(star4):
    eps = 1 / 25
    law = analytic_conditional(star4, classify(star4), eps, exact=False)
    assert pointwise_distance(law, uniform_distribution(star4.directed_edges())) <= eps


def test_coupling_table_marginals():
    rng = np.random.default_rng(4)
    p, q = rng.dirichlet(np.ones(7)), rng.dirichlet(np.ones(7))
    c = MaximalCoupling(p, q)
    J = c.table()
    assert np.allclose(J.sum(axis=1), p) and np.allclose(J.sum(axis=0), q)
    tv = 0.5 * np.abs(p - q).sum()
    assert J.sum() - np.trace(J) == pytest.approx(tv)
    assert c.disagreement == pytest.approx(tv)
    x, y = c.sample(rng, 200_000)
    assert np.allclose(np.bincount(x, minlength=7) / 200_000, p, atol=0.005)
    assert np.allclose(np.bincount(y, minlength=7) / 200_000, q, atol=0.005)
    assert abs((x != y).mean() - tv) <= 4 * binomial_sigma(tv, 200_000)


def test_identical_laws_never_disagree():
    p = np.full(5, 0.2)
    c = MaximalCoupling(p, p)
    assert c.disagreement == 0
    x, y = c.sample(np.random.default_rng(0), 1000)
    assert np.array_equal(x, y)
    with pytest.raises(ValueError):
        MaximalCoupling(p, p[:3])


def test_star_coupling_exact(star4):
    alg, acc = endpoint_degree_sum(star4)
    r = coupled_run(alg, star4, 0.5, 10, 500, seed=1, accept=acc)
    assert r.tv_analytic == pytest.approx(0) and r.stream_difference == 0
    assert r.accept_rate_approx == r.accept_rate_uniform


def test_double_star_coupling(dstar6):
    alg, acc = endpoint_degree_sum(dstar6)
    r = coupled_run(alg, dstar6, 0.5, 10, 5000, seed=2, accept=acc)
    assert r.tv_analytic == pytest.approx(1 / 182)
    assert r.table_disagreement == pytest.approx(1 / 182)
    assert r.downstream_divergence <= r.stream_difference
    assert r.stream_difference <= 10 * r.tv_analytic + 3 * binomial_sigma(10 / 182, 5000)
    d = r.as_dict()
    assert set(d) >= {"k", "trials", "tv_analytic", "stream_difference", "downstream_divergence"}


def test_coupled_run_custom_law(dstar6):
    keys = [tuple(e) for e in dstar6.edges.tolist()]
    law = EdgeDistribution({keys[0]: 1.0}, 0.0, True)
    r = coupled_run(lambda e, rng: len(e), dstar6, 0.5, 3, 100, seed=0, law=law)
    assert r.tv_analytic == pytest.approx(1 - 1 / 13)


def test_endpoint_degree_sum_truth(dstar6):
    alg, acc = endpoint_degree_sum(dstar6)
    out = alg(dstar6.edges, None)
    assert acc(out)
