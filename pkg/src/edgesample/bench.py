"""Query-cost scaling measurements for the approximate sampler."""

from __future__ import annotations

import csv
import math
import time
from dataclasses import asdict, dataclass, fields

import numpy as np

from .approx import SamplerConfig, ell_of, sample_edges
from .graph import Graph, classify, double_star, gnp, star
from .htable import compute_h, edge_weights
from .oracle import QueryOracle, spawn_seeds


@dataclass
class BenchRecord:
    graph: str
    n: int
    m: int
    epsilon: float
    samples: int
    mean_queries: float
    mean_attempts: float
    queries_per_attempt: float
    predicted_attempts: float  # exact expectation, from the h-table
    predicted_queries: float
    ratio: float  # mean_queries / (n / sqrt(m) * log2(1/epsilon))
    seconds_per_sample: float


def family_graph(name: str, n: int, seed=None, **params) -> Graph:
    """A member of a size-indexed family with m = Theta(n)."""
    if name == "gnp":
        avg = params.get("avg_degree", 10)
        return gnp(n, min(1.0, avg / max(n - 1, 1)), seed=seed)
    if name == "double_star":
        return double_star(max((n - 2) // 2, 0))
    if name == "star":
        return star(n - 1)
    raise ValueError(f"unknown scaling family {name!r}")


def measure(g: Graph, epsilon: float, samples: int, seed=None, label: str = "") -> BenchRecord:
    oracle = QueryOracle(g, seed=seed)
    cfg = SamplerConfig.for_oracle(oracle, epsilon)
    t0 = time.perf_counter()
    batch = sample_edges(oracle, cfg, samples)
    elapsed = time.perf_counter() - t0
    mean_q = float(batch.queries.mean())
    mean_a = float(batch.attempts.mean())
    ell = ell_of(epsilon)
    cls = classify(g, g.m)
    predicted = float(ell * g.n * cls.theta / edge_weights(g, compute_h(g, cls, ell)).sum())
    qpa = mean_q / mean_a
    return BenchRecord(
        graph=label or repr(g),
        n=g.n,
        m=g.m,
        epsilon=epsilon,
        samples=samples,
        mean_queries=mean_q,
        mean_attempts=mean_a,
        queries_per_attempt=qpa,
        predicted_attempts=predicted,
        predicted_queries=predicted * qpa,
        ratio=mean_q / (g.n / math.sqrt(g.m) * math.log2(1 / epsilon)),
        seconds_per_sample=elapsed / samples,
    )


def bench_scaling(family: str, sizes, epsilon: float, samples: int, seed=None, **params) -> list[BenchRecord]:
    records = []
    for n, ss in zip(sizes, spawn_seeds(seed, len(sizes))):
        gen_ss, run_ss = ss.spawn(2)
        g = family_graph(family, int(n), seed=int(gen_ss.generate_state(1)[0]), **params)
        records.append(measure(g, epsilon, samples, seed=run_ss, label=f"{family}(n={n})"))
    return records


def write_csv(records: list[BenchRecord], fh) -> None:
    names = [f.name for f in fields(BenchRecord)]
    w = csv.DictWriter(fh, fieldnames=names)
    w.writeheader()
    for r in records:
        w.writerow(asdict(r))


def ratio_spread(records: list[BenchRecord]) -> float:
    """max ratio / min ratio across records."""
    r = np.array([rec.ratio for rec in records])
    return float(r.max() / r.min())
