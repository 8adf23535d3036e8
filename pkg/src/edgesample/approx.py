"""Constrained random-walk edge sampling in the standard query model.

One *attempt* picks a uniform vertex u0, keeps it only if it is light, then
follows its j-th neighbor for a uniform j in [theta] and continues with
uniform random steps for as long as every intermediate vertex is heavy.  The
last edge of a walk of length k is returned.  Drawing k uniformly from
1..ell and retrying failed attempts yields edges pointwise epsilon-close to
uniform, with ell = ceil(log2(1/epsilon)) + 1.

Two execution paths share these semantics:

* :func:`sampling_attempt` / :func:`sample_edge` issue scalar oracle queries,
  one attempt at a time;
* :func:`attempt_batch` / :func:`sample_edges` run many independent attempts
  in lock-step through the oracle's batch queries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .oracle import QueryOracle


class SamplerError(RuntimeError):
    """Sampling gave up after the configured number of attempts."""


def ell_of(epsilon) -> int:
    """ceil(log2(1/epsilon)) + 1, evaluated exactly for floats and Fractions."""
    eps = Fraction(epsilon)
    if not 0 < eps <= Fraction(1, 2):
        raise ValueError(f"epsilon must lie in (0, 1/2], got {epsilon}")
    # smallest t with 2^t >= 1/eps
    num, den = eps.numerator, eps.denominator
    t = 0
    while (num << t) < den:
        t += 1
    return t + 1


@dataclass(frozen=True)
class SamplerConfig:
    epsilon: float
    ell: int
    theta: int
    max_attempts: int | None = None

    def __post_init__(self):
        if self.ell < 2:
            raise ValueError("ell must be >= 2")
        if self.theta < 1:
            raise ValueError("theta must be >= 1")

    @classmethod
    def for_oracle(cls, oracle: QueryOracle, epsilon, max_attempts: int | None = None) -> "SamplerConfig":
        ell = ell_of(epsilon)
        theta = oracle.theta
        if max_attempts is None:
            m_est = max(oracle.m_est, 1)
            expected = ell * oracle.n * theta / (2 * m_est * (1 - float(epsilon)))
            max_attempts = 64 * math.ceil(expected)
        return cls(float(epsilon), ell, theta, max_attempts)


@dataclass(frozen=True)
class AttemptOutcome:
    result: tuple[int, int] | None
    k_used: int
    queries_used: int

    @property
    def ok(self) -> bool:
        return self.result is not None


@dataclass(frozen=True)
class EdgeSample:
    edge: tuple[int, int]
    directed_form: tuple[int, int]
    attempts: int
    total_queries: int
    branch: str = "approx"


def _undirected(v: int, w: int) -> tuple[int, int]:
    return (v, w) if v < w else (w, v)


def sampling_attempt(oracle: QueryOracle, k: int, theta: int) -> AttemptOutcome:
    if k < 1:
        raise ValueError("walk length k must be >= 1")
    before = oracle.total_queries
    rng = oracle.rng

    def fail():
        return AttemptOutcome(None, k, oracle.total_queries - before)

    u0 = oracle.random_vertex()
    d0 = oracle.degree(u0)
    if d0 > theta:
        return fail()
    j = rng.randint(1, theta)
    # d(u0) is already known, so a j beyond it fails without a neighbor query
    if j > d0:
        return fail()
    prev, cur = u0, oracle.neighbor(u0, j)
    for _ in range(2, k + 1):
        d = oracle.degree(cur)
        if d <= theta:
            return fail()
        prev, cur = cur, oracle.neighbor(cur, rng.randint(1, d))
    return AttemptOutcome((prev, cur), k, oracle.total_queries - before)


def sample_edge(oracle: QueryOracle, cfg: SamplerConfig) -> EdgeSample:
    if oracle.n == 0:
        raise SamplerError("cannot sample an edge from an empty graph")
    before = oracle.total_queries
    attempts = 0
    while True:
        if cfg.max_attempts is not None and attempts >= cfg.max_attempts:
            raise SamplerError(f"no edge after {attempts} attempts; is m_est sensible?")
        attempts += 1
        k = oracle.rng.randint(1, cfg.ell)
        out = sampling_attempt(oracle, k, cfg.theta)
        if out.ok:
            v, w = out.result
            return EdgeSample(_undirected(v, w), (v, w), attempts, oracle.total_queries - before)


# -- batch path -------------------------------------------------------------

@dataclass(frozen=True)
class AttemptBatch:
    src: np.ndarray      # -1 where the attempt failed
    dst: np.ndarray
    ok: np.ndarray
    k: np.ndarray
    queries: np.ndarray  # per attempt


def attempt_batch(oracle: QueryOracle, ks: np.ndarray, theta: int) -> AttemptBatch:
    """Run ``len(ks)`` independent attempts, attempt i with walk length ks[i]."""
    ks = np.asarray(ks, dtype=np.int64)
    N = len(ks)
    rng = oracle.np_rng
    queries = np.full(N, 2, dtype=np.int64)
    src = np.full(N, -1, dtype=np.int64)
    dst = np.full(N, -1, dtype=np.int64)

    u0 = oracle.random_vertices(N)
    d0 = oracle.degrees(u0)
    j = rng.integers(1, theta + 1, size=N)
    lane = np.flatnonzero((d0 <= theta) & (j <= d0))
    prev = u0[lane]
    cur = oracle.neighbors(prev, j[lane])
    queries[lane] += 1
    kk = ks[lane]

    step = 1
    while lane.size:
        done = kk == step
        src[lane[done]] = prev[done]
        dst[lane[done]] = cur[done]
        keep = ~done
        lane, prev, cur, kk = lane[keep], prev[keep], cur[keep], kk[keep]
        if not lane.size:
            break
        step += 1
        d = oracle.degrees(cur)
        queries[lane] += 1
        heavy = d > theta
        lane, cur, d, kk = lane[heavy], cur[heavy], d[heavy], kk[heavy]
        r = rng.integers(1, d + 1) if lane.size else d
        prev, cur = cur, oracle.neighbors(cur, r)
        queries[lane] += 1
    return AttemptBatch(src, dst, src >= 0, ks, queries)


@dataclass(frozen=True)
class SampleBatch:
    """Column-oriented result of many edge samples."""
    src: np.ndarray
    dst: np.ndarray
    attempts: np.ndarray
    queries: np.ndarray
    corrected: np.ndarray  # True where the sample came from the correction branch

    def __len__(self) -> int:
        return len(self.src)

    def undirected(self) -> np.ndarray:
        return np.column_stack([np.minimum(self.src, self.dst), np.maximum(self.src, self.dst)])

    def to_samples(self) -> list[EdgeSample]:
        out = []
        for v, w, a, q, c in zip(self.src.tolist(), self.dst.tolist(), self.attempts.tolist(),
                                 self.queries.tolist(), self.corrected.tolist()):
            out.append(EdgeSample(_undirected(v, w), (v, w), a, q, "correction" if c else "approx"))
        return out


def sample_edges(oracle: QueryOracle, cfg: SamplerConfig, count: int,
                 chunk: int | None = None) -> SampleBatch:
    """``count`` independent :func:`sample_edge` draws via batched attempts.

    Attempts form one i.i.d. stream; sample i is the i-th success, and its
    attempt and query counts cover the attempts since the previous success.
    Attempts run past the last needed success are still tallied by the oracle.
    """
    if count < 0:
        raise ValueError("count must be nonnegative")
    empty = np.zeros(0, dtype=np.int64)
    if count == 0:
        return SampleBatch(empty, empty, empty, empty, np.zeros(0, dtype=bool))
    if oracle.n == 0:
        raise SamplerError("cannot sample an edge from an empty graph")
    m_est = max(oracle.m_est, 1)
    per_sample = cfg.ell * oracle.n * cfg.theta / (2 * m_est)
    if chunk is None:
        chunk = int(min(max(1.2 * count * per_sample, 4096), 1 << 21))

    srcs, dsts, atts, qs = [], [], [], []
    got = 0
    carry_attempts = 0
    carry_queries = 0
    while got < count:
        ks = oracle.np_rng.integers(1, cfg.ell + 1, size=chunk)
        b = attempt_batch(oracle, ks, cfg.theta)
        hits = np.flatnonzero(b.ok)[: count - got]
        cq = np.cumsum(b.queries)
        if hits.size:
            ends_q = cq[hits]
            prev_q = np.concatenate([[0], ends_q[:-1]])
            att = np.diff(np.concatenate([[-1], hits]))
            att[0] += carry_attempts
            q = ends_q - prev_q
            q[0] += carry_queries
            srcs.append(b.src[hits])
            dsts.append(b.dst[hits])
            atts.append(att)
            qs.append(q)
            got += hits.size
            carry_attempts = chunk - 1 - hits[-1]
            carry_queries = int(cq[-1] - cq[hits[-1]])
        else:
            carry_attempts += chunk
            carry_queries += int(cq[-1])
        if cfg.max_attempts is not None:
            pending = carry_attempts if got < count else 0
            worst = max(pending, int(atts[-1].max()) if hits.size else 0)
            if worst > cfg.max_attempts:
                raise SamplerError(f"no edge after {cfg.max_attempts} attempts; is m_est sensible?")
        # size the next chunk to what is still missing
        chunk = int(min(max(1.2 * (count - got) * per_sample, 4096), 1 << 21))
    return SampleBatch(np.concatenate(srcs), np.concatenate(dsts), np.concatenate(atts),
                       np.concatenate(qs), np.zeros(count, dtype=bool))
