"""Command line interface: ``edgesample <command> ...``.

Exit status is 0 on success, 2 when ``verify`` finds a failed check and 1 on
usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import asdict

import numpy as np

from . import bench
from .analysis import chi_square_uniform, edge_ids
from .approx import SamplerConfig, SamplerError, ell_of, sample_edges
from .emulation import coupled_run, endpoint_degree_sum
from .exact import ExactSampler
from .graph import GraphFormatError, GraphValidationError, classify, format_edge_list, generate, load_graph, parse_generator_spec
from .htable import compute_h, write_csv as write_h_csv
from .oracle import QueryOracle
from .verify import verify_graph


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _float_or_fraction(text: str) -> float:
    if "/" in text:
        a, b = text.split("/", 1)
        return float(a) / float(b)
    return float(text)


def _emit(args, payload: dict, rows: list[dict]) -> None:
    if args.format == "csv":
        buf = io.StringIO()
        if rows:
            w = csv.DictWriter(buf, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
        text = buf.getvalue()
    else:
        text = json.dumps(payload, indent=2) + "\n"
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)


def _graph_block(g, m_est=None) -> dict:
    return {"n": g.n, "m": g.m, "theta": classify(g, m_est or g.m).theta}


def _batch_rows(batch) -> list[dict]:
    return [{"u": int(min(v, w)), "v": int(max(v, w)), "directed": [int(v), int(w)],
             "attempts": int(a), "queries": int(q), "branch": "correction" if c else "approx"}
            for v, w, a, q, c in zip(batch.src, batch.dst, batch.attempts, batch.queries, batch.corrected)]


def _csv_rows(rows: list[dict]) -> list[dict]:
    return [{k: v for k, v in r.items() if k != "directed"} | {"src": r["directed"][0], "dst": r["directed"][1]}
            for r in rows]


# -- commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    name, params = parse_generator_spec(args.family)
    g = generate(name, seed=args.seed, **params)
    text = format_edge_list(g)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def cmd_sample(args) -> int:
    g = load_graph(args.graph)
    oracle = QueryOracle(g, m_est=args.m_est, seed=args.seed)
    cfg = SamplerConfig.for_oracle(oracle, args.epsilon, args.max_attempts)
    batch = sample_edges(oracle, cfg, args.count)
    rows = _batch_rows(batch)
    payload = {
        "graph": _graph_block(g, oracle.m_est),
        "config": {"sampler": "approx", "epsilon": args.epsilon, "ell": cfg.ell, "m_est": oracle.m_est,
                   "count": args.count, "seed": args.seed},
        "results": rows,
        "queries": oracle.counts.as_dict(),
    }
    _emit(args, payload, _csv_rows(rows))
    return 0


def cmd_exact_sample(args) -> int:
    g = load_graph(args.graph)
    oracle = QueryOracle(g, seed=args.seed)
    sampler = ExactSampler(oracle, g, args.delta, args.max_attempts)
    batch = sampler.sample_batch(args.count)
    rows = _batch_rows(batch)
    if args.dump_correction:
        with open(args.dump_correction, "w", newline="") as fh:
            sampler.correction.write_csv(fh)
    payload = {
        "graph": _graph_block(g),
        "config": {"sampler": "exact", "delta": sampler.delta, "ell": sampler.cfg.ell,
                   "count": args.count, "seed": args.seed},
        "results": rows,
        "correction_draws": sampler.correction_draws,
        "queries": oracle.counts.as_dict(),
    }
    if args.count >= 10 * g.m and g.m >= 2:
        counts = np.bincount(edge_ids(g, batch.src, batch.dst), minlength=g.m)
        chi = chi_square_uniform(counts)
        payload["chi_square"] = {"statistic": chi.statistic, "df": chi.df, "critical": chi.critical,
                                 "alpha": chi.alpha, "reject": chi.reject}
    _emit(args, payload, _csv_rows(rows))
    return 0


def cmd_couple(args) -> int:
    g = load_graph(args.graph)
    algorithm, accept = endpoint_degree_sum(g)
    report = coupled_run(algorithm, g, args.epsilon, args.k, args.trials, seed=args.seed, accept=accept)
    payload = {
        "graph": _graph_block(g),
        "config": {"epsilon": args.epsilon, "k": args.k, "trials": args.trials, "seed": args.seed,
                   "algorithm": "endpoint_degree_sum"},
        "results": [report.as_dict()],
    }
    _emit(args, payload, [report.as_dict()])
    return 0


def cmd_verify(args) -> int:
    g = load_graph(args.graph)
    epsilons = args.epsilon or [0.5, 0.25, 0.0625]
    exact = {"auto": None, "yes": True, "no": False}[args.exact]
    report = verify_graph(g, epsilons, exact=exact, delta=args.delta)
    if args.dump_h:
        cls = classify(g, g.m)
        with open(args.dump_h, "w", newline="") as fh:
            write_h_csv(compute_h(g, cls, max(ell_of(e) for e in epsilons)), fh)
    rows = [dict(r) for r in report["epsilons"]]
    payload = {"graph": _graph_block(g), "config": {"epsilons": epsilons, "exact": args.exact},
               "results": rows, "exactness": report["exactness"], "passed": report["passed"]}
    _emit(args, payload, rows)
    return 0 if report["passed"] else 2


def cmd_bench(args) -> int:
    name, params = parse_generator_spec(args.family)
    sizes = [int(s) for s in args.sizes.split(",")]
    records = bench.bench_scaling(name, sizes, args.epsilon, args.samples, seed=args.seed, **params)
    rows = [asdict(r) for r in records]
    payload = {"graph": {"family": args.family, "sizes": sizes},
               "config": {"epsilon": args.epsilon, "samples": args.samples, "seed": args.seed},
               "results": rows, "ratio_spread": bench.ratio_spread(records)}
    if args.format is None:
        args.format = "csv"
    _emit(args, payload, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=["csv", "json"], default=None)
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="edgesample", description="Sublinear uniform edge sampling and verification.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("generate", parents=[common], help="write a generated graph as an edge list")
    s.add_argument("family", help="e.g. star:leaves=4, double_star:leaves_per_hub=6, gnp:n=100,p=0.1")
    s.set_defaults(func=cmd_generate)

    s = sub.add_parser("sample", parents=[common], help="approximately uniform edge samples")
    s.add_argument("--graph", required=True)
    s.add_argument("--epsilon", type=_float_or_fraction, required=True)
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--m-est", type=int, default=None, help="declared edge count (default: exact)")
    s.add_argument("--max-attempts", type=int, default=None)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("exact-sample", parents=[common], help="exactly uniform edge samples")
    s.add_argument("--graph", required=True)
    s.add_argument("--delta", type=_float_or_fraction, default=None, help="mixture weight (default n^-3)")
    s.add_argument("--count", type=int, default=1)
    s.add_argument("--max-attempts", type=int, default=None)
    s.add_argument("--dump-correction", help="write (v, w, q, r) rows to this CSV file")
    s.set_defaults(func=cmd_exact_sample)

    s = sub.add_parser("couple", parents=[common], help="coupling testbed for emulated random-edge queries")
    s.add_argument("--graph", required=True)
    s.add_argument("--epsilon", type=_float_or_fraction, required=True)
    s.add_argument("--k", type=int, default=10)
    s.add_argument("--trials", type=int, default=10000)
    s.set_defaults(func=cmd_couple)

    s = sub.add_parser("verify", parents=[common], help="check sampler formulas by brute force")
    s.add_argument("--graph", required=True)
    s.add_argument("--epsilon", type=_float_or_fraction, action="append")
    s.add_argument("--delta", type=_float_or_fraction, default=None)
    s.add_argument("--exact", choices=["auto", "yes", "no"], default="auto")
    s.add_argument("--dump-h", help="write the h-table as CSV (vertex, level, value)")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("bench", parents=[common], help="query-cost scaling over a graph family")
    s.add_argument("--family", default="gnp:avg_degree=10")
    s.add_argument("--sizes", default="1000,10000,100000")
    s.add_argument("--epsilon", type=_float_or_fraction, default=1 / 16)
    s.add_argument("--samples", type=int, default=2000)
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.format is None and args.command != "bench":
        args.format = "json"
    try:
        return args.func(args)
    except (GraphFormatError, GraphValidationError, OSError, ValueError, SamplerError) as exc:
        print(f"edgesample {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
