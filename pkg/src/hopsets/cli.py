"""Command-line interface: gen, build, verify, query, stats, bench.

Exit codes: 0 success, 2 usage error (argparse), 3 I/O error, 4 parameter
rejection, 5 contract violation.  Every artifact embeds (seed, parameters,
input digest) in its header, so any output can be re-derived exactly.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import asp as asp_mod
from .graph import GraphError, GraphFormatError, dump_dimacs, generate, load_dimacs
from .hopset import (
    HopsetError,
    HopsetParams,
    build_hopset,
    dump_hopset,
    load_hopset,
)
from .single_scale import ScheduleError
from .util import as_fraction
from .verify import size_stats, verify_stretch

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_PARAM = 4
EXIT_VIOLATION = 5


def _default_jobs() -> int:
    return int(os.environ.get("HOPSET_JOBS", "1"))


def _add_param_flags(p: argparse.ArgumentParser):
    p.add_argument("--eps", default="0.3", help="target stretch slack (exact decimal or ratio)")
    p.add_argument("--kappa", type=int, default=2)
    p.add_argument("--rho", default="0.5", help="exponent of the sampling degree (e.g. 0.5 or 1/2)")
    p.add_argument("--mode", choices=["reduced", "direct"], default="reduced")
    p.add_argument("--degree-mode", choices=["basic", "refined"], default="basic")
    p.add_argument("--path-reporting", action="store_true")
    p.add_argument("--seed", type=int, default=0)


def _params(args) -> HopsetParams:
    return HopsetParams.make(
        kappa=args.kappa,
        rho=args.rho,
        eps_target=args.eps,
        seed=args.seed,
        mode=args.mode,
        degree_mode=args.degree_mode,
        path_reporting=args.path_reporting,
    )


def cmd_gen(args) -> int:
    params = {}
    if args.model == "er":
        params = dict(n=args.n, p=args.p, wmin=args.wmin, wmax=args.wmax)
    elif args.model == "path":
        params = dict(n=args.n, base=args.base)
    else:
        params = dict(rows=args.rows, cols=args.cols, wmin=args.wmin, wmax=args.wmax)
    graph = generate(args.model, seed=args.seed, **params)
    header = {"generator": args.model, "seed": args.seed}
    header.update({k: v for k, v in params.items()})
    with open(args.out, "w", encoding="ascii") as fh:
        dump_dimacs(graph, fh, comments=header)
    print(f"wrote {args.out}: n={graph.n} m={graph.m} digest={graph.digest()}")
    return EXIT_OK


def cmd_build(args) -> int:
    graph = load_dimacs(args.graph)
    params = _params(args)
    t0 = time.perf_counter()
    hs = build_hopset(graph, params, lambda_hint=args.lambda_hint, jobs=args.jobs)
    ms = (time.perf_counter() - t0) * 1000
    with open(args.out, "w", encoding="ascii") as fh:
        dump_hopset(hs, fh)
    print(
        f"wrote {args.out}: edges={hs.size} (stars={hs.star_count()}) "
        f"beta={hs.effective_beta} eps={hs.effective_eps} in {ms:.0f} ms"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    graph = load_dimacs(args.graph)
    hs = load_hopset(args.hopset)
    mode, kw = _parse_pairs(args.pairs)
    report = verify_stretch(graph, hs, pair_mode=mode, jobs=args.jobs, **kw)
    payload = report.to_dict()
    payload["provenance"] = hs.provenance
    text = json.dumps(payload, sort_keys=True, indent=2)
    if args.report:
        with open(args.report, "w", encoding="ascii") as fh:
            fh.write(text + "\n")
    if args.format == "json":
        print(text)
    else:
        print(f"pairs checked   {report.pairs_checked}")
        ms = payload["max_stretch_float"]
        print(f"max stretch     {report.max_stretch} ({ms if ms is None else round(ms, 6)})")
        print(f"allowed         1 + {report.effective_eps} @ beta={report.effective_beta}")
        print(f"hopset edges    {report.hopset_edges} (stars={report.star_edges})")
        print(f"violations      {report.violation_total}")
        for v in report.violations[:10]:
            print(f"  {v}")
    return EXIT_OK if report.ok else EXIT_VIOLATION


def cmd_query(args) -> int:
    graph = load_dimacs(args.graph)
    hs = load_hopset(args.hopset)
    sources = [int(s) - 1 for s in args.sources.split(",") if s]
    header = {"hopset": os.path.basename(args.hopset), "graph_digest": graph.digest()}
    header.update({k: hs.provenance[k] for k in ("seed", "eps", "mode") if k in hs.provenance})
    with open(args.out, "w", encoding="ascii") as fh:
        asp_mod.write_estimates_csv(graph, hs, sources, fh, header=header)
    print(f"wrote {args.out}")
    if args.paths:
        result = asp_mod.asp_estimates(graph, hs, sources)
        with open(args.paths, "w", encoding="ascii") as fh:
            for s in result.sources:
                for v in range(graph.n):
                    if v == s or result.dist[s][v] is None:
                        continue
                    path, _ = asp_mod.extract_path(graph, hs, result, s, v)
                    fh.write(asp_mod.format_path(path) + "\n")
        print(f"wrote {args.paths}")
    return EXIT_OK


def cmd_stats(args) -> int:
    hs = load_hopset(args.hopset)
    n = int(hs.provenance.get("n", hs.n))
    kappa = int(hs.provenance.get("kappa", "2"))
    stats = size_stats(hs, n, kappa)
    if args.format == "json":
        print(json.dumps(stats, sort_keys=True, indent=2, default=str))
    else:
        print(f"edges           {stats['total_edges']}")
        print(f"stars           {stats['star_edges']} (bound {stats['star_bound']:.1f})")
        print(f"normalized size {stats['normalized_ratio']:.4f}  (|H| / n^(1+1/k) ln n)")
        print(f"beta            {stats['effective_beta']}")
        for k, c in stats["per_scale"].items():
            print(f"  scale {k:>3}: {c}")
    return EXIT_OK


def cmd_bench(args) -> int:
    with open(args.config, "r", encoding="ascii") as fh:
        cfg = json.load(fh)
    rows = []
    for inst in cfg["instances"]:
        inst = dict(inst)
        model = inst.pop("model")
        for kappa in cfg.get("kappa", [2]):
            for rho in cfg.get("rho", ["0.5"]):
                for eps in cfg.get("eps", ["0.3"]):
                    for mode in cfg.get("mode", ["reduced"]):
                        for seed in cfg.get("seeds", [0]):
                            rows.append(
                                _bench_row(model, inst, kappa, rho, eps, mode, seed, args.jobs)
                            )
    with open(args.out, "w", encoding="ascii") as fh:
        fh.write(
            "n,m,kappa,rho,eps,mode,seed,ell,beta,hopset_edges,s_edges,"
            "build_ms,verify_max_stretch\n"
        )
        for r in rows:
            fh.write(",".join(str(x) for x in r) + "\n")
    print(f"wrote {args.out}: {len(rows)} rows")
    return EXIT_OK


def _bench_row(model, inst, kappa, rho, eps, mode, seed, jobs):
    graph = generate(model, seed=seed, **inst)
    params = HopsetParams.make(
        kappa=kappa, rho=rho, eps_target=eps, seed=seed, mode=mode
    )
    t0 = time.perf_counter()
    hs = build_hopset(graph, params, jobs=jobs)
    build_ms = round((time.perf_counter() - t0) * 1000, 1)
    report = verify_stretch(
        graph, hs, pair_mode="sample", sample_size=200, sample_seed=seed, jobs=jobs
    )
    ms = report.max_stretch
    return (
        graph.n,
        graph.m,
        kappa,
        as_fraction(rho),
        as_fraction(eps),
        mode,
        seed,
        hs.provenance["ell"],
        hs.effective_beta,
        hs.size,
        hs.star_count(),
        build_ms,
        "" if ms is None else float(ms),
    )


def _parse_pairs(spec: str):
    if spec == "all":
        return "all", {}
    if spec.startswith("band:"):
        return "band", {"band": int(spec.split(":")[1])}
    if spec.startswith("sample"):
        parts = spec.split(":")
        kw = {}
        if len(parts) > 1:
            kw["sample_size"] = int(parts[1])
        if len(parts) > 2:
            kw["sample_seed"] = int(parts[2])
        return "sample", kw
    raise HopsetError(f"unknown pair spec {spec!r} (all | sample:M:SEED | band:K)")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="hopset", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a graph and write DIMACS .gr")
    g.add_argument("--model", choices=["er", "path", "grid"], required=True)
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--p", type=float, default=0.1)
    g.add_argument("--base", type=float, default=1.0)
    g.add_argument("--rows", type=int, default=8)
    g.add_argument("--cols", type=int, default=8)
    g.add_argument("--wmin", type=int, default=1)
    g.add_argument("--wmax", type=int, default=1)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", required=True)
    g.set_defaults(fn=cmd_gen)

    b = sub.add_parser("build", help="build a hopset for a DIMACS graph")
    b.add_argument("--graph", required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--lambda-hint", type=int, default=None)
    b.add_argument("--jobs", type=int, default=_default_jobs())
    _add_param_flags(b)
    b.set_defaults(fn=cmd_build)

    v = sub.add_parser("verify", help="verify the hopbound/stretch contract")
    v.add_argument("--graph", required=True)
    v.add_argument("--hopset", required=True)
    v.add_argument("--pairs", default="all", help="all | sample:M:SEED | band:K")
    v.add_argument("--report", default=None, help="write the JSON report here")
    v.add_argument("--format", choices=["text", "json"], default="text")
    v.add_argument("--jobs", type=int, default=_default_jobs())
    v.set_defaults(fn=cmd_verify)

    q = sub.add_parser("query", help="S x V estimates (and paths) through a hopset")
    q.add_argument("--graph", required=True)
    q.add_argument("--hopset", required=True)
    q.add_argument("--sources", required=True, help="comma-separated 1-based vertex ids")
    q.add_argument("--out", required=True, help="CSV of estimates")
    q.add_argument("--paths", default=None, help="also write expanded paths here")
    q.set_defaults(fn=cmd_query)

    s = sub.add_parser("stats", help="size accounting for a hopset file")
    s.add_argument("--hopset", required=True)
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(fn=cmd_stats)

    be = sub.add_parser("bench", help="sweep a parameter grid from a JSON config")
    be.add_argument("--config", required=True)
    be.add_argument("--out", required=True)
    be.add_argument("--jobs", type=int, default=_default_jobs())
    be.set_defaults(fn=cmd_bench)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except GraphFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (HopsetError, ScheduleError, GraphError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    raise SystemExit(main())
