"""Command-line surface.

Subcommands: theory, sample, components, explore, and mc {clt, tail,
martingale, coupling}.  All randomness is seeded; rerunning a command with
the same flags reproduces its output byte for byte (thread count may only
change the runtime block of mc reports, never the payload).

Exit codes: 0 success, 1 validation error (bad flags, invariant
violations, unreadable files; reported before computation starts),
2 runtime failure.  Diagnostics go to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import montecarlo as mc
from .components import connected_components, size_histogram_csv
from .exploration import ExplorationConfig, decompose, explore_graph, explore_stream, trace_csv, trace_summary
from .montecarlo import ExperimentSpec
from .rng import RngStream
from .sampling import hgr_to_string, read_hgr, sample_hypergraph, write_hgr
from .theory import ModelParams, TheoryConstants, variance_constant_discrete

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="hypergiant",
        description="Giant components in random d-uniform hypergraphs: "
                    "theory constants, exact sampling, exploration traces, "
                    "and Monte Carlo verification experiments.")
    sub = top.add_subparsers(dest="command", required=True)

    def model_flags(p, with_n=True):
        p.add_argument("--d", type=int, required=True, help="edge size d >= 2")
        p.add_argument("--lambda", dest="lam", type=float, required=True,
                       help="branching intensity")
        if with_n:
            p.add_argument("--N", dest="n", type=int, required=True,
                           help="number of vertices")

    p = sub.add_parser("theory", help="fixed-point constants as JSON")
    model_flags(p, with_n=False)
    p.add_argument("--N", dest="n", type=int, default=None,
                   help="also evaluate the discrete variance sum at this N")

    p = sub.add_parser("sample", help="draw one hypergraph, HGR v1 output")
    model_flags(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="output path (default stdout)")

    p = sub.add_parser("components", help="component size histogram of an HGR file")
    p.add_argument("--in", dest="infile", required=True, help="HGR v1 input path")

    p = sub.add_parser("explore", help="one exploration run, summary JSON")
    model_flags(p)
    p.add_argument("--backend", choices=("graph", "stream"), default="stream")
    p.add_argument("--k", type=int, default=1, help="initially active vertices 1..k")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trace", default=None, help="write the full trace CSV here")

    p = sub.add_parser("mc", help="Monte Carlo experiments")
    mcsub = p.add_subparsers(dest="experiment", required=True)
    for name, doc in (("clt", "sqrt(N)-scale variance vs sigma2"),
                      ("tail", "moderate-deviation tail rates vs J(y)"),
                      ("martingale", "variance of beta*S at the gamma horizon"),
                      ("coupling", "largest component vs seeded union events")):
        q = mcsub.add_parser(name, help=doc)
        model_flags(q)
        q.add_argument("--reps", type=int, required=True)
        q.add_argument("--seed", type=int, default=0)
        q.add_argument("--threads", type=int, default=None)
        q.add_argument("--mode", choices=("exact", "proxy"),
                       default="exact" if name == "coupling" else "proxy")
        q.add_argument("--alpha", type=float, default=0.6)
        q.add_argument("--zeta", type=float, default=0.0)
        q.add_argument("--gamma", type=float, default=0.35)
        q.add_argument("--xi", type=float, default=0.45)
        if name == "tail":
            q.add_argument("--y", type=float, action="append", default=None,
                           help="deviation level, repeatable")
        q.add_argument("--csv", default=None, help="CSV path (default stdout)")
        q.add_argument("--report", default=None, help="report JSON path")
    return top


def _emit(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_theory(args) -> int:
    constants = TheoryConstants.from_model(args.d, args.lam)
    doc = constants.to_dict()
    if args.n is not None:
        doc["N"] = args.n
        doc["numeric_c"] = variance_constant_discrete(ModelParams(args.d, args.lam, args.n))
    sys.stdout.write(json.dumps(doc, indent=2) + "\n")
    return 0


def _cmd_sample(args) -> int:
    h = sample_hypergraph(ModelParams(args.d, args.lam, args.n),
                          RngStream(args.seed, 0))
    if args.out is None:
        sys.stdout.write(hgr_to_string(h))
    else:
        write_hgr(h, args.out)
    return 0


def _cmd_components(args) -> int:
    h = read_hgr(args.infile)
    sys.stdout.write(size_histogram_csv(connected_components(h)))
    return 0


def _cmd_explore(args) -> int:
    params = ModelParams(args.d, args.lam, args.n)
    record = "full_trace" if args.trace else "summary"
    cfg = ExplorationConfig(start_active=args.k, stop="hit_zero", record=record)
    if args.backend == "stream":
        trace = explore_stream(params, cfg, RngStream(args.seed, 0))
    else:
        h = sample_hypergraph(params, RngStream(args.seed, 0))
        trace = explore_graph(h, params, cfg)
    if args.trace:
        _emit(trace_csv(decompose(trace)), args.trace)
    sys.stdout.write(json.dumps(trace_summary(trace), indent=2) + "\n")
    return 0


def _cmd_mc(args) -> int:
    spec = ExperimentSpec(
        d=args.d, lam=args.lam, n=args.n, reps=args.reps,
        mode=args.mode, alpha=args.alpha,
        y_grid=tuple(args.y) if getattr(args, "y", None) else (),
        zeta=args.zeta, gamma_exp=args.gamma, xi_exp=args.xi,
        master_seed=args.seed, threads=args.threads,
    )
    if args.experiment == "clt":
        record, report = mc.estimate_clt(spec)
        csv_text = mc.clt_csv(record)
    elif args.experiment == "tail":
        records, report = mc.estimate_tail(spec)
        csv_text = mc.tail_csv(records)
    elif args.experiment == "martingale":
        record, report = mc.martingale_mdp_check(spec)
        csv_text = mc.martingale_csv(record)
    else:
        record, report = mc.coupling_check(spec)
        csv_text = mc.coupling_csv(record)
    _emit(csv_text, args.csv)
    if args.report:
        _emit(report.to_json(), args.report)
    return 0


_COMMANDS = {
    "theory": _cmd_theory,
    "sample": _cmd_sample,
    "components": _cmd_components,
    "explore": _cmd_explore,
    "mc": _cmd_mc,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 0 for --help, 2 for bad flags; bad flags are a
        # validation error under this tool's contract
        return 0 if exc.code == 0 else 1
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"runtime failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
