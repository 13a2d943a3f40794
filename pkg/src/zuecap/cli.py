"""Command-line front end: graph algebra, channel reports, sweeps, simulation.

Data goes to stdout (or --output); diagnostics go to stderr; the exit
status is 0 exactly when no error occurred. Identical invocations produce
byte-identical output: all values print with 12 significant digits and LF
line endings. ZUE_THREADS is accepted as a cap on solver parallelism; the
bundled solvers are sequential, so any positive value is a no-op.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from dataclasses import replace

from . import bounds, gsolve, zuedec
from .channel import canonical_channel, load_channel
from .digraph import (
    complement,
    format_graph,
    index_to_word,
    parse_graph,
    strong_power,
    strong_product,
    weak_product,
)
from .errors import ZuecapError

LN2 = math.log(2.0)


def _fmt(x: float) -> str:
    return "%.12g" % x


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_graph(path: str):
    return parse_graph(_read(path))


def _witness_words(vertices, base: int, power: int) -> str:
    if power == 1:
        return " ".join(str(v) for v in sorted(vertices))
    words = [index_to_word(v, base, power) for v in sorted(vertices)]
    return " ".join(",".join(str(s) for s in w) for w in words)


def _threads_env() -> None:
    raw = os.environ.get("ZUE_THREADS")
    if raw is None:
        return
    try:
        value = int(raw)
    except ValueError:
        raise ValueError("ZUE_THREADS must be an integer, got %r" % raw) from None
    if value < 1:
        raise ValueError("ZUE_THREADS must be positive, got %d" % value)


# ---------------------------------------------------------------------------
# commands


def _cmd_graph(args) -> str:
    if args.gcmd == "product":
        g = _load_graph(args.graph)
        h = _load_graph(args.other)
        prod = weak_product(g, h) if args.weak else strong_product(g, h)
        return format_graph(prod)
    if args.gcmd == "complement":
        return format_graph(complement(_load_graph(args.graph)))
    if args.gcmd in ("alpha", "rho"):
        g = _load_graph(args.graph)
        gp = strong_power(g, args.power) if args.power > 1 else g
        if args.gcmd == "alpha":
            size, witness = gsolve.max_independent_set(gp)
        else:
            size, witness = gsolve.max_acyclic_induced(gp)
        lines = [
            "%s %d" % (args.gcmd, size),
            "witness %s" % _witness_words(witness, g.vertex_count, args.power),
        ]
        return "\n".join(lines) + "\n"
    if args.gcmd == "caro-wei":
        g = _load_graph(args.graph)
        return "caro_wei_sum %s\n" % _fmt(gsolve.caro_wei_sum(g))
    if args.gcmd == "sperner-report":
        g = _load_graph(args.graph)
        est = gsolve.sperner_report(g, args.n_max)
        if est.truncated_at is not None:
            print(
                "note: stopped before power %d (vertex cap)" % est.truncated_at,
                file=sys.stderr,
            )
        return est.to_csv()
    raise ValueError("unknown graph subcommand %r" % args.gcmd)


def _cmd_analyze(args) -> str:
    ch = load_channel(_read(args.channel))
    if args.csp is not None and args.csp < 0.0:
        raise ValueError("--csp must be nonnegative")
    options = bounds.ReportOptions(
        csp=args.csp,
        forney_n=args.n,
        reduce_outputs=not args.no_reduce_outputs,
    )
    report = bounds.composite_report(ch, options)
    if args.bits:
        report = bounds.BoundReport(
            tuple(replace(e, value=e.value / LN2) for e in report.entries),
            report.shortcuts,
        )
    return report.to_csv() if args.format == "csv" else report.to_text()


def _cmd_sweep(args) -> str:
    g = _load_graph(args.graph)
    if args.csp < 0.0:
        raise ValueError("--csp must be nonnegative")
    grid = [float(tok) for tok in args.eps.split(",") if tok.strip()]
    for eps in grid:
        if not 0.0 <= eps < 1.0:
            raise ValueError("eps %g outside [0, 1)" % eps)
    est = gsolve.sperner_report(g, args.n_max)
    # blocklength of the best code witness; the asymptotically attainable
    # rate at that length is the certified sperner value itself
    best = max(est.rows, key=lambda row: (row.alpha_rate, -row.n))
    n_star = best.n
    lines = ["eps,lower_nats,upper_nats,gap"]
    for eps in grid:
        ch = canonical_channel(g, eps)
        upper = bounds.epsilon_noise_upper(
            args.csp, eps, ch.input_count, ch.output_count
        )
        lower = bounds.sperner_code_lower(args.csp, n_star, eps)
        lines.append(
            "%s,%s,%s,%s" % (_fmt(eps), _fmt(lower), _fmt(upper), _fmt(upper - lower))
        )
    return "\n".join(lines) + "\n"


def _cmd_simulate(args) -> str:
    ch = load_channel(_read(args.channel))
    cb = zuedec.load_codebook(_read(args.codebook))
    if not 0 <= args.m < cb.size:
        raise ValueError("--m out of range for %d codewords" % cb.size)
    lines = ["sperner %s" % ("true" if zuedec.is_sperner_code(cb, ch) else "false")]
    try:
        lines.append("exact_max %s" % _fmt(zuedec.erasure_probability_max(cb, ch)))
        lines.append("exact_avg %s" % _fmt(zuedec.erasure_probability_avg(cb, ch)))
        lines.append(
            "listsize_moment_avg %s" % _fmt(zuedec.listsize_moment_avg(cb, ch, args.rho))
        )
    except zuedec.CapExceededError as exc:
        print("note: %s" % exc, file=sys.stderr)
    est, stderr = zuedec.erasure_probability_mc(cb, ch, args.m, args.trials, args.seed)
    lines.append("mc_message %d" % args.m)
    lines.append("mc_estimate %s" % _fmt(est))
    lines.append("mc_stderr %s" % _fmt(stderr))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zuecap",
        description="erasure-only capacity bounds and confusability-graph reports",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_graph = sub.add_parser("graph", help="graph algebra and exact power reports")
    gsub = p_graph.add_subparsers(dest="gcmd", required=True)
    p = gsub.add_parser("product", help="strong (default) or weak product")
    p.add_argument("graph")
    p.add_argument("other")
    p.add_argument("--weak", action="store_true")
    p.add_argument("--output")
    p = gsub.add_parser("complement")
    p.add_argument("graph")
    p.add_argument("--output")
    for name in ("alpha", "rho"):
        p = gsub.add_parser(name)
        p.add_argument("graph")
        p.add_argument("--power", type=int, default=1)
        p.add_argument("--output")
    p = gsub.add_parser("caro-wei")
    p.add_argument("graph")
    p.add_argument("--output")
    p = gsub.add_parser("sperner-report")
    p.add_argument("graph")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--output")
    p_graph.set_defaults(func=_cmd_graph)

    p = sub.add_parser("analyze", help="bound report for a channel file")
    p.add_argument("channel")
    p.add_argument("--csp", type=float, default=None,
                   help="certified sperner capacity of the channel graph, in nats")
    p.add_argument("--n", type=int, default=1, help="multi-letter depth for the lower bounds")
    p.add_argument("--no-reduce-outputs", action="store_true",
                   help="keep the raw output count in the low-noise upper bound")
    p.add_argument("--bits", action="store_true", help="display values in bits")
    p.add_argument("--format", choices=("table", "csv"), default="table")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("sweep", help="noise sweep for a confusability graph")
    p.add_argument("graph")
    p.add_argument("--csp", type=float, required=True)
    p.add_argument("--eps", required=True, help="comma-separated noise grid, each in [0,1)")
    p.add_argument("--n-max", type=int, default=2,
                   help="largest power searched for the code witness")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("simulate", help="decoder statistics for a channel + codebook")
    p.add_argument("channel")
    p.add_argument("codebook")
    p.add_argument("--rho", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=10000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=0, help="message index for the Monte-Carlo run")
    p.add_argument("--output")
    p.set_defaults(func=_cmd_simulate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _threads_env()
        text = args.func(args)
    except (ZuecapError, ValueError, OSError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 1
    out_path = getattr(args, "output", None)
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    sys.exit(main())
