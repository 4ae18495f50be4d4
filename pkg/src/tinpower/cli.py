"""Command-line front end.

Exact quantities print as reduced rationals; only the rate sweep emits
floats, as CSV.  User labels are 1-based on the way in and out.
"""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .bounds import small_k_report, square_report
from .bpc import solve_bpc_gdof, solve_bpc_rate
from .gdof import sum_gdof
from .opc import solve_opc
from .power import format_allocation, parse_allocation
from .ratesim import gain_sweep, kk_power_allocation, render_sweep_figure, write_sweep_csv
from .search import local_search
from .topology import Topology, extremal_grid, extremal_small, format_topology, parse_topology


class CommandError(Exception):
    """User-facing failure tied to a specific argument."""


def _load_topology(path: str) -> Topology:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CommandError(f"-t {path}: {exc.strerror or exc}") from None
    try:
        return parse_topology(text)
    except ValueError as exc:
        raise CommandError(f"-t {path}: {exc}") from None


def _users(items: frozenset[int]) -> str:
    return " ".join(str(i + 1) for i in sorted(items))


def _fraction_arg(flag: str, text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise CommandError(f"{flag} {text}: not a rational number") from None


def _cmd_gen(args: argparse.Namespace) -> int:
    if args.small is not None:
        try:
            topology = extremal_small(args.small)
        except ValueError as exc:
            raise CommandError(f"--small: {exc}") from None
    else:
        try:
            topology = extremal_grid(args.grid)
        except ValueError as exc:
            raise CommandError(f"--grid: {exc}") from None
    text = format_topology(topology)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(args: argparse.Namespace) -> int:
    topology = _load_topology(args.topology)
    try:
        allocation = parse_allocation(args.allocation)
    except ValueError as exc:
        raise CommandError(f"-r: {exc}") from None
    try:
        outcome = sum_gdof(topology, allocation)
    except ValueError as exc:
        raise CommandError(f"-r: {exc}") from None
    for i, d in enumerate(outcome.per_user):
        print(f"user {i + 1}: {d}")
    print(f"sum: {outcome.total}")
    return 0


def _cmd_opc(args: argparse.Namespace) -> int:
    topology = _load_topology(args.topology)
    try:
        result = solve_opc(topology, limit=args.limit, all_optima=args.all_optima)
    except ValueError as exc:
        raise CommandError(f"-t {args.topology}: {exc}") from None
    print(f"value: {result.value}")
    print(f"allocation: {format_allocation(result.allocation)}")
    print(f"active_set: {_users(result.active_set)}")
    print("gdof: " + " ".join(str(d) for d in result.outcome.per_user))
    if result.optimal_sets is not None:
        print("optimal_sets:")
        for s in result.optimal_sets:
            print(f"  {_users(s)}")
    return 0


def _cmd_bpc(args: argparse.Namespace) -> int:
    topology = _load_topology(args.topology)
    try:
        if args.rate is None:
            result = solve_bpc_gdof(topology, limit=args.limit)
            print(f"value: {result.value}")
        else:
            result = solve_bpc_rate(topology, args.rate, limit=args.limit)
            print(f"value: {result.value:.9g}")
    except ValueError as exc:
        raise CommandError(f"-t {args.topology}: {exc}") from None
    print("best_sets:")
    for s in result.best_sets:
        print(f"  {_users(s)}")
    return 0


def _cmd_bounds(args: argparse.Namespace) -> int:
    topology = _load_topology(args.topology)
    try:
        solved = solve_opc(topology, limit=args.limit)
        if args.square is not None:
            report = square_report(
                topology, solved.allocation, args.square, opc_value=solved.value
            )
        else:
            report = small_k_report(
                topology, solved.allocation, opc_value=solved.value
            )
    except ValueError as exc:
        raise CommandError(f"-t {args.topology}: {exc}") from None
    print(f"optimum: {report.opc_value}")
    print(f"witness: {format_allocation(solved.allocation)}")
    print("order: " + " ".join(str(i + 1) for i in report.order))
    for weight, cert in report.weighted_bounds:
        users = " ".join(str(i + 1) for i in cert.ordered_users)
        terms = " ".join(str(t) for t in cert.terms)
        print(f"bound {users} (weight {weight}): terms {terms} = {cert.bound}")
    print(f"aggregate: {report.aggregate}")
    if args.square is not None:
        assert report.bpc_value is not None
        print(f"binary: {report.bpc_value}")
        lhs = args.square * report.opc_value
        rhs = report.weight_total * report.bpc_value
        print(f"chain: {lhs} <= {report.aggregate} <= {rhs}")
        print(f"certificate: {'true' if report.chain_ok else 'false'}")
    else:
        print(f"certificate: {report.ceiling}")
    return 0


def _cmd_ratesim(args: argparse.Namespace) -> int:
    if args.step <= 0:
        raise CommandError(f"--step {args.step}: must be positive")
    if args.pmax < args.pmin:
        raise CommandError(f"--pmax {args.pmax}: smaller than --pmin {args.pmin}")
    try:
        topology = extremal_grid(args.grid)
        allocation = kk_power_allocation(args.grid)
    except ValueError as exc:
        raise CommandError(f"--grid: {exc}") from None
    count = int((args.pmax - args.pmin) / args.step + 1e-9) + 1
    p_list = [args.pmin + i * args.step for i in range(count)]
    points = gain_sweep(topology, allocation, p_list)
    if args.output:
        out = Path(args.output)
        with out.open("w") as stream:
            write_sweep_csv(points, stream)
        figure = out.with_suffix(".png")
        render_sweep_figure(points, str(figure))
        print(f"wrote {out}")
        print(f"wrote {figure}")
    else:
        write_sweep_csv(points, sys.stdout)
    return 0


def _cmd_search(args: argparse.Namespace) -> int:
    threads: Optional[int] = args.threads
    if threads is None:
        env = os.environ.get("TIN_THREADS")
        if env:
            try:
                threads = int(env)
            except ValueError:
                raise CommandError(f"TIN_THREADS {env!r}: not an integer") from None
    step = _fraction_arg("--step", args.step)
    max_strength = _fraction_arg("--max-strength", args.max_strength)
    try:
        report = local_search(
            args.k,
            args.budget,
            step,
            args.seed,
            max_strength=max_strength,
            processes=threads,
        )
    except ValueError as exc:
        raise CommandError(f"search: {exc}") from None
    print(f"best_ratio: {report.best_ratio}")
    print(f"evaluations: {report.evaluations}")
    print(f"seed: {report.seed}")
    print(f"envelope_ok: {'true' if report.envelope_ok else 'false'}")
    print("best_topology:")
    sys.stdout.write(format_topology(report.best_topology))
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tinpower",
        description="Exact power-control analysis for interference networks "
        "treating interference as noise.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a named example topology")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--small", type=int, metavar="K", help="worst-case network, K in 3..6")
    group.add_argument("--grid", type=int, metavar="M", help="tiered grid on M*M users")
    p.add_argument("-o", "--output", metavar="FILE", help="write here instead of stdout")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("eval", help="per-user GDoF of one allocation")
    p.add_argument("-t", "--topology", required=True, metavar="FILE")
    p.add_argument("-r", "--allocation", required=True, metavar="ALLOC",
                   help="entries like '0 -1/2 off'")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("opc", help="exact optimal power control")
    p.add_argument("-t", "--topology", required=True, metavar="FILE")
    p.add_argument("--limit", type=int, default=16, help="enumeration guard")
    p.add_argument("--all-optima", action="store_true",
                   help="also list every support attaining the optimum")
    p.set_defaults(func=_cmd_opc)

    p = sub.add_parser("bpc", help="best on/off pattern")
    p.add_argument("-t", "--topology", required=True, metavar="FILE")
    p.add_argument("--rate", type=float, metavar="P_DB",
                   help="optimize finite-power sum rate at this power instead of GDoF")
    p.add_argument("--limit", type=int, default=16, help="enumeration guard")
    p.set_defaults(func=_cmd_bpc)

    p = sub.add_parser("bounds", help="certificate report from bound families")
    p.add_argument("-t", "--topology", required=True, metavar="FILE")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--small-k", action="store_true",
                       help="fixed family for 2..6 users (default)")
    group.add_argument("--square", type=int, metavar="M",
                       help="square family for M*M users")
    p.add_argument("--limit", type=int, default=16, help="enumeration guard")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("ratesim", help="finite-power gain sweep on a grid network")
    p.add_argument("--grid", type=int, required=True, metavar="M")
    p.add_argument("--pmin", type=float, required=True)
    p.add_argument("--pmax", type=float, required=True)
    p.add_argument("--step", type=float, required=True)
    p.add_argument("-o", "--output", metavar="FILE",
                   help="write CSV here and render a PNG alongside")
    p.set_defaults(func=_cmd_ratesim)

    p = sub.add_parser("search", help="hunt for high-ratio topologies")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--step", default="1/4", help="perturbation size (rational)")
    p.add_argument("--max-strength", default="3", help="strength cap for random starts")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default: TIN_THREADS or serial)")
    p.set_defaults(func=_cmd_search)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CommandError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
