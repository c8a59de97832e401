"""Command-line entry point.

Exit status: 0 on success, 1 when a check or verification fails, 2 on usage
or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from . import line as linelab
from .errors import ChipFiringError, ParseError
from .firing import FiringSystem, stabilize
from .notation import emit_poset, format_config, format_moves, parse_config, parse_graph
from .order import is_distributive, is_lattice, is_uld, join_irreducibles
from .posets import (
    brute_force_move_order,
    build_config_poset,
    build_move_poset,
    strict_order,
    verify_join_theorem,
)


class UsageError(Exception):
    pass


def _add_game_args(p: argparse.ArgumentParser) -> None:
    where = p.add_mutually_exclusive_group(required=True)
    where.add_argument("--line", action="store_true", help="chips on the integer line")
    where.add_argument("--graph", metavar="FILE", help="multigraph file (graph/edge/sink lines)")
    p.add_argument("--config", required=True, metavar="TEXT",
                   help="initial configuration, compact (10_3_01) or sparse (0:5)")


def _load_game(args):
    if args.line:
        system = FiringSystem.line()
        cfg = parse_config(args.config, "line")
    else:
        try:
            with open(args.graph) as fh:
                text = fh.read()
        except OSError as exc:
            raise UsageError(f"cannot read graph file: {exc}") from None
        system = parse_graph(text)
        cfg = parse_config(args.config, "graph")
        try:
            system.validate(cfg)
        except ValueError as exc:
            raise ParseError(str(exc)) from None
    return system, cfg


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def cmd_stabilize(args, out) -> int:
    system, cfg = _load_game(args)
    final, odo = stabilize(system, cfg, policy=args.policy, step_cap=args.step_cap, seed=args.seed)
    print(f"final: {format_config(final, system)}", file=out)
    print(f"odometer: {format_moves(odo)}", file=out)
    print(f"moves: {odo.moves}", file=out)
    return 0


def cmd_config_poset(args, out) -> int:
    system, cfg = _load_game(args)
    cp = build_config_poset(system, cfg, state_cap=args.state_cap)
    label = lambda x: format_config(x, system)  # noqa: E731
    out.write(emit_poset(cp.poset, args.format, label=label, rank=cp.depth, name="configurations"))
    print(f"configurations: {len(cp)}, covers: {len(cp.poset.covers)}", file=sys.stderr)
    return 0


def cmd_move_poset(args, out) -> int:
    system, cfg = _load_game(args)
    mp = build_move_poset(system, cfg, state_cap=args.state_cap)
    out.write(emit_poset(mp.poset, args.format, name="moves"))
    print(f"moves: {len(mp)}, covers: {len(mp.poset.covers)}", file=sys.stderr)
    if args.oracle:
        oracle = brute_force_move_order(system, cfg)
        built = strict_order(mp.poset)
        if oracle == built:
            print("oracle: agree", file=sys.stderr)
            return 0
        for a, b in sorted(oracle - built):
            print(f"oracle only: {a} > {b}", file=sys.stderr)
        for a, b in sorted(built - oracle):
            print(f"builder only: {a} > {b}", file=sys.stderr)
        print("oracle: DISAGREE", file=sys.stderr)
        return 1
    return 0


def cmd_join_irreducibles(args, out) -> int:
    system, cfg = _load_game(args)
    cp = build_config_poset(system, cfg, state_cap=args.state_cap)
    irr = sorted(join_irreducibles(cp.poset), key=lambda x: (cp.depth(x), format_config(x, system)))
    for x in irr:
        print(format_config(x, system), file=out)
    print(f"join-irreducibles: {len(irr)}", file=sys.stderr)
    return 0


def cmd_check(args, out) -> int:
    system, cfg = _load_game(args)
    cp = build_config_poset(system, cfg, state_cap=args.state_cap)
    name = lambda x: format_config(x, system)  # noqa: E731
    status = 0
    if args.lattice:
        ok, pair = is_lattice(cp.poset)
        print(f"lattice: {_bool(ok)}", file=out)
        if not ok:
            print(f"witness: {name(pair[0])} {name(pair[1])}", file=out)
            status = 1
    if args.distributive:
        ok, triple = is_distributive(cp.poset)
        print(f"distributive: {_bool(ok)}", file=out)
        if not ok:
            print("witness: x={} y={} z={}".format(*map(name, triple)), file=out)
            status = 1
    if args.uld:
        ok, elem = is_uld(cp.poset, orientation=args.uld_orientation)
        print(f"uld: {_bool(ok)}", file=out)
        if not ok:
            print(f"witness: {name(elem)}", file=out)
            status = 1
    return status


def cmd_verify(args, out) -> int:
    if args.what == "join-theorem":
        if args.config is None or not (args.line or args.graph):
            raise UsageError("verify join-theorem needs --line or --graph FILE and --config")
        system, cfg = _load_game(args)
        report = verify_join_theorem(system, cfg, state_cap=args.state_cap)
        for text in report.lines():
            print(text, file=out)
        return 0 if report.passed else 1
    if args.m_max is None:
        raise UsageError("verify endgame needs --m-max")
    reports = linelab.verify_endgame_lattice(args.m_max)
    for r in reports:
        for text in r.lines():
            print(text, file=out)
    passed = all(r.passed for r in reports)
    print(f"endgame: {'pass' if passed else 'FAIL'}", file=out)
    return 0 if passed else 1


def cmd_repro(args, out) -> int:
    if args.what == "counterexample":
        t = linelab.reproduce_counterexample(args.n)
        for text in t.lines():
            print(text, file=out)
        return 0 if t.fails_distributivity else 1
    t = linelab.invalid_extension_demo(args.n)
    for text in t.lines():
        print(text, file=out)
    return 0 if t.passed else 1


def cmd_labeled_run(args, out) -> int:
    run = linelab.labeled_fire_run(args.n, args.seed)
    for site, labels in run.sites.items():
        print(f"{site}: {' '.join(map(str, labels))}", file=out)
    print(f"sorted: {_bool(run.is_sorted())}", file=out)
    return 0 if run.is_sorted() else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chipfire", description="Chip-firing posets and lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("stabilize", help="fire to completion; print final config and odometer")
    _add_game_args(p)
    p.add_argument("--policy", choices=["lowest", "highest", "random"], default="lowest")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--step-cap", type=int, default=10**6)
    p.set_defaults(func=cmd_stabilize)

    def poset_cmd(name, func, help_, fmt=True):
        p = sub.add_parser(name, help=help_)
        _add_game_args(p)
        p.add_argument("--state-cap", type=int, default=10**6)
        if fmt:
            p.add_argument("--format", choices=["text", "dot", "tikz"], default="text")
        p.set_defaults(func=func)
        return p

    poset_cmd("config-poset", cmd_config_poset, "emit the configuration poset")
    mp = poset_cmd("move-poset", cmd_move_poset, "emit the move poset")
    mp.add_argument("--oracle", action="store_true", help="also diff against full sequence enumeration")
    poset_cmd("join-irreducibles", cmd_join_irreducibles, "list configurations with one available move",
              fmt=False)

    chk = poset_cmd("check", cmd_check, "lattice / distributivity / ULD verdicts", fmt=False)
    chk.add_argument("--lattice", action="store_true")
    chk.add_argument("--distributive", action="store_true")
    chk.add_argument("--uld", action="store_true")
    chk.add_argument("--uld-orientation", choices=["lower", "upper"], default="lower")

    v = sub.add_parser("verify", help="run a verification report")
    v.add_argument("what", choices=["join-theorem", "endgame"])
    where = v.add_mutually_exclusive_group()
    where.add_argument("--line", action="store_true")
    where.add_argument("--graph", metavar="FILE")
    v.add_argument("--config", metavar="TEXT")
    v.add_argument("--state-cap", type=int, default=10**6)
    v.add_argument("--m-max", type=int)
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("repro", help="reproduce a counterexample transcript")
    r.add_argument("what", choices=["counterexample", "invalid-extension"])
    r.add_argument("--n", type=int, required=True, choices=[5, 8])
    r.set_defaults(func=cmd_repro)

    lab = sub.add_parser("labeled-run", help="seeded labeled chip-firing from the origin")
    lab.add_argument("--n", type=int, required=True)
    lab.add_argument("--seed", type=int, default=0)
    lab.set_defaults(func=cmd_labeled_run)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "check" and not (args.lattice or args.distributive or args.uld):
            raise UsageError("check needs at least one of --lattice, --distributive, --uld")
        return args.func(args, out)
    except (UsageError, ParseError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        print(f"chipfire: error: {exc}", file=sys.stderr)
        return 2
    except ChipFiringError as exc:
        print(f"chipfire: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
