"""Command line front-end: count, analyze, verify, simulate.

Exit status is 0 on success, 1 when a verification or numeric analysis
fails, and 2 for usage, input or validation errors.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import action, codings, counting, regularity
from .graph import GraphFormatError, LabelledGraph, parse_graph


class UsageError(Exception):
    pass


BUILTINS = {
    "free_semigroup": (codings.build_free_semigroup, codings.free_semigroup_oracle),
    "free_group": (codings.build_free_group, codings.free_group_oracle),
    "cyclic": (lambda n: codings.build_finite_group_shortlex(codings.cyclic_group_oracle(n)), codings.cyclic_group_oracle),
    "symmetric": (lambda n: codings.build_finite_group_shortlex(codings.symmetric_group_oracle(n)), codings.symmetric_group_oracle),
}


def _builtin(text: str) -> tuple[str, int]:
    name, _, arg = text.partition(":")
    if name not in BUILTINS or not arg.isdigit() or int(arg) < 1:
        raise UsageError(f"unknown builtin {text!r}; use one of {', '.join(k + ':N' for k in BUILTINS)}")
    return name, int(arg)


def _load_graph(args) -> LabelledGraph:
    if bool(args.graph) == bool(args.builtin):
        raise UsageError("give exactly one of a graph file or --builtin")
    if args.builtin:
        name, k = _builtin(args.builtin)
        return BUILTINS[name][0](k)
    try:
        return parse_graph(Path(args.graph).read_text(encoding="utf-8"))
    except OSError as exc:
        raise UsageError(str(exc)) from None


def _pairs(g: LabelledGraph, specs: Sequence[str]) -> list[tuple[int, int]]:
    out = []
    for spec in specs:
        u, sep, v = spec.partition(",")
        if not sep:
            raise UsageError(f"--pairs expects u,v, got {spec!r}")
        try:
            out.append((g.index(u), g.index(v)))
        except KeyError as exc:
            raise UsageError(str(exc)) from None
    return out


def _write(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _norm_exponent(p: str):
    if p == "inf":
        return math.inf
    try:
        value = float(p)
    except ValueError:
        raise UsageError(f"--p must be a number >= 1 or 'inf', got {p!r}") from None
    if value < 1:
        raise UsageError("--p must be >= 1")
    return value


def cmd_count(args) -> int:
    g = _load_graph(args)
    pairs = _pairs(g, args.pairs)
    if g.start is None and not pairs:
        raise UsageError("no start vertex: sphere sizes need a start, or pass --pairs")
    table = counting.count_table(g, args.nmax)
    _write(counting.count_table_csv(table, pairs), args.out)
    return 0


def cmd_analyze(args) -> int:
    g = _load_graph(args)
    pairs = _pairs(g, args.pairs)
    opts = regularity.RegularityOptions(tol=args.tol)
    targets: list[tuple[str, object]] = []
    if g.start is not None:
        targets.append(("spheres", None))
    if not pairs and g.start is None:
        pairs = [(u, v) for u in range(g.n_vertices) for v in range(g.n_vertices)]
    targets.extend((f"{g.vertices[u]}->{g.vertices[v]}", (u, v)) for u, v in pairs)
    lo, hi = max(args.nmax // 2, 1), max(args.nmax, 2)
    chunks = []
    for i, (name, pair) in enumerate(targets):
        try:
            if pair is None:
                d = regularity.descriptor_of_spheres(g, opts)
            else:
                d = regularity.descriptor_of_pair(g, pair[0], pair[1], opts)
        except (regularity.PerronConvergenceError, regularity.SeriesTruncationError) as exc:
            print(f"error: {name}: {exc}", file=sys.stderr)
            return 1
        report = regularity.validate_descriptor(d, lo, hi)
        chunks.append(regularity.validation_csv(report, name, header=(i == 0)))
    _write("".join(chunks), args.out)
    return 0


def cmd_verify(args) -> int:
    g = _load_graph(args)
    if args.builtin:
        name, k = _builtin(args.builtin)
        oracle = BUILTINS[name][1](k)
    elif args.oracle:
        name, k = _builtin(args.oracle)
        oracle = BUILTINS[name][1](k)
    elif args.group_table:
        oracle = codings.parse_group_table(Path(args.group_table).read_text(encoding="utf-8"))
    else:
        raise UsageError("verify needs --builtin, or a graph with --oracle or --group-table")
    n_max = args.nmax
    if n_max is None:
        if oracle.kind == "finite":
            n_max = max(oracle._distances().values()) + 2
        else:
            n_max = 7
    try:
        report = codings.verify_bijectivity(g, oracle, n_max)
    except counting.PathCapExceeded as exc:
        print(f"enumeration cap exceeded: {exc}", file=sys.stderr)
        return 2
    _write(str(report) + "\n", args.out)
    return 0 if report.passed else 1


def cmd_simulate(args) -> int:
    g = _load_graph(args)
    if g.start is None:
        raise UsageError("no start vertex")
    if not args.out:
        raise UsageError("simulate needs --out for the sphere series file")
    p = _norm_exponent(args.p)
    rng = np.random.default_rng(args.seed)
    if bool(args.action) == bool(args.random_points):
        raise UsageError("give exactly one of --action or --random-points")
    if args.action:
        act = action.load_action(Path(args.action).read_text(encoding="utf-8"), g)
    else:
        inverses = None
        if args.builtin and args.builtin.startswith("free_group:"):
            inverses = codings.free_group_inverses(_builtin(args.builtin)[1])
        act = action.random_action(g.alphabet, args.random_points, rng, inverses)
    phi = rng.uniform(-1.0, 1.0, act.space.size)
    series = action.spherical_averages(act, g, phi, args.Nmax)
    start = min(args.ladder_start, max(args.Nmax // 4, 1))
    report = action.convergence_report(series, act.space, p, args.growth, start)
    probe = action.invariance_probe(series, act, g, args.Nmax)
    out_a = Path(args.out)
    out_b = Path(args.out_ladder) if args.out_ladder else out_a.with_name(out_a.stem + "_ladder.csv")
    out_a.write_text(action.series_csv(series, act.space, p), encoding="utf-8")
    out_b.write_text(action.ladder_csv(report, probe), encoding="utf-8")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="markovcesaro", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, nmax_default=200):
        p.add_argument("graph", nargs="?", help="graph file")
        p.add_argument("--builtin", help="built-in coding, e.g. free_group:2")
        p.add_argument("--nmax", type=int, default=nmax_default)
        p.add_argument("--out", help="output path (stdout if omitted)")

    p = sub.add_parser("count", help="exact sphere and path counts as CSV")
    common(p)
    p.add_argument("--pairs", action="append", default=[], metavar="U,V")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("analyze", help="regularity descriptors with validation")
    common(p)
    p.add_argument("--pairs", action="append", default=[], metavar="U,V")
    p.add_argument("--tol", type=float, default=1e-10)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", help="check a coding against a group oracle")
    common(p, nmax_default=None)
    p.add_argument("--oracle", help="built-in oracle for a graph file, e.g. free_group:2")
    p.add_argument("--group-table", help="finite group table file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Cesaro averages of spherical averages")
    common(p)
    p.add_argument("--action", help="action file")
    p.add_argument("--random-points", type=int, help="seeded random action on this many uniform points")
    p.add_argument("--Nmax", type=int, default=4096)
    p.add_argument("--p", default="1")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--growth", type=float, default=2.0)
    p.add_argument("--ladder-start", type=int, default=16)
    p.add_argument("--out-ladder", help="ladder CSV path (default: <out stem>_ladder.csv)")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, GraphFormatError, action.ActionError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
