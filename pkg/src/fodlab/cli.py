"""Command-line front end."""
from __future__ import annotations

import argparse
import json
import os
import sys

from .harness import ALL, MUTANTS, UnknownSuite, default_params, run
from .lens import reverse_section_R
from .linearity import Trivialization, TrivializationError, failing_square, is_linear_map
from .poly import CompositionError, PolyMap
from .rdc2cdc import rdc_to_cdc, rdc_to_cdc_closed
from .simple import ObjectMismatch, forward_section_D
from .syntax import ParseError, format_map, parse_map, parse_matrix


def _map(text: str) -> PolyMap:
    return parse_map(text)


def cmd_fwd(args) -> int:
    d = forward_section_D(_map(args.map))
    print(f"base: {format_map(d.base)}")
    print(f"fib:  {format_map(d.fib)}")
    return 0


def cmd_rev(args) -> int:
    r = reverse_section_R(_map(args.map))
    print(f"base: {format_map(r.base)}")
    print(f"fib:  {format_map(r.fib)}")
    return 0


def cmd_rdc2cdc(args) -> int:
    f = _map(args.map)
    pipeline = rdc_to_cdc(f)
    print(f"pipeline: {format_map(pipeline.fib)}")
    if not args.verify:
        return 0
    closed = rdc_to_cdc_closed(f)
    direct = forward_section_D(f)
    print(f"closed:   {format_map(closed.fib)}")
    print(f"direct:   {format_map(direct.fib)}")
    ok = pipeline == closed == direct
    print("equal" if ok else "NOT equal")
    return 0 if ok else 1


def _triv(text: str | None, n: int) -> Trivialization:
    if text is None:
        return Trivialization.identity(n)
    return Trivialization.from_matrix(parse_matrix(text))


def cmd_linearity(args) -> int:
    f = _map(args.map)
    tA, tB = _triv(args.triv_a, f.dom), _triv(args.triv_b, f.cod)
    if is_linear_map(f, tA, tB):
        print("linear")
        return 0
    lhs, rhs = failing_square(f, tA, tB)
    print("not linear")
    print(f"tB∘τf:     {format_map(lhs)}")
    print(f"(f×f)∘tA:  {format_map(rhs)}")
    return 0


def _params(args, suite_id: str):
    p = default_params(suite_id)
    overrides = {k: getattr(args, k) for k in ("trials", "max_dim", "max_degree", "max_terms", "coeff_bound")
                 if getattr(args, k) is not None}
    seed = os.environ.get("FODLAB_SEED")
    if seed is not None:
        overrides["seed"] = int(seed)
    elif args.seed is not None:
        overrides["seed"] = args.seed
    return p.with_(**overrides)


def cmd_check(args) -> int:
    ids = ALL if args.suite == "all" else [args.suite]
    reports = [run(s, _params(args, s)) for s in ids]
    passed = all(r.passed for r in reports)
    if args.format == "json":
        doc = {"passed": passed, "suites": [r.to_dict(timing=args.timing) for r in reports]}
        print(json.dumps(doc, indent=2, ensure_ascii=False))
    else:
        for r in reports:
            print(r.to_text())
            if args.timing:
                print(f"{r.suite}: {r.wall_time:.3f}s")
    return 0 if passed else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fodlab", description="Exact checks of first-order differential structure.")
    sub = ap.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("fwd", cmd_fwd, "forward derivative (f, δf)"),
                            ("rev", cmd_rev, "reverse derivative (f, ρf)")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--map", required=True, help="map literal, e.g. '[x0^2] : 1 -> 1'")
        p.set_defaults(func=fn)

    p = sub.add_parser("rdc2cdc", help="forward derivative recovered from the reverse one")
    p.add_argument("--map", required=True)
    p.add_argument("--verify", action="store_true", help="compare with the closed form and the Jacobian")
    p.set_defaults(func=cmd_rdc2cdc)

    p = sub.add_parser("linearity", help="decide linearity under trivializations")
    p.add_argument("--map", required=True)
    p.add_argument("--triv-a", help="domain matrix, rows split by ';', entries by ','")
    p.add_argument("--triv-b", help="codomain matrix")
    p.set_defaults(func=cmd_linearity)

    p = sub.add_parser("check", help="run axiom suites")
    p.add_argument("--suite", required=True, help=f"one of {', '.join(ALL + ['all'] + list(MUTANTS))}")
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--max-dim", type=int)
    p.add_argument("--max-degree", type=int)
    p.add_argument("--max-terms", type=int)
    p.add_argument("--coeff-bound", type=int)
    p.add_argument("--format", choices=["json", "text"], default="text")
    p.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte-identity)")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UnknownSuite as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ValueError, ObjectMismatch, CompositionError, TrivializationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
