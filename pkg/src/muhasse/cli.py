"""Command-line front end.

    muhasse canonical --ell 3 --a 1 --b 2 > M.txt
    muhasse polygon --module M.txt
    muhasse hasse --module - < M.txt
    muhasse census-random --ell 3 --a 1 --b 2 --count 1000 --jobs 2
    muhasse census-exhaustive --ell 2 --a 1 --b 2
    muhasse rigidity --max-height 10

Exit status: 0 if everything checked passes, 1 if a verdict fails, 2 for
usage and input errors.
"""
from __future__ import annotations

import argparse
import sys

from .census import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    rigidity_candidates,
    run_exhaustive_bt1,
    run_random_census,
)
from .dieudonne import (
    ModuleFormatError,
    PelParams,
    canonical_mu_ordinary,
    format_module,
    hodge,
    parse_module,
    validate,
)
from .hasse import ell_rank, mu_hasse
from .newton import PrecisionError, mu_ordinary_polygon, newton_polygon

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

_PARAM_KEYS = ("ell", "a", "b", "r", "k", "N")


class UsageError(Exception):
    pass


def _add_params(p: argparse.ArgumentParser) -> None:
    p.add_argument("--ell", type=int)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--N", type=int, help="Witt precision (default 4k(a+b)r + 1)")
    p.add_argument("--allow-a-eq-b", action="store_true",
                   help="admit degenerate signatures a == b and a == 0")


def _add_format(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("text", "csv"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="muhasse", allow_abbrev=False,
        description="mu-ordinary Hasse invariant on unitary Dieudonne modules")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("canonical", allow_abbrev=False,
                       help="print the canonical mu-ordinary module")
    _add_params(p)

    p = sub.add_parser("polygon", allow_abbrev=False,
                       help="Newton polygon of a module, or N^ord from parameters")
    _add_params(p)
    _add_format(p)
    p.add_argument("--module", metavar="FILE", help="module file, '-' for stdin")

    p = sub.add_parser("hasse", allow_abbrev=False,
                       help="Hasse invariant, l-rank and Newton polygon of a module")
    _add_params(p)
    p.add_argument("--module", metavar="FILE", required=True)

    p = sub.add_parser("census-random", allow_abbrev=False,
                       help="check the equivalences on seeded random modules")
    _add_params(p)
    _add_format(p)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("census-exhaustive", allow_abbrev=False,
                       help="check every mod-l module of the signature")
    _add_params(p)
    _add_format(p)
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--jobs", type=int, default=1)

    p = sub.add_parser("rigidity", allow_abbrev=False,
                       help="N^ord is the only admissible polygon with maximal slope-0 part")
    _add_params(p)
    p.add_argument("--max-height", type=int, default=20)
    return parser


def _params(args, need_ell: bool = True) -> PelParams:
    if args.a is None or args.b is None or (need_ell and args.ell is None):
        raise UsageError("--ell, --a and --b are required" if need_ell else "--a and --b are required")
    try:
        return PelParams(args.ell if args.ell is not None else 2, args.a, args.b,
                         args.r or 1, args.k or 1, args.N, allow_degenerate=args.allow_a_eq_b)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _load_module(args):
    try:
        if args.module == "-":
            text = sys.stdin.read()
        else:
            with open(args.module, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read module: {exc}") from None
    try:
        M = parse_module(text, allow_degenerate=args.allow_a_eq_b)
    except ModuleFormatError as exc:
        raise UsageError(f"{args.module}: {exc}") from None
    except ValueError as exc:
        raise UsageError(f"{args.module}: {exc}") from None
    for key in _PARAM_KEYS:
        given = getattr(args, key)
        if given is not None and given != getattr(M.params, key):
            raise UsageError(f"--{key}={given} conflicts with {key}={getattr(M.params, key)} in the module")
    problems = validate(M)
    if problems:
        raise UsageError("invalid module:\n  " + "\n  ".join(problems))
    return M


def cmd_canonical(args, out) -> int:
    out.write(format_module(canonical_mu_ordinary(_params(args))))
    return EXIT_OK


def cmd_polygon(args, out) -> int:
    if args.module:
        M = _load_module(args)
        poly, nord = newton_polygon(M), mu_ordinary_polygon(M.params)
    else:
        poly = nord = mu_ordinary_polygon(_params(args, need_ell=False))
    if args.format == "csv":
        out.write("slope,multiplicity\n" + poly.to_csv())
    else:
        out.write(f"newton_polygon: {poly}\n")
        out.write(f"mu_ordinary: {str(poly == nord).lower()}\n")
    return EXIT_OK


def cmd_hasse(args, out) -> int:
    M = _load_module(args)
    H = hodge(M)
    h = mu_hasse(H)
    out.write(f"mu_hasse_nonzero: {str(h.nonvanishing).lower()}\n")
    out.write(f"mu_hasse_value: {h.value}\n")
    out.write(f"basis_tag: {h.basis_tag}\n")
    out.write(f"ell_rank: {ell_rank(H)}\n")
    out.write(f"newton_polygon: {newton_polygon(M)}\n")
    return EXIT_OK


def _emit_report(report, fmt: str, out) -> int:
    if fmt == "csv":
        out.write(report.to_csv())
        for rec, text in report.failures:
            sys.stderr.write(f"# counterexample, sample {rec.sample}: {' '.join(rec.failed_checks)}\n{text}")
    else:
        out.write(report.to_text())
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_census_random(args, out) -> int:
    if args.count < 1 or args.jobs < 1:
        raise UsageError("--count and --jobs must be >= 1")
    report = run_random_census(_params(args), args.count, args.seed, args.jobs)
    return _emit_report(report, args.format, out)


def cmd_census_exhaustive(args, out) -> int:
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    if args.N not in (None, 1):
        raise UsageError("census-exhaustive works mod l; --N must be 1 or omitted")
    report = run_exhaustive_bt1(_params(args), args.budget, args.jobs)
    return _emit_report(report, args.format, out)


def _signatures_up_to(max_height: int, allow_degenerate: bool):
    for half in range(1, max_height // 2 + 1):
        for r in range(1, half + 1):
            if half % r:
                continue
            s = half // r
            for a in range(0 if allow_degenerate else 1, s // 2 + 1):
                b = s - a
                if a < b or allow_degenerate:
                    yield PelParams(2, a, b, r, N=1, allow_degenerate=allow_degenerate)


def cmd_rigidity(args, out) -> int:
    if args.a is None and args.b is None:
        cases = list(_signatures_up_to(args.max_height, args.allow_a_eq_b))
    else:
        cases = [_params(args, need_ell=False)]
    ok = True
    for p in cases:
        cands = rigidity_candidates(p, args.max_height)
        rigid = cands == [mu_ordinary_polygon(p)]
        ok &= rigid
        out.write(f"rigid[a={p.a} b={p.b} r={p.r} height={p.height}]: {str(rigid).lower()}\n")
        if not rigid:
            out.write("  candidates: " + " ".join(str(c) for c in cands) + "\n")
    out.write(f"verdict: {'pass' if ok else 'FAIL'}\n")
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "canonical": cmd_canonical,
    "polygon": cmd_polygon,
    "hasse": cmd_hasse,
    "census-random": cmd_census_random,
    "census-exhaustive": cmd_census_exhaustive,
    "rigidity": cmd_rigidity,
}


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args, out)
    except (UsageError, BudgetExceeded, PrecisionError) as exc:
        sys.stderr.write(f"muhasse {args.command}: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
