"""
Command-line front end.

Exit status: 0 success, 1 domain error, 2 usage error, 3 enumeration limit.
The cache directory comes from --cache, else $PATTERN_FORGE_CACHE, else
~/.cache/pattern_forge.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .enumeration import (
    DEFAULT_LIMIT, SequenceTable, bound_report, build_table, check_limit,
    enumerate_fixed, k_r_formula, scan,
)
from .errors import DomainError, InvalidPermutation, LimitExceeded
from .injection import phi, psi, type_profile, verify_injection
from .perm import (
    Permutation, Word, count_321, occurrences_321, parse_entries, pattern_type,
    reduce,
)
from .series import (
    CoefficientSeries, catalan_series, closed_form_s, export_csv, partial_sum_at,
)

CACHE_ENV = "PATTERN_FORGE_CACHE"

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE, EXIT_LIMIT = 0, 1, 2, 3


class UsageError(Exception):
    pass


def cache_dir(flag: str | None) -> Path:
    if flag:
        return Path(flag)
    if os.environ.get(CACHE_ENV):
        return Path(os.environ[CACHE_ENV])
    return Path.home() / ".cache" / "pattern_forge"


def _perm(text: str) -> Permutation:
    return Permutation.parse(text)


def _fmt(p, args) -> str:
    return p.format(compact=args.compact)


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def cmd_reduce(args):
    values = parse_entries(args.word)
    word = Word(values, args.universe) if args.universe else Word.of(values)
    result = reduce(word)
    _emit(args, {"word": str(word), "reduced": str(result)}, _fmt(result, args))


def cmd_count(args):
    p = _perm(args.perm)
    count = count_321(p)
    if args.list:
        occ = [[o.a + 1, o.b + 1, o.c + 1] for o in occurrences_321(p)]
        lines = [str(count)] + [
            f"positions={a},{b},{c} values={p[a - 1]},{p[b - 1]},{p[c - 1]}" for a, b, c in occ]
        _emit(args, {"count": count, "occurrences": occ}, "\n".join(lines))
    else:
        _emit(args, {"count": count}, str(count))


def cmd_type(args):
    p = _perm(args.perm)
    q = pattern_type(p)
    _emit(args, {"type": str(q), "count": count_321(p)}, _fmt(q, args))


def cmd_profile(args):
    prof = type_profile(_perm(args.type))
    data = {"type": str(prof.q), "b1": prof.b1_value, "position": prof.b1_position + 1,
            "i": prof.i, "j": prof.j, "s": prof.s, "t": prof.t, "r": prof.r}
    text = (f"type={_fmt(prof.q, args)} b1={prof.b1_value} position={prof.b1_position + 1} "
            f"i={prof.i} j={prof.j} s={prof.s} t={prof.t} r={prof.r}")
    _emit(args, data, text)


def cmd_inject(args):
    image = phi(_perm(args.perm))
    prof = type_profile(image.q)
    data = {"left": str(image.left), "right": str(image.right), "type": str(image.q),
            "n": image.n, "k": image.k, "i": prof.i, "j": prof.j, "s": prof.s, "t": prof.t}
    text = (f"left={_fmt(image.left, args)} right={_fmt(image.right, args)} "
            f"q={_fmt(image.q, args)} n={image.n} k={image.k} "
            f"i={prof.i} j={prof.j} s={prof.s} t={prof.t}")
    _emit(args, data, text)


def _parse_inject_line(line: str) -> dict[str, str]:
    line = line.strip()
    if line.startswith("{"):
        data = json.loads(line)
        return {"left": data["left"], "right": data["right"], "type": data["type"]}
    fields = dict(item.split("=", 1) for item in line.split() if "=" in item)
    if "q" in fields:
        fields["type"] = fields.pop("q")
    return fields


def cmd_invert(args):
    fields = {"left": args.left, "right": args.right, "type": args.type}
    if None in fields.values():
        line = sys.stdin.readline()
        piped = _parse_inject_line(line) if line.strip() else {}
        fields = {key: value if value is not None else piped.get(key)
                  for key, value in fields.items()}
    missing = [key for key, value in fields.items() if value is None]
    if missing:
        raise UsageError(f"invert needs --{' --'.join(missing)} (or an inject line on stdin)")
    p = psi(_perm(fields["left"]), _perm(fields["right"]), _perm(fields["type"]))
    _emit(args, {"perm": str(p)}, _fmt(p, args))


def cmd_enumerate(args):
    check_limit(args.n, args.limit, args.force)
    if args.r is None:
        result = scan(args.n, jobs=args.jobs, limit=args.limit, force=args.force)
        rows = [{"n": args.n, "r": r, "count": c} for r, c in result.counts.items()]
        _emit(args, {"rows": rows},
              "\n".join(f"n={row['n']} r={row['r']} count={row['count']}" for row in rows))
        return
    perms = enumerate_fixed(args.n, args.r, limit=args.limit, force=args.force, jobs=args.jobs)
    if args.list:
        _emit(args, {"n": args.n, "r": args.r, "count": len(perms),
                     "perms": [str(p) for p in perms]},
              "\n".join(_fmt(p, args) for p in perms))
    else:
        _emit(args, {"n": args.n, "r": args.r, "count": len(perms)},
              f"n={args.n} r={args.r} count={len(perms)}")


def cmd_verify(args):
    check_limit(args.n, args.limit, args.force)
    if args.r is None:
        counts = scan(args.n, jobs=args.jobs, limit=args.limit, force=args.force).counts
        rs = [r for r in counts if r >= 1]
    else:
        rs = [args.r]
    reports = [verify_injection(args.n, r, jobs=args.jobs, limit=args.limit, force=args.force)
               for r in rs]
    if args.json:
        print(json.dumps([rep.to_dict() for rep in reports], sort_keys=True))
    else:
        sys.stdout.write("".join(rep.to_text() for rep in reports))
    if any(not rep.ok for rep in reports):
        return EXIT_DOMAIN


def cmd_bounds(args):
    report = bound_report(args.r, args.n_max, jobs=args.jobs, limit=args.limit, force=args.force)
    data = report.to_dict()
    text = report.to_text().rstrip("\n")
    if args.K is not None:
        upper = report.upper_ok(args.K)
        data["K"] = args.K
        data["k_r"] = k_r_formula(args.r, args.K)
        data["upper_ok"] = all(upper.values())
        text += f"\nK={args.K} k_r={data['k_r']} upper_ok={str(data['upper_ok']).lower()}"
    _emit(args, data, text)


def _series(args, r: int, terms: int) -> CoefficientSeries:
    if r == 0:
        return catalan_series(terms)
    check_limit(terms, args.limit, args.force)
    coeffs = [scan(n, jobs=args.jobs, limit=args.limit, force=args.force).counts.get(r, 0)
              for n in range(terms + 1)]
    return CoefficientSeries(r, tuple(coeffs))


def cmd_gf(args):
    if args.action == "closed":
        value = closed_form_s(args.z)
        _emit(args, {"z": args.z, "s": value}, repr(value))
    elif args.action == "sum":
        terms = args.terms if args.terms is not None else (2000 if args.r == 0 else DEFAULT_LIMIT)
        value = partial_sum_at(_series(args, args.r, terms), args.z, terms)
        _emit(args, {"r": args.r, "z": args.z, "terms": terms, "partial_sum": value}, repr(value))
    else:
        terms = args.terms if args.terms is not None else DEFAULT_LIMIT
        sys.stdout.write(export_csv(_series(args, args.r, terms)))


def cmd_table(args):
    directory = cache_dir(args.cache)
    table = None
    if not args.rebuild:
        try:
            table = SequenceTable.load(directory)
        except FileNotFoundError:
            table = None
        if table is not None and (table.limit < args.limit or table.type_limit < min(args.types, args.limit)):
            table = None
    if table is None:
        table = build_table(args.limit, type_limit=args.types, jobs=args.jobs, force=args.force)
        path = table.save(directory)
        logging.getLogger(__name__).info("wrote %s", path)
    sys.stdout.write(table.to_text())


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--compact", action="store_true",
                        help="print permutations without commas when n <= 9")
    common.add_argument("--jobs", type=int, default=1, help="worker processes")
    common.add_argument("--limit", type=int, default=DEFAULT_LIMIT, help="enumeration limit")
    common.add_argument("--force", action="store_true", help="allow n above the limit")
    common.add_argument("--cache", help=f"cache directory (default ${CACHE_ENV})")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(
        prog="pattern-forge",
        description="Permutations with a fixed number of 321 patterns.")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("reduce", parents=[common], help="flatten a word to a permutation")
    p.add_argument("word")
    p.add_argument("--universe", type=int, help="ambient maximum value N")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("count", parents=[common], help="count 321 occurrences")
    p.add_argument("perm")
    p.add_argument("--list", action="store_true", help="also list occurrences (1-based)")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("type", parents=[common], help="type of a permutation")
    p.add_argument("perm")
    p.set_defaults(func=cmd_type)

    p = sub.add_parser("profile", parents=[common], help="b1, i, j, s, t of a type")
    p.add_argument("type")
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("inject", parents=[common], help="apply the injection")
    p.add_argument("perm")
    p.set_defaults(func=cmd_inject)

    p = sub.add_parser("invert", parents=[common],
                       help="rebuild p from its image (flags or an inject line on stdin)")
    p.add_argument("--left")
    p.add_argument("--right")
    p.add_argument("--type")
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("enumerate", parents=[common], help="enumerate S_{n,r}(321)")
    p.add_argument("n", type=int)
    p.add_argument("--r", type=int, help="occurrence count (default: all, counts only)")
    p.add_argument("--list", action="store_true", help="list the permutations")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", parents=[common], help="exhaustively check the injection")
    p.add_argument("n", type=int)
    p.add_argument("--r", type=int, help="occurrence count (default: every r >= 1)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="ratios to the Catalan numbers")
    p.add_argument("r", type=int)
    p.add_argument("n_max", type=int)
    p.add_argument("--K", type=int, help="also check the upper bound with this K")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("gf", parents=[common], help="generating-function diagnostics")
    p.add_argument("action", choices=["closed", "sum", "growth"])
    p.add_argument("--r", type=int, default=0)
    p.add_argument("--z", type=float, default=0.25)
    p.add_argument("--terms", type=int, help="highest power summed / tabulated")
    p.set_defaults(func=cmd_gf)

    p = sub.add_parser("table", parents=[common], help="build or show the cached sequence table")
    p.add_argument("--types", type=int, default=8, help="per-type rows up to this n")
    p.add_argument("--rebuild", action="store_true")
    p.set_defaults(func=cmd_table)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        status = args.func(args)
    except LimitExceeded as exc:
        print(f"error: {exc} (use --force to override)", file=sys.stderr)
        return EXIT_LIMIT
    except (InvalidPermutation, UsageError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return status or EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
