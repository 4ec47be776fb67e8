"""Command line front end: ``apz table|constant|host|sequences|hybrid|cache``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

import mpmath

from . import hybrids, pzeta, sequences
from .constants import DEFAULT_M, RationalProductSpec, check_family, constant, host_constant, host_product
from .errors import ConvergenceError, DomainError, SpecError
from .mpcore import IntPolynomial, PrecisionContext

__all__ = ["OutputRecord", "RECORD_SCHEMA", "run", "main", "truncate_decimal", "cache_path"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONVERGENCE = 0, 1, 2, 3
CSV_COLUMNS = ("family", "k", "r_or_s", "digits", "value", "error_bound", "method")

TABLE_FAMILIES = {
    "ratio": None,
    "zetak": None,
    "artin": "A",
    "twin": "T",
    "quad": "Q",
    "feller": "F",
    "hl": "C",
}
FAMILY_ALIASES = {"artin": "A", "twin": "T", "quad": "Q", "feller": "F", "hl": "C"}
_HOST_ROWS = {"artin", "quad", "feller"}

RECORD_SCHEMA = {
    "type": "object",
    "required": ["records"],
    "properties": {
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": list(CSV_COLUMNS),
                "additionalProperties": False,
                "properties": {
                    "family": {"type": "string"},
                    "k": {"oneOf": [{"type": "integer", "minimum": 1}, {"const": "host"}]},
                    "r_or_s": {"type": "integer"},
                    "digits": {"type": "integer", "minimum": 10},
                    "value": {"type": "string", "pattern": "^-?[0-9]+\\.[0-9]+$"},
                    "error_bound": {"type": "string"},
                    "method": {"type": "string"},
                },
            },
        }
    },
}


@dataclass
class OutputRecord:
    family: str
    k: int | str
    r_or_s: int
    digits: int
    value: str
    error_bound: str
    method: str


def truncate_decimal(x, digits: int) -> str:
    """x written with exactly ``digits`` decimals, truncated toward zero.

    x is first rounded 8 places past the cut so that a value carrying only
    working-precision noise (0.3999...9 for 2/5) truncates as intended.
    """
    with mpmath.workdps(digits + 30):
        x = mpmath.mpf(x)
        sign = "-" if x < 0 else ""
        scaled = int(mpmath.nint(abs(x) * mpmath.mpf(10) ** (digits + 8))) // 10**8
    whole, frac = divmod(scaled, 10**digits)
    return f"{sign}{whole}.{frac:0{digits}d}"


def _bound_text(e) -> str:
    if e == 0:
        return "0"
    return mpmath.nstr(mpmath.mpf(e), 3, min_fixed=1, max_fixed=0)


def cache_path() -> Path:
    base = os.environ.get("APZ_CACHE_DIR")
    root = Path(base) if base else Path.home() / ".cache" / "apz"
    return root / pzeta.CACHE_FILENAME


# ---------------------------------------------------------------------------
# argument parsing


def _range(text: str) -> list[int]:
    """``"3"`` or ``"1..4"``."""
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or a range like 1..4, got {text!r}") from None
    if hi < lo:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _digits(text: str) -> int:
    d = int(text)
    if d < 10:
        raise argparse.ArgumentTypeError("digits must be at least 10")
    return d


def _family(text: str) -> str:
    fam = FAMILY_ALIASES.get(text, text)
    if fam not in ("A", "T", "Q", "F", "C"):
        raise argparse.ArgumentTypeError(f"unknown family {text!r}")
    return fam


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="apz", description="Almost-prime zeta functions and Hardy-Littlewood type constants.")
    p.add_argument("--no-cache", action="store_true", help="do not read or write the zeta cache file")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    t = sub.add_parser("table", help="regenerate a table grid")
    t.add_argument("--family", required=True, choices=sorted(TABLE_FAMILIES))
    t.add_argument("--k", type=_range, default=None, help="k or K1..K2")
    t.add_argument("--r", "--s", "-s", dest="rs", type=_range, default=None, help="r (or s) or R1..R2")
    t.add_argument("--digits", type=_digits, default=50)
    t.add_argument("--format", choices=("plain", "csv", "json"), default="plain")
    t.add_argument("--M", type=int, default=DEFAULT_M, help="acceleration cutoff")
    t.add_argument("--jobs", type=int, default=1, help="worker processes for grid cells")
    t.add_argument("--no-host", action="store_true", help="omit rows for the product over all integers")

    c = sub.add_parser("constant", help="one constant")
    c.add_argument("--family", required=True, type=_family)
    c.add_argument("--k", type=int, default=None, help="omit for the product over all integers")
    c.add_argument("--r", type=int, required=True)
    c.add_argument("--digits", type=_digits, default=50)
    c.add_argument("--method", choices=("pk", "zeta-basis", "host"), default="pk")
    c.add_argument("--M", type=int, default=DEFAULT_M)
    c.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    h = sub.add_parser("host", help="product over all integers via Gamma functions")
    h.add_argument("--family", type=_family)
    h.add_argument("--r", type=int)
    h.add_argument("--num", help='numerator polynomial in n, e.g. "n^2-1"')
    h.add_argument("--den", help="denominator polynomial in n")
    h.add_argument("--start", type=int, default=2)
    h.add_argument("--exclude", type=int, nargs="*", default=[])
    h.add_argument("--digits", type=_digits, default=50)
    h.add_argument("--format", choices=("plain", "csv", "json"), default="plain")

    s = sub.add_parser("sequences", help="dump an integer sequence as CSV")
    s.add_argument("--family", required=True,
                   choices=("a", "t", "q", "c", "gammaA", "gammaT", "gammaQ", "gammaF", "gammaC"))
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--max", type=int, default=20)

    hy = sub.add_parser("hybrid", help="hybrid product identities")
    hsub = hy.add_subparsers(dest="action", required=True, parser_class=_Parser)
    v = hsub.add_parser("verify", help="verify catalog entries")
    v.add_argument("--id", dest="ident")
    v.add_argument("--k", type=_range, default=[1, 2, 3])
    v.add_argument("--digits", type=_digits, default=40)
    v.add_argument("--tol", type=float, default=None, help="default 10^-digits")
    v.add_argument("--s-max", type=int, default=4)
    v.add_argument("--l-max", type=int, default=2)
    hsub.add_parser("list", help="list catalog ids")

    ca = sub.add_parser("cache", help="inspect or clear the zeta cache")
    ca.add_argument("action", choices=("path", "clear"))
    return p


# ---------------------------------------------------------------------------
# table cells (module level so that worker processes can run them)


def _cell(args: tuple) -> OutputRecord:
    name, k, rs, digits, M = args
    ctx = PrecisionContext(digits)
    if name == "ratio":
        v = pzeta.class_rational_ratio(k, rs, ctx)
        return OutputRecord(name, k, rs, digits, truncate_decimal(v, digits), _bound_text(ctx.tolerance), "exp-log-series")
    if name == "zetak":
        v = pzeta.zeta_k(k, rs, ctx)
        return OutputRecord(name, k, rs, digits, truncate_decimal(v, digits), _bound_text(ctx.tolerance), "exp-log-series")
    fam = TABLE_FAMILIES[name]
    res = host_constant(fam, rs, ctx) if k == "host" else constant(fam, k, rs, ctx, M)
    return OutputRecord(name, k, rs, digits, truncate_decimal(res.value, digits), _bound_text(res.error_bound), res.method)


_DEFAULT_GRID = {
    "ratio": ([1, 2, 3], [2, 3, 4, 5]),
    "zetak": ([1, 2, 3, 4], list(range(2, 9))),
    "artin": ([1, 2, 3, 4], [1, 2, 3, 4, 5]),
    "twin": ([1, 2, 3, 4], [2, 3, 4, 5]),
    "quad": ([1, 2, 3, 4], [1, 2, 3, 4, 5]),
    "feller": ([1, 2, 3, 4], [2, 3, 4, 5]),
    "hl": ([1, 2, 3, 4, 5], [3, 4, 5, 6]),
}


def _table(args) -> list[OutputRecord]:
    ks, rss = _DEFAULT_GRID[args.family]
    ks = args.k or ks
    rss = args.rs or rss
    fam = TABLE_FAMILIES[args.family]
    if fam is not None:
        for r in rss:
            check_family(fam, r)
    for k in ks:
        if k < 1:
            raise DomainError("k must be >= 1")
    cells = []
    for r in rss:
        if args.family in _HOST_ROWS and not args.no_host:
            cells.append((args.family, "host", r, args.digits, args.M))
        cells.extend((args.family, k, r, args.digits, args.M) for k in ks)
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            return list(pool.map(_cell, cells))
    return [_cell(c) for c in cells]


def _constant(args) -> list[OutputRecord]:
    ctx = PrecisionContext(args.digits)
    check_family(args.family, args.r)
    if args.k is None or args.method == "host":
        res = host_constant(args.family, args.r, ctx)
        k = "host"
    else:
        res = constant(args.family, args.k, args.r, ctx, args.M, args.method)
        k = args.k
    return [OutputRecord(args.family, k, args.r, args.digits, truncate_decimal(res.value, args.digits),
                         _bound_text(res.error_bound), res.method)]


def _host(args) -> list[OutputRecord]:
    ctx = PrecisionContext(args.digits)
    if args.family:
        if args.r is None:
            raise DomainError("--family needs --r")
        res = host_constant(args.family, args.r, ctx)
        label, rs = args.family, args.r
    else:
        if not (args.num and args.den):
            raise DomainError("give either --family/--r or --num/--den")
        spec = RationalProductSpec(IntPolynomial.parse(args.num), IntPolynomial.parse(args.den), args.start,
                                   tuple(args.exclude))
        res = host_product(spec, ctx)
        label, rs = "custom", args.start
    return [OutputRecord(label, "host", rs, args.digits, truncate_decimal(res.value, args.digits),
                         _bound_text(res.error_bound), res.method)]


def _emit(records: list[OutputRecord], fmt: str, out) -> None:
    if fmt == "json":
        json.dump({"records": [asdict(r) for r in records]}, out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in records:
            w.writerow([getattr(r, c) for c in CSV_COLUMNS])
    else:
        for r in records:
            k = "" if r.k == "host" else r.k
            out.write(f"{r.family:>7} {k!s:>4} {r.r_or_s:>3}  {r.value}\n")


def _sequences(args, out) -> None:
    fam = args.family
    w = csv.writer(out, lineterminator="\n")
    w.writerow(("family", "r", "index", "value"))
    if fam.startswith("gamma"):
        table = sequences.exponent_table(fam[-1], args.r, args.max)
        values = table.values
    else:
        values = sequences.seq_values(fam, args.r, max(args.max, 2)).values[: args.max + 1]
    for i, v in enumerate(values):
        w.writerow((fam, args.r, i, v))


def _hybrid(args, out) -> int:
    if args.action == "list":
        for h in hybrids.catalog():
            params = ",".join(h.params) or "-"
            out.write(f"{h.id}\t{params}\t{h.lhs_text} = {h.rhs_text}\n")
        return EXIT_OK
    ctx = PrecisionContext(args.digits)
    entries = [hybrids.get_identity(args.ident)] if args.ident else hybrids.catalog()
    failed = 0
    for h in entries:
        for params in h.parameter_sets(args.s_max, args.l_max):
            for k in args.k:
                rep = hybrids.verify_hybrid(h.id, k, params, ctx, args.tol)
                ptxt = ",".join(f"{a}={b}" for a, b in params.items()) or "-"
                status = "pass" if rep.passed else "FAIL"
                out.write(f"{status} {h.id} k={k} {ptxt} abs_diff={mpmath.nstr(rep.abs_diff, 3)}\n")
                failed += not rep.passed
    return EXIT_FAIL if failed else EXIT_OK


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except _UsageError as exc:
        print(f"apz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    if args.command == "cache":
        path = cache_path()
        if args.action == "path":
            out.write(f"{path}\n")
        else:
            pzeta.ZetaCache(path).clear()
            out.write(f"cleared {path}\n")
        return EXIT_OK

    cache = None
    if not args.no_cache:
        cache = pzeta.ZetaCache(cache_path())
        previous = pzeta.set_cache(cache)
    try:
        if args.command == "table":
            _emit(_table(args), args.format, out)
        elif args.command == "constant":
            _emit(_constant(args), args.format, out)
        elif args.command == "host":
            _emit(_host(args), args.format, out)
        elif args.command == "sequences":
            _sequences(args, out)
        elif args.command == "hybrid":
            return _hybrid(args, out)
        return EXIT_OK
    except ConvergenceError as exc:
        print(f"apz: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, SpecError, ValueError) as exc:
        print(f"apz: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if cache is not None:
            try:
                cache.save()
            except OSError as exc:
                print(f"apz: warning: cache not saved: {exc}", file=sys.stderr)
            pzeta.set_cache(previous)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
