"""Command-line front end.

Subcommands:

* ``value``   — one exact number, printed as ``num/den``.
* ``table``   — CSV or JSON tables of the number families.
* ``verify``  — run the exact identity suite, one line per check.
* ``numeric`` — floating-point / Monte Carlo checks, one JSON line each.
* ``bench``   — time the backends on a column and report peak bit sizes.

Exit codes: 0 success, 1 a check failed, 2 usage or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from .exact_core import format_rational, parse_rational
from .identity_verifier import IDENTITY_IDS, run_all, thread_count
from .numeric_bridge import (
    RngStream,
    cesaro_pbell,
    dobinski_pbell,
    dobinski_pbell_poly,
    mc_moment_check,
    mgf_check,
    pmf_check,
)
from .pbell import DEFAULT_BACKEND, BackendMismatch, PBellBackend, pbell_column, pbell_number
from .polybell import polybell_neg, polybell_neg_derivative, polybell_pos

__all__ = ["main", "main_entry", "render_table"]

_TABLE_KINDS = ("pbell-numbers", "polybell-neg", "pbell-poly-coeffs")
_BACKEND_NAMES = tuple(b.value for b in PBellBackend)


def _backend(name: str) -> PBellBackend:
    return PBellBackend(name)


def _rational_or_float(text: str):
    try:
        return parse_rational(text)
    except ValueError:
        return float(text)


# ---------------------------------------------------------------------------
# table rendering


def _table_cells(kind: str, n_max: int, p_max: int, backend: PBellBackend):
    """Yield (column label, [exact cell for n = 0..n_max]) per column."""
    if kind == "pbell-numbers":
        columns = list(range(p_max + 1))

        def column(p: int) -> list[Fraction]:
            return pbell_column(n_max, p, backend)

        workers = thread_count()
        if workers > 1 and len(columns) > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                data = list(pool.map(column, columns))
        else:
            data = [column(p) for p in columns]
        return [(str(p), data[i]) for i, p in enumerate(columns)]
    if kind == "polybell-neg":
        return [
            (str(-p), [polybell_neg(n, p) for n in range(n_max + 1)])
            for p in range(1, p_max + 1)
        ]
    if kind == "pbell-poly-coeffs":
        from .pbell import pbell_poly

        polys = [pbell_poly(n, p_max, backend) for n in range(n_max + 1)]
        return [
            (str(k), [poly.coeff(k) for poly in polys]) for k in range(n_max + 1)
        ]
    raise ValueError(f"unknown table kind {kind!r}")


def render_table(
    kind: str,
    n_max: int,
    p_max: int,
    backend: PBellBackend = DEFAULT_BACKEND,
    fmt: str = "csv",
) -> str:
    """The full table as text (trailing newline included)."""
    if n_max < 0 or p_max < 0:
        raise ValueError(f"table bounds must be nonnegative, got {n_max}, {p_max}")
    columns = _table_cells(kind, n_max, p_max, backend)
    row_key = "n"
    col_key = "k" if kind == "pbell-poly-coeffs" else "p"
    if fmt == "csv":
        lines = [f"{row_key}\\{col_key}," + ",".join(label for label, _ in columns)]
        for n in range(n_max + 1):
            lines.append(
                f"{n}," + ",".join(format_rational(cells[n]) for _, cells in columns)
            )
        return "\n".join(lines) + "\n"
    if fmt == "json":
        rows = []
        for n in range(n_max + 1):
            for label, cells in columns:
                rows.append(
                    {row_key: n, col_key: int(label), "value": format_rational(cells[n])}
                )
        return json.dumps(rows) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# ---------------------------------------------------------------------------
# subcommand handlers


def _cmd_value(args) -> int:
    backend = _backend(args.backend)
    if args.kind == "pbell":
        if args.p < 0:
            print("value: --kind pbell requires p >= 0", file=sys.stderr)
            return 2
        value = pbell_number(args.n, args.p, backend, cross_check=args.cross_check)
    else:  # polybell, signed order
        if args.p >= 0:
            value = polybell_pos(args.n, args.p, backend)
            if args.cross_check:
                for other in PBellBackend:
                    alt = polybell_pos(args.n, args.p, other)
                    if alt != value:
                        raise BackendMismatch(
                            args.n, args.p, {backend.value: value, other.value: alt}
                        )
        else:
            value = polybell_neg(args.n, -args.p)
            if args.cross_check:
                alt = polybell_neg_derivative(args.n, -args.p)
                if alt != value:
                    raise BackendMismatch(args.n, args.p, {"direct": value, "derivative": alt})
    text = format_rational(value)
    if args.approx:
        text += f" approx={float(value)!r}"
    print(text)
    return 0


def _cmd_table(args) -> int:
    backend = _backend(args.backend)
    text = render_table(args.kind, args.nmax, args.pmax, backend, args.format)
    if args.out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"table: cannot write {args.out}: {exc}", file=sys.stderr)
        return 2
    return 0


def _cmd_verify(args) -> int:
    only = None
    if args.only:
        only = [token for chunk in args.only for token in chunk.split(",") if token]
    try:
        reports = run_all(n_max=args.nmax, p_max=args.pmax, order=args.order, only=only)
    except KeyError as exc:
        print(f"verify: {exc.args[0]}", file=sys.stderr)
        return 2
    failures = 0
    for report in reports:
        params = " ".join(f"{k}={v}" for k, v in report.params.items())
        line = f"[{report.status.upper()}] {report.identity_id} {params}".rstrip()
        if not report.passed:
            failures += 1
            line += f" -- {report.detail}"
        print(line)
    print(f"{len(reports) - failures}/{len(reports)} identity checks passed")
    return 0 if failures == 0 else 1


def _cmd_numeric(args) -> int:
    rng = RngStream(args.seed)
    if args.numeric_check == "dobinski":
        check = dobinski_pbell(args.n, args.p, tol=args.tol)
        params = {"n": args.n, "p": args.p}
    elif args.numeric_check == "dobinski-poly":
        x = _rational_or_float(args.x)
        check = dobinski_pbell_poly(args.n, args.p, x, tol=args.tol)
        params = {"n": args.n, "p": args.p, "x": args.x}
    elif args.numeric_check == "cesaro":
        check = cesaro_pbell(args.n, args.p, quad_points=args.quad_points, tol=args.tol)
        params = {"n": args.n, "p": args.p}
    elif args.numeric_check == "mc":
        x = _rational_or_float(args.x)
        check = mc_moment_check(args.n, args.p, x, args.samples, rng)
        params = {"n": args.n, "p": args.p, "x": args.x, "seed": args.seed}
    elif args.numeric_check == "mgf":
        check = mgf_check(args.p, args.t, args.samples, rng)
        params = {"p": args.p, "t": args.t, "seed": args.seed}
    elif args.numeric_check == "pmf":
        check = pmf_check(args.p, args.k, args.samples, rng)
        params = {"p": args.p, "k": args.k, "seed": args.seed}
    else:  # pragma: no cover - argparse restricts choices
        raise AssertionError(args.numeric_check)
    payload = {"check": args.numeric_check, "params": params, "passed": check.passed}
    payload.update(check.to_json_dict())
    print(json.dumps(payload))
    return 0 if check.passed else 1


def _cmd_bench(args) -> int:
    backends = []
    for chunk in args.backends.split(","):
        name = chunk.strip()
        if not name:
            continue
        if name not in _BACKEND_NAMES:
            print(f"bench: unknown backend {name!r}", file=sys.stderr)
            return 2
        backends.append(PBellBackend(name))
    if not backends:
        print("bench: no backends given", file=sys.stderr)
        return 2
    if args.repeat < 1:
        print("bench: --repeat must be >= 1", file=sys.stderr)
        return 2
    p_values = list(range(args.pmax + 1)) if args.pmax is not None else [args.p]

    from .special_numbers import reset_cache

    print("backend,nmax,p,repeat,seconds,peak_bits")
    reference: dict[int, list[Fraction]] = {}
    failures = 0
    for backend in backends:
        for p in p_values:
            for rep in range(args.repeat):
                reset_cache()
                start = time.perf_counter()
                column = pbell_column(args.nmax, p, backend)
                elapsed = time.perf_counter() - start
                peak = max(
                    max(c.numerator.bit_length(), c.denominator.bit_length())
                    for c in column
                )
                print(f"{backend.value},{args.nmax},{p},{rep},{elapsed:.6f},{peak}")
            if p in reference:
                if column != reference[p]:
                    failures += 1
                    print(
                        f"bench: backend {backend.value} disagrees at p={p}",
                        file=sys.stderr,
                    )
            else:
                reference[p] = column
    return 0 if failures == 0 else 1


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polybell",
        description="Exact p-Bell and poly-Bell numbers, identity checks, and numeric cross-checks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_value = sub.add_parser("value", help="print one exact value")
    p_value.add_argument("--kind", choices=("pbell", "polybell"), required=True)
    p_value.add_argument("--n", type=int, required=True)
    p_value.add_argument("--p", type=int, required=True, help="signed for --kind polybell")
    p_value.add_argument("--backend", choices=_BACKEND_NAMES, default=DEFAULT_BACKEND.value)
    p_value.add_argument("--cross-check", action="store_true")
    p_value.add_argument("--approx", action="store_true", help="append a float approximation")

    p_table = sub.add_parser("table", help="emit a table as CSV or JSON")
    p_table.add_argument("--kind", choices=_TABLE_KINDS, required=True)
    p_table.add_argument("--nmax", type=int, required=True)
    p_table.add_argument(
        "--pmax",
        type=int,
        required=True,
        help="max column order; for pbell-poly-coeffs this is the (single) order p",
    )
    p_table.add_argument("--backend", choices=_BACKEND_NAMES, default=DEFAULT_BACKEND.value)
    p_table.add_argument("--format", choices=("csv", "json"), default="csv")
    p_table.add_argument("--out", default=None, help="write to a file instead of stdout")

    p_verify = sub.add_parser("verify", help="run the exact identity suite")
    p_verify.add_argument("--nmax", type=int, default=12)
    p_verify.add_argument("--pmax", type=int, default=5)
    p_verify.add_argument("--order", type=int, default=12)
    p_verify.add_argument(
        "--only",
        nargs="*",
        default=None,
        metavar="ID",
        help=f"subset of identity ids (comma or space separated); known: {', '.join(IDENTITY_IDS)}",
    )

    p_numeric = sub.add_parser("numeric", help="numeric and Monte Carlo checks")
    nsub = p_numeric.add_subparsers(dest="numeric_check", required=True)

    n_dob = nsub.add_parser("dobinski", help="series estimate of a p-Bell number")
    n_dob.add_argument("--n", type=int, required=True)
    n_dob.add_argument("--p", type=int, required=True)
    n_dob.add_argument("--tol", type=float, default=1e-9)

    n_dobp = nsub.add_parser("dobinski-poly", help="series estimate of a p-Bell polynomial value")
    n_dobp.add_argument("--n", type=int, required=True)
    n_dobp.add_argument("--p", type=int, required=True)
    n_dobp.add_argument("--x", required=True, help="evaluation point (num/den or float)")
    n_dobp.add_argument("--tol", type=float, default=1e-9)

    n_ces = nsub.add_parser("cesaro", help="oscillatory-integral estimate of a p-Bell number")
    n_ces.add_argument("--n", type=int, required=True)
    n_ces.add_argument("--p", type=int, required=True)
    n_ces.add_argument("--quad-points", type=int, default=16)
    n_ces.add_argument("--tol", type=float, default=1e-6)

    n_mc = nsub.add_parser("mc", help="Monte Carlo moment check of a polynomial value")
    n_mc.add_argument("--n", type=int, required=True)
    n_mc.add_argument("--p", type=int, required=True)
    n_mc.add_argument("--x", required=True, help="evaluation point (num/den or float)")
    n_mc.add_argument("--samples", type=int, default=1_000_000)

    n_mgf = nsub.add_parser("mgf", help="Monte Carlo check of the moment generating function")
    n_mgf.add_argument("--p", type=int, required=True)
    n_mgf.add_argument("--t", type=float, required=True)
    n_mgf.add_argument("--samples", type=int, default=1_000_000)

    n_pmf = nsub.add_parser("pmf", help="Monte Carlo check of the mixture pmf")
    n_pmf.add_argument("--p", type=int, required=True)
    n_pmf.add_argument("--k", type=int, required=True)
    n_pmf.add_argument("--samples", type=int, default=1_000_000)

    for np_ in (n_dob, n_dobp, n_ces, n_mc, n_mgf, n_pmf):
        np_.add_argument("--seed", type=int, default=0)

    p_bench = sub.add_parser("bench", help="time the backends on a column of values")
    p_bench.add_argument("--nmax", type=int, required=True)
    group = p_bench.add_mutually_exclusive_group()
    group.add_argument("--p", type=int, default=1, help="single column order")
    group.add_argument("--pmax", type=int, default=None, help="bench all columns 0..pmax")
    p_bench.add_argument(
        "--backends",
        default=",".join(_BACKEND_NAMES),
        help="comma-separated backend names",
    )
    p_bench.add_argument("--repeat", type=int, default=1)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return 2 if code not in (0, None) else int(code or 0)
    handlers = {
        "value": _cmd_value,
        "table": _cmd_table,
        "verify": _cmd_verify,
        "numeric": _cmd_numeric,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except BackendMismatch as exc:
        print(f"cross-check failed: {exc}", file=sys.stderr)
        return 1
    except BrokenPipeError:
        return 0
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main_entry() -> None:
    raise SystemExit(main())
