"""Batch command-line front end.

Exit codes: 0 when every checked claim holds, 2 when a counterexample or
failing row was found, 1 on usage or computation errors.  Reports are
JSON by default (CSV via --format csv) and are byte-identical for
identical invocations, seeds included; wall-clock timing never enters a
report.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
from fractions import Fraction

from . import __version__
from .exact import ExactMatrix, format_scalar
from .families import FAMILY_NAMES, BandedFamily, build, deleted_variant
from .minors import (
    all_order_n_minors,
    d_closed_form,
    d_sequence_recurrence,
    d_sequence_series,
    e_minor_b_zero,
    e_minor_product_formula,
    min_support,
    threads_from_env,
)
from .certify import CertificationError, certify
from .subspace import (
    build_pattern_subspace,
    containment_check,
    find_rank3_witness,
    rank3_rank4_pair,
    rank4_subspace,
    rank_chain,
    vector_in_span,
    verify_min_rank,
)

OK, USAGE_ERROR, COUNTEREXAMPLE = 0, 1, 2

_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")

# Library operations reachable from each command, for the coverage check
# in the test suite.  Names refer to package-level functions or
# ExactMatrix methods.
COMMAND_OPERATIONS = {
    "dseq": ("d_sequence_recurrence", "d_sequence_series", "d_closed_form"),
    "minor": (
        "build",
        "deleted_variant",
        "det",
        "delete_rows",
        "e_minor_product_formula",
        "e_minor_b_zero",
    ),
    "minors": ("all_order_n_minors", "min_support", "column_pattern", "rank"),
    "certify": ("certify", "certify_E", "certify_E_tilde", "certify_G", "certify_B"),
    "subspace-build": (
        "build_pattern_subspace",
        "rank4_subspace",
        "rank3_rank4_pair",
        "rank_chain",
        "phi",
        "phi_inverse",
        "containment_check",
    ),
    "subspace-verify": ("verify_min_rank", "schmidt_rank", "kernel_vector", "shift_matrix"),
    "witness": ("find_rank3_witness", "vector_in_span"),
    "reproduce": ("d_sequence_recurrence", "e_minor_product_formula", "certify"),
}


class CliError(Exception):
    """Invalid arguments or an impossible request; maps to exit code 1."""


def parse_rational(text: str) -> Fraction:
    """Parse "p" or "p/q"; anything else (floats included) is rejected."""
    text = text.strip()
    if not _RATIONAL.match(text):
        raise CliError(f"not a rational in p or p/q form: {text!r}")
    value = Fraction(text)
    return value


def parse_pattern(text: str) -> tuple[Fraction, ...]:
    parts = [p for p in text.split(",") if p.strip()]
    if not parts:
        raise CliError("empty pattern")
    return tuple(parse_rational(p) for p in parts)


def parse_rows(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError as exc:
        raise CliError(f"bad row list {text!r}: {exc}") from exc


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the report convention
    # reserves 2 for counterexamples, so remap to 1.
    def error(self, message: str):
        self.exit(USAGE_ERROR, f"{self.prog}: error: {message}\n")


def _flatten_for_csv(payload: dict) -> list[list[str]]:
    if "minors" in payload:
        rows = [["deleted", "value", "is_zero"]]
        for entry in payload["minors"]:
            rows.append(
                [
                    " ".join(str(i) for i in entry["deleted"]),
                    entry["value"],
                    str(entry["value"] == "0"),
                ]
            )
        return rows
    if "values" in payload and isinstance(payload["values"], dict):
        rows = [["n", "value"]]
        for key in sorted(payload["values"], key=int):
            rows.append([key, payload["values"][key]])
        return rows
    if "rows" in payload and isinstance(payload.get("rows"), list):
        header = sorted({k for row in payload["rows"] for k in row})
        out = [header]
        for row in payload["rows"]:
            out.append([str(row.get(k, "")) for k in header])
        return out
    rows = [["key", "value"]]
    for key in sorted(payload):
        rows.append([key, json.dumps(payload[key], sort_keys=True)])
    return rows


def emit(payload: dict, args: argparse.Namespace) -> None:
    if getattr(args, "format", "json") == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerows(_flatten_for_csv(payload))
        text = buffer.getvalue()
    else:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    out = getattr(args, "out", None)
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------


def cmd_dseq(args) -> int:
    nmax = args.nmax
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    if args.method == "recurrence":
        seq = d_sequence_recurrence(a, b, nmax)
    elif args.method == "series":
        if b != 1:
            raise CliError("--method series requires b = 1")
        seq = d_sequence_series(a, nmax)
    else:
        if b != 1:
            raise CliError("--method closed requires b = 1")
        values = {str(n): format_scalar(d_closed_form(a, n)) for n in range(-1, nmax + 1)}
        emit({"a": str(a), "b": "1", "method": "closed", "values": values}, args)
        return OK
    payload = seq.to_json()
    payload["method"] = args.method
    emit(payload, args)
    return OK


def cmd_minor(args) -> int:
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    spec = BandedFamily(args.family, a, b, args.n)
    deleted = parse_rows(args.delete)
    matrix = deleted_variant(spec, deleted)
    if matrix.rows != matrix.cols:
        raise CliError(
            f"deleting rows {deleted} from {args.family} leaves a "
            f"{matrix.rows}x{matrix.cols} matrix; a minor needs a square one"
        )
    value = matrix.det()
    payload = {
        "family": spec.to_json(),
        "deleted": list(deleted),
        "value": format_scalar(value),
    }
    if args.family == "E" and len(deleted) == 1:
        k = deleted[0]
        if b == 1:
            payload["product_formula"] = format_scalar(
                e_minor_product_formula(a, args.n, k)
            )
        if b == 0:
            payload["b_zero_formula"] = format_scalar(e_minor_b_zero(a, args.n, k))
    emit(payload, args)
    return OK


def cmd_minors(args) -> int:
    a = parse_rational(args.a)
    b = parse_rational(args.b)
    spec = BandedFamily(args.family, a, b, args.n)
    report = all_order_n_minors(build(spec), spec, processes=args.threads)
    payload = report.to_json()
    if args.min_support:
        matrix = build(spec)
        if matrix.rank() == matrix.cols:
            payload["min_support"] = min_support(matrix).to_json()
        else:
            payload["min_support"] = None
            payload["columns_independent"] = False
    emit(payload, args)
    return OK if report.all_nonzero else COUNTEREXAMPLE


def cmd_certify(args) -> int:
    a = parse_rational(args.a)
    if args.n is not None:
        certs = [certify(args.family, a, args.n, processes=args.threads)]
    else:
        certs = [
            certify(args.family, a, n, processes=args.threads)
            for n in range(1, args.nmax + 1)
        ]
    payload = {"rows": [c.to_json() for c in certs]} if len(certs) > 1 else certs[0].to_json()
    emit(payload, args)
    return OK if all(c.verified_exhaustively for c in certs) else COUNTEREXAMPLE


def _build_from_args(args):
    a = parse_rational(args.a) if args.a is not None else None
    if args.construction == "pattern":
        if args.pattern is None:
            raise CliError("--construction pattern requires --pattern")
        basis = build_pattern_subspace(parse_pattern(args.pattern), args.m, args.n)
        return {"single": basis}
    if a is None:
        raise CliError(f"--construction {args.construction} requires --a")
    if args.construction == "rank4":
        return {"single": rank4_subspace(a, args.m, args.n)}
    if args.construction == "rank4-tilde":
        return {"single": rank4_subspace(a, args.m, args.n, tilde=True)}
    if args.construction == "pair":
        outer, inner = rank3_rank4_pair(a, args.m, args.n)
        return {"outer": outer, "inner": inner}
    if args.construction == "chain":
        big, mid, small = rank_chain(a, args.m, args.n)
        return {"rank2": big, "rank3": mid, "rank4": small}
    raise CliError(f"unknown construction {args.construction!r}")


def cmd_subspace_build(args) -> int:
    built = _build_from_args(args)
    if "single" in built:
        payload = built["single"].to_json()
    else:
        payload = {name: basis.to_json() for name, basis in built.items()}
        names = list(built)
        for i in range(len(names) - 1, 0, -1):
            payload[f"contains_{names[i]}_in_{names[i - 1]}"] = containment_check(
                built[names[i]], built[names[i - 1]]
            )
    emit(payload, args)
    return OK


def cmd_subspace_verify(args) -> int:
    built = _build_from_args(args)
    results = {}
    failed = False
    for name, basis in built.items():
        k = args.k if args.k is not None else basis.claimed_min_rank
        verdict = verify_min_rank(
            basis,
            k,
            args.mode,
            coeff_set=parse_pattern(args.coeffs),
            budget=args.budget,
            cross_samples=args.cross_samples,
            samples=args.samples,
            seed=args.seed,
            require_full_grid=args.full_grid,
        )
        results[name] = verdict.to_json()
        failed = failed or not verdict.passed
    payload = results["single"] if list(results) == ["single"] else results
    emit(payload, args)
    return COUNTEREXAMPLE if failed else OK


def cmd_witness(args) -> int:
    a = parse_rational(args.a)
    outer, inner = rank3_rank4_pair(a, args.m, args.n)
    vec = find_rank3_witness(outer, inner)
    payload = {
        "witness": vec.to_json(),
        "schmidt_rank": vec.schmidt_rank(),
        "in_outer": vector_in_span(vec, outer),
        "in_inner": vector_in_span(vec, inner),
    }
    emit(payload, args)
    return OK


def cmd_reproduce(args) -> int:
    from .reproduce import run_reproduction

    inject = parse_rational(args.inject_a) if args.inject_a else None
    summary = run_reproduction(nmax=args.nmax, inject_a=inject)
    emit(summary.to_json(), args)
    sys.stderr.write(summary.table() + "\n")
    return OK if summary.all_passed else COUNTEREXAMPLE


# ---------------------------------------------------------------------------
# parser wiring
# ---------------------------------------------------------------------------


def _add_output_flags(parser) -> None:
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), default="json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entangle-minors", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dseq", help="determinant sequence d_n of family D")
    p.add_argument("--a", required=True)
    p.add_argument("--b", default="1")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--method", choices=("recurrence", "series", "closed"),
                   default="recurrence")
    _add_output_flags(p)
    p.set_defaults(func=cmd_dseq)

    p = sub.add_parser("minor", help="one deleted-rows minor of a family member")
    p.add_argument("--family", choices=FAMILY_NAMES, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", default="1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delete", required=True, help="1-based rows, comma separated")
    _add_output_flags(p)
    p.set_defaults(func=cmd_minor)

    p = sub.add_parser("minors", help="every order-n minor of a family member")
    p.add_argument("--family", choices=FAMILY_NAMES, required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", default="1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--min-support", action="store_true",
                   help="also report the minimum support of column combinations")
    p.add_argument("--threads", type=int, default=None,
                   help="worker processes (default ENTANGLE_MINORS_THREADS or 1)")
    _add_output_flags(p)
    p.set_defaults(func=cmd_minors)

    p = sub.add_parser("certify", help="hypothesis certificate for a family")
    p.add_argument("--family", choices=("E", "Etilde", "G", "B", "Btilde"),
                   required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--n", type=int, help="single size to certify")
    p.add_argument("--nmax", type=int, default=10, help="sweep 1..nmax when --n absent")
    p.add_argument("--threads", type=int, default=None)
    _add_output_flags(p)
    p.set_defaults(func=cmd_certify)

    for name, func in (
        ("subspace-build", cmd_subspace_build),
        ("subspace-verify", cmd_subspace_verify),
    ):
        p = sub.add_parser(name, help=f"{name.split('-')[1]} a pattern subspace")
        p.add_argument("--construction",
                       choices=("pattern", "rank4", "rank4-tilde", "pair", "chain"),
                       default="pattern")
        p.add_argument("--pattern", help="comma-separated rationals, e.g. 1,-3,3,-1")
        p.add_argument("--a")
        p.add_argument("--m", type=int, required=True)
        p.add_argument("--n", type=int, required=True)
        if name == "subspace-verify":
            p.add_argument("--k", type=int, default=None,
                           help="minimum rank to verify (default: pattern length)")
            p.add_argument("--mode", choices=("certificate", "grid", "random"),
                           default="certificate")
            p.add_argument("--coeffs", default="-2,-1,0,1,2")
            p.add_argument("--budget", type=int, default=2_000_000)
            p.add_argument("--cross-samples", type=int, default=1000)
            p.add_argument("--samples", type=int, default=500)
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--full-grid", action="store_true",
                           help="fail instead of decomposing when over budget")
        _add_output_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("witness", help="rank-3 generator separating the nested pair")
    p.add_argument("--a", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    _add_output_flags(p)
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("reproduce", help="run the full example suite")
    p.add_argument("--nmax", type=int, default=10)
    p.add_argument("--inject-a",
                   help="negative control: override a everywhere to force failures")
    _add_output_flags(p)
    p.set_defaults(func=cmd_reproduce)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "threads", None) is None and hasattr(args, "threads"):
            args.threads = threads_from_env()
        return args.func(args)
    except CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR
    except CertificationError as exc:
        sys.stderr.write(f"CONTRADICTION: {exc}\n")
        return USAGE_ERROR
    except (ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
