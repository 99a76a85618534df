"""Command line entry point.

Exit status: 0 when every check passes, 1 when any check fails, 2 on bad
input (unreadable file, syntax error, malformed arguments).
"""

from __future__ import annotations

import argparse
import logging
import sys
from typing import Optional, Sequence

from . import dsl
from .congruence import (
    A_ETA,
    DEFAULT_INDEX_MAX,
    replay_section_3,
    verify_theorem_1_1,
    verify_theorem_1_2,
    verify_watson,
)
from .eta import (
    EtaError,
    EtaQuotient,
    certify_modular,
    lift_level,
    order_table,
    q_expansion,
    u3_order_bounds,
)
from .executor import execute_program
from .haupt import HauptBasis, HauptError, degree_bound_from_orders, try_decompose
from .report import VerificationReport
from .series import DEFAULT_PRECISION, SeriesError, u_p

log = logging.getLogger("qeta")


class InputError(Exception):
    pass


def _quotient(args) -> EtaQuotient:
    if args.level is None or args.eta is None:
        raise InputError("--level and --eta are required")
    try:
        return EtaQuotient.parse(args.level, args.eta)
    except EtaError as exc:
        raise InputError(str(exc)) from None


def _info(task: str, **tables) -> VerificationReport:
    return VerificationReport(task, True, tables=tables)


def cmd_run(args) -> list[VerificationReport]:
    try:
        with open(args.file, encoding="utf-8") as fh:
            source = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    try:
        program = dsl.parse_program(source)
    except dsl.ParseError as exc:
        raise InputError(f"{args.file}:{exc.diagnostic}") from None
    return execute_program(program, args.terms, args.modulus)


def cmd_certify(args):
    eq = _quotient(args)
    cert = certify_modular(eq)
    return [VerificationReport(f"certify {eq.level}:{eq.spec_string()}", cert.passed, 4,
                               tables={"conditions": cert.conditions, "certificate": cert.to_dict()})]


def cmd_orders(args):
    eq = _quotient(args)
    table = order_table(eq)
    rep = _info(f"orders {eq.level}:{eq.spec_string()}", orders=table.to_dict())
    rep.checked = len(table.entries)
    if not table.certified:
        rep.warnings.append("quotient is not certified modular; orders carry no modular meaning")
    return [rep]


def _expand(eq: EtaQuotient, terms: int, modulus):
    try:
        return q_expansion(eq, terms, modulus)
    except EtaError as exc:
        raise InputError(str(exc)) from None


def cmd_expand(args):
    eq = _quotient(args)
    f = _expand(eq, args.terms, args.modulus)
    rep = _info(f"expand {eq.level}:{eq.spec_string()}", coefficients=f.tolist())
    rep.checked = f.precision
    return [rep]


def cmd_u(args):
    eq = _quotient(args)
    f = _expand(eq, args.p * (args.terms - 1) + 1, args.modulus)
    g = u_p(f, args.p)
    rep = _info(f"U{args.p} {eq.level}:{eq.spec_string()}", coefficients=g.tolist())
    rep.checked = g.precision
    return [rep]


def cmd_decompose(args):
    eq = _quotient(args)
    haupt = EtaQuotient.parse(args.haupt_level, args.haupt)
    target_terms = args.terms
    if args.u:
        g = u_p(_expand(eq, args.u * (target_terms - 1) + 1, None), args.u)
    else:
        g = _expand(eq, target_terms, None)
    if args.degree is not None:
        degree = args.degree
    elif args.u == 3 and eq.level in (6, 18):
        degree = degree_bound_from_orders(u3_order_bounds(order_table(lift_level(eq, 18))))
    elif not args.u and eq.level == haupt.level:
        degree = degree_bound_from_orders(order_table(eq))
    else:
        raise InputError("no default degree bound for this input; pass --degree")
    task = f"decompose {'U%d ' % args.u if args.u else ''}{eq.level}:{eq.spec_string()}"
    try:
        basis = HauptBasis(_expand(haupt, g.precision, None))
        d = try_decompose(g, basis, degree)
    except HauptError as exc:
        raise InputError(str(exc)) from None
    tables = {"polynomial": d.poly.to_list(), "text": str(d.poly), "degree_bound": degree}
    if not d.ok:
        return [VerificationReport.failure(task, d.first_mismatch, d.mismatch_value, checked=d.precision,
                                           tables=tables)]
    return [VerificationReport(task, True, d.precision, tables=tables)]


def cmd_theorem11(args):
    return [verify_theorem_1_1(args.terms, modulus=args.modulus)]


def cmd_theorem12(args):
    return verify_theorem_1_2(args.alpha_max, args.upto, args.modulus)


def cmd_watson(args):
    return [verify_watson(k, args.upto) for k in range(1, args.k_max + 1)]


def cmd_replay3(args):
    return [replay_section_3(max(args.terms, 10))]


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--terms", type=int, default=argparse.SUPPRESS,
                        help=f"number of q-coefficients (default {DEFAULT_PRECISION})")
    common.add_argument("--modulus", type=int, default=argparse.SUPPRESS,
                        help="work with residues modulo this integer")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="emit one JSON report per line")
    common.add_argument("-v", "--verbose", action="store_true", default=argparse.SUPPRESS)

    eta_args = argparse.ArgumentParser(add_help=False)
    eta_args.add_argument("--level", type=int)
    eta_args.add_argument("--eta", help='exponents as "delta:r,..." e.g. "9:1,18:1,1:-1,2:-1"')

    parser = argparse.ArgumentParser(prog="qeta", description=__doc__.splitlines()[0], parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common], help="execute a .qeta job file")
    p.add_argument("file")
    p.set_defaults(func=cmd_run)

    for name, func, helptext in (
        ("certify", cmd_certify, "test the modularity conditions"),
        ("orders", cmd_orders, "Ligozat orders at every cusp"),
        ("expand", cmd_expand, "q-expansion"),
    ):
        p = sub.add_parser(name, parents=[common, eta_args], help=helptext)
        p.set_defaults(func=func)

    p = sub.add_parser("u", parents=[common, eta_args], help="apply U_p to a q-expansion")
    p.add_argument("--p", type=int, default=3)
    p.set_defaults(func=cmd_u)

    p = sub.add_parser("decompose", parents=[common, eta_args], help="write a function as a polynomial in A")
    p.add_argument("--u", type=int, default=0, metavar="P", help="apply U_P before decomposing")
    p.add_argument("--degree", type=int, help="degree bound (default: from cusp orders)")
    p.add_argument("--haupt", default=A_ETA.spec_string(), help="exponents of A")
    p.add_argument("--haupt-level", type=int, default=A_ETA.level)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("theorem11", parents=[common], help="check the generating function of a(3n+2)")
    p.set_defaults(func=cmd_theorem11)

    p = sub.add_parser("theorem12", parents=[common], help="check a(3^a n + c_a) divisibility")
    p.add_argument("--alpha-max", type=int, default=4)
    p.add_argument("--upto", type=int, default=DEFAULT_INDEX_MAX)
    p.set_defaults(func=cmd_theorem12)

    p = sub.add_parser("watson", parents=[common], help="check p(5^k n + r_k) divisibility")
    p.add_argument("--k-max", type=int, default=2)
    p.add_argument("--upto", type=int, default=DEFAULT_INDEX_MAX)
    p.set_defaults(func=cmd_watson)

    p = sub.add_parser("replay3", parents=[common], help="replay the modular proof of the a(3n+2) identity")
    p.set_defaults(func=cmd_replay3)
    return parser


def _emit(reports, as_json: bool, out) -> None:
    for rep in reports:
        print(rep.to_json() if as_json else rep.summary(), file=out)


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    defaults = {"terms": DEFAULT_PRECISION, "modulus": None, "json": False, "verbose": False}
    if args.command == "replay3":
        defaults["terms"] = 500
    for key, default in defaults.items():
        if not hasattr(args, key):
            setattr(args, key, default)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(name)s: %(message)s")
    if args.terms < 1 or (args.modulus is not None and args.modulus < 1):
        print("error: --terms and --modulus must be positive", file=sys.stderr)
        return 2
    try:
        reports = args.func(args)
    except (InputError, EtaError, HauptError, SeriesError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(reports, args.json, sys.stdout)
    if any(r.status == "error" for r in reports):
        for r in reports:
            if r.status == "error":
                print(f"error: {r.task}: {r.error}", file=sys.stderr)
        return 2
    return 0 if all(r.passed for r in reports) else 1


if __name__ == "__main__":
    sys.exit(main())
