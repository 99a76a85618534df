"""Run parsed job programs against the library."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional, Union

from . import dsl
from .congruence import (
    CongruenceFamily,
    cubic_family,
    cubic_partition_series,
    partition_series,
    verify_congruence_family,
    watson_family,
)
from .eta import EtaError, EtaQuotient, certify_modular, lift_level, order_table, q_expansion
from .haupt import HauptError, verify_identity_rigorous
from .report import VerificationReport
from .series import (
    SeriesError,
    TruncatedSeries,
    constant,
    power,
    reduce_mod,
    ring_invert,
    ring_mul,
    scale,
    truncate,
    u_p,
)

log = logging.getLogger(__name__)

Value = Union[int, EtaQuotient, TruncatedSeries]

# names every program can use without binding them
BUILTINS = {
    "partitions": partition_series,
    "cubic": cubic_partition_series,
}


class ExecutionError(Exception):
    def __init__(self, message: str, pos: dsl.Pos = None):
        where = f"{pos[0]}:{pos[1]}: " if pos else ""
        super().__init__(where + message)
        self.pos = pos


_STATEMENT_ERRORS = (ExecutionError, EtaError, SeriesError, HauptError, ValueError)


@dataclass
class _Binding:
    stmt: dsl.Let
    # names visible where the binding was written; rebinding later never
    # changes what an earlier binding means, and self-reference cannot loop
    scope: dict


class Executor:
    def __init__(self, default_precision: int = 200, modulus: Optional[int] = None):
        self.default_precision = default_precision
        self.modulus = modulus
        self.env: dict[str, _Binding] = {}
        self.warnings: list[str] = []

    # evaluation

    def evaluate(self, expr: dsl.Expr, precision: Optional[int] = None, level: Optional[int] = None,
                 modulus: Optional[int] = None) -> Value:
        precision = precision or self.default_precision
        return self._eval(expr, precision, level, modulus if modulus is not None else self.modulus)

    def _eval(self, e: dsl.Expr, prec: int, level: Optional[int], mod: Optional[int]) -> Value:
        if isinstance(e, dsl.Num):
            return e.value
        if isinstance(e, dsl.Eta):
            if level is None:
                raise ExecutionError("eta(...) used outside a let with a level annotation", e.pos)
            if level % e.delta:
                raise ExecutionError(f"eta({e.delta}z) needs {e.delta} to divide level {level}", e.pos)
            return EtaQuotient(level, {e.delta: 1})
        if isinstance(e, dsl.Name):
            return self._lookup(e, prec, mod)
        if isinstance(e, dsl.UOp):
            if e.p < 2:
                raise ExecutionError(f"U{e.p} is not defined", e.pos)
            inner = self._series(self._eval(e.arg, e.p * (prec - 1) + 1, level, mod), e.p * (prec - 1) + 1, mod, e.pos)
            return truncate(u_p(inner, e.p), prec)
        if isinstance(e, dsl.Pow):
            base = self._eval(e.base, prec, level, mod)
            if isinstance(base, EtaQuotient):
                return base ** e.exponent
            if isinstance(base, int):
                return base ** e.exponent
            return power(base, e.exponent)
        if isinstance(e, dsl.BinOp):
            a = self._eval(e.left, prec, level, mod)
            b = self._eval(e.right, prec, level, mod)
            return self._binop(e, a, b, prec, mod)
        raise ExecutionError(f"cannot evaluate {e!r}")

    def _binop(self, e: dsl.BinOp, a: Value, b: Value, prec: int, mod: Optional[int]) -> Value:
        if isinstance(a, EtaQuotient) and isinstance(b, EtaQuotient):
            if a.level != b.level:
                raise ExecutionError(f"level mismatch: {a.level} vs {b.level}", e.pos)
            return a * b if e.op == "*" else a / b
        if isinstance(a, int) and isinstance(b, int):
            if e.op == "*":
                return a * b
            if b == 0 or a % b:
                raise ExecutionError(f"{a}/{b} is not an integer", e.pos)
            return a // b
        if e.op == "*":
            if isinstance(a, int):
                return scale(self._series(b, prec, mod, e.pos), a)
            if isinstance(b, int):
                return scale(self._series(a, prec, mod, e.pos), b)
            return ring_mul(self._series(a, prec, mod, e.pos), self._series(b, prec, mod, e.pos))
        if isinstance(b, int):
            return self._divide_by_int(self._series(a, prec, mod, e.pos), b, e.pos)
        try:
            inv = ring_invert(self._series(b, prec, mod, e.pos))
        except SeriesError as exc:
            raise ExecutionError(f"cannot divide: {exc}", e.pos) from None
        return ring_mul(self._series(a, prec, mod, e.pos), inv)

    @staticmethod
    def _divide_by_int(f: TruncatedSeries, k: int, pos) -> TruncatedSeries:
        if f.modulus is None:
            if k == 0 or any(c % k for c in f.tolist()):
                raise ExecutionError(f"series is not divisible by {k}", pos)
            return TruncatedSeries.from_coeffs([c // k for c in f.tolist()])
        try:
            inv = pow(k, -1, f.modulus)
        except ValueError:
            raise ExecutionError(f"{k} is not invertible modulo {f.modulus}", pos) from None
        return scale(f, inv)

    def _series(self, v: Value, prec: int, mod: Optional[int], pos=None) -> TruncatedSeries:
        if isinstance(v, TruncatedSeries):
            if v.modulus != mod:
                v = reduce_mod(v, mod)
            return truncate(v, prec) if v.precision > prec else v
        if isinstance(v, int):
            return constant(v, prec, mod)
        try:
            if not certify_modular(v).passed:
                self._warn(f"{v!r} is not certified modular; expanding anyway")
            return q_expansion(v, prec, mod)
        except EtaError as exc:
            raise ExecutionError(str(exc), pos) from None

    def _lookup(self, e: dsl.Name, prec: int, mod: Optional[int]) -> Value:
        b = self.env.get(e.id)
        if b is not None:
            outer, self.env = self.env, b.scope
            try:
                v = self._eval(b.stmt.expr, prec, b.stmt.level, mod)
            finally:
                self.env = outer
            if isinstance(v, EtaQuotient) and v.level != b.stmt.level:
                if b.stmt.level % v.level:
                    raise ExecutionError(
                        f"'{e.id}' has level {v.level}, which does not divide its annotation {b.stmt.level}",
                        b.stmt.pos)
                v = lift_level(v, b.stmt.level)
            return v
        if e.id in BUILTINS:
            return BUILTINS[e.id](prec, mod)
        raise ExecutionError(f"unbound name '{e.id}'", e.pos)

    def _warn(self, message: str) -> None:
        if message not in self.warnings:
            self.warnings.append(message)

    def _eta_binding(self, name: str, pos) -> EtaQuotient:
        v = self._lookup(dsl.Name(name, pos), self.default_precision, self.modulus)
        if not isinstance(v, EtaQuotient):
            raise ExecutionError(f"'{name}' is not an eta quotient", pos)
        return v

    # statements

    def run(self, program: dsl.Program) -> list[VerificationReport]:
        reports = []
        for stmt in program.statements:
            self.warnings = []
            task = dsl.format_statement(stmt)
            try:
                rep = self._statement(stmt, task)
            except _STATEMENT_ERRORS as exc:
                rep = VerificationReport.errored(task, str(exc))
            if rep is not None:
                rep.warnings.extend(w for w in self.warnings if w not in rep.warnings)
                reports.append(rep)
        return reports

    def _statement(self, s: dsl.Statement, task: str) -> Optional[VerificationReport]:
        if isinstance(s, dsl.Let):
            missing = sorted(n for n in dsl.names_in(s.expr) if n not in self.env and n not in BUILTINS)
            if missing:
                raise ExecutionError(f"unbound name '{missing[0]}' in binding of {s.name}", s.pos)
            binding = _Binding(s, dict(self.env))
            previous = self.env.get(s.name)
            self.env[s.name] = binding
            try:
                # one coefficient is enough to surface level and typing errors now
                self._lookup(dsl.Name(s.name, s.pos), 1, self.modulus)
            except _STATEMENT_ERRORS:
                if previous is None:
                    del self.env[s.name]
                else:
                    self.env[s.name] = previous
                raise
            return None
        if isinstance(s, dsl.AssertModular):
            eq = self._eta_binding(s.name, s.pos)
            cert = certify_modular(eq)
            return VerificationReport(task, cert.passed, 4, tables={"certificate": cert.to_dict()})
        if isinstance(s, dsl.AssertOrders):
            eq = self._eta_binding(s.name, s.pos)
            table = order_table(eq)
            if not table.certified:
                self._warn(f"{s.name} is not certified modular; orders may be meaningless")
            got = table.orders
            tables = {"orders": table.to_dict()}
            if len(got) != len(s.orders):
                return VerificationReport.failure(task, min(len(got), len(s.orders)),
                                                  {"expected_count": len(s.orders), "actual_count": len(got)},
                                                  tables=tables)
            for k, (want, have) in enumerate(zip(s.orders, got)):
                if want != have:
                    return VerificationReport.failure(
                        task, k, {"cusp": str(table.entries[k][0]), "expected": want, "actual": have},
                        checked=k + 1, tables=tables)
            return VerificationReport(task, True, len(got), tables=tables)
        if isinstance(s, dsl.AssertIdentity):
            n = s.terms
            lhs = self._series(self.evaluate(s.lhs, n), n, self.modulus, s.pos)
            rhs = self._series(self.evaluate(s.rhs, n), n, self.modulus, s.pos)
            rep = verify_identity_rigorous(lhs, rhs, n, task=task)
            rep.tables["lhs_head"] = lhs[: min(n, 6)]
            rep.tables["rhs_head"] = rhs[: min(n, 6)]
            return rep
        if isinstance(s, dsl.AssertCongruence):
            fam = _family(s)
            v = self._lookup(dsl.Name(s.name, s.pos), s.upto + 1, fam.divisor)
            series = self._series(v, s.upto + 1, fam.divisor, s.pos)
            rep = verify_congruence_family(series, fam, s.upto)
            rep.task = task
            return rep
        raise ExecutionError(f"unknown statement {s!r}")


def _family(s: dsl.AssertCongruence) -> CongruenceFamily:
    if s.alpha < 1:
        raise ExecutionError("alpha must be at least 1", s.pos)
    if s.base == 3:
        return cubic_family(s.alpha)
    if s.base == 5:
        return watson_family(s.alpha)
    raise ExecutionError(f"no congruence family is defined for base {s.base} (use 3 or 5)", s.pos)


def execute_program(program: dsl.Program, default_precision: int = 200,
                    modulus: Optional[int] = None) -> list[VerificationReport]:
    return Executor(default_precision, modulus).run(program)
