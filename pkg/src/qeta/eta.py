"""Eta quotients on Gamma_0(N): modularity test, cusps, Ligozat orders, U_3 bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

from .series import DEFAULT_PRECISION, TruncatedSeries, eta_product_series, one, ring_mul, shift


class EtaError(ValueError):
    pass


def divisors(n: int) -> list[int]:
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    result = n
    for p in factorize(n):
        result -= result // p
    return result


class EtaQuotient:
    """``prod_{delta | level} eta(delta z)**r_delta``.

    Immutable; zero exponents are dropped, so two quotients compare equal
    exactly when level and nonzero exponents agree.
    """

    __slots__ = ("level", "_items")

    def __init__(self, level: int, exponents: Mapping[int, int]):
        if level < 1:
            raise EtaError("level must be a positive integer")
        items = []
        for delta, r in sorted(exponents.items()):
            if delta < 1 or level % delta:
                raise EtaError(f"{delta} does not divide level {level}")
            if r:
                items.append((int(delta), int(r)))
        object.__setattr__(self, "level", int(level))
        object.__setattr__(self, "_items", tuple(items))

    def __setattr__(self, name, value):
        raise AttributeError("EtaQuotient is immutable")

    @classmethod
    def parse(cls, level: int, spec: str) -> "EtaQuotient":
        """Build from ``"9:1,18:1,1:-1,2:-1"`` style text."""
        exps: dict[int, int] = {}
        for chunk in spec.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            try:
                d, r = chunk.split(":")
                exps[int(d)] = exps.get(int(d), 0) + int(r)
            except ValueError:
                raise EtaError(f"bad exponent entry {chunk!r}; expected delta:r") from None
        return cls(level, exps)

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self._items)

    def exponent(self, delta: int) -> int:
        return self.exponents.get(delta, 0)

    @property
    def weight(self) -> Fraction:
        return Fraction(sum(r for _, r in self._items), 2)

    def _combine(self, other: "EtaQuotient", sign: int) -> "EtaQuotient":
        if not isinstance(other, EtaQuotient):
            return NotImplemented
        if other.level != self.level:
            raise EtaError(f"level mismatch: {self.level} vs {other.level}")
        exps = self.exponents
        for d, r in other._items:
            exps[d] = exps.get(d, 0) + sign * r
        return EtaQuotient(self.level, exps)

    def __mul__(self, other):
        return self._combine(other, 1)

    def __truediv__(self, other):
        return self._combine(other, -1)

    def __pow__(self, k: int):
        return EtaQuotient(self.level, {d: r * k for d, r in self._items})

    def __eq__(self, other):
        if not isinstance(other, EtaQuotient):
            return NotImplemented
        return self.level == other.level and self._items == other._items

    def __hash__(self):
        return hash((self.level, self._items))

    def __repr__(self):
        body = ", ".join(f"{d}: {r}" for d, r in self._items)
        return f"EtaQuotient({self.level}, {{{body}}})"

    def spec_string(self) -> str:
        return ",".join(f"{d}:{r}" for d, r in self._items)


@dataclass(frozen=True)
class CertResult:
    passed: bool
    conditions: dict[str, bool]
    weight: Fraction
    delta_sum: int
    codelta_sum: int
    product: Fraction

    def to_dict(self) -> dict:
        return {
            "pass": self.passed,
            "conditions": dict(self.conditions),
            "weight": str(self.weight),
            "sum_delta_r": self.delta_sum,
            "sum_codelta_r": self.codelta_sum,
            "delta_product": str(self.product),
        }


def is_rational_square(x: Fraction) -> bool:
    if x <= 0:
        return False
    return all(e % 2 == 0 for e in factorize(x.numerator).values()) and all(
        e % 2 == 0 for e in factorize(x.denominator).values()
    )


def certify_modular(eq: EtaQuotient) -> CertResult:
    """Newman-Gordon-Hughes test for membership in M_0(Gamma_0(N))."""
    N = eq.level
    items = eq.exponents.items()
    delta_sum = sum(d * r for d, r in items)
    codelta_sum = sum((N // d) * r for d, r in items)
    # prime-exponent parity decides squareness without forming huge powers
    parity: dict[int, int] = {}
    for d, r in items:
        for p, e in factorize(d).items():
            parity[p] = parity.get(p, 0) + e * r
    product = Fraction(1)
    for p, e in parity.items():
        product *= Fraction(p) ** e
    conditions = {
        "weight_zero": eq.weight == 0,
        "delta_sum_mod_24": delta_sum % 24 == 0,
        "codelta_sum_mod_24": codelta_sum % 24 == 0,
        "product_is_square": all(e % 2 == 0 for e in parity.values()),
    }
    return CertResult(all(conditions.values()), conditions, eq.weight, delta_sum, codelta_sum, product)


@dataclass(frozen=True, order=True)
class Cusp:
    denominator: int
    numerator: int
    multiplicity: int = field(compare=False, default=1)

    def __str__(self) -> str:
        if self.numerator == 0:
            return "0"
        return f"{self.numerator}/{self.denominator}"


def cusp_set(N: int) -> list[Cusp]:
    """One representative c/d per denominator d | N, with its cusp count."""
    if N < 1:
        raise EtaError("level must be positive")
    out = []
    for d in divisors(N):
        c = 0 if d == 1 else next(c for c in range(1, d + 1) if math.gcd(c, d) == 1)
        out.append(Cusp(d, c, euler_phi(math.gcd(d, N // d))))
    return out


def cusp_count(N: int) -> int:
    return sum(c.multiplicity for c in cusp_set(N))


def ligozat_order(eq: EtaQuotient, cusp: Cusp | int) -> Fraction:
    N = eq.level
    d = cusp.denominator if isinstance(cusp, Cusp) else int(cusp)
    if d < 1 or N % d:
        raise EtaError(f"cusp denominator {d} does not divide level {N}")
    total = Fraction(0)
    for delta, r in eq.exponents.items():
        total += Fraction(math.gcd(d, delta) ** 2 * r, delta)
    return Fraction(N, 24) * total / (math.gcd(d, N // d) * d)


@dataclass(frozen=True)
class CuspOrderTable:
    level: int
    entries: tuple[tuple[Cusp, Fraction], ...]
    certified: bool = True

    @property
    def denominators(self) -> tuple[int, ...]:
        return tuple(c.denominator for c, _ in self.entries)

    @property
    def orders(self) -> tuple[Fraction, ...]:
        return tuple(o for _, o in self.entries)

    def order_at(self, denominator: int) -> Fraction:
        for c, o in self.entries:
            if c.denominator == denominator:
                return o
        raise KeyError(denominator)

    def weighted_sum(self) -> Fraction:
        return sum((c.multiplicity * o for c, o in self.entries), Fraction(0))

    def pole_order(self) -> int:
        return int(sum(c.multiplicity * max(0, -o) for c, o in self.entries))

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "certified": self.certified,
            "cusps": [
                {"cusp": str(c), "denominator": c.denominator, "multiplicity": c.multiplicity, "order": str(o)}
                for c, o in self.entries
            ],
        }


def order_table(eq: EtaQuotient) -> CuspOrderTable:
    cusps = cusp_set(eq.level)
    return CuspOrderTable(
        eq.level, tuple((c, ligozat_order(eq, c)) for c in cusps), certify_modular(eq).passed
    )


def table_min(a: CuspOrderTable, b: CuspOrderTable) -> CuspOrderTable:
    """Cuspwise lower bound for the order of a sum of two functions."""
    if a.level != b.level or a.denominators != b.denominators:
        raise EtaError("order tables live on different levels")
    return CuspOrderTable(
        a.level,
        tuple((c, min(x, y)) for (c, x), (_, y) in zip(a.entries, b.entries)),
        a.certified and b.certified,
    )


def u3_order_bounds(table18: CuspOrderTable) -> CuspOrderTable:
    """Lower bounds for the orders of U_3(f) on Gamma_0(6) from f's level-18 table."""
    if table18.level != 18:
        raise EtaError(f"U_3 bounds need a level-18 table, got level {table18.level}")
    o = table18.order_at
    bounds = {
        1: min(o(1), o(3)),
        2: min(o(2), o(6)),
        # orders of modular functions are integers
        3: Fraction(math.ceil(o(9) / 3)),
        6: Fraction(math.ceil(o(18) / 3)),
    }
    return CuspOrderTable(6, tuple((c, bounds[c.denominator]) for c in cusp_set(6)), table18.certified)


def leading_exponent(eq: EtaQuotient) -> Fraction:
    return Fraction(sum(d * r for d, r in eq.exponents.items()), 24)


def q_expansion(
    eq: EtaQuotient, precision: int = DEFAULT_PRECISION, modulus: Optional[int] = None
) -> TruncatedSeries:
    lead = leading_exponent(eq)
    if lead.denominator != 1:
        raise EtaError(f"leading exponent {lead} is not an integer")
    if lead < 0:
        raise EtaError(f"negative leading exponent {lead} is not supported")
    k = int(lead)
    if k >= precision:
        return TruncatedSeries.from_coeffs([], precision, modulus)
    body = one(precision - k, modulus)
    for d, r in eq.exponents.items():
        body = ring_mul(body, eta_product_series(d, r, precision - k, modulus))
    return shift(body, k)


def lift_level(eq: EtaQuotient, M: int) -> EtaQuotient:
    if M < 1 or M % eq.level:
        raise EtaError(f"level {eq.level} does not divide {M}")
    return EtaQuotient(M, eq.exponents)


def product_table(tables: Iterable[CuspOrderTable]) -> CuspOrderTable:
    """Orders of a product are sums of orders."""
    tables = list(tables)
    first = tables[0]
    for t in tables[1:]:
        if t.denominators != first.denominators:
            raise EtaError("order tables live on different levels")
    entries = tuple(
        (c, sum((t.entries[k][1] for t in tables), Fraction(0))) for k, (c, _) in enumerate(first.entries)
    )
    return CuspOrderTable(first.level, entries, all(t.certified for t in tables))
