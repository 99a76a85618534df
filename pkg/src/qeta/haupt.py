"""Polynomials in a normalized modular function A = q + O(q^2).

Any q-series g = sum_j c_j A^j is recovered by peeling: the q^j coefficient
of the running residual is c_j because A^j = q^j + higher terms.  Whether g
really is such a polynomial is decided by the residual left after the
peeling, not assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .eta import CuspOrderTable
from .report import VerificationReport
from .series import SeriesError, TruncatedSeries, one, ring_mul, series_valuation


class HauptError(ValueError):
    pass


class HauptPolynomial:
    """Exact rational polynomial in A; ``coeffs[j]`` multiplies ``A**j``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    def __setattr__(self, name, value):
        raise AttributeError("HauptPolynomial is immutable")

    @classmethod
    def constant(cls, c) -> "HauptPolynomial":
        return cls([c])

    @property
    def degree(self) -> int:
        """-1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coeffs)

    def integer_coeffs(self) -> list[int]:
        if not self.is_integral():
            raise HauptError(f"non-integral coefficients in {self}")
        return [c.numerator for c in self.coeffs]

    def __getitem__(self, j: int) -> Fraction:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else Fraction(0)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = HauptPolynomial.constant(other)
        if not isinstance(other, HauptPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def _lift(self, other) -> "HauptPolynomial":
        if isinstance(other, HauptPolynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return HauptPolynomial.constant(other)
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return HauptPolynomial(self[j] + other[j] for j in range(n))

    __radd__ = __add__

    def __neg__(self):
        return HauptPolynomial(-c for c in self.coeffs)

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return HauptPolynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return HauptPolynomial(out)

    __rmul__ = __mul__

    def __truediv__(self, k):
        return HauptPolynomial(c / k for c in self.coeffs)

    def __repr__(self):
        return f"HauptPolynomial({self})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if j == 0 else ("A" if j == 1 else f"A^{j}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_list(self) -> list:
        return [c.numerator if c.denominator == 1 else str(c) for c in self.coeffs]


class HauptBasis:
    """Cached powers of a normalized A at a fixed precision."""

    def __init__(self, A: TruncatedSeries):
        if A.modulus is not None:
            raise HauptError("the Hauptmodul expansion must be exact")
        v = series_valuation(A)
        if v.valuation != 1 or A[1] != 1:
            raise HauptError("A must be q + O(q^2)")
        self.A = A
        self.precision = A.precision
        self._powers = [one(A.precision), A]

    def power(self, j: int) -> TruncatedSeries:
        while len(self._powers) <= j:
            self._powers.append(ring_mul(self._powers[-1], self.A))
        return self._powers[j]


@dataclass(frozen=True)
class Decomposition:
    poly: HauptPolynomial
    ok: bool
    precision: int
    degree_bound: int
    first_mismatch: Optional[int] = None
    mismatch_value: Optional[int] = None


def _basis_for(A) -> HauptBasis:
    if isinstance(A, HauptBasis):
        return A
    return HauptBasis(A)


def try_decompose(g: TruncatedSeries, A, degree_bound: int) -> Decomposition:
    """Peel ``g`` against powers of A and report the residual instead of raising."""
    basis = _basis_for(A)
    n = min(g.precision, basis.precision)
    if degree_bound < 0:
        raise HauptError("degree bound must be nonnegative")
    if n <= degree_bound:
        raise HauptError(f"precision {n} does not exceed degree bound {degree_bound}")
    if g.modulus is not None:
        raise HauptError("decomposition needs exact coefficients")
    residual = np.array(g.coeffs[:n], dtype=object)
    coeffs = []
    for j in range(degree_bound + 1):
        c = residual[j]
        coeffs.append(c)
        if c:
            residual = residual - c * basis.power(j).coeffs[:n]
    poly = HauptPolynomial(coeffs)
    nz = np.flatnonzero(residual != 0)
    if len(nz):
        k = int(nz[0])
        return Decomposition(poly, False, n, degree_bound, k, int(residual[k]))
    return Decomposition(poly, True, n, degree_bound)


def decompose_in_hauptmodul(g: TruncatedSeries, A, degree_bound: int) -> HauptPolynomial:
    d = try_decompose(g, A, degree_bound)
    if not d.ok:
        raise HauptError(
            f"residual is nonzero at q^{d.first_mismatch} (value {d.mismatch_value}); "
            f"not a polynomial of degree <= {degree_bound} in A"
        )
    return d.poly


def evaluate_poly(p: HauptPolynomial, A) -> TruncatedSeries:
    """sum_j c_j A^j; rational coefficients must combine to integer coefficients."""
    basis = _basis_for(A)
    n = basis.precision
    if p.is_zero():
        return TruncatedSeries.from_coeffs([], n)
    den = math.lcm(*(c.denominator for c in p.coeffs))
    acc = np.zeros(n, dtype=object)
    acc[:] = 0
    for j, c in enumerate(p.coeffs):
        if c:
            acc = acc + (c.numerator * (den // c.denominator)) * basis.power(j).coeffs
    if den != 1:
        if any(x % den for x in acc):
            raise HauptError("polynomial does not evaluate to an integral series")
        acc = np.array([x // den for x in acc], dtype=object)
    return TruncatedSeries.from_coeffs(acc.tolist(), n)


def degree_bound_from_orders(bounds: CuspOrderTable) -> int:
    """Largest pole order any single cusp allows; a polynomial of degree D in A has poles of order D."""
    return int(max([0] + [-o for _, o in bounds.entries]))


def rigorous_pole_bound(bounds: CuspOrderTable) -> int:
    """Number of leading coefficients whose vanishing forces the function to vanish.

    A weight-0 function with total pole order P and order > P at infinity has
    more zeros than poles, so it is identically zero.
    """
    return 1 + bounds.pole_order()


def verify_identity_rigorous(
    lhs: TruncatedSeries, rhs: TruncatedSeries, bound: int, task: str = "identity"
) -> VerificationReport:
    if lhs.precision < bound or rhs.precision < bound:
        raise SeriesError(f"need {bound} coefficients, have {min(lhs.precision, rhs.precision)}")
    if lhs.modulus != rhs.modulus:
        raise SeriesError("cannot compare series with different moduli")
    a, b = lhs.coeffs[:bound], rhs.coeffs[:bound]
    diff = np.flatnonzero(a != b)
    if len(diff):
        k = int(diff[0])
        return VerificationReport.failure(
            task, k, {"lhs": int(a[k]), "rhs": int(b[k])}, checked=bound
        )
    return VerificationReport(task, True, bound)


@dataclass(frozen=True)
class SigmaTriple:
    sigma1: HauptPolynomial
    sigma2: HauptPolynomial
    sigma3: HauptPolynomial

    @property
    def integral(self) -> bool:
        return all(s.is_integral() for s in self)

    def __iter__(self):
        return iter((self.sigma1, self.sigma2, self.sigma3))

    def to_dict(self) -> dict:
        return {
            "sigma1": self.sigma1.to_list(),
            "sigma2": self.sigma2.to_list(),
            "sigma3": self.sigma3.to_list(),
            "integral": self.integral,
        }


def sigma_from_power_sums(p1: HauptPolynomial, p2: HauptPolynomial, p3: HauptPolynomial) -> SigmaTriple:
    """Elementary symmetric functions of three roots from their power sums (Newton's identities)."""
    e1 = p1
    e2 = (e1 * p1 - p2) / 2
    e3 = (e2 * p1 - e1 * p2 + p3) / 3
    return SigmaTriple(e1, e2, e3)


def _recurrence_mismatch(
    seq: Sequence[HauptPolynomial], sigma: SigmaTriple, i: int
) -> Optional[HauptPolynomial]:
    s1, s2, s3 = sigma
    predicted = s1 * seq[i - 1] - s2 * seq[i - 2] + s3 * seq[i - 3]
    return None if predicted == seq[i] else predicted - seq[i]


def newton_recurrence_check(
    i_max: int,
    sigma: SigmaTriple,
    uai: Sequence[HauptPolynomial],
    ufai: Optional[Sequence[HauptPolynomial]] = None,
    task: str = "newton-recurrence",
) -> VerificationReport:
    """Check U(A^i) = s1 U(A^(i-1)) - s2 U(A^(i-2)) + s3 U(A^(i-3)) for 4 <= i <= i_max.

    ``uai[k]`` (and ``ufai[k]``) hold the polynomial for exponent ``k + 1``.
    The U(F A^i) sequence, when given, is checked against the same sigmas.
    """
    rows = [("U(A^i)", uai)] + ([("U(F*A^i)", ufai)] if ufai is not None else [])
    checked = 0
    for label, polys in rows:
        if len(polys) < i_max:
            raise HauptError(f"{label}: need exponents 1..{i_max}, got {len(polys)}")
        seq = [HauptPolynomial.constant(1)] + list(polys[:i_max])
        for i in range(4, i_max + 1):
            bad = _recurrence_mismatch(seq, sigma, i)
            checked += 1
            if bad is not None:
                return VerificationReport.failure(
                    task, i, {"sequence": label, "difference": str(bad)}, checked=checked
                )
    return VerificationReport(task, True, checked)


def padic_valuation(n: int, p: int) -> Optional[int]:
    if n == 0:
        return None
    v = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        v += 1
    return v


def coefficient_valuations(polys: Sequence[HauptPolynomial], prime: int = 3) -> list[Optional[int]]:
    """Minimum ``prime``-adic valuation over each polynomial's coefficients (None = zero polynomial)."""
    out = []
    for poly in polys:
        vals = [padic_valuation(c, prime) for c in poly.integer_coeffs() if c]
        out.append(min(vals) if vals else None)
    return out


@dataclass(frozen=True)
class ValuationTable:
    prime: int
    rows: tuple[tuple[int, Optional[int], Optional[int]], ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "rows": [{"i": i, "U(A^i)": a, "U(F*A^i)": b} for i, a, b in self.rows],
        }


def valuation_table(
    uai: Sequence[HauptPolynomial], ufai: Sequence[HauptPolynomial], prime: int = 3, start: int = 1
) -> ValuationTable:
    va = coefficient_valuations(uai, prime)
    vf = coefficient_valuations(ufai, prime)
    return ValuationTable(prime, tuple((start + k, a, b) for k, (a, b) in enumerate(zip(va, vf))))
