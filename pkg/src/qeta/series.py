"""Truncated power series in q with exact integer or residue coefficients.

A :class:`TruncatedSeries` knows ``precision`` coefficients, for the
exponents ``0 .. precision-1``.  Without a modulus the coefficients are
Python integers held in an object array; with a modulus ``m`` they are
residues in ``[0, m)``, held as ``int64`` when ``m`` fits a machine word.

Exact products go through Kronecker substitution (pack the coefficients into
one big integer, multiply once, unpack), residue products through the
kernels in :mod:`qeta._kernels`.  Both routes are exact, so the choice never
changes a result.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels

DEFAULT_PRECISION = 200

# below this length schoolbook beats packing
_KRONECKER_CUTOFF = 24


class SeriesError(ValueError):
    pass


class ModulusMismatchError(SeriesError):
    pass


class NonUnitError(SeriesError):
    pass


def _word_modulus(modulus: Optional[int]) -> bool:
    return modulus is not None and modulus <= _kernels.MAX_WORD_MODULUS


def _as_array(values, modulus: Optional[int]) -> np.ndarray:
    if modulus is not None and modulus < 1:
        raise SeriesError("modulus must be a positive integer")
    if _word_modulus(modulus):
        arr = np.array([int(v) % modulus for v in values], dtype=np.int64)
    elif modulus is not None:
        arr = np.array([int(v) % modulus for v in values], dtype=object)
    else:
        arr = np.empty(len(values), dtype=object)
        arr[:] = [int(v) for v in values]
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class TruncatedSeries:
    """Coefficients of ``q**0 .. q**(precision-1)``, optionally modulo ``modulus``."""

    coeffs: np.ndarray
    modulus: Optional[int] = None

    def __post_init__(self):
        if self.modulus is not None and self.modulus < 1:
            raise SeriesError("modulus must be a positive integer")
        if len(self.coeffs) < 1:
            raise SeriesError("precision must be at least 1")

    @classmethod
    def from_coeffs(
        cls, values: Iterable[int], precision: Optional[int] = None, modulus: Optional[int] = None
    ) -> "TruncatedSeries":
        values = list(values)
        if precision is not None:
            values = (values + [0] * precision)[:precision]
        return cls(_as_array(values, modulus), modulus)

    @classmethod
    def _raw(cls, arr, modulus) -> "TruncatedSeries":
        # arr already reduced and of the right dtype
        arr.flags.writeable = False
        return cls(arr, modulus)

    @property
    def precision(self) -> int:
        return len(self.coeffs)

    @property
    def is_exact(self) -> bool:
        return self.modulus is None

    def __len__(self) -> int:
        return len(self.coeffs)

    def __getitem__(self, n):
        if isinstance(n, slice):
            return [int(c) for c in self.coeffs[n]]
        if not 0 <= n < self.precision:
            raise IndexError(f"coefficient q^{n} is beyond precision {self.precision}")
        return int(self.coeffs[n])

    def tolist(self) -> list[int]:
        return [int(c) for c in self.coeffs]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (
            self.modulus == other.modulus
            and self.precision == other.precision
            and self.tolist() == other.tolist()
        )

    __hash__ = None

    def __repr__(self) -> str:
        shown = []
        for n, c in enumerate(self.tolist()[:8]):
            if c:
                shown.append(f"{c}*q^{n}" if n else str(c))
        body = " + ".join(shown) or "0"
        mod = f" mod {self.modulus}" if self.modulus is not None else ""
        return f"TruncatedSeries({body} + O(q^{self.precision}){mod})"

    def __add__(self, other):
        return ring_add(self, _coerce(other, self), 1)

    __radd__ = __add__

    def __sub__(self, other):
        return ring_add(self, _coerce(other, self), -1)

    def __rsub__(self, other):
        return ring_add(_coerce(other, self), self, -1)

    def __neg__(self):
        return scale(self, -1)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            return scale(self, int(other))
        return ring_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        return power(self, e)


def _coerce(x, like: TruncatedSeries) -> TruncatedSeries:
    if isinstance(x, TruncatedSeries):
        return x
    if isinstance(x, (int, np.integer)):
        return constant(int(x), like.precision, like.modulus)
    return NotImplemented


def _check_modulus(f: TruncatedSeries, g: TruncatedSeries) -> Optional[int]:
    if f.modulus != g.modulus:
        raise ModulusMismatchError(f"modulus mismatch: {f.modulus} vs {g.modulus}")
    return f.modulus


def zero(precision: int = DEFAULT_PRECISION, modulus: Optional[int] = None) -> TruncatedSeries:
    return TruncatedSeries.from_coeffs([], precision, modulus)


def constant(c: int, precision: int = DEFAULT_PRECISION, modulus: Optional[int] = None) -> TruncatedSeries:
    return TruncatedSeries.from_coeffs([c], precision, modulus)


def one(precision: int = DEFAULT_PRECISION, modulus: Optional[int] = None) -> TruncatedSeries:
    return constant(1, precision, modulus)


def monomial(k: int, precision: int = DEFAULT_PRECISION, c: int = 1, modulus: Optional[int] = None) -> TruncatedSeries:
    return TruncatedSeries.from_coeffs([0] * k + [c], precision, modulus)


def truncate(f: TruncatedSeries, precision: int) -> TruncatedSeries:
    if precision > f.precision:
        raise SeriesError(f"cannot extend precision {f.precision} to {precision}")
    if precision == f.precision:
        return f
    return TruncatedSeries._raw(f.coeffs[:precision].copy(), f.modulus)


def shift(f: TruncatedSeries, k: int, precision: Optional[int] = None) -> TruncatedSeries:
    """Multiply by ``q**k`` (``k >= 0``); precision grows by ``k`` unless capped."""
    if k < 0:
        raise SeriesError("negative shifts are not supported")
    n = f.precision + k if precision is None else min(precision, f.precision + k)
    out = np.zeros(n, dtype=f.coeffs.dtype)
    if out.dtype == object:
        out[:] = 0
    out[k:] = f.coeffs[: max(0, n - k)]
    return TruncatedSeries._raw(out, f.modulus)


def scale(f: TruncatedSeries, c: int) -> TruncatedSeries:
    if f.modulus is None:
        return TruncatedSeries._raw(f.coeffs * c, None)
    m = f.modulus
    if _word_modulus(m):
        return TruncatedSeries._raw(f.coeffs * (c % m) % m, m)
    return TruncatedSeries._raw(f.coeffs * c % m, m)


def ring_add(f: TruncatedSeries, g: TruncatedSeries, sign: int = 1) -> TruncatedSeries:
    """``f + sign*g`` truncated to the shorter precision."""
    if sign not in (1, -1):
        raise SeriesError("sign must be +1 or -1")
    m = _check_modulus(f, g)
    n = min(f.precision, g.precision)
    a, b = f.coeffs[:n], g.coeffs[:n]
    out = a + b if sign == 1 else a - b
    if m is not None:
        out = out % m
    return TruncatedSeries._raw(out, m)


# -- multiplication -----------------------------------------------------------


def _schoolbook(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    out = [0] * n
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def _pack(values: Sequence[int], width: int) -> int:
    nbytes = width // 8
    pos = b"".join(max(v, 0).to_bytes(nbytes, "little") for v in values)
    neg = b"".join(max(-v, 0).to_bytes(nbytes, "little") for v in values)
    return int.from_bytes(pos, "little") - int.from_bytes(neg, "little")


def _kronecker(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    a, b = list(a[:n]), list(b[:n])
    bits_a = max((abs(v).bit_length() for v in a), default=0)
    bits_b = max((abs(v).bit_length() for v in b), default=0)
    if bits_a == 0 or bits_b == 0:
        return [0] * n
    # every product coefficient has |c| < 2**(width-1)
    width = bits_a + bits_b + min(len(a), len(b)).bit_length() + 2
    width = (width + 7) // 8 * 8
    prod = _pack(a, width) * _pack(b, width)
    half = 1 << (width - 1)
    nbytes = width // 8
    # biasing each digit by 2**(width-1) makes all of them nonnegative, so the
    # low n digits of (prod + bias) split cleanly into bytes
    bias = half * (((1 << (width * n)) - 1) // ((1 << width) - 1))
    raw = ((prod + bias) & ((1 << (width * n)) - 1)).to_bytes(nbytes * n, "little")
    return [int.from_bytes(raw[k * nbytes : (k + 1) * nbytes], "little") - half for k in range(n)]


def _mul_exact(a: np.ndarray, b: np.ndarray, n: int) -> list[int]:
    if min(len(a), len(b), n) <= _KRONECKER_CUTOFF:
        return _schoolbook([int(x) for x in a], [int(x) for x in b], n)
    return _kronecker([int(x) for x in a], [int(x) for x in b], n)


def ring_mul(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to the shorter precision."""
    m = _check_modulus(f, g)
    n = min(f.precision, g.precision)
    if _word_modulus(m):
        return TruncatedSeries._raw(_kernels.conv_mod(f.coeffs, g.coeffs, n, m), m)
    return TruncatedSeries.from_coeffs(_mul_exact(f.coeffs, g.coeffs, n), None, m)


def power(f: TruncatedSeries, e: int) -> TruncatedSeries:
    if e < 0:
        return power(ring_invert(f), -e)
    result = one(f.precision, f.modulus)
    base = f
    while e:
        if e & 1:
            result = ring_mul(result, base)
        e >>= 1
        if e:
            base = ring_mul(base, base)
    return result


def _unit_inverse(c: int, modulus: Optional[int]) -> int:
    if modulus is None:
        if c not in (1, -1):
            raise NonUnitError(f"constant term {c} is not a unit in Z")
        return c
    try:
        return pow(c, -1, modulus)
    except ValueError:
        raise NonUnitError(f"constant term {c} is not invertible mod {modulus}") from None


def ring_invert(f: TruncatedSeries) -> TruncatedSeries:
    """Multiplicative inverse; the constant term must be a unit."""
    m = f.modulus
    if m == 1:
        return zero(f.precision, 1)
    inv0 = _unit_inverse(f[0], m)
    n = f.precision
    # Newton iteration g <- g*(2 - f*g), doubling the known prefix
    g = constant(inv0, 1, m)
    k = 1
    while k < n:
        k = min(2 * k, n)
        fk = truncate(f, k)
        gk = TruncatedSeries.from_coeffs(g.tolist(), k, m)
        err = ring_mul(fk, gk)
        g = ring_mul(gk, ring_add(constant(2, k, m), err, -1))
    return g


# -- eta products -------------------------------------------------------------


def pentagonal_terms(limit: int) -> list[tuple[int, int]]:
    """``(exponent, sign)`` pairs of prod(1 - q^n) with ``0 < exponent < limit``."""
    terms = []
    k = 1
    while True:
        e1 = k * (3 * k - 1) // 2
        if e1 >= limit:
            break
        sign = -1 if k % 2 else 1
        terms.append((e1, sign))
        e2 = k * (3 * k + 1) // 2
        if e2 < limit:
            terms.append((e2, sign))
        k += 1
    return terms


def _euler_series(precision: int, modulus: Optional[int]) -> TruncatedSeries:
    coeffs = [0] * precision
    coeffs[0] = 1
    for e, s in pentagonal_terms(precision):
        coeffs[e] = s
    return TruncatedSeries.from_coeffs(coeffs, precision, modulus)


def partition_numbers(precision: int, modulus: Optional[int] = None) -> TruncatedSeries:
    """p(0), p(1), ... by the pentagonal-number recurrence."""
    terms = pentagonal_terms(precision)
    if _word_modulus(modulus):
        num = np.zeros(precision, dtype=np.int64)
        num[0] = 1 % modulus
        idx = np.array([e for e, _ in terms], dtype=np.int64)
        val = np.array([s for _, s in terms], dtype=np.int64)
        return TruncatedSeries._raw(_kernels.sparse_div_mod(num, idx, val, modulus), modulus)
    p = [0] * precision
    p[0] = 1
    for n in range(1, precision):
        acc = 0
        for e, s in terms:
            if e > n:
                break
            acc -= s * p[n - e]
        p[n] = acc if modulus is None else acc % modulus
    if modulus is not None:
        p[0] %= modulus
    return TruncatedSeries.from_coeffs(p, precision, modulus)


def eta_product_series(
    delta: int, exponent: int, precision: int = DEFAULT_PRECISION, modulus: Optional[int] = None
) -> TruncatedSeries:
    """``prod_{n>=1} (1 - q^(delta*n))**exponent`` without the q^(delta/24) factor."""
    if delta < 1:
        raise SeriesError("delta must be a positive integer")
    if precision < 1:
        raise SeriesError("precision must be at least 1")
    if exponent == 0:
        return one(precision, modulus)
    inner = -(-precision // delta)
    base = _euler_series(inner, modulus) if exponent > 0 else partition_numbers(inner, modulus)
    if abs(exponent) > 1:
        base = power(base, abs(exponent))
    return dilate(base, delta, precision)


def sparse_divide(f: TruncatedSeries, terms: Sequence[tuple[int, int]]) -> TruncatedSeries:
    """Divide ``f`` by ``1 + sum(c * q**e for e, c in terms)``; ``terms`` sorted, all ``e > 0``."""
    m = f.modulus
    n = f.precision
    terms = [(e, c) for e, c in terms if e < n]
    if _word_modulus(m):
        idx = np.array([e for e, _ in terms], dtype=np.int64)
        val = np.array([c for _, c in terms], dtype=np.int64)
        return TruncatedSeries._raw(_kernels.sparse_div_mod(f.coeffs, idx, val, m), m)
    y = f.tolist()
    for k in range(1, n):
        acc = y[k]
        for e, c in terms:
            if e > k:
                break
            acc -= c * y[k - e]
        y[k] = acc if m is None else acc % m
    return TruncatedSeries.from_coeffs(y, n, m)


# -- operators ----------------------------------------------------------------


def dilate(f: TruncatedSeries, m: int, precision: Optional[int] = None) -> TruncatedSeries:
    """Substitute ``q -> q**m``; known through ``m * f.precision`` terms."""
    if m < 1:
        raise SeriesError("dilation factor must be positive")
    n = m * f.precision if precision is None else min(precision, m * f.precision)
    out = np.zeros(n, dtype=f.coeffs.dtype)
    if out.dtype == object:
        out[:] = 0
    src = f.coeffs[: -(-n // m)]
    out[::m] = src
    return TruncatedSeries._raw(out, f.modulus)


def u_p(f: TruncatedSeries, p: int) -> TruncatedSeries:
    """Keep the coefficients at multiples of ``p``: sum a(p n) q^n."""
    if p < 2:
        raise SeriesError("U_p needs p >= 2")
    return TruncatedSeries._raw(f.coeffs[::p].copy(), f.modulus)


def reduce_mod(f: TruncatedSeries, m: int) -> TruncatedSeries:
    if m < 1:
        raise SeriesError("modulus must be positive")
    if f.modulus is not None and f.modulus % m:
        raise ModulusMismatchError(f"cannot reduce a series mod {f.modulus} to mod {m}")
    return TruncatedSeries(_as_array([int(c) for c in f.coeffs], m), m)


@dataclass(frozen=True)
class SeriesValuation:
    """Lowest exponent with a nonzero coefficient; ``None`` means zero to precision."""

    valuation: Optional[int]
    precision: int

    @property
    def is_zero(self) -> bool:
        return self.valuation is None

    def __int__(self) -> int:
        if self.valuation is None:
            raise SeriesError(f"series vanishes through q^{self.precision - 1}")
        return self.valuation


def series_valuation(f: TruncatedSeries) -> SeriesValuation:
    nz = np.flatnonzero(f.coeffs != 0)
    return SeriesValuation(int(nz[0]) if len(nz) else None, f.precision)
