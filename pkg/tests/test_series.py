import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_partitions, product_expansion
from qeta.series import (
    ModulusMismatchError,
    NonUnitError,
    SeriesError,
    TruncatedSeries,
    constant,
    dilate,
    eta_product_series,
    one,
    partition_numbers,
    reduce_mod,
    ring_add,
    ring_invert,
    ring_mul,
    series_valuation,
    u_p,
    zero,
)

S = TruncatedSeries.from_coeffs


class TestConstruction:
    def test_precision_and_length(self):
        f = S([1, 2, 3])
        assert f.precision == 3 and len(f) == 3

    def test_padding(self):
        assert S([1], precision=4).tolist() == [1, 0, 0, 0]

    def test_residues_are_normalized(self):
        assert S([-1, 7, 12], modulus=5).tolist() == [4, 2, 2]

    def test_empty_rejected(self):
        with pytest.raises(SeriesError):
            S([])

    def test_bad_modulus(self):
        with pytest.raises(SeriesError):
            S([1], modulus=0)

    def test_index_beyond_precision(self):
        with pytest.raises(IndexError):
            S([1, 2])[2]

    def test_immutable(self):
        f = S([1, 2, 3])
        with pytest.raises((ValueError, AttributeError, TypeError)):
            f.coeffs[0] = 5


class TestRingAdd:
    def test_cancellation(self):
        assert ring_add(S([1, 1]), S([1, -1])) == S([2, 0])

    def test_zero_identity(self):
        f = S([3, 1, 4, 1, 5])
        assert ring_add(f, zero(5)) == f

    def test_self_cancellation(self):
        f = S([0, 1, 4])
        assert ring_add(f, f, -1) == zero(3)

    def test_min_precision(self):
        assert ring_add(S([1, 2, 3]), S([1, 1])).precision == 2

    def test_modulus_mismatch(self):
        with pytest.raises(ModulusMismatchError):
            ring_add(S([1], modulus=3), S([1]))
        with pytest.raises(ModulusMismatchError):
            ring_mul(S([1], modulus=3), S([1], modulus=9))

    def test_bad_sign(self):
        with pytest.raises(SeriesError):
            ring_add(S([1]), S([1]), 2)


class TestRingMul:
    def test_difference_of_squares(self):
        assert ring_mul(S([1, 1, 0]), S([1, -1, 0])) == S([1, 0, -1])

    def test_identity(self):
        f = S([2, 7, 1, 8, 2, 8])
        assert ring_mul(f, one(6)) == f

    def test_partitions_times_euler_is_one(self):
        n = 300
        assert ring_mul(partition_numbers(n), eta_product_series(1, 1, n)) == one(n)

    def test_large_exact_product_matches_schoolbook(self):
        import random

        rng = random.Random(5)
        a = [rng.randint(-10**30, 10**30) for _ in range(80)]
        b = [rng.randint(-10**30, 10**30) for _ in range(80)]
        want = [sum(a[i] * b[k - i] for i in range(k + 1)) for k in range(80)]
        assert ring_mul(S(a), S(b)).tolist() == want

    def test_operators(self):
        f, g = S([1, 1, 0]), S([1, -1, 0])
        assert f * g == ring_mul(f, g)
        assert f + g == ring_add(f, g)
        assert f - g == ring_add(f, g, -1)
        assert f ** 2 == ring_mul(f, f)
        assert 2 * f == S([2, 2, 0])


class TestInvert:
    def test_geometric(self):
        assert ring_invert(S([1, -1], precision=8)) == S([1] * 8)

    def test_partitions(self):
        got = ring_invert(eta_product_series(1, 1, 11)).tolist()
        assert got == [count_partitions(n) for n in range(11)]

    def test_one(self):
        assert ring_invert(one(1)) == one(1)

    def test_minus_one_constant(self):
        f = S([-1, 1, 2, 0, 0])
        assert ring_mul(f, ring_invert(f)) == one(5)

    def test_non_unit(self):
        with pytest.raises(NonUnitError):
            ring_invert(S([2, 1]))
        with pytest.raises(NonUnitError):
            ring_invert(S([3, 1], modulus=9))

    def test_unit_mod_m(self):
        f = S([2, 1, 5, 3], modulus=9)
        assert ring_mul(f, ring_invert(f)) == one(4, 9)


class TestEtaProductSeries:
    def test_euler(self):
        assert eta_product_series(1, 1, 16).tolist() == product_expansion(1, 1, 16)
        assert eta_product_series(1, 1, 13).tolist()[:13] == [1, -1, -1, 0, 0, 1, 0, 1, 0, 0, 0, 0, -1]

    def test_partitions(self):
        assert eta_product_series(1, -1, 5).tolist() == [1, 1, 2, 3, 5]

    def test_zero_exponent(self):
        assert eta_product_series(2, 0, 10) == one(10)

    @pytest.mark.parametrize("delta,e", [(1, 2), (2, -1), (3, 4), (2, -3), (6, 5), (1, -4)])
    def test_against_literal_product(self, delta, e):
        assert eta_product_series(delta, e, 20).tolist() == product_expansion(delta, e, 20)

    def test_residue_backend(self):
        exact = eta_product_series(3, -4, 60)
        assert eta_product_series(3, -4, 60, 7) == reduce_mod(exact, 7)

    def test_bad_delta(self):
        with pytest.raises(SeriesError):
            eta_product_series(0, 1, 5)


class TestDilateAndU:
    def test_dilate(self):
        assert dilate(S([1, 1]), 3) == S([1, 0, 0, 1, 0, 0])
        f = S([5, 4, 3])
        assert dilate(f, 1) == f
        assert dilate(S([0, 1, 1]), 2).tolist()[:5] == [0, 0, 1, 0, 1]

    def test_dilate_clamped(self):
        assert dilate(S([1, 2, 3]), 4, precision=5).tolist() == [1, 0, 0, 0, 2]

    def test_u_selects_indices(self):
        f = S([0, 1, 0, 2, 0, 0, 5, 0, 0, 7])
        assert u_p(f, 3).tolist() == [0, 2, 5, 7]

    def test_u_precision_only_known(self):
        # from q^0..q^9, U_3 knows exponents 0..3 exactly
        assert u_p(S(range(10)), 3).precision == 4
        assert u_p(S(range(11)), 3).precision == 4
        assert u_p(S(range(7)), 3).precision == 3

    def test_u_rejects_small_p(self):
        with pytest.raises(SeriesError):
            u_p(S([1, 2]), 1)
        with pytest.raises(SeriesError):
            dilate(S([1]), 0)


class TestReduceAndValuation:
    def test_reduce(self):
        f = S([0, 3, 12, 54])
        assert reduce_mod(f, 3) == zero(4, 3)
        assert reduce_mod(f, 1) == zero(4, 1)
        assert reduce_mod(f, 27)[3] == 0

    def test_reduce_incompatible(self):
        with pytest.raises(ModulusMismatchError):
            reduce_mod(S([1, 2], modulus=9), 2)
        assert reduce_mod(S([1, 5], modulus=9), 3) == S([1, 2], modulus=3)

    def test_valuation(self):
        assert series_valuation(S([0, 1, 4])).valuation == 1
        assert series_valuation(one(3)).valuation == 0
        v = series_valuation(zero(6))
        assert v.is_zero and v.precision == 6
        with pytest.raises(SeriesError):
            int(v)


# -- properties ---------------------------------------------------------------

coeff = st.integers(-50, 50)


def series(size=12, modulus=None):
    return st.lists(coeff, min_size=size, max_size=size).map(lambda c: S(c, modulus=modulus))


def unit_series(size=12):
    return st.tuples(st.sampled_from([1, -1]), st.lists(coeff, min_size=size - 1, max_size=size - 1)).map(
        lambda t: S([t[0], *t[1]]))


@settings(max_examples=100, deadline=None)
@given(series(), series(), series())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=100, deadline=None)
@given(series(modulus=9), series(modulus=9), series(modulus=9))
def test_ring_axioms_mod(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=100, deadline=None)
@given(unit_series(16))
def test_invert_round_trip(f):
    assert ring_mul(f, ring_invert(f)) == one(16)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(-5, 5), st.sampled_from([None, 2, 27, 2**31 - 1, 10**20]))
def test_eta_times_inverse_is_one(delta, e, m):
    n = 40
    assert ring_mul(eta_product_series(delta, e, n, m), eta_product_series(delta, -e, n, m)) == one(n, m)


@settings(max_examples=100, deadline=None)
@given(series(8), series(24), st.sampled_from([2, 3, 5]))
def test_u_multiplicativity(g, f, p):
    lhs = u_p(ring_mul(dilate(g, p), f), p)
    rhs = ring_mul(g, u_p(f, p))
    n = min(lhs.precision, rhs.precision)
    assert lhs.tolist()[:n] == rhs.tolist()[:n]


@settings(max_examples=100, deadline=None)
@given(series(10), st.integers(2, 7))
def test_section_identity(f, p):
    assert u_p(dilate(f, p), p) == f


@settings(max_examples=100, deadline=None)
@given(series(), series(), st.integers(1, 40))
def test_reduce_commutes(f, g, m):
    assert reduce_mod(f + g, m) == reduce_mod(f, m) + reduce_mod(g, m)
    assert reduce_mod(f * g, m) == reduce_mod(f, m) * reduce_mod(g, m)
    assert reduce_mod(f - g, m) == reduce_mod(f, m) - reduce_mod(g, m)


@settings(max_examples=50, deadline=None)
@given(series(30), series(30))
def test_big_modulus_matches_exact(f, g):
    m = 10**25 + 13
    assert reduce_mod(f * g, m) == reduce_mod(f, m) * reduce_mod(g, m)


def test_constant_helper():
    assert constant(7, 3).tolist() == [7, 0, 0]
    assert constant(7, 3, 5).tolist() == [2, 0, 0]
