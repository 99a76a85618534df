import pytest
from hypothesis import given, settings, strategies as st

from oracles import count_cubic_partitions, count_partitions, inverse_by_search
from qeta.congruence import (
    CongruenceFamily,
    chain_valuations,
    congruence_chain,
    cubic_family,
    cubic_partition_series,
    delta,
    modular_inverse,
    partition_series,
    replay_section_3,
    theorem_1_1_rhs,
    verify_chain,
    verify_congruence_family,
    verify_newton_machinery,
    verify_theorem_1_1,
    verify_theorem_1_2,
    verify_watson,
    watson_family,
)
from qeta.haupt import HauptPolynomial
from qeta.series import reduce_mod


class TestGeneratingFunctions:
    def test_partitions(self):
        assert partition_series(7).tolist() == [1, 1, 2, 3, 5, 7, 11]
        assert partition_series(5)[4] % 5 == 0
        assert partition_series(7, 5).tolist() == [1, 1, 2, 3, 0, 2, 1]

    def test_cubic(self):
        assert cubic_partition_series(9).tolist() == [1, 1, 3, 4, 9, 12, 23, 31, 54]
        assert cubic_partition_series(9)[8] == 2 * 27

    def test_oracles(self):
        p = partition_series(26).tolist()
        a = cubic_partition_series(26).tolist()
        assert p == [count_partitions(n) for n in range(26)]
        assert a == [count_cubic_partitions(n) for n in range(26)]
        assert count_cubic_partitions(2) == 3  # {2, 2', 1+1}

    @pytest.mark.parametrize("m", [3**7, 5**3, 2**31 - 1, 10**40])
    def test_residue_backend_agrees(self, m):
        assert cubic_partition_series(2000, m) == reduce_mod(cubic_partition_series(2000), m)


class TestModularInverse:
    def test_examples(self):
        assert modular_inverse(8, 9) == 8
        assert modular_inverse(24, 5) == 4
        assert modular_inverse(1, 7) == 1

    def test_not_coprime(self):
        with pytest.raises(ValueError):
            modular_inverse(3, 9)
        with pytest.raises(ValueError):
            modular_inverse(2, 0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-500, 500), st.integers(2, 400))
    def test_against_search(self, a, m):
        want = inverse_by_search(a % m, m)
        if want is None:
            with pytest.raises(ValueError):
                modular_inverse(a, m)
        else:
            assert modular_inverse(a, m) == want


class TestFamilies:
    def test_cubic_constants(self):
        fams = [cubic_family(a) for a in range(1, 5)]
        assert [f.residue for f in fams] == [2, 8, 17, 71]
        assert [f.divisor for f in fams] == [3, 27, 27, 243]
        assert [delta(a) for a in range(1, 5)] == [0, 1, 0, 1]

    def test_watson_constants(self):
        assert [watson_family(k).residue for k in (1, 2, 3)] == [4, 24, 99]
        assert [watson_family(k).divisor for k in (1, 2, 3)] == [5, 25, 125]

    @pytest.mark.parametrize("alpha", range(1, 9))
    def test_residue_identity(self, alpha):
        f = cubic_family(alpha)
        assert f.residue * 8 % 3**alpha == 1
        assert f.residue == inverse_by_search(8, 3**alpha)

    @pytest.mark.parametrize("k", range(1, 6))
    def test_watson_residue_identity(self, k):
        assert watson_family(k).residue * 24 % 5**k == 1

    def test_invalid(self):
        with pytest.raises(ValueError):
            cubic_family(0)
        with pytest.raises(ValueError):
            watson_family(0)


class TestVerifyFamily:
    def test_alpha_1(self):
        rep = verify_congruence_family(cubic_partition_series(30001, 3), cubic_family(1), 30000)
        assert rep.passed and rep.checked == 10000

    def test_alpha_2(self):
        a = cubic_partition_series(3001)
        rep = verify_congruence_family(a, cubic_family(2), 3000)
        assert rep.passed and a[8] == 54

    def test_wrong_divisor(self):
        wrong = CongruenceFamily("cubic", 3, 2, 8, 81)
        rep = verify_congruence_family(cubic_partition_series(500), wrong, 400)
        assert not rep.passed
        assert rep.first_violation.index == 8 and rep.first_violation.value == 54

    def test_precision_and_modulus_checks(self):
        with pytest.raises(ValueError):
            verify_congruence_family(cubic_partition_series(100), cubic_family(1), 100)
        with pytest.raises(ValueError):
            verify_congruence_family(cubic_partition_series(200, 9), cubic_family(2), 100)

    def test_theorem_1_2_small(self):
        reps = verify_theorem_1_2(4, 3000)
        assert [r.passed for r in reps] == [True] * 4
        with pytest.raises(ValueError):
            verify_theorem_1_2(4, 100, modulus=81)

    def test_fifth_depth_bonus(self):
        # alpha = 5 needs 3^5; its first index 3^5 + c_5 fits below 2000
        f = cubic_family(5)
        assert verify_congruence_family(cubic_partition_series(2001, 3**5), f, 2000).passed


class TestWatson:
    def test_k1_k2(self):
        assert verify_watson(1, 5000).passed
        assert verify_watson(2, 5000).passed

    def test_k3(self):
        assert verify_watson(3, 5000).passed

    def test_wrong_residue(self):
        rep = verify_watson(1, 1000, residue=3)
        assert not rep.passed and rep.first_violation.index == 3 and rep.first_violation.value == 3

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            verify_watson(4, 100)


class TestTheorem11:
    def test_passes(self):
        rep = verify_theorem_1_1(300)
        assert rep.passed and rep.checked == 300

    def test_first_coefficient(self):
        assert theorem_1_1_rhs(5)[0] == 3 == cubic_partition_series(3)[2]

    def test_perturbed_cube(self):
        rep = verify_theorem_1_1(100, cube=4)
        assert not rep.passed and rep.first_violation.index < 10

    def test_implies_alpha_1(self):
        rhs = theorem_1_1_rhs(1000)
        assert all(c % 3 == 0 for c in rhs.tolist())
        assert verify_congruence_family(cubic_partition_series(3001), cubic_family(1), 3000).passed

    def test_modulus(self):
        assert verify_theorem_1_1(500, modulus=3**7).passed

    def test_too_small(self):
        with pytest.raises(ValueError):
            verify_theorem_1_1(5)


class TestReplay:
    def test_default(self):
        rep = replay_section_3(120)
        assert rep.passed, rep.summary()
        t = rep.tables
        assert t["c"] == 3 and t["pole_bound"] == 3
        assert t["orders"]["F"] == (-1, -1, 0, 0, 1, 1)
        assert t["orders"]["A"] == (-1, -1, 1, 1)
        assert t["U(F)_head"][:4] == [0, 3, 12, 54]

    def test_stage_tag_on_failure(self, monkeypatch):
        import qeta.congruence as C

        monkeypatch.setattr(C, "EXPECTED_F_ORDERS", (0,) * 6)
        rep = C.replay_section_3(50)
        assert not rep.passed and rep.stage == "orders" and rep.first_violation.index == -1


class TestChain:
    def test_chain(self, newton120):
        chain = congruence_chain(newton120)
        assert [p.degree for p in chain] == [1, 3, 10, 30]
        assert chain[0] == HauptPolynomial([0, 3])
        assert chain_valuations(chain) == [1, 3, 3, 5]
        assert chain_valuations(chain) == [a + delta(a) for a in range(1, 5)]

    def test_chain_matches_series(self, newton120):
        assert verify_chain(congruence_chain(newton120), newton120.basis, precision=60).passed

    def test_machinery_report(self, newton120):
        rep = verify_newton_machinery(10, 120, data=newton120)
        assert rep.passed
        assert rep.tables["sigma"]["integral"] is True
