from pathlib import Path

import pytest

from qeta.dsl import parse_program
from qeta.executor import execute_program

JOB = Path(__file__).resolve().parents[1] / "jobs" / "section3.qeta"

HEADER = """
let F = eta(9z)*eta(18z)/(eta(1z)*eta(2z)) @ level 18
let A = eta(3z)^4*eta(6z)^4/(eta(1z)^4*eta(2z)^4) @ level 6
"""


def run(body, precision=60, modulus=None):
    return execute_program(parse_program(HEADER + body), precision, modulus)


def test_sample_job_passes():
    reports = execute_program(parse_program(JOB.read_text()))
    assert len(reports) == 7
    assert all(r.status == "pass" for r in reports), [r.summary() for r in reports]


def test_identity_u_of_f():
    (rep,) = run("assert U3(F) == 3*A to 200 terms")
    assert rep.passed and rep.checked == 200
    assert rep.tables["lhs_head"][:4] == [0, 3, 12, 54]


def test_modular_breakdown():
    (rep,) = run("assert modular(F)")
    assert rep.passed and all(rep.tables["certificate"]["conditions"].values())


def test_orders():
    (ok, bad_value, bad_count) = run("""
        assert orders(A) == [-1, -1, 1, 1]
        assert orders(A) == [-1, -1, 1, 2]
        assert orders(A) == [-1, -1, 1]
    """)
    assert ok.passed
    assert not bad_value.passed and bad_value.first_violation.index == 3
    assert not bad_count.passed


def test_failure_does_not_halt():
    reps = run("""
        assert U3(F) == 4*A to 20 terms
        assert modular(A)
    """)
    assert [r.status for r in reps] == ["fail", "pass"]
    assert reps[0].first_violation.index == 1


def test_errors_are_reports():
    reps = run("""
        assert modular(G)
        let B = F * A @ level 18
        assert modular(F)
    """)
    assert [r.status for r in reps] == ["error", "error", "pass"]
    assert "unbound" in reps[0].error


def test_level_mismatch():
    reps = execute_program(parse_program("""
        let X = eta(1z) @ level 6
        let Y = eta(9z) @ level 18
        let Z = X * Y @ level 18
        assert modular(Z)
    """))
    assert reps[0].status == "error" and "level mismatch" in reps[0].error


def test_eta_arithmetic_compiles_to_exponents():
    reps = run("""
        let G = F^2 / F @ level 18
        assert orders(G) == [-1, -1, 0, 0, 1, 1]
        let H = (eta(1z)/eta(1z))^3 @ level 6
        assert orders(H) == [0, 0, 0, 0]
    """)
    assert all(r.passed for r in reps)


def test_uncertified_warning():
    (rep,) = execute_program(parse_program("""
        let E = eta(1z)^24 @ level 1
        assert orders(E) == [1]
    """))
    assert rep.passed and rep.warnings


def test_series_division_and_scaling():
    reps = run("""
        assert A / A == 1 to 30 terms
        assert 2*A/2 == A to 30 terms
        assert A^2 == A*A to 30 terms
        assert U3(F)/3 == A to 30 terms
    """)
    assert all(r.passed for r in reps), [r.summary() for r in reps]


def test_integer_division_must_be_exact():
    reps = run("""
        assert U3(F)/3 == A to 30 terms
        assert A/2 == A to 5 terms
    """)
    assert [r.status for r in reps] == ["pass", "error"]
    (rep,) = run("assert A/2 * 2 == A to 30 terms", modulus=9)
    assert rep.passed


def test_rebinding_is_lexical():
    reps = run("""
        let G = A @ level 6
        let A = A^2 @ level 6
        assert orders(A) == [-2, -2, 2, 2]
        assert orders(G) == [-1, -1, 1, 1]
    """)
    assert all(r.passed for r in reps), [r.summary() for r in reps]


def test_bad_rebinding_keeps_old_value():
    reps = run("""
        let A = A * F @ level 6
        assert orders(A) == [-1, -1, 1, 1]
    """)
    assert [r.status for r in reps] == ["error", "pass"]


def test_level_annotation_lifts():
    reps = run("""
        let A18 = A @ level 18
        assert orders(A18) == [-3, -3, 1, 1, 1, 1]
        let Bad = F @ level 6
    """)
    assert [r.status for r in reps] == ["pass", "error"]


def test_non_unit_division_is_error():
    (rep,) = run("assert 1 / (A*1) == 1 to 5 terms")
    assert rep.status == "error"


def test_congruence_builtins():
    reps = run("""
        assert congruence cubic base 3 alpha 1 upto 3000
        assert congruence partitions base 5 alpha 1 upto 3000
        assert congruence partitions base 5 alpha 3 upto 3000
        assert congruence cubic base 7 alpha 1 upto 30
        assert congruence cubic base 3 alpha 0 upto 30
    """)
    assert [r.status for r in reps] == ["pass", "pass", "pass", "error", "error"]


def test_congruence_on_own_binding_fails_honestly():
    # p(n) is not a(n): the cubic family fails on the partition series
    (rep,) = run("""
        let P = partitions @ level 1
        assert congruence P base 3 alpha 2 upto 500
    """)
    assert rep.status == "fail"


def test_fractional_leading_exponent():
    (rep,) = execute_program(parse_program("""
        let E = eta(1z) @ level 1
        assert E == E to 5 terms
    """))
    assert rep.status == "error" and "leading exponent" in rep.error


@pytest.mark.parametrize("modulus", [None, 3**7])
def test_global_modulus(modulus):
    (rep,) = run("assert U3(F) == 3*A to 100 terms", modulus=modulus)
    assert rep.passed
