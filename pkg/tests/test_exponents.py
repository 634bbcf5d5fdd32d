import random
from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from rheight.exponents import (
    DeltaTilde,
    H_threshold,
    M_poly,
    airy_gain,
    bak_seeger_p0,
    classify,
    duistermaat_scale,
    exponent_table,
    family_member,
    hr_closed_form,
    linear_height,
    p_prime_H,
    p_tilde_c,
    report_to_dict,
    rho,
    typeZ_E,
)
from rheight.io import dumps
from rheight.poly import parse_poly


@pytest.mark.parametrize("B", [3, 4, 5])
def test_family_matches_closed_form(B):
    for A in range(0, B - 2):
        for n in range(2 * B + 1, 2 * B + 9):
            rep = classify(family_member(A, B, n))
            assert rep.hr == hr_closed_form(A, B, n), (A, B, n)
            assert rep.complete
            assert all(rep.invariants().values())


def test_cubic_example():
    rep = classify(parse_poly("x2^3 + x1^9"))
    assert rep.p_c_prime == 6 and rep.hr == 2


def test_theta_example():
    assert classify(family_member(0, 5, 11)).theta_c == F(8, 35)


@pytest.mark.parametrize("n", range(8, 15))
def test_two_edge_family(n):
    rep = classify(family_member(1, 3, n))
    assert rep.hr == rep.d == F(7, 3)
    assert (rep.kappa.k1, rep.kappa.k2) == (F(1, 7), F(2, 7))
    assert (rep.kappa_tilde.k1, rep.kappa_tilde.k2) == (F(1, n), F(n - 1, 3 * n))
    assert typeZ_E(n) == F(n - 7, 9 * n)


def test_exponent_table_all_hold():
    failed = [c.name for c in exponent_table() if not c.holds]
    assert not failed


def test_table_values():
    assert p_tilde_c(2, 3) == p_prime_H(3) == 6
    assert M_poly(3, 4) == 0 and M_poly(2, 6) == 9
    assert H_threshold(4) == F(9, 2) == F(21 * 4, 14) - F(3, 2)
    assert bak_seeger_p0(F(5, 3), F(5, 6)) == F(6, 5)


@pytest.mark.parametrize("B", [3, 4, 5, 6])
def test_airy_gain_changes_sign_at_threshold(B):
    H0 = H_threshold(B)
    assert airy_gain(B, H0) == 0
    assert airy_gain(B, H0 + F(1, 10)) < 0 < airy_gain(B, H0 - F(1, 10))


def test_linear_height_finds_shear():
    # (x2 - x1)^2 x2 + x1^5 has d = 3/2, while the shear x2 -> x2 + x1 gives a bigger distance
    p = parse_poly("x2^3 - 2*x1*x2^2 + x1^2*x2 + x1^5")
    lh = linear_height(p)
    assert lh.h_lin > F(3, 2) and lh.exact


def test_report_json_is_deterministic():
    rep = classify(family_member(0, 4, 10))
    assert dumps(report_to_dict(rep)) == dumps(report_to_dict(classify(family_member(0, 4, 10))))


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        classify(parse_poly("x1 - x1"))


def test_outside_family_reports_gaps():
    rep = classify(parse_poly("x1^2*x2^2 + x1^6 + x2^5"))
    assert not rep.complete and rep.gaps


def _random_delta(rng: random.Random, B: int, branch: str) -> DeltaTilde:
    v = lambda: rng.choice([-1, 1]) * 10 ** rng.uniform(-4, 1)
    return DeltaTilde(B, branch, v(), tuple(v() for _ in range(B - 3)), v() if branch == "D" else None)


def test_rho_homogeneity_random():
    rng = random.Random(0)
    worst = 0.0
    for _ in range(1000):
        B = rng.choice([3, 4, 5, 6])
        dt = _random_delta(rng, B, rng.choice(["ND", "D"]))
        r = 10 ** rng.uniform(-6, 6)
        lhs = rho(duistermaat_scale(dt, r)).value
        rhs = r * rho(dt).value
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    assert worst <= 1e-12


q_pos = st.fractions(min_value=F(1, 9), max_value=4, max_denominator=9)


@given(st.sampled_from([3, 4]), q_pos, q_pos)
def test_rho_homogeneity_exact(B, q, q0):
    # perfect powers keep every rho term rational, and r = 2^(3B) keeps the dilation rational
    dt = DeltaTilde(B, "D", q ** (B - 1), (F(1, 4),) * (B - 3), q0 ** (2 * B - 3))
    r = F(2) ** (3 * B)
    val = rho(dt).value
    assert isinstance(val, F)
    assert rho(duistermaat_scale(dt, r)).value == r * val


def test_case_d_needs_delta0():
    with pytest.raises(ValueError):
        DeltaTilde(4, "D", 1.0, (1.0,))
