import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import ball_sum, real_gaussian
from padelic.exact import BudgetExceededError, SingularError, norm
from padelic.integrals import (
    ball_character_integral,
    ball_gaussian,
    gaussian1d,
    gaussian_nd,
    hasse_factor,
    oracle_gaussian,
    residue_sum,
    sufficient_resolution,
)
from padelic.linalg import det
from padelic.number_theory import hilbert, lambda_v


def _unit(p):
    return st.builds(Fraction, st.integers(-40, 40), st.integers(1, 40)).filter(
        lambda u: u.numerator % p and u.denominator % p
    )


@st.composite
def padic_pair(draw):
    p = draw(st.sampled_from((2, 3, 5, 7)))
    a = Fraction(p) ** draw(st.integers(-2, 2)) * draw(_unit(p))
    b = Fraction(p) ** draw(st.integers(-2, 2)) * draw(_unit(p))
    return p, a, b


def test_gaussian1d_known_values():
    g = gaussian1d(3, Fraction(1, 3), 1)
    assert g.to_dict() == {"magSq": "1/3", "phase": "1/4"}
    assert gaussian1d("inf", 1).to_dict() == {"magSq": "1/2", "phase": "7/8"}


def test_gaussian1d_real_matches_fresnel():
    for a, b in ((Fraction(1, 3), Fraction(1, 2)), (Fraction(-2), Fraction(3)), (Fraction(5, 7), Fraction(-1, 4))):
        assert abs(gaussian1d("inf", a, b).to_complex() - real_gaussian(float(a), float(b))) < 1e-12


@settings(max_examples=60, deadline=None)
@given(padic_pair())
def test_gaussian1d_matches_residue_sum_at_two_radii(case):
    p, a, b = case
    closed = gaussian1d(p, a, b).to_complex()
    first, second, _ = oracle_gaussian(p, a, b)
    assert abs(first - closed) < 1e-9
    assert abs(second - closed) < 1e-9


@settings(max_examples=25, deadline=None)
@given(padic_pair(), st.integers(-1, 2))
def test_ball_gaussian_matches_plain_loop(case, radius):
    p, a, b = case
    m = sufficient_resolution(p, [a], [b], radius)
    assume(p ** (radius + m) <= 20000)
    exact = ball_gaussian(p, a, b, radius, Fraction(1, p)).to_complex()
    assert abs(exact - ball_sum(p, a, b, Fraction(1, p), radius, m)) < 1e-9


def test_ball_gaussian_two_adic_gap():
    # |alpha|_2 2^(2N) = 2 sits between the two closed-form regimes
    for beta in (Fraction(0), Fraction(1, 2), Fraction(1, 4), Fraction(3)):
        exact = ball_gaussian(2, Fraction(1, 2), beta, 0).to_complex()
        assert abs(exact - ball_sum(2, Fraction(1, 2), beta, 0, 0, 3)) < 1e-12


def test_residue_sum_two_dimensional():
    alpha = [[Fraction(1, 3), Fraction(1, 9)], [Fraction(1, 9), Fraction(-2, 3)]]
    beta = [Fraction(1, 3), 0]
    m = sufficient_resolution(3, alpha, beta, 2)
    assert abs(residue_sum(3, alpha, beta, 0, [2, 2], m) - gaussian_nd(3, alpha, beta).to_complex()) < 1e-9


@st.composite
def sym2(draw):
    # numerators are 3-adic units or 0, so the stable radius stays within the oracle budget
    num = st.sampled_from((0, 1, -1, 2, -2, 4, -4, 5, -5))
    a = draw(st.builds(Fraction, num, st.sampled_from((1, 3))))
    b = draw(st.builds(Fraction, num, st.sampled_from((1, 3))))
    c = draw(st.builds(Fraction, num, st.sampled_from((1, 3))))
    m = [[a, b], [b, c]]
    assume(det(m) != 0)
    return m


@settings(max_examples=15, deadline=None)
@given(sym2(), st.lists(st.builds(Fraction, st.integers(-3, 3), st.sampled_from((1, 3))), min_size=2, max_size=2))
def test_gaussian_nd_stabilises_to_closed_form(m, beta):
    closed = gaussian_nd(3, m, beta).to_complex()
    previous = None
    found = False
    for r in range(0, 6):
        res = sufficient_resolution(3, m, beta, r)
        if 9 ** (r + res) > 10**7:
            break
        current = abs(residue_sum(3, m, beta, 0, [r, r], res) - closed) < 1e-9
        if current and previous:
            found = True
            break
        previous = current
    assert found


@given(sym2(), st.sampled_from(("inf", 2, 3, 5)))
def test_gaussian_nd_equals_hasse_form(m, v):
    # diagonalise: product of gaussian1d equals Lambda(d) * Hasse * |det 2 alpha|^{-1/2}
    amp = gaussian_nd(v, m, [0, 0])
    assert amp.mag_sq == 1 / norm(4 * det(m), v)
    from padelic.linalg import congruence_diagonalize

    d, _ = congruence_diagonalize(m)
    expected = lambda_v(v, d[0]) + lambda_v(v, d[1])
    assert amp.phase == expected
    assert hasse_factor(v, m) == hilbert(v, d[0], d[1])


def test_gaussian_nd_real_against_numeric_product():
    m = [[Fraction(2), Fraction(1)], [Fraction(1), Fraction(-3)]]
    beta = [Fraction(1), Fraction(1, 2)]
    # change of variables to eigenbasis, evaluated in floats
    import numpy as np

    w, q = np.linalg.eigh(np.array(m, dtype=float))
    bt = q.T @ np.array(beta, dtype=float)
    ref = 1
    for wi, bi in zip(w, bt):
        ref *= real_gaussian(wi, bi)
    assert abs(gaussian_nd("inf", m, beta).to_complex() - ref) < 1e-12


def test_singular_inputs():
    with pytest.raises(SingularError):
        gaussian1d(3, 0, 1)
    with pytest.raises(SingularError):
        gaussian_nd(3, [[1, 1], [1, 1]])


def test_ball_character_integral():
    assert ball_character_integral(3, Fraction(1, 3), 0) == 0
    assert ball_character_integral(3, 3, 1) == 3
    assert ball_character_integral(5, Fraction(1, 5), -1) == Fraction(1, 5)


def test_budget_is_enforced():
    with pytest.raises(BudgetExceededError) as err:
        residue_sum(7, [[Fraction(1, 7**4)]], [0], 0, [4], 4, budget=1000)
    assert err.value.precondition == "oracle budget"


def test_budget_from_environment(monkeypatch):
    monkeypatch.setenv("PADELIC_ORACLE_BUDGET", "5")
    with pytest.raises(BudgetExceededError):
        residue_sum(3, [[Fraction(1, 3)]], [0], 0, [1], 2)


def test_residue_sum_is_partition_independent():
    # the same integral split as one ball or as its radius-0 cosets
    a, b = Fraction(1, 9), Fraction(2, 3)
    whole = residue_sum(3, [[a]], [b], 0, [1], 3)
    parts = 0j
    for s in (0, Fraction(1, 3), Fraction(2, 3)):
        shifted = 2 * a * s + b
        m = sufficient_resolution(3, [a], [shifted], 0)
        parts += residue_sum(3, [[a]], [shifted], a * s * s + b * s, [0], m)
    assert abs(whole - parts) < 1e-12
    assert not math.isnan(cmath.phase(whole))
