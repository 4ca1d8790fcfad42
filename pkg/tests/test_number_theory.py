from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import gauss_lambda, hilbert_brute
from padelic.exact import PadelicError, UnitPhase, norm
from padelic.number_theory import (
    big_lambda,
    big_lambda_factored,
    chi,
    hilbert,
    lambda_v,
    legendre,
    omega,
    sign_phase,
)
from strategies import PRIMES, nonzero, places, primes, rationals, small_nonzero

# Gauss-sum values of lambda_p, phase in turns, produced by oracles.gauss_lambda
LAMBDA_TABLE = {
    2: {"1": "1/8", "-1": "7/8", "3": "7/8", "-3": "1/8", "5": "1/8", "7": "7/8", "2": "1/8", "-2": "7/8",
        "6": "3/8", "1/2": "1/8", "3/4": "7/8", "1/3": "7/8", "2/5": "5/8", "14": "7/8", "10": "5/8"},
    3: {"1": "0", "-1": "0", "3": "1/4", "-3": "3/4", "6": "3/4", "3/4": "1/4", "1/3": "1/4", "2/3": "3/4",
        "3/7": "1/4", "10": "0"},
    5: {"1": "0", "5": "0", "2/5": "1/2", "10": "1/2", "1/5": "0", "3/7": "0"},
    7: {"1": "0", "7": "1/4", "-3": "0", "1/7": "1/4", "3/7": "3/4", "14": "1/4"},
}


@pytest.mark.parametrize(
    "p,x,phase", [(p, x, ph) for p, row in LAMBDA_TABLE.items() for x, ph in row.items()]
)
def test_lambda_frozen_gauss_sums(p, x, phase):
    assert str(lambda_v(p, Fraction(x))) == phase


@settings(max_examples=40, deadline=None)
@given(st.sampled_from((2, 3, 5)), st.builds(Fraction, st.integers(-30, 30).filter(bool), st.sampled_from((1, 2, 3, 4, 5, 9))))
def test_lambda_against_live_gauss_sum(p, x):
    mag, phase = gauss_lambda(x, p)
    assert abs(mag - 1) < 1e-9
    assert lambda_v(p, x) == UnitPhase(phase)


def test_lambda_real_place():
    assert str(lambda_v("inf", 1)) == "7/8"
    assert str(lambda_v("inf", -5)) == "1/8"


def test_lambda_two_even_branch():
    # an even-valuation unit with second digit 1: lambda_2(3) = exp(-i pi/4)
    assert str(lambda_v(2, 3)) == "7/8"
    assert (lambda_v(2, 3) + lambda_v(2, -3)).is_zero()


@given(places, nonzero, small_nonzero)
def test_lambda_square_class(v, x, a):
    assert lambda_v(v, a * a * x) == lambda_v(v, x)


@given(places, nonzero)
def test_lambda_inverse(v, x):
    assert (lambda_v(v, x) + lambda_v(v, -x)).is_zero()


@given(places, nonzero, nonzero)
def test_lambda_harmonic(v, x, y):
    if x + y:
        assert lambda_v(v, x * y / (x + y)) + lambda_v(v, x + y) == lambda_v(v, x) + lambda_v(v, y)


@given(places, nonzero, nonzero)
def test_lambda_hilbert_relation(v, x, y):
    lhs = lambda_v(v, x) + lambda_v(v, y)
    assert lhs == lambda_v(v, x * y) + lambda_v(v, 1) + sign_phase(hilbert(v, x, y))


@given(places, nonzero)
def test_lambda_is_eighth_root(v, x):
    assert (lambda_v(v, x).q * 8).denominator == 1


@given(places, st.lists(nonzero, min_size=1, max_size=5))
def test_big_lambda_factorisation(v, xs):
    assert big_lambda(v, xs) == big_lambda_factored(v, xs)


HILBERT_VALUES = (1, -1, 2, -2, 3, -3, 5, 6, -7, 10, 14, 15, 21, 35, 12, Fraction(1, 2), Fraction(-3, 5))


@pytest.mark.parametrize("p", PRIMES)
def test_hilbert_against_solvability_search(p):
    for a in HILBERT_VALUES:
        for b in HILBERT_VALUES:
            assert hilbert(p, a, b) == hilbert_brute(a, b, p), (a, b)


@given(places, nonzero, nonzero, nonzero)
def test_hilbert_bimultiplicative(v, a, b, c):
    assert hilbert(v, a * c, b) == hilbert(v, a, b) * hilbert(v, c, b)
    assert hilbert(v, a, b) == hilbert(v, b, a)
    assert hilbert(v, a, -a) == 1


def test_hilbert_of_zero_is_an_error():
    with pytest.raises(PadelicError) as err:
        hilbert(3, 0, 1)
    assert err.value.precondition == "nonzero arguments"


def test_legendre_quadratic_residues():
    for p in (3, 5, 7, 11, 13):
        squares = {x * x % p for x in range(1, p)}
        for a in range(1, p):
            assert legendre(a, p) == (1 if a in squares else -1)
        assert legendre(p, p) == 0
    with pytest.raises(PadelicError):
        legendre(3, 2)


@given(rationals, rationals, places)
def test_chi_is_a_character(a, b, v):
    assert chi(v, a + b) == chi(v, a) + chi(v, b)


@given(rationals, primes)
def test_chi_trivial_on_integers(a, p):
    if norm(a, p) <= 1:
        assert chi(p, a).is_zero()


def test_chi_examples():
    assert str(chi(3, Fraction(1, 9))) == "1/9"
    assert str(chi("inf", Fraction(1, 4))) == "3/4"


def test_omega():
    assert omega(1) == 1 and omega(Fraction(1, 3)) == 1 and omega(3) == 0
    with pytest.raises(ValueError):
        omega(-1)
