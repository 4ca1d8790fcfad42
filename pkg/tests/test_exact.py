import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import frac_p, vp
from padelic.exact import (
    Amplitude,
    PadelicError,
    UnitPhase,
    Valuation,
    digits,
    format_rational,
    fractional_part,
    norm,
    padic_compare,
    parse_phase,
    to_rational,
    unit_part,
    valuation,
)
from strategies import nonzero, primes, rationals


def test_valuation_examples():
    assert valuation(12, 2) == 2
    assert valuation(Fraction(7, 9), 3) == -2
    assert valuation(0, 5) == math.inf


def test_norm_examples():
    assert norm(Fraction(1, 8), 2) == 8
    assert norm(Fraction(-3, 4), "inf") == Fraction(3, 4)
    assert norm(0, 3) == 0


def test_fractional_part_examples():
    assert fractional_part(Fraction(1, 9), 3) == Fraction(1, 9)
    assert fractional_part(Fraction(-1, 3), 3) == Fraction(2, 3)
    assert fractional_part(Fraction(5, 6), 2) == Fraction(1, 2)
    assert fractional_part(7, 7) == 0


def test_digits_of_minus_one():
    d = digits(-1, 3, 5)
    assert d.start == 0 and d.digits == (2, 2, 2, 2, 2)


@pytest.mark.parametrize("text,value", [("3/4", Fraction(3, 4)), ("-7", Fraction(-7)), (" 6/8 ", Fraction(3, 4))])
def test_rational_parsing(text, value):
    assert to_rational(text) == value


@pytest.mark.parametrize("bad", ["", "1/0", "abc", "1.5.2"])
def test_malformed_rationals(bad):
    with pytest.raises(ValueError):
        to_rational(bad)


def test_valuation_parse():
    assert Valuation.parse("inf").is_infinite
    assert Valuation.parse("7").p == 7
    with pytest.raises(ValueError):
        Valuation.parse("x")
    with pytest.raises(PadelicError):
        Valuation.parse("9")


@given(nonzero, primes)
def test_valuation_matches_oracle(x, p):
    assert valuation(x, p) == vp(x, p)


@given(nonzero, nonzero, primes)
def test_norm_multiplicative_and_ultrametric(x, y, p):
    assert norm(x * y, p) == norm(x, p) * norm(y, p)
    assert norm(x + y, p) <= max(norm(x, p), norm(y, p))


@given(rationals, primes)
def test_fractional_part_matches_oracle(x, p):
    f = fractional_part(x, p)
    assert f == frac_p(x, p)
    assert 0 <= f < 1
    assert norm(x - f, p) <= 1


@given(nonzero, primes, st.integers(1, 12))
def test_digits_reconstruct_modulo(x, p, count):
    d = digits(x, p, count)
    assert all(0 <= b < p for b in d.digits)
    assert d.digits[0] != 0
    assert norm(x - d.value(), p) <= Fraction(p) ** -(d.start + count)


@given(nonzero, primes)
def test_unit_part(x, p):
    m, u = unit_part(x, p)
    assert x == Fraction(p) ** m * u and norm(u, p) == 1


@given(rationals, rationals, rationals, primes)
def test_padic_order_is_total_and_transitive(x, y, z, p):
    assert padic_compare(x, y, p) == -padic_compare(y, x, p)
    if padic_compare(x, y, p) <= 0 and padic_compare(y, z, p) <= 0:
        assert padic_compare(x, z, p) <= 0


@given(rationals)
def test_rational_round_trip(x):
    assert to_rational(format_rational(x)) == x


@given(rationals, rationals)
def test_unit_phase_group(a, b):
    pa, pb = UnitPhase(a), UnitPhase(b)
    assert (pa + pb) - pb == pa
    assert (pa + (-pa)).is_zero()
    assert 0 <= pa.q < 1
    assert parse_phase(str(pa)) == pa


@given(st.builds(Fraction, st.integers(0, 50), st.integers(1, 50)), rationals)
def test_amplitude_complex_value(m, q):
    a = Amplitude(m, UnitPhase(q))
    z = a.to_complex()
    assert abs(abs(z) ** 2 - float(m)) < 1e-9 * max(1, float(m))
    assert (a * a.conjugate()).phase.is_zero()


def test_amplitude_zero_has_zero_phase():
    assert Amplitude(0, UnitPhase(Fraction(1, 3))).to_dict() == {"magSq": "0", "phase": "0"}
    with pytest.raises(ValueError):
        Amplitude(-1)
