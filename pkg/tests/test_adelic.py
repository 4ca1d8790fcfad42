from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padelic.action import BoundaryData, QuadraticLagrangian
from padelic.adelic import (
    Adele,
    adelic_kernel,
    chi_product,
    group_condition_check,
    hilbert_product,
    lambda_product,
    norm_product,
    vacuum_check,
)
from padelic.exact import PadelicError
from strategies import nonzero, rationals

F = Fraction
FREE = QuadraticLagrangian.free_particle(1, 12)


@given(nonzero)
def test_norm_product(x):
    assert norm_product(x) == 1


@given(nonzero)
def test_lambda_product(x):
    assert lambda_product(x).is_zero()


@given(rationals)
def test_chi_product(x):
    assert chi_product(x).is_zero()


@given(nonzero, nonzero)
def test_hilbert_product(x, y):
    assert hilbert_product(x, y) == 1


def test_product_of_zero_is_an_error():
    with pytest.raises(PadelicError):
        norm_product(0)


@given(rationals, rationals)
def test_principal_adeles_form_a_ring(x, y):
    a, b = Adele.principal(x), Adele.principal(y)
    primes = (2, 3, 5, 7, 11)
    assert (a + b).equals_at(Adele.principal(x + y), primes)
    assert (a * b).equals_at(Adele.principal(x * y), primes)


def test_adele_components_and_tail():
    a = Adele(F(1, 2), {3: F(1, 9)}, F(5))
    assert a.component("inf") == F(1, 2)
    assert a.component(3) == F(1, 9)
    assert a.component(7) == 5
    with pytest.raises(PadelicError):
        Adele(0, {}, F(1, 3))


@pytest.mark.parametrize("p", [3, 5])
@pytest.mark.parametrize("t2", [1, "p"])
def test_vacuum_holds_for_integral_time(p, t2):
    rep = vacuum_check(p, FREE, 0, p if t2 == "p" else t2)
    assert rep["holds"]
    assert [r["target"] for r in rep["rows"]] == [1, 1, 0]
    assert [r["value"]["magSq"] for r in rep["rows"]] == ["1", "1", "0"]
    assert max(r["bruteForceDeviation"] for r in rep["rows"]) < 1e-9


def test_vacuum_fails_for_small_norm_time():
    # |T|_3 = 3 violates the restriction on time
    assert not vacuum_check(3, FREE, 0, F(1, 3))["holds"]


@pytest.mark.parametrize("p", [3, 5])
def test_group_condition(p):
    rep = group_condition_check(p, FREE, 0, p, p + p * p)
    assert rep["maxDeviation"] < 1e-9


def test_adelic_kernel_free_particle():
    res = adelic_kernel(FREE, BoundaryData(0, 2, [0], [1]), primes=(2, 3))
    d = res.to_dict()
    assert d["total"] == {"magSq": "1", "phase": "0"}
    assert d["perValuation"]["inf"] == {"magSq": "1/2", "phase": "1/8"}
    assert d["tailCertificate"] == [5, 7, 11]


def test_adding_a_certified_prime_leaves_total_unchanged():
    bd = BoundaryData(0, 2, [0], [1])
    small = adelic_kernel(FREE, bd, primes=(2, 3)).total
    larger = adelic_kernel(FREE, bd, primes=(2, 3, 5)).total
    assert small == larger


def test_tail_flags_for_non_integral_lagrangian():
    lag = QuadraticLagrangian.oscillator(F(1, 5), 80)
    res = adelic_kernel(lag, BoundaryData(0, 12, [0], [0]), primes=(3,), samples=2)
    assert res.tail_certificate == [2]
    assert res.tail_flags == ["5: Lagrangian coefficients not integral"]


def test_composite_prime_rejected():
    with pytest.raises(PadelicError):
        adelic_kernel(FREE, BoundaryData(0, 2, [0], [1]), primes=(2, 4))
