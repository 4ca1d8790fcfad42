from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from padelic.exact import ConvergenceError
from padelic.linalg import congruence_diagonalize, det, inverse, matmul, transpose
from padelic.series import Laurent, SeriesQ, check_convergence

small = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 5))


@st.composite
def symmetric(draw, n):
    m = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = draw(small)
    return m


@given(st.integers(1, 4).flatmap(symmetric))
def test_congruence_diagonalisation(m):
    d, t = congruence_diagonalize(m)
    n = len(m)
    dt = matmul(matmul(transpose(t), m), t)
    assert all(dt[i][j] == (d[i] if i == j else 0) for i in range(n) for j in range(n))
    assert det(t) != 0


def test_zero_pivot_is_sheared():
    d, t = congruence_diagonalize([[0, 1], [1, 0]])
    assert d[0] != 0 and d[1] != 0 and d[0] * d[1] == -det(t) ** 2


@given(st.integers(1, 3).flatmap(lambda n: st.lists(st.lists(small, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_inverse(m):
    if det(m) == 0:
        return
    inv = inverse(m)
    prod = matmul(m, inv)
    assert all(prod[i][j] == (1 if i == j else 0) for i in range(len(m)) for j in range(len(m)))


series = st.lists(small, min_size=1, max_size=10).map(lambda cs: SeriesQ(cs, 9))


@given(series, series)
def test_series_ring(a, b):
    assert a * b == b * a
    assert (a + b) - b == a
    assert (a * b).derivative() == a.derivative() * b + a * b.derivative()


@given(series)
def test_series_inverse(a):
    if a[0] == 0:
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == 1


@given(series)
def test_antiderivative(a):
    assert a.antiderivative().derivative() == a
    assert a.antiderivative()[0] == 0


def test_sine_reciprocal_laurent():
    sin = SeriesQ([0, 1, 0, Fraction(-1, 6), 0, Fraction(1, 120), 0, Fraction(-1, 5040)], 7)
    r = SeriesQ.constant(1, 7) / sin
    assert isinstance(r, Laurent) and r.pole == 1
    assert [r.coefficient(j) for j in (-1, 0, 1, 2, 3)] == [1, 0, Fraction(1, 6), 0, Fraction(7, 360)]


def test_laurent_arithmetic():
    x = Laurent(1, SeriesQ([1, 2, 3], 5))
    assert (x * x).pole == 2
    assert (x - x).is_zero()
    assert x.evaluate(2) == SeriesQ([1, 2, 3], 5).evaluate(2) / 2


def test_convergence_guard():
    s = SeriesQ([1] * 20, 19)
    check_convergence([s], Fraction(1, 100), "inf", precision=10)
    check_convergence([s], 9, 3, precision=10)
    with pytest.raises(ConvergenceError) as err:
        check_convergence([s], 1, 3)
    assert err.value.precondition == "series convergence"
    with pytest.raises(ConvergenceError):
        check_convergence([s], Fraction(1, 2), "inf")
