"""Characters, the Omega indicator, Legendre/Hilbert symbols and lambda_v."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

from .exact import (
    PadelicError,
    UnitPhase,
    Valuation,
    as_valuation,
    digits,
    fractional_part,
    is_prime,
    to_rational,
    unit_part,
    unit_residue,
    valuation,
)

EIGHTH = Fraction(1, 8)


def chi(v, a) -> UnitPhase:
    """Additive character: exp(2 pi i {a}_p), or exp(-2 pi i a) at infinity."""
    v = as_valuation(v)
    a = to_rational(a)
    if v.is_infinite:
        return UnitPhase(-a)
    return UnitPhase(fractional_part(a, v.p))


def omega(t) -> int:
    """Indicator of Z_p evaluated on a norm value ``t = |x|_p``."""
    t = to_rational(t)
    if t < 0:
        raise ValueError("omega takes a norm, got a negative number")
    return 1 if t <= 1 else 0


def legendre(a: int, p: int) -> int:
    """(a/p) by Euler's criterion; 0 when p divides a."""
    if p == 2 or not is_prime(p):
        raise PadelicError(f"legendre needs an odd prime, got {p}", "odd prime", p)
    r = pow(a % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def lambda_v(v, x) -> UnitPhase:
    """The lambda function of the one-dimensional Gaussian integral over Q_v.

    Values are eighth roots of unity; lambda_v(0) = 1 by convention.
    """
    v = as_valuation(v)
    x = to_rational(x)
    if x == 0:
        return UnitPhase(0)
    if v.is_infinite:
        return UnitPhase(-EIGHTH if x > 0 else EIGHTH)
    p = v.p
    if p == 2:
        d = digits(x, 2, 3)
        m = d.start
        x1, x2 = d.digits[1], d.digits[2]
        if m % 2 == 0:
            # exp(pi i (-1)^x1 / 4)
            return UnitPhase(EIGHTH - Fraction(x1, 4))
        return UnitPhase(EIGHTH + Fraction(x1, 4) + Fraction(x2, 2))
    m, u = unit_part(x, p)
    if m % 2 == 0:
        return UnitPhase(0)
    # sqrt((-1/p)) is 1 for p = 1 mod 4 and +i for p = 3 mod 4
    base = Fraction(0) if p % 4 == 1 else Fraction(1, 4)
    sign = legendre(unit_residue(u, p), p)
    return UnitPhase(base + (Fraction(1, 2) if sign < 0 else 0))


def _eps(u: int) -> int:
    return ((u - 1) // 2) % 2


def _omega2(u: int) -> int:
    return ((u * u - 1) // 8) % 2


def hilbert(v, a, b) -> int:
    """Local Hilbert symbol (a, b)_v for nonzero rationals."""
    v = as_valuation(v)
    a, b = to_rational(a), to_rational(b)
    if a == 0 or b == 0:
        raise PadelicError("Hilbert symbol of zero", "nonzero arguments", v)
    if v.is_infinite:
        return -1 if (a < 0 and b < 0) else 1
    p = v.p
    al, u = unit_part(a, p)
    be, w = unit_part(b, p)
    if p == 2:
        ur, wr = unit_residue(u, 2, 3), unit_residue(w, 2, 3)
        e = _eps(ur) * _eps(wr) + al * _omega2(wr) + be * _omega2(ur)
        return -1 if e % 2 else 1
    s = 1
    if (al * be * ((p - 1) // 2)) % 2:
        s = -s
    if be % 2:
        s *= legendre(unit_residue(u, p), p)
    if al % 2:
        s *= legendre(unit_residue(w, p), p)
    return s


def big_lambda(v, xs: Iterable) -> UnitPhase:
    """Product of lambda_v over ``xs`` (empty product is 1)."""
    total = UnitPhase(0)
    for x in xs:
        total = total + lambda_v(v, x)
    return total


def big_lambda_factored(v, xs: Iterable) -> UnitPhase:
    """lambda_v(prod x) * lambda_v(1)^(n-1) * prod_{i<j} (x_i, x_j)_v."""
    v = as_valuation(v)
    xs = [to_rational(x) for x in xs]
    if any(x == 0 for x in xs):
        raise PadelicError("zero entry in factored Lambda", "nonzero entries", v)
    if not xs:
        return UnitPhase(0)
    prod = Fraction(1)
    for x in xs:
        prod *= x
    total = lambda_v(v, prod) + (len(xs) - 1) * lambda_v(v, 1)
    sign = 1
    for i in range(len(xs)):
        for j in range(i + 1, len(xs)):
            sign *= hilbert(v, xs[i], xs[j])
    if sign < 0:
        total = total + UnitPhase(Fraction(1, 2))
    return total


def sign_phase(s: int) -> UnitPhase:
    """+1 -> phase 0, -1 -> phase 1/2."""
    return UnitPhase(0 if s > 0 else Fraction(1, 2))


__all__ = [
    "Valuation",
    "big_lambda",
    "big_lambda_factored",
    "chi",
    "hilbert",
    "lambda_v",
    "legendre",
    "omega",
    "sign_phase",
    "valuation",
]
