"""Exact scalars: rationals, valuations, p-adic digits and unit phases.

Every p-adic quantity in this package is represented by a rational number
(dense in Q_p) plus digit expansion on demand. Complex values that arise as
characters or lambda factors are roots of unity with rational phase, so they
are held exactly as elements of Q/Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

import sympy

RationalLike = Union[Fraction, int, str]

INF = math.inf


class PadelicError(Exception):
    """A computation failed a precondition.

    ``precondition`` names the violated requirement and ``valuation`` the place
    at which it failed (``None`` when the failure is valuation independent).
    """

    def __init__(self, message: str, precondition: str = "", valuation=None):
        super().__init__(message)
        self.precondition = precondition
        self.valuation = valuation

    def to_dict(self) -> dict:
        return {
            "error": str(self),
            "precondition": self.precondition,
            "valuation": None if self.valuation is None else str(self.valuation),
        }


class SingularError(PadelicError):
    pass


class ConvergenceError(PadelicError):
    pass


class BudgetExceededError(PadelicError):
    pass


def to_rational(x: RationalLike) -> Fraction:
    """Coerce ints, Fractions and ``"num/den"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"malformed rational {x!r}") from exc
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def format_rational(x: Fraction) -> str:
    """Serialize as ``"num/den"``, dropping the denominator when it is 1."""
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


@lru_cache(maxsize=4096)
def is_prime(p: int) -> bool:
    return p >= 2 and bool(sympy.isprime(p))


def prime_factors(n: int) -> list[int]:
    """Distinct primes dividing ``n`` in increasing order (empty for 0, +-1)."""
    n = abs(int(n))
    if n < 2:
        return []
    return sorted(sympy.factorint(n))


def support_primes(*xs: Fraction) -> list[int]:
    """Primes dividing a numerator or denominator of any of ``xs``."""
    ps: set[int] = set()
    for x in xs:
        x = to_rational(x)
        ps.update(prime_factors(x.numerator))
        ps.update(prime_factors(x.denominator))
    return sorted(ps)


@dataclass(frozen=True)
class Valuation:
    """A place of Q: ``Valuation(None)`` is the real place, otherwise a prime."""

    p: int | None = None

    def __post_init__(self):
        if self.p is not None:
            if isinstance(self.p, bool) or not isinstance(self.p, int):
                raise TypeError("prime must be an int")
            if not is_prime(self.p):
                raise PadelicError(f"{self.p} is not prime", "prime", self.p)

    @classmethod
    def infinity(cls) -> "Valuation":
        return cls(None)

    @classmethod
    def parse(cls, s) -> "Valuation":
        if isinstance(s, Valuation):
            return s
        if isinstance(s, int):
            return cls(s)
        t = str(s).strip().lower()
        if t in ("inf", "infinity", "oo", "real"):
            return cls(None)
        try:
            return cls(int(t))
        except ValueError as exc:
            raise ValueError(f"bad valuation {s!r}") from exc

    @property
    def is_infinite(self) -> bool:
        return self.p is None

    def __str__(self) -> str:
        return "inf" if self.p is None else str(self.p)

    def __repr__(self) -> str:
        return f"Valuation({self})"


REAL = Valuation(None)


def as_valuation(v) -> Valuation:
    return v if isinstance(v, Valuation) else Valuation.parse(v)


def _check_prime(p: int) -> int:
    if not is_prime(p):
        raise PadelicError(f"{p} is not prime", "prime", p)
    return p


def _vp_int(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def valuation(x: RationalLike, p: int) -> int | float:
    """Exponent of ``p`` in ``x``; ``math.inf`` for zero.

    >>> valuation(12, 2), valuation(Fraction(7, 9), 3)
    (2, -2)
    """
    x = to_rational(x)
    if x == 0:
        return INF
    return _vp_int(x.numerator, p) - _vp_int(x.denominator, p)


def norm(x: RationalLike, v) -> Fraction:
    """|x|_v as an exact rational."""
    x = to_rational(x)
    v = as_valuation(v)
    if v.is_infinite:
        return abs(x)
    if x == 0:
        return Fraction(0)
    return Fraction(v.p) ** (-valuation(x, v.p))


def unit_part(x: RationalLike, p: int) -> tuple[int, Fraction]:
    """Split nonzero ``x`` as ``p**m * u`` with ``u`` a p-adic unit."""
    x = to_rational(x)
    if x == 0:
        raise PadelicError("zero has no unit part", "nonzero", p)
    m = valuation(x, p)
    return m, x / Fraction(p) ** m


def unit_residue(u: Fraction, p: int, k: int = 1) -> int:
    """Residue of a p-adic unit (or integer) ``u`` modulo ``p**k``."""
    pk = p**k
    return (u.numerator * pow(u.denominator, -1, pk)) % pk


def fractional_part(x: RationalLike, p: int) -> Fraction:
    """The principal part {x}_p in [0, 1) with p-power denominator."""
    x = to_rational(x)
    d = x.denominator
    e = _vp_int(d, p)
    if e == 0:
        return Fraction(0)
    pe = p**e
    rest = d // pe
    r = (x.numerator * pow(rest, -1, pe)) % pe
    return Fraction(r, pe)


@dataclass(frozen=True)
class PadicDigits:
    start: int
    digits: tuple[int, ...]
    p: int

    def value(self) -> Fraction:
        """The rational sum of the stored (truncated) expansion."""
        return sum(
            (Fraction(b) * Fraction(self.p) ** (self.start + k) for k, b in enumerate(self.digits)),
            Fraction(0),
        )

    def digit(self, exponent: int) -> int:
        k = exponent - self.start
        if k < 0:
            return 0
        if k >= len(self.digits):
            raise IndexError(f"digit at exponent {exponent} not computed")
        return self.digits[k]


def digits(x: RationalLike, p: int, count: int) -> PadicDigits:
    """First ``count`` canonical base-p digits of ``x`` starting at its valuation."""
    x = to_rational(x)
    if count < 0:
        raise ValueError("count must be non-negative")
    if x == 0:
        return PadicDigits(0, (), p)
    m, u = unit_part(x, p)
    r = unit_residue(u, p, count) if count else 0
    ds = []
    for _ in range(count):
        ds.append(r % p)
        r //= p
    return PadicDigits(m, tuple(ds), p)


def padic_compare(x: RationalLike, y: RationalLike, p: int) -> int:
    """Linear order on Q_p: -1, 0, 1 for x < y, x == y, x > y.

    Smaller norm comes first; equal norms compare canonical digit streams
    from the leading exponent upwards.
    """
    x, y = to_rational(x), to_rational(y)
    if x == y:
        return 0
    nx, ny = norm(x, p), norm(y, p)
    if nx != ny:
        return -1 if nx < ny else 1
    # equal norms, both nonzero: first differing digit sits at exponent m + v(x - y)
    m = valuation(x, p)
    k = valuation(x - y, p) - m + 1
    dx = digits(x, p, k).digits[-1]
    dy = digits(y, p, k).digits[-1]
    return -1 if dx < dy else 1


@dataclass(frozen=True, order=True)
class UnitPhase:
    """exp(2 pi i q) with q held exactly in [0, 1)."""

    q: Fraction = Fraction(0)

    def __post_init__(self):
        q = to_rational(self.q)
        object.__setattr__(self, "q", q - math.floor(q))

    def __add__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.q + other.q)

    def __sub__(self, other: "UnitPhase") -> "UnitPhase":
        return UnitPhase(self.q - other.q)

    def __neg__(self) -> "UnitPhase":
        return UnitPhase(-self.q)

    def __mul__(self, k: int) -> "UnitPhase":
        if not isinstance(k, int):
            return NotImplemented
        return UnitPhase(self.q * k)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.q == 0

    def to_complex(self) -> complex:
        return complex(math.cos(2 * math.pi * self.q), math.sin(2 * math.pi * self.q))

    def distance(self, other: "UnitPhase") -> float:
        """Wrap-around distance on the circle, in turns."""
        d = float((self - other).q)
        return min(d, 1.0 - d)

    def __str__(self) -> str:
        return format_rational(self.q)


ZERO_PHASE = UnitPhase(0)


@dataclass(frozen=True)
class Amplitude:
    """Exact complex number sqrt(mag_sq) * exp(2 pi i phase)."""

    mag_sq: Fraction = Fraction(1)
    phase: UnitPhase = ZERO_PHASE

    def __post_init__(self):
        m = to_rational(self.mag_sq)
        if m < 0:
            raise ValueError("squared magnitude must be non-negative")
        object.__setattr__(self, "mag_sq", m)
        if not isinstance(self.phase, UnitPhase):
            object.__setattr__(self, "phase", UnitPhase(self.phase))
        if m == 0:
            object.__setattr__(self, "phase", ZERO_PHASE)

    @classmethod
    def zero(cls) -> "Amplitude":
        return cls(Fraction(0))

    @classmethod
    def one(cls) -> "Amplitude":
        return cls(Fraction(1))

    def __mul__(self, other: "Amplitude") -> "Amplitude":
        if isinstance(other, UnitPhase):
            return Amplitude(self.mag_sq, self.phase + other)
        return Amplitude(self.mag_sq * other.mag_sq, self.phase + other.phase)

    def conjugate(self) -> "Amplitude":
        return Amplitude(self.mag_sq, -self.phase)

    def is_zero(self) -> bool:
        return self.mag_sq == 0

    def to_complex(self) -> complex:
        return math.sqrt(self.mag_sq) * self.phase.to_complex()

    def to_dict(self) -> dict:
        return {"magSq": format_rational(self.mag_sq), "phase": str(self.phase)}


def parse_phase(s: RationalLike) -> UnitPhase:
    return UnitPhase(to_rational(s))
