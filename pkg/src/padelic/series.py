"""Truncated power series over Q and Laurent quotients of them."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .exact import ConvergenceError, as_valuation, norm, to_rational


class SeriesQ:
    """sum_k c_k t^k with coefficients known for k = 0..order.

    Arithmetic truncates to the smaller order of the operands.
    """

    __slots__ = ("coeffs", "order")

    def __init__(self, coeffs: Iterable = (), order: int = 32):
        cs = [to_rational(c) if not isinstance(c, Fraction) else c for c in coeffs]
        if order < 0:
            raise ValueError("series order must be non-negative")
        cs = cs[: order + 1]
        cs.extend([Fraction(0)] * (order + 1 - len(cs)))
        self.coeffs: tuple[Fraction, ...] = tuple(cs)
        self.order = order

    @classmethod
    def constant(cls, c, order: int = 32) -> "SeriesQ":
        return cls([to_rational(c)], order)

    @classmethod
    def monomial(cls, k: int, c=1, order: int = 32) -> "SeriesQ":
        cs = [Fraction(0)] * k + [to_rational(c)]
        return cls(cs, order)

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k <= self.order else Fraction(0)

    def __repr__(self) -> str:
        nz = [(k, c) for k, c in enumerate(self.coeffs) if c]
        body = " + ".join(f"{c}*t^{k}" for k, c in nz[:6]) or "0"
        return f"SeriesQ({body}{' + ...' if len(nz) > 6 else ''}, order={self.order})"

    def _coerce(self, other) -> "SeriesQ":
        if isinstance(other, SeriesQ):
            return other
        if isinstance(other, (int, Fraction)):
            return SeriesQ.constant(other, self.order)
        return NotImplemented

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        n = min(self.order, o.order)
        return all(self[k] == o[k] for k in range(n + 1))

    __hash__ = None

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = min(self.order, o.order)
        return SeriesQ([self[k] + o[k] for k in range(n + 1)], n)

    __radd__ = __add__

    def __neg__(self):
        return SeriesQ([-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return SeriesQ([c * other for c in self.coeffs], self.order)
        if not isinstance(other, SeriesQ):
            return NotImplemented
        n = min(self.order, other.order)
        a = [(i, c) for i, c in enumerate(self.coeffs[: n + 1]) if c]
        b = [(j, c) for j, c in enumerate(other.coeffs[: n + 1]) if c]
        out = [Fraction(0)] * (n + 1)
        for i, x in a:
            for j, y in b:
                if i + j > n:
                    break
                out[i + j] += x * y
        return SeriesQ(out, n)

    __rmul__ = __mul__

    def valuation(self) -> int | None:
        """Index of the first nonzero known coefficient (None if all vanish)."""
        return next((k for k, c in enumerate(self.coeffs) if c), None)

    def is_zero(self) -> bool:
        return self.valuation() is None

    def derivative(self) -> "SeriesQ":
        if self.order == 0:
            return SeriesQ([], 0)
        return SeriesQ([k * self.coeffs[k] for k in range(1, self.order + 1)], self.order - 1)

    def antiderivative(self) -> "SeriesQ":
        """Antiderivative vanishing at t = 0 (no pseudo-constants)."""
        return SeriesQ([Fraction(0)] + [c / (k + 1) for k, c in enumerate(self.coeffs)], self.order + 1)

    def truncate(self, order: int) -> "SeriesQ":
        return SeriesQ(self.coeffs, min(order, self.order))

    def shift_up(self, k: int) -> "SeriesQ":
        """Multiply by t^k (the order grows by k)."""
        return SeriesQ([Fraction(0)] * k + list(self.coeffs), self.order + k)

    def shift_down(self, k: int) -> "SeriesQ":
        """Divide by t^k; the first k coefficients must vanish."""
        if any(self.coeffs[:k]):
            raise ValueError("series does not vanish to the requested order")
        return SeriesQ(self.coeffs[k:], self.order - k)

    def inverse(self) -> "SeriesQ":
        c0 = self.coeffs[0]
        if c0 == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        out = [1 / c0]
        for k in range(1, self.order + 1):
            s = sum((self.coeffs[j] * out[k - j] for j in range(1, k + 1)), Fraction(0))
            out.append(-s / c0)
        return SeriesQ(out, self.order)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return SeriesQ([c / other for c in self.coeffs], self.order)
        return Laurent.from_series(self) / Laurent.from_series(other)

    def __call__(self, t) -> Fraction:
        return self.evaluate(t)

    def evaluate(self, t) -> Fraction:
        """Exact value of the truncated polynomial at rational ``t`` (Horner)."""
        t = to_rational(t)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def tail_terms(self, t, k: int = 4) -> list[Fraction]:
        t = to_rational(t)
        lo = max(0, self.order - k + 1)
        return [self.coeffs[j] * t**j for j in range(lo, self.order + 1)]


def check_convergence(series: Sequence[SeriesQ], t, v, precision: int = 10, k: int = 4) -> None:
    """Raise ConvergenceError unless the last ``k`` retained terms are negligible at ``t``.

    Negligible means p-adic norm <= p^-precision, or absolute value <=
    10^-precision at the real place.
    """
    v = as_valuation(v)
    t = to_rational(t)
    bound = Fraction(1, 10**precision) if v.is_infinite else Fraction(1, v.p**precision)
    for s in series:
        for term in s.tail_terms(t, k):
            if term and norm(term, v) > bound:
                raise ConvergenceError(
                    f"series tail not negligible at t={t} for v={v} (order {s.order})",
                    "series convergence",
                    v,
                )


@dataclass(frozen=True)
class Laurent:
    """``series / t**pole`` -- a truncated Laurent series over Q."""

    pole: int
    series: SeriesQ

    @classmethod
    def from_series(cls, s: SeriesQ) -> "Laurent":
        return cls(0, s).normalized()

    @property
    def precision(self) -> int:
        """Absolute order: coefficients of t^j are known for j <= precision."""
        return self.series.order - self.pole

    def normalized(self) -> "Laurent":
        k = self.series.valuation()
        if k is None:
            return Laurent(self.pole, self.series)
        if k == 0:
            return self
        return Laurent(self.pole - k, self.series.shift_down(k))

    def coefficient(self, j: int) -> Fraction:
        """Coefficient of t^j."""
        if j > self.precision:
            raise IndexError("coefficient beyond known precision")
        return self.series[j + self.pole]

    def leading_exponent(self) -> int | None:
        k = self.series.valuation()
        return None if k is None else k - self.pole

    def _coerce(self, other) -> "Laurent":
        if isinstance(other, Laurent):
            return other
        if isinstance(other, SeriesQ):
            return Laurent(0, other)
        if isinstance(other, (int, Fraction)):
            return Laurent(0, SeriesQ.constant(other, max(self.precision, 0) + max(self.pole, 0)))
        return NotImplemented

    def _aligned(self, other: "Laurent") -> tuple[SeriesQ, SeriesQ, int]:
        p = max(self.pole, other.pole)
        return self.series.shift_up(p - self.pole), other.series.shift_up(p - other.pole), p

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, p = self._aligned(o)
        return Laurent(p, a + b).normalized()

    __radd__ = __add__

    def __neg__(self):
        return Laurent(self.pole, -self.series)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Laurent(self.pole, self.series * other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return Laurent(self.pole + o.pole, self.series * o.series).normalized()

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Laurent(self.pole, self.series / other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        o = o.normalized()
        if o.series.is_zero():
            raise ZeroDivisionError("division by a series with no known nonzero coefficient")
        a = self.normalized()
        # relative precision of the quotient is limited by both operands
        n = min(a.series.order, o.series.order)
        q = a.series.truncate(n) * o.series.truncate(n).inverse()
        return Laurent(a.pole - o.pole, q).normalized()

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def is_zero(self) -> bool:
        return self.series.is_zero()

    def principal_and_regular(self) -> tuple[int, SeriesQ]:
        """The (poleOrder, SeriesQ) pair: value = series / t^poleOrder."""
        return self.pole, self.series

    def evaluate(self, t) -> Fraction:
        t = to_rational(t)
        return self.series.evaluate(t) / t**self.pole
