"""Gaussian and character integrals over Q_v, closed form and brute force.

The closed forms return exact :class:`Amplitude` values. The brute-force
oracle sums characters over residue representatives of a p-adic ball in
floating point; it never calls the closed forms.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .exact import (
    Amplitude,
    BudgetExceededError,
    PadelicError,
    SingularError,
    UnitPhase,
    as_valuation,
    norm,
    to_rational,
    valuation,
)
from .linalg import congruence_diagonalize, det, inverse, is_symmetric, matvec, transpose
from .number_theory import chi, lambda_v, omega

DEFAULT_BUDGET = 10**7


def default_budget() -> int:
    env = os.environ.get("PADELIC_ORACLE_BUDGET")
    return int(env) if env else DEFAULT_BUDGET


@dataclass(frozen=True)
class QuadraticIntegrand:
    """chi_v(x^T alpha x + beta^T x) on Q_v^n."""

    alpha: tuple[tuple[Fraction, ...], ...]
    beta: tuple[Fraction, ...] = ()
    v: object = None

    def __post_init__(self):
        a = tuple(tuple(to_rational(x) for x in row) for row in self.alpha)
        n = len(a)
        if any(len(row) != n for row in a):
            raise ValueError("alpha must be square")
        if not is_symmetric([list(r) for r in a]):
            raise ValueError("alpha must be symmetric")
        b = tuple(to_rational(x) for x in self.beta) if self.beta else (Fraction(0),) * n
        if len(b) != n:
            raise ValueError("beta has the wrong length")
        object.__setattr__(self, "alpha", a)
        object.__setattr__(self, "beta", b)
        if self.v is not None:
            object.__setattr__(self, "v", as_valuation(self.v))

    @classmethod
    def scalar(cls, alpha, beta=0, v=None) -> "QuadraticIntegrand":
        return cls(((alpha,),), (beta,), v)

    @property
    def n(self) -> int:
        return len(self.alpha)

    def matrix(self) -> list[list[Fraction]]:
        return [list(r) for r in self.alpha]


@dataclass(frozen=True)
class BallSpec:
    """Ball |x|_p <= p^radius sampled on cosets of p^resolution Z_p."""

    radius: int
    resolution: int = field(default=1)

    def __post_init__(self):
        if self.resolution < 1:
            raise ValueError("resolution exponent must be >= 1")


def gaussian1d(v, alpha, beta=0) -> Amplitude:
    """Integral over Q_v of chi_v(alpha x^2 + beta x)."""
    v = as_valuation(v)
    alpha, beta = to_rational(alpha), to_rational(beta)
    if alpha == 0:
        raise SingularError("degenerate Gaussian (alpha = 0)", "alpha != 0", v)
    phase = lambda_v(v, alpha) + chi(v, -beta * beta / (4 * alpha))
    return Amplitude(1 / norm(2 * alpha, v), phase)


def gaussian_nd(v, alpha, beta=None) -> Amplitude:
    """Integral over Q_v^n of chi_v(x^T alpha x + beta^T x) for nonsingular symmetric alpha.

    Uses an exact congruence x = T y with T^T alpha T diagonal, so the value is
    |det T|_v * prod gaussian1d(d_i, (T^T beta)_i).
    """
    if isinstance(alpha, QuadraticIntegrand):
        q = alpha
        v = q.v if v is None else v
    else:
        q = QuadraticIntegrand(alpha, beta or (), v)
    v = as_valuation(v)
    a = q.matrix()
    if det(a) == 0:
        raise SingularError("alpha is singular", "nonsingular alpha", v)
    d, t = congruence_diagonalize(a)
    b = matvec(transpose(t), list(q.beta))
    amp = Amplitude(norm(det(t), v) ** 2)
    for di, bi in zip(d, b):
        amp = amp * gaussian1d(v, di, bi)
    return amp


def hasse_factor(v, alpha) -> int:
    """prod_{i<j} (d_i, d_j)_v over a congruence diagonalisation of alpha."""
    from .number_theory import hilbert

    d, _ = congruence_diagonalize([[to_rational(x) for x in row] for row in alpha])
    s = 1
    for i in range(len(d)):
        for j in range(i + 1, len(d)):
            s *= hilbert(v, d[i], d[j])
    return s


def ball_character_integral(p: int, u, radius: int) -> Fraction:
    """Integral of chi_p(u x) over |x|_p <= p^radius."""
    u = to_rational(u)
    if norm(u, p) <= Fraction(p) ** (-radius):
        return Fraction(p) ** radius
    return Fraction(0)


def ball_linear_integral_nd(p: int, b, y, radius: int) -> Fraction:
    """Integral of chi_p(y^T B x) over the polydisc |x_i|_p <= p^radius."""
    bm = [[to_rational(x) for x in row] for row in b]
    if det(bm) == 0:
        raise SingularError("B is singular", "nonsingular B", p)
    w = matvec(transpose(bm), [to_rational(x) for x in y])
    out = Fraction(1)
    for wi in w:
        out *= ball_character_integral(p, wi, radius)
    return out


def ball_gaussian(p: int, alpha, beta, radius: int, const=0) -> Amplitude:
    """Exact integral of chi_p(alpha x^2 + beta x + const) over |x|_p <= p^radius."""
    alpha, beta, const = to_rational(alpha), to_rational(beta), to_rational(const)
    shift = chi(p, const)
    scale = Fraction(p) ** radius
    if alpha == 0 or norm(alpha, p) * scale**2 <= 1:
        # quadratic part is trivial on the ball
        if omega(scale * norm(beta, p)) == 0:
            return Amplitude.zero()
        return Amplitude(scale**2, shift)
    if norm(4 * alpha, p) * scale**2 >= 1:
        # quadratic part of the dual variable is trivial on the dual ball
        if omega(norm(beta / (2 * alpha), p) / scale) == 0:
            return Amplitude.zero()
        return gaussian1d(p, alpha, beta) * shift
    # p = 2 and |alpha| p^(2 radius) = 2: chi(alpha x^2) is the character y -> (-1)^y in y = 2^radius x
    if omega(norm(beta / scale + Fraction(1, 2), p)) == 0:
        return Amplitude.zero()
    return Amplitude(scale**2, shift)


def stabilization_radius(p: int, alpha, beta=0) -> int:
    """A ball radius beyond which the 1-d ball integral equals the Q_p integral."""
    alpha, beta = to_rational(alpha), to_rational(beta)
    v2 = 1 if p == 2 else 0
    va = valuation(alpha, p)
    n = math.ceil((va + 2 + 2 * v2) / 2) - 1
    if beta != 0:
        n = max(n, va + v2 - valuation(beta, p))
    return n


def sufficient_resolution(p: int, alpha, beta, radius: int) -> int:
    """Smallest M for which the integrand is constant on cosets of p^M Z_p^n."""
    a = [to_rational(x) for x in np.ravel(np.array(alpha, dtype=object))]
    b = [to_rational(x) for x in np.ravel(np.array(beta, dtype=object))] if beta is not None else []
    v2 = 1 if p == 2 else 0
    m = max(1, -radius)
    va = [valuation(x, p) for x in a if x != 0]
    vb = [valuation(x, p) for x in b if x != 0]
    if va:
        amin = min(va)
        m = max(m, radius - amin - v2, math.ceil(-amin / 2))
    if vb:
        m = max(m, -min(vb))
    return m


def _lcm_den(xs) -> int:
    out = 1
    for x in xs:
        out = math.lcm(out, x.denominator)
    return out


def residue_sum(p: int, alpha, beta=None, const=0, radii: Sequence[int] = (0,), resolution: int = 1,
                budget: int | None = None) -> complex:
    """Sum chi_p over coset representatives of prod_i {|x_i| <= p^radii[i]}.

    Returns p^(-n M) * sum exp(2 pi i {x^T alpha x + beta^T x + const}_p), the
    exact ball integral whenever the integrand is constant on p^M cosets.
    """
    budget = default_budget() if budget is None else budget
    a = [[to_rational(x) for x in row] for row in alpha]
    n = len(a)
    b = [to_rational(x) for x in beta] if beta is not None else [Fraction(0)] * n
    c = to_rational(const)
    radii = list(radii)
    if len(radii) == 1 and n > 1:
        radii = radii * n
    m = resolution
    if any(r + m < 0 for r in radii):
        raise ValueError("resolution must be at least -radius")
    counts = [p ** (r + m) for r in radii]
    total_terms = math.prod(counts)
    if total_terms > budget:
        raise BudgetExceededError(
            f"residue sum needs {total_terms} terms, budget {budget}", "oracle budget", p
        )
    nmax = max(max(radii), 0)
    big = _lcm_den([x for row in a for x in row] + b + [c])
    e = 0
    rest = big
    while rest % p == 0:
        rest //= p
        e += 1
    modulus = p ** (2 * nmax + e)
    inv = pow(rest, -1, modulus)
    ai = [[(x * big).numerator * inv % modulus for x in row] for row in a]
    bi = [(x * big).numerator * p**nmax * inv % modulus for x in b]
    ci = (c * big).numerator * p ** (2 * nmax) * inv % modulus

    use_int = modulus < 2**31
    dtype = np.int64 if use_int else object
    xs = []
    for r, cnt in zip(radii, counts):
        scale = p ** (nmax - r)
        xs.append(np.array([(k * scale) % modulus for k in range(cnt)], dtype=dtype))

    def mulmod(u, w):
        return (u * w) % modulus

    # terms depending on the last coordinate only
    last = xs[-1]
    base_last = (mulmod(mulmod(last, last), ai[-1][-1]) + mulmod(last, bi[-1])) % modulus
    weight = Fraction(1, p ** (n * m))
    acc_re: list[float] = []
    acc_im: list[float] = []
    for head in itertools.product(*[range(cnt) for cnt in counts[:-1]]):
        hx = [int(xs[i][k]) for i, k in enumerate(head)]
        s0 = ci
        lin = 0
        for i, xi in enumerate(hx):
            s0 += ai[i][i] * xi * xi + bi[i] * xi
            for j in range(i + 1, len(hx)):
                s0 += 2 * ai[i][j] * xi * hx[j]
            lin += 2 * ai[i][n - 1] * xi
        s0 %= modulus
        lin %= modulus
        r = (base_last + mulmod(last, lin) + s0) % modulus
        ph = np.asarray(r, dtype=np.float64) / float(modulus)
        z = np.exp(2j * np.pi * ph)
        acc_re.append(float(np.sum(z.real)))
        acc_im.append(float(np.sum(z.imag)))
    w = float(weight)
    return complex(math.fsum(acc_re) * w, math.fsum(acc_im) * w)


def brute_force_ball_integral(p: int, q: QuadraticIntegrand, spec: BallSpec, budget: int | None = None) -> complex:
    """Residue-sum oracle for the ball integral of chi_p(x^T alpha x + beta^T x)."""
    if q.n > 3:
        raise PadelicError("oracle supports n <= 3", "n <= 3", p)
    return residue_sum(p, q.matrix(), list(q.beta), 0, [spec.radius] * q.n, spec.resolution, budget)


def oracle_gaussian(p: int, alpha, beta=0, budget: int | None = None, radius: int | None = None) -> tuple[complex, complex, int]:
    """Ball sums at two consecutive stabilised radii for a 1-d Gaussian.

    Returns (value at N*, value at N*+1, N*).
    """
    alpha, beta = to_rational(alpha), to_rational(beta)
    n0 = stabilization_radius(p, alpha, beta) if radius is None else radius
    vals = []
    for nn in (n0, n0 + 1):
        m = sufficient_resolution(p, [alpha], [beta], nn)
        vals.append(residue_sum(p, [[alpha]], [beta], 0, [nn], m, budget))
    return vals[0], vals[1], n0


__all__ = [
    "BallSpec",
    "QuadraticIntegrand",
    "ball_character_integral",
    "ball_gaussian",
    "ball_linear_integral_nd",
    "brute_force_ball_integral",
    "gaussian1d",
    "gaussian_nd",
    "hasse_factor",
    "oracle_gaussian",
    "residue_sum",
    "stabilization_radius",
    "sufficient_resolution",
]
