"""Adeles with finite support, the adelic product formulas and the adelic kernel."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .action import BoundaryData, QuadraticLagrangian, full_action, guard, solve_fundamental
from .exact import (
    Amplitude,
    PadelicError,
    UnitPhase,
    Valuation,
    as_valuation,
    format_rational,
    is_prime,
    norm,
    prime_factors,
    support_primes,
    to_rational,
    valuation,
)
from .integrals import ball_gaussian, residue_sum, sufficient_resolution
from .kernel import PropagatorRequest, kernel_v, normalization_n
from .number_theory import chi, hilbert, lambda_v, omega

REAL = Valuation(None)


@dataclass(frozen=True)
class Adele:
    """(x_inf, x_2, x_3, ...) stored as a real part, listed p-adic parts and a tail.

    Unlisted primes carry ``tail`` (a rational that must be a p-adic integer
    there), or 0 when ``tail`` is None.
    """

    real: Fraction
    finite: Mapping[int, Fraction] = field(default_factory=dict)
    tail: Fraction | None = None

    def __post_init__(self):
        object.__setattr__(self, "real", to_rational(self.real))
        fin = {}
        for p, x in dict(self.finite).items():
            if not is_prime(p):
                raise PadelicError(f"{p} is not prime", "prime", p)
            fin[int(p)] = to_rational(x)
        object.__setattr__(self, "finite", dict(sorted(fin.items())))
        if self.tail is not None:
            t = to_rational(self.tail)
            object.__setattr__(self, "tail", t)
            missing = [p for p in prime_factors(t.denominator) if p not in fin]
            if missing:
                raise PadelicError(f"tail is not integral at {missing}", "restricted product", missing[0])

    @classmethod
    def principal(cls, x) -> "Adele":
        """The diagonal embedding of a rational."""
        x = to_rational(x)
        return cls(x, {p: x for p in prime_factors(x.denominator)}, x)

    def component(self, v):
        v = as_valuation(v)
        if v.is_infinite:
            return self.real
        if v.p in self.finite:
            return self.finite[v.p]
        return self.tail if self.tail is not None else Fraction(0)

    def _combine(self, other: "Adele", op) -> "Adele":
        primes = sorted(set(self.finite) | set(other.finite))
        fin = {p: op(self.component(p), other.component(p)) for p in primes}
        if self.tail is None and other.tail is None:
            tail = None
        else:
            a = self.tail if self.tail is not None else Fraction(0)
            b = other.tail if other.tail is not None else Fraction(0)
            tail = op(a, b)
        return Adele(op(self.real, other.real), fin, tail)

    def __add__(self, other: "Adele") -> "Adele":
        return self._combine(other, lambda a, b: a + b)

    def __mul__(self, other: "Adele") -> "Adele":
        return self._combine(other, lambda a, b: a * b)

    def equals_at(self, other: "Adele", primes: Iterable[int]) -> bool:
        return self.real == other.real and all(self.component(p) == other.component(p) for p in primes)


def _nonzero(x) -> Fraction:
    x = to_rational(x)
    if x == 0:
        raise PadelicError("adelic product of zero", "x != 0")
    return x


def norm_product(x) -> Fraction:
    """|x|_inf prod_p |x|_p over the primes where |x|_p != 1."""
    x = _nonzero(x)
    out = norm(x, REAL)
    for p in support_primes(x):
        out *= norm(x, p)
    return out


def lambda_product(x) -> UnitPhase:
    """Phase of lambda_inf(x) lambda_2(x) prod_{p odd, v_p(x) odd} lambda_p(x)."""
    x = _nonzero(x)
    out = lambda_v(REAL, x) + lambda_v(2, x)
    for p in support_primes(x):
        if p != 2 and valuation(x, p) % 2:
            out = out + lambda_v(p, x)
    return out


def hilbert_product(x, y) -> int:
    """(x, y)_inf prod_p (x, y)_p over inf, 2 and the primes dividing x or y."""
    x, y = _nonzero(x), _nonzero(y)
    out = hilbert(REAL, x, y)
    for p in sorted(set([2] + support_primes(x, y))):
        out *= hilbert(p, x, y)
    return out


def chi_product(x) -> UnitPhase:
    x = to_rational(x)
    out = chi(REAL, x)
    for p in prime_factors(x.denominator):
        out = out + chi(p, x)
    return out


def _free_kernel_terms(p: int, lag: QuadraticLagrangian, t1, t2, h, x2, fm=None):
    """Quadratic data of x' -> K_p(x'', t''; x', t') for n = 1: (alpha, beta, const, N)."""
    fm = solve_fundamental(lag) if fm is None else fm
    ca, _ = full_action(lag, fm, BoundaryData(t1, t2, [0], [0]))
    amp = normalization_n(p, ca.Bbar, h)
    alpha = -ca.Cbar[0][0] / (2 * h)
    beta = -(ca.Bbar[0][0] * x2 + ca.Ebar[0]) / h
    const = -(ca.Abar[0][0] * x2 * x2 / 2 + ca.Dbar[0] * x2 + ca.eps_bar) / h
    return alpha, beta, const, amp


def vacuum_check(p: int, lag: QuadraticLagrangian, t1, t2, h=1, budget: int | None = None) -> dict:
    """Does integral_{Z_p} K_p(x'', t''; x', t') dx' equal Omega(|x''|_p)?

    x'' runs over p, 1 and 1/p. Exact ball Gaussians, cross-checked by residue sums.
    """
    v = as_valuation(p)
    if v.is_infinite:
        raise PadelicError("vacuum check runs at a prime", "finite place", v)
    if lag.n != 1:
        raise PadelicError("vacuum check supports n = 1", "n = 1", v)
    t1, t2, h = to_rational(t1), to_rational(t2), to_rational(h)
    fm = solve_fundamental(lag)

    guard(lag, fm, [t1, t2], v)
    rows = []
    ok = True
    for x2 in (Fraction(p), Fraction(1), Fraction(1, p)):
        alpha, beta, const, amp = _free_kernel_terms(p, lag, t1, t2, h, x2, fm)
        exact = ball_gaussian(p, alpha, beta, 0, const) * amp
        m = sufficient_resolution(p, [alpha], [beta], 0)
        brute = residue_sum(p, [[alpha]], [beta], const, [0], m, budget) * amp.to_complex()
        target = omega(norm(x2, p))
        exact_c = exact.to_complex()
        match = exact.mag_sq == target and (target == 0 or exact.phase.is_zero())
        ok = ok and match
        rows.append(
            {
                "x2": format_rational(x2),
                "value": (Amplitude.zero() if exact.is_zero() else exact).to_dict(),
                "target": target,
                "bruteForceDeviation": abs(brute - exact_c),
            }
        )
    return {"valuation": str(v), "holds": ok, "rows": rows}


def group_condition_check(p: int, lag: QuadraticLagrangian, t1, t, t2, h=1,
                          points: Iterable | None = None, budget: int | None = None) -> dict:
    """Deviation of integral_{Z_p} K(x'', t''; x, t) K(x, t; x', t') dx from K(x'', t''; x', t')."""
    v = as_valuation(p)
    if lag.n != 1:
        raise PadelicError("group condition check supports n = 1", "n = 1", v)
    t1, t, t2, h = (to_rational(x) for x in (t1, t, t2, h))
    fm = solve_fundamental(lag)
    late, _ = full_action(lag, fm, BoundaryData(t, t2, [0], [0]))
    early, _ = full_action(lag, fm, BoundaryData(t1, t, [0], [0]))
    n_late = normalization_n(v, late.Bbar, h)
    n_early = normalization_n(v, early.Bbar, h)
    points = [(Fraction(0), Fraction(0)), (Fraction(1), Fraction(0)), (Fraction(1), Fraction(2))] if points is None else [
        (to_rational(a), to_rational(b)) for a, b in points
    ]
    rows = []
    for x2, x1 in points:
        # phase argument -S/h as a quadratic in the middle point x
        alpha = -(late.Cbar[0][0] + early.Abar[0][0]) / (2 * h)
        beta = -(late.Bbar[0][0] * x2 + late.Ebar[0] + early.Bbar[0][0] * x1 + early.Dbar[0]) / h
        const = -(
            late.Abar[0][0] * x2 * x2 / 2 + late.Dbar[0] * x2 + late.eps_bar
            + early.Cbar[0][0] * x1 * x1 / 2 + early.Ebar[0] * x1 + early.eps_bar
        ) / h
        m = sufficient_resolution(p, [alpha], [beta], 0)
        integral = residue_sum(p, [[alpha]], [beta], const, [0], m, budget)
        composed = integral * (n_late * n_early).to_complex()
        direct = kernel_v(PropagatorRequest(v, lag, BoundaryData(t1, t2, [x1], [x2]), h, fundamental=fm))
        rows.append(
            {
                "x2": format_rational(x2),
                "x1": format_rational(x1),
                "deviation": abs(composed - direct.amplitude.to_complex()),
            }
        )
    return {"valuation": str(v), "rows": rows, "maxDeviation": max(r["deviation"] for r in rows)}


def _coefficients_integral(lag: QuadraticLagrangian, p: int, order_cap: int | None = None) -> bool:
    """|L coefficients|_p <= 1 on every stored series coefficient."""
    for s in lag.series_list():
        for c in s.coeffs[: order_cap]:
            if c and norm(c, p) > 1:
                return False
    return True


def _next_primes(exclude: Iterable[int], count: int) -> list[int]:
    ex = set(exclude)
    out = []
    q = 2
    while len(out) < count:
        if is_prime(q) and q not in ex:
            out.append(q)
        q += 1
    return out


@dataclass(frozen=True)
class AdelicKernelValue:
    per_valuation: dict
    tail_certificate: list
    tail_flags: list
    total: Amplitude

    def to_dict(self) -> dict:
        return {
            "perValuation": {k: a.to_dict() for k, a in self.per_valuation.items()},
            "tailCertificate": self.tail_certificate,
            "tailNotes": self.tail_flags,
            "total": self.total.to_dict(),
        }


def adelic_kernel(lag: QuadraticLagrangian, boundary: BoundaryData, h=1, primes: Iterable[int] = (2, 3),
                  components: Mapping | None = None, samples: int = 3, order: int | None = None) -> AdelicKernelValue:
    """Product of kernel_v over {inf} and ``primes`` plus a sampled certificate for the tail.

    ``boundary`` is used at every place (principal embedding) unless
    ``components`` supplies a BoundaryData for that valuation.
    """
    primes = sorted(set(int(p) for p in primes))
    for p in primes:
        if not is_prime(p):
            raise PadelicError(f"{p} is not prime", "prime", p)
    fm = solve_fundamental(lag, order)
    components = {as_valuation(k): b for k, b in (components or {}).items()}
    per = {}
    total = Amplitude.one()
    for v in [REAL] + [Valuation(p) for p in primes]:
        bd = components.get(v, boundary)
        try:
            amp = kernel_v(PropagatorRequest(v, lag, bd, h, fundamental=fm)).amplitude
        except PadelicError as exc:
            if exc.valuation is None:
                exc.valuation = v
            raise
        per[str(v)] = amp
        total = total * amp
    certificate = []
    flags = []
    for q in _next_primes(primes, samples):
        if not _coefficients_integral(lag, q):
            flags.append(f"{q}: Lagrangian coefficients not integral")
            continue
        if lag.n != 1:
            flags.append(f"{q}: tail certificate needs n = 1")
            continue
        try:
            res = vacuum_check(q, lag, boundary.t1, boundary.t2, h)
        except PadelicError as exc:
            flags.append(f"{q}: {exc}")
            continue
        if res["holds"]:
            certificate.append(q)
        else:
            flags.append(f"{q}: vacuum condition fails")
    return AdelicKernelValue(per, certificate, flags, total)


__all__ = [
    "Adele",
    "AdelicKernelValue",
    "adelic_kernel",
    "chi_product",
    "group_condition_check",
    "hilbert_product",
    "lambda_product",
    "norm_product",
    "vacuum_check",
]
