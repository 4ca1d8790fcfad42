"""The v-adic propagator of a quadratic Lagrangian and its consistency checks."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .action import (
    BoundaryData,
    FundamentalMatrix,
    QuadraticLagrangian,
    action_coefficients,
    composition_matrices,
    delta_determinants,
    full_action,
    guard,
    solve_fundamental,
)
from .exact import (
    Amplitude,
    PadelicError,
    SingularError,
    UnitPhase,
    Valuation,
    as_valuation,
    format_rational,
    norm,
    to_rational,
)
from .integrals import ball_gaussian, default_budget, gaussian_nd, hasse_factor, residue_sum, sufficient_resolution
from .linalg import det, inverse, matvec, mscale, transpose
from .number_theory import chi, lambda_v, omega


@dataclass(frozen=True)
class PropagatorRequest:
    v: Valuation
    lagrangian: QuadraticLagrangian
    boundary: BoundaryData
    h: Fraction = Fraction(1)
    order: int | None = None
    precision: int = 10
    fundamental: FundamentalMatrix | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "v", as_valuation(self.v))
        h = to_rational(self.h)
        if h <= 0:
            raise PadelicError("h must be a positive rational", "h > 0", self.v)
        object.__setattr__(self, "h", h)
        if len(self.boundary.x1) != self.lagrangian.n:
            raise ValueError("boundary positions do not match the Lagrangian dimension")

    def solution(self) -> FundamentalMatrix:
        if self.fundamental is not None:
            return self.fundamental
        return solve_fundamental(self.lagrangian, self.order)


@dataclass(frozen=True)
class KernelResult:
    amplitude: Amplitude
    valuation: Valuation
    det_bbar: Fraction
    action: Fraction
    bbar: tuple

    def to_dict(self) -> dict:
        out = self.amplitude.to_dict()
        out.update(
            {
                "valuation": str(self.valuation),
                "detBbar": format_rational(self.det_bbar),
                "action": format_rational(self.action),
            }
        )
        return out


def normalization_n(v, bbar, h=1, n: int | None = None) -> Amplitude:
    """|det(Bbar/h)|_v^(1/2) lambda_v(1)^(1-n) lambda_v(-det Bbar / (2h)^n)."""
    v = as_valuation(v)
    h = to_rational(h)
    bbar = [[to_rational(x) for x in row] for row in bbar]
    n = len(bbar) if n is None else n
    d = det(bbar)
    if d == 0:
        raise SingularError("Bbar is singular", "det Bbar != 0", v)
    phase = lambda_v(v, 1) * (1 - n) + lambda_v(v, -d / (2 * h) ** n)
    return Amplitude(norm(d / h**n, v), phase)


def _classical(req: PropagatorRequest):
    lag, bd = req.lagrangian, req.boundary
    fm = req.solution()
    guard(lag, fm, [bd.t1, bd.t2], req.v, req.precision)
    _, bbar, _ = action_coefficients(lag, fm, bd.t1, bd.t2)
    _, s = full_action(lag, fm, bd)
    return bbar, s


def kernel_v(req: PropagatorRequest) -> KernelResult:
    """N_v(t'', t') chi_v(-S/h) as an exact amplitude."""
    bbar, s = _classical(req)
    amp = normalization_n(req.v, bbar, req.h) * chi(req.v, -s / req.h)
    return KernelResult(amp, req.v, det(bbar), s, tuple(tuple(r) for r in bbar))


def real_kernel(req: PropagatorRequest) -> complex:
    """sqrt(det(-Bbar) / (i h)^n) exp(2 pi i S / h) in floating point, principal square root."""
    if not req.v.is_infinite:
        raise PadelicError("real kernel needs v = inf", "v = inf", req.v)
    bbar, s = _classical(req)
    n = len(bbar)
    d = float(det(mscale(bbar, -1)))
    if d == 0:
        raise SingularError("Bbar is singular", "det Bbar != 0", req.v)
    root = cmath.sqrt(d / (1j * float(req.h)) ** n)
    return root * cmath.exp(2j * math.pi * float(s / req.h))


def _quad(m, x, y) -> Fraction:
    return sum((x[i] * m[i][j] * y[j] for i in range(len(x)) for j in range(len(y))), Fraction(0))


def composition_check(v, lag: QuadraticLagrangian, t1, t, t2, h=1, y2: Sequence | None = None,
                      y1: Sequence | None = None, order: int | None = None, precision: int = 10) -> dict:
    """Exact identities behind K(t'', t') = integral K(t'', t) K(t, t') dy.

    Reports the det 2H residual, the magnitude and phase identities, the
    lambda-addition rule, the phase-factor identity with the Gaussian Lambda of
    H and the Hilbert factor of H.
    """
    v = as_valuation(v)
    h = to_rational(h)
    t1, t, t2 = (to_rational(x) for x in (t1, t, t2))
    n = lag.n
    if n > 2:
        raise PadelicError("composition check supports n <= 2", "n <= 2", v)
    fm = solve_fundamental(lag, order)
    guard(lag, fm, [t1, t, t2], v, precision)
    y2 = [Fraction(1)] * n if y2 is None else [to_rational(x) for x in y2]
    y1 = [Fraction(0)] * n if y1 is None else [to_rational(x) for x in y1]

    full = action_coefficients(lag, fm, t1, t2)
    late = action_coefficients(lag, fm, t, t2)
    early = action_coefficients(lag, fm, t1, t)
    deltas = {
        "full": delta_determinants(lag, fm, t1=t1, t2=t2)["delta"],
        "late": delta_determinants(lag, fm, t1=t, t2=t2)["delta"],
        "early": delta_determinants(lag, fm, t1=t1, t2=t)["delta"],
    }
    cm = composition_matrices(lag, fm, t1, t, t2)
    script_h = cm["H_script"]
    hm = mscale(script_h, Fraction(-1) / (2 * h))
    det2h = det(mscale(hm, 2))
    id13 = det2h - deltas["full"] / (h**n * deltas["late"] * deltas["early"])

    # magnitudes (squared): |det(B''/h)| |det(B'/h)| / |det 2H| = |det(B/h)|
    mag = lambda b: norm(det(b) / h**n, v)  # noqa: E731
    if det2h == 0:
        raise SingularError("middle Gaussian is degenerate", "det H != 0", v)
    id1_lhs = mag(late[1]) * mag(early[1]) / norm(det2h, v)
    id1_rhs = mag(full[1])

    # phases of the quadratic forms (sources and constants drop out of the comparison)
    abar, bbar, cbar = full
    lhs_arg = -(_quad(abar, y2, y2) / 2 + _quad(bbar, y2, y1) + _quad(cbar, y1, y1) / 2) / h
    z = [-(a + b) / h for a, b in zip(matvec(transpose(late[1]), y2), matvec(early[1], y1))]
    outer = -(_quad(late[0], y2, y2) + _quad(early[2], y1, y1)) / (2 * h)
    completion = -_quad(inverse(hm), z, z) / 4
    id2_arg_residual = lhs_arg - outer - completion
    gauss_z = gaussian_nd(v, hm, z)
    gauss_0 = gaussian_nd(v, hm)
    completion_phase = gauss_z.phase - gauss_0.phase
    id2_residual = chi(v, lhs_arg) - chi(v, outer) - completion_phase

    xi = Fraction(1, (2 * h) ** n)
    lmul_lhs = lambda_v(v, xi * (deltas["late"] + deltas["early"]))
    lmul_rhs = lambda_v(v, xi * deltas["full"])

    def phase_factor(b):
        return lambda_v(v, 1) * (1 - n) + lambda_v(v, -det(b) * xi)

    big_lambda = gauss_0.phase
    id3_residual = phase_factor(late[1]) + phase_factor(early[1]) + big_lambda - phase_factor(full[1])
    hilbert_factor = hasse_factor(v, hm)
    factored = lambda_v(v, 1) * (n - 1) + lambda_v(v, det(hm)) + UnitPhase(0 if hilbert_factor > 0 else Fraction(1, 2))
    bound = Fraction(1, 10**precision) if v.is_infinite else Fraction(1, v.p**precision)

    def small(x: Fraction, scale: Fraction = Fraction(1)) -> bool:
        # exact zero, or below the truncation bound relative to ``scale``
        return x == 0 or norm(x, v) <= bound * max(norm(scale, v), Fraction(1))

    if v.is_infinite:
        id1_holds = abs(id1_lhs - id1_rhs) <= bound * id1_rhs
        id2_holds = id2_residual.distance(UnitPhase(0)) <= float(bound)
    else:
        id1_holds = id1_lhs == id1_rhs
        id2_holds = id2_residual.is_zero()
    return {
        "valuation": str(v),
        "det2H": det2h,
        "id13Residual": id13,
        "id13Holds": small(id13, det2h),
        "id1Holds": id1_holds,
        "id1Lhs": id1_lhs,
        "id1Rhs": id1_rhs,
        "id2ArgumentResidual": id2_arg_residual,
        "id2Residual": id2_residual,
        "id2Holds": id2_holds and small(id2_arg_residual, lhs_arg),
        "lmulHolds": lmul_lhs == lmul_rhs,
        "id3Holds": id3_residual.is_zero(),
        "id3Residual": id3_residual,
        "lambdaFactorizationHolds": factored == big_lambda,
        "hilbertFactor": hilbert_factor,
        "HFromUResidual": max(abs(a - b) for ra, rb in zip(script_h, cm["H_from_U"]) for a, b in zip(ra, rb)),
        "deltas": deltas,
    }


def composition_float(lag: QuadraticLagrangian, t1, t, t2, y2, y1, h=1, order: int | None = None) -> float:
    """|K(t'', t') - integral K(t'', t) K(t, t') dy| at v = inf for n = 1, in floats.

    The middle integral uses the Fresnel formula with a principal square root,
    independent of the lambda function.
    """
    if lag.n != 1:
        raise PadelicError("float composition check supports n = 1", "n = 1")
    h = to_rational(h)
    fm = solve_fundamental(lag, order)
    y2, y1 = to_rational(y2), to_rational(y1)

    def k(ta, tb, xa, xb):
        return real_kernel(PropagatorRequest(Valuation(None), lag, BoundaryData(tb, ta, [xb], [xa]), h, fundamental=fm))

    t1, t, t2 = (to_rational(x) for x in (t1, t, t2))
    late, _ = full_action(lag, fm, BoundaryData(t, t2, [0], [0]))
    early, _ = full_action(lag, fm, BoundaryData(t1, t, [0], [0]))
    # exponent of exp(2 pi i S / h) in y: a y^2 + b y + c
    a = (late.Cbar[0][0] + early.Abar[0][0]) / (2 * h)
    b = (late.Bbar[0][0] * y2 + early.Bbar[0][0] * y1 + late.Ebar[0] + early.Dbar[0]) / h
    c = (late.Abar[0][0] * y2 * y2 / 2 + late.Dbar[0] * y2 + late.eps_bar
         + early.Cbar[0][0] * y1 * y1 / 2 + early.Ebar[0] * y1 + early.eps_bar) / h
    if a == 0:
        raise SingularError("middle Gaussian is degenerate", "a != 0")
    n_late = k(t2, t, 0, 0) / cmath.exp(2j * math.pi * float(late.eps_bar / h))
    n_early = k(t, t1, 0, 0) / cmath.exp(2j * math.pi * float(early.eps_bar / h))
    fa, fb, fc = float(a), float(b), float(c)
    # integral of exp(2 pi i (a y^2 + b y)) dy over R
    fresnel = cmath.sqrt(1 / (-2j * fa)) * cmath.exp(-1j * math.pi * fb * fb / (2 * fa))
    composed = n_late * n_early * cmath.exp(2j * math.pi * fc) * fresnel
    return abs(k(t2, t1, y2, y1) - composed)


def _ceil_log(p: int, x: Fraction) -> int:
    """Smallest integer e with p^e >= x (x > 0)."""
    e = 0
    while Fraction(p) ** e < x:
        e += 1
    while Fraction(p) ** (e - 1) >= x:
        e -= 1
    return e


def unitarity_check(p: int, lag: QuadraticLagrangian, t1, t2, h=1, ys: Sequence | None = None,
                    radius: int | None = None, budget: int | None = None, order: int | None = None) -> dict:
    """Smeared unitarity with the Z_p indicator, by residue sums.

    For each y computes |N|^2 * integral_{Z_p} dy'' integral_{|y'| <= p^R} dy'
    conj K(y'', y') K(y, y') and compares it with Omega(|y|_p).
    """
    v = as_valuation(p)
    if v.is_infinite:
        raise PadelicError("unitarity check runs at a prime", "finite place", v)
    if lag.n != 1:
        raise PadelicError("unitarity check supports n = 1", "n = 1", v)
    h = to_rational(h)
    fm = solve_fundamental(lag, order)
    t1, t2 = to_rational(t1), to_rational(t2)
    guard(lag, fm, [t1, t2], v)
    ca, _ = full_action(lag, fm, BoundaryData(t1, t2, [0], [0]))
    amp = normalization_n(v, ca.Bbar, h)
    a2, b, d2 = ca.Abar[0][0] / h, ca.Bbar[0][0] / h, ca.Dbar[0] / h
    if radius is None:
        # y'-ball wide enough that the smeared delta sits inside a region where
        # the y'' phase is constant
        nb = norm(b, p)
        scale = max(Fraction(1), norm(a2 / 2, p), norm(d2, p)) / nb
        radius = max(0, _ceil_log(p, scale) + 1)
    ys = [Fraction(0), Fraction(1), Fraction(1, p)] if ys is None else [to_rational(y) for y in ys]
    budget = default_budget() if budget is None else budget
    rows = []
    for y in ys:
        alpha = [[a2 / 2, b / 2], [b / 2, Fraction(0)]]
        beta = [d2, -b * y]
        const = -(a2 * y * y / 2 + d2 * y)
        m = sufficient_resolution(p, alpha, beta, radius)
        val = residue_sum(p, alpha, beta, const, [0, radius], m, budget) * float(amp.mag_sq)
        target = omega(norm(y, p))
        rows.append({"y": format_rational(y), "value": val, "target": target, "deviation": abs(val - target)})
    return {
        "valuation": str(v),
        "radius": radius,
        "magSq": amp.mag_sq,
        "magnitudeLawHolds": amp.mag_sq == norm(b, p),
        "rows": rows,
        "maxDeviation": max(r["deviation"] for r in rows),
    }


def delta_limit_check(p: int, lag: QuadraticLagrangian, t1, durations: Sequence, x2, h=1,
                      order: int | None = None) -> dict:
    """integral_{Z_p} K(x'', t' + T; x', t') dx' for each T, exactly, against Omega(|x''|_p)."""
    v = as_valuation(p)
    if lag.n != 1:
        raise PadelicError("delta limit check supports n = 1", "n = 1", v)
    h = to_rational(h)
    t1 = to_rational(t1)
    x2 = to_rational(x2)
    fm = solve_fundamental(lag, order)
    rows = []
    for big_t in durations:
        big_t = to_rational(big_t)
        t2 = t1 + big_t
        guard(lag, fm, [t1, t2], v)
        ca, _ = full_action(lag, fm, BoundaryData(t1, t2, [0], [0]))
        amp = normalization_n(v, ca.Bbar, h)
        alpha = -ca.Cbar[0][0] / (2 * h)
        beta = -(ca.Bbar[0][0] * x2 + ca.Ebar[0]) / h
        const = -(ca.Abar[0][0] * x2 * x2 / 2 + ca.Dbar[0] * x2 + ca.eps_bar) / h
        val = ball_gaussian(p, alpha, beta, 0, const) * amp
        if val.is_zero():
            val = Amplitude.zero()
        rows.append({"T": format_rational(big_t), "value": val.to_dict(), "complex": val.to_complex()})
    target = omega(norm(x2, p))
    last = rows[-1]["complex"] if rows else None
    return {
        "valuation": str(v),
        "target": target,
        "rows": rows,
        "limitDeviation": None if last is None else abs(last - target),
    }


__all__ = [
    "KernelResult",
    "PropagatorRequest",
    "composition_check",
    "composition_float",
    "delta_limit_check",
    "kernel_v",
    "normalization_n",
    "real_kernel",
    "unitarity_check",
]
