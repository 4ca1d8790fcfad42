"""The reproducible verification suite: one function per acceptance criterion.

Each suite returns a plain dict with ``passed``, ``count``, ``metrics`` and
``warnings``. Numeric thresholds come from the Config (float tolerance) or
are exact comparisons.
"""

from __future__ import annotations

import math
import random
import time
from fractions import Fraction
from typing import Callable

from .action import (
    BoundaryData,
    QuadraticLagrangian,
    action_coefficients,
    det_bbar_check,
    solve_fundamental,
    wronskian_constant,
)
from .adelic import chi_product, group_condition_check, hilbert_product, lambda_product, norm_product, vacuum_check
from .config import Config
from .exact import PadelicError, Valuation, norm
from .integrals import gaussian1d, gaussian_nd, oracle_gaussian, residue_sum, sufficient_resolution
from .kernel import (
    PropagatorRequest,
    composition_check,
    composition_float,
    delta_limit_check,
    kernel_v,
    real_kernel,
    unitarity_check,
)
from .linalg import det
from .number_theory import big_lambda, big_lambda_factored, chi, hilbert, lambda_v, sign_phase
from .series import Laurent

PLACES = (None, 2, 3, 5, 7)
MIN_SERIES_ORDER = 12


def random_rational(rng: random.Random, bound: int = 10**6, nonzero: bool = True) -> Fraction:
    while True:
        x = Fraction(rng.randint(-bound, bound), rng.randint(1, bound))
        if x or not nonzero:
            return x


def _unit(rng: random.Random, p: int, bound: int = 30) -> Fraction:
    while True:
        a = rng.randint(-bound, bound)
        b = rng.randint(1, bound)
        if a % p and b % p:
            return Fraction(a, b)


def _report(name: str, passed: bool, count: int, metrics: dict, warnings=None, started=None) -> dict:
    out = {"name": name, "passed": bool(passed), "count": count, "metrics": metrics, "warnings": list(warnings or [])}
    if started is not None:
        out["seconds"] = round(time.perf_counter() - started, 3)
    return out


def suite_product_formulas(cfg: Config) -> dict:
    t0 = time.perf_counter()
    rng = random.Random(cfg.seed)
    fails = {"norm": 0, "lambda": 0, "chi": 0, "hilbert": 0}
    for _ in range(1000):
        x = random_rational(rng)
        fails["norm"] += norm_product(x) != 1
        fails["lambda"] += not lambda_product(x).is_zero()
        fails["chi"] += not chi_product(x).is_zero()
    for _ in range(300):
        fails["hilbert"] += hilbert_product(random_rational(rng), random_rational(rng)) != 1
    return _report("product_formulas", not any(fails.values()), 1300, {"failures": fails}, started=t0)


def suite_gaussian(cfg: Config) -> dict:
    t0 = time.perf_counter()
    rng = random.Random(cfg.seed + 1)
    worst = 0.0
    count = 0
    for p in (2, 3, 5, 7):
        for a in range(-2, 3):
            for b in range(-2, 3):
                alpha = Fraction(p) ** a * _unit(rng, p)
                beta = Fraction(p) ** b * _unit(rng, p)
                closed = gaussian1d(p, alpha, beta).to_complex()
                c1, c2, _ = oracle_gaussian(p, alpha, beta, cfg.oracle_budget)
                worst = max(worst, abs(c1 - closed), abs(c2 - closed))
                count += 1
    worst_nd = 0.0
    p = 3
    made = 0
    while made < 10:
        m = [[Fraction(rng.randint(-4, 4), rng.choice((1, 2))) for _ in range(2)] for _ in range(2)]
        m[1][0] = m[0][1]
        if det(m) == 0:
            continue
        beta = [Fraction(rng.randint(-4, 4), rng.choice((1, 3))) for _ in range(2)]
        closed = gaussian_nd(p, m, beta).to_complex()
        stable = None
        for radius in range(0, 4):
            vals = []
            for r in (radius, radius + 1):
                res = sufficient_resolution(p, m, beta, r)
                if p ** (2 * (r + res)) > cfg.oracle_budget:
                    break
                vals.append(residue_sum(p, m, beta, 0, [r, r], res, cfg.oracle_budget))
            if len(vals) == 2 and all(abs(x - closed) < cfg.tolerance for x in vals):
                stable = max(abs(x - closed) for x in vals)
                break
        if stable is None:
            worst_nd = math.inf
        else:
            worst_nd = max(worst_nd, stable)
        made += 1
        count += 1
    ok = worst < cfg.tolerance and worst_nd < cfg.tolerance
    return _report("gaussian_vs_oracle", ok, count, {"maxDeviation1d": worst, "maxDeviation2d": worst_nd}, started=t0)


def suite_lambda_properties(cfg: Config) -> dict:
    t0 = time.perf_counter()
    rng = random.Random(cfg.seed + 2)
    fails: dict[str, int] = {}
    count = 0

    def small() -> Fraction:
        return random_rational(rng, 2000)

    for p in PLACES:
        v = Valuation(p)
        checks: dict[str, Callable[[], bool]] = {
            "square": lambda: (lambda x, a: lambda_v(v, a * a * x) == lambda_v(v, x))(small(), small()),
            "inverse": lambda: (lambda x: (lambda_v(v, x) + lambda_v(v, -x)).is_zero())(small()),
            "harmonic": lambda: _harmonic(v, small(), small()),
            "hilbert": lambda: _lambda_hilbert(v, small(), small()),
            "prop22": lambda: (lambda xs: big_lambda(v, xs) == big_lambda_factored(v, xs))(
                [small() for _ in range(rng.randint(1, 4))]
            ),
        }
        for name, fn in checks.items():
            for _ in range(500):
                count += 1
                if not fn():
                    fails[f"{name}@{v}"] = fails.get(f"{name}@{v}", 0) + 1
    return _report("lambda_properties", not fails, count, {"failures": fails}, started=t0)


def _lambda_hilbert(v, x: Fraction, y: Fraction) -> bool:
    lhs = lambda_v(v, x) + lambda_v(v, y)
    return lhs == lambda_v(v, x * y) + lambda_v(v, 1) + sign_phase(hilbert(v, x, y))


def _harmonic(v, x: Fraction, y: Fraction) -> bool:
    if x + y == 0:
        return True
    return lambda_v(v, x * y / (x + y)) + lambda_v(v, x + y) == lambda_v(v, x) + lambda_v(v, y)


def random_lagrangian(rng: random.Random, n: int, order: int, sources: bool = True) -> QuadraticLagrangian:
    def sym(diag_pos: bool):
        m = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(i, n):
                m[i][j] = m[j][i] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
            if diag_pos:
                m[i][i] = Fraction(rng.randint(1, 4), rng.randint(1, 2))
        return m

    while True:
        a = sym(True)
        if det(a) != 0:
            break
    b = [[Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
    c = sym(False)
    d = [Fraction(rng.randint(-2, 2)) for _ in range(n)] if sources else None
    e = [Fraction(rng.randint(-2, 2)) for _ in range(n)] if sources else None
    return QuadraticLagrangian.build(a, b, c, d, e, Fraction(rng.randint(-2, 2)) if sources else 0, order=order)


def _series_warning(cfg: Config) -> list[str]:
    if cfg.truncation_order < MIN_SERIES_ORDER:
        return [f"truncation order {cfg.truncation_order} < {MIN_SERIES_ORDER}: series identities only checked to low order"]
    return []


def suite_wronskian(cfg: Config) -> dict:
    t0 = time.perf_counter()
    rng = random.Random(cfg.seed + 3)
    order = cfg.truncation_order
    bad = 0
    for k in range(20):
        lag = random_lagrangian(rng, (1, 2, 3)[k % 3], order)
        w = wronskian_constant(solve_fundamental(lag, order), lag)
        bad += w[0] == 0 or any(w[j] for j in range(1, order - 1))
    warnings = _series_warning(cfg)
    return _report("wronskian_constant", bad == 0 or bool(warnings), 20, {"nonConstant": bad}, warnings, t0)


def _zero_to(x, upto: int) -> bool:
    if isinstance(x, Laurent):
        if x.precision < upto:
            return False
        return all(x.coefficient(j) == 0 for j in range(-x.pole, upto + 1))
    return x == 0


def suite_det_bbar(cfg: Config) -> dict:
    t0 = time.perf_counter()
    rng = random.Random(cfg.seed + 4)
    order = cfg.truncation_order
    upto = order - 4
    bad_i4 = 0
    bad_i5 = 0
    for n in (1, 2):
        for _ in range(10):
            lag = random_lagrangian(rng, n, order, sources=False)
            res = det_bbar_check(lag, solve_fundamental(lag, order))
            bad_i4 += not _zero_to(res["residual"], upto)
            if n == 2:
                bad_i5 += not _zero_to(res["decompositionResidual"], upto - 2)
    free = QuadraticLagrangian.free_particle(2, order)
    exact = det_bbar_check(free, solve_fundamental(free, order), Fraction(0), Fraction(3))
    bad_i5 += exact["decompositionResidual"] != 0 or exact["residual"] != 0
    warnings = _series_warning(cfg)
    ok = (bad_i4 == 0 and bad_i5 == 0) or bool(warnings)
    return _report("det_bbar_identity", ok, 21, {"i4Failures": bad_i4, "i5Failures": bad_i5, "zeroToOrder": upto}, warnings, t0)


FREE_TUPLES = (
    (Fraction(0), Fraction(2), Fraction(0), Fraction(1), Fraction(1)),
    (Fraction(1), Fraction(4), Fraction(1, 2), Fraction(-3), Fraction(1)),
    (Fraction(0), Fraction(3), Fraction(2), Fraction(2), Fraction(1)),
    (Fraction(-1, 3), Fraction(5, 7), Fraction(1, 5), Fraction(9, 4), Fraction(2)),
    (Fraction(2), Fraction(17, 6), Fraction(-1), Fraction(1, 3), Fraction(3, 5)),
)


def free_particle_expected(v, t1, t2, x1, x2, h):
    from .exact import Amplitude

    big_t = t2 - t1
    phase = lambda_v(v, 1 / (2 * h * big_t)) + chi(v, -(x2 - x1) ** 2 / (2 * h * big_t))
    return Amplitude(norm(1 / (h * big_t), v), phase)


def suite_free_kernel(cfg: Config) -> dict:
    t0 = time.perf_counter()
    lag = QuadraticLagrangian.free_particle(1, cfg.truncation_order)
    fm = solve_fundamental(lag)
    bad = []
    for p in (None, 2, 3, 5):
        v = Valuation(p)
        for t1, t2, x1, x2, h in FREE_TUPLES:
            got = kernel_v(PropagatorRequest(v, lag, BoundaryData(t1, t2, [x1], [x2]), h, fundamental=fm)).amplitude
            if got != free_particle_expected(v, t1, t2, x1, x2, h):
                bad.append(f"{v}:{t1},{t2},{x1},{x2},{h}")
    return _report("free_particle_kernel", not bad, 20, {"mismatches": bad}, started=t0)


COMPOSITION_FLAGS = ("id13Holds", "id1Holds", "id2Holds", "lmulHolds", "id3Holds", "lambdaFactorizationHolds")


def suite_composition(cfg: Config) -> dict:
    t0 = time.perf_counter()
    order = cfg.truncation_order
    free = QuadraticLagrangian.free_particle(1, order)
    osc = QuadraticLagrangian.oscillator(1, order)
    osc4 = QuadraticLagrangian.oscillator(Fraction(1, 4), order)
    failures = []
    factors = []
    count = 0
    for p in (3, 5):
        for lag, name in ((free, "free"), (osc, "osc"), (osc4, "osc1/4")):
            for t1, t, t2 in ((0, p, 2 * p), (p, 3 * p, 4 * p), (0, 2 * p, 3 * p)):
                for y2, y1 in (((1,), (0,)), ((Fraction(1, 2),), (3,))):
                    rep = composition_check(p, lag, t1, t, t2, y2=list(y2), y1=list(y1), order=order)
                    count += 1
                    factors.append(rep["hilbertFactor"])
                    bad = [k for k in COMPOSITION_FLAGS if not rep[k]]
                    if bad or rep["hilbertFactor"] != 1:
                        failures.append(f"{name}@{p} {t1},{t},{t2}: {bad} H={rep['hilbertFactor']}")
    worst_float = 0.0
    for lag, times in ((free, (0, 1, 3)), (osc, (0, Fraction(1, 5), Fraction(1, 2))), (osc4, (Fraction(1, 3), Fraction(1, 2), 1))):
        for y2, y1 in ((1, 0), (Fraction(1, 2), 2)):
            worst_float = max(worst_float, composition_float(lag, *times, y2, y1, order=order))
            rep = composition_check(Valuation(None), lag, *times, y2=[y2], y1=[y1], order=order)
            count += 1
            factors.append(rep["hilbertFactor"])
            if any(not rep[k] for k in COMPOSITION_FLAGS) or rep["hilbertFactor"] != 1:
                failures.append(f"inf {times}")
    warnings = _series_warning(cfg)
    ok = (not failures and worst_float < cfg.tolerance) or bool(warnings)
    metrics = {"failures": failures, "floatDeviation": worst_float, "hilbertFactors": sorted(set(factors))}
    return _report("composition_identities", ok, count, metrics, warnings, t0)


def suite_real_consistency(cfg: Config) -> dict:
    t0 = time.perf_counter()
    order = cfg.truncation_order
    rng = random.Random(cfg.seed + 5)
    lags = [
        QuadraticLagrangian.free_particle(1, order),
        QuadraticLagrangian.oscillator(1, order),
        QuadraticLagrangian.build([[2]], [[Fraction(1, 2)]], [[-1]], [1], [Fraction(-1, 3)], Fraction(1, 7), order=order),
        QuadraticLagrangian.build([[1]], E=[2], order=order),
    ]
    fms = [solve_fundamental(lag, order) for lag in lags]
    worst = 0.0
    for k in range(20):
        lag, fm = lags[k % 4], fms[k % 4]
        t1 = Fraction(rng.randint(-4, 4), 20)
        t2 = t1 + Fraction(rng.randint(1, 10), 20)
        bd = BoundaryData(t1, t2, [Fraction(rng.randint(-5, 5), 3)], [Fraction(rng.randint(-5, 5), 3)])
        req = PropagatorRequest(Valuation(None), lag, bd, Fraction(rng.randint(1, 3)), fundamental=fm)
        worst = max(worst, abs(kernel_v(req).amplitude.to_complex() - real_kernel(req)))
    trig = 0.0
    for omega_sq, omega in ((Fraction(1), 1.0), (Fraction(1, 4), 0.5), (Fraction(9, 4), 1.5)):
        lag = QuadraticLagrangian.oscillator(omega_sq, order)
        fm = solve_fundamental(lag, order)
        for big_t in (Fraction(1, 10), Fraction(1, 5), Fraction(1, 3)):
            if omega * float(big_t) > 0.5:
                continue
            _, bbar, _ = action_coefficients(lag, fm, Fraction(0), big_t)
            ref = -omega / math.sin(omega * float(big_t))
            trig = max(trig, abs(float(bbar[0][0]) - ref))
    warnings = _series_warning(cfg)
    ok = (worst < cfg.tolerance and trig < 1e-6) or bool(warnings)
    return _report("real_consistency", ok, 20, {"maxKernelDeviation": worst, "maxTrigDeviation": trig}, warnings, t0)


def suite_vacuum_group(cfg: Config) -> dict:
    t0 = time.perf_counter()
    free = QuadraticLagrangian.free_particle(1, cfg.truncation_order)
    failures = []
    values = set()
    worst = 0.0
    brute = 0.0
    count = 0
    for p in (3, 5):
        for t1, t2 in ((0, 1), (0, p), (1, 1 + p * p), (Fraction(1, 2), Fraction(3, 2))):
            rep = vacuum_check(p, free, t1, t2, 1, cfg.oracle_budget)
            count += 1
            for row in rep["rows"]:
                values.add((row["x2"], row["value"]["magSq"], row["value"]["phase"]))
                brute = max(brute, row["bruteForceDeviation"])
            if not rep["holds"]:
                failures.append(f"vacuum {p} {t1}->{t2}")
        for times in ((0, p, p + p * p), (0, 1, 2), (p, 2 * p, 2 * p + 1)):
            g = group_condition_check(p, free, *times, h=1, budget=cfg.oracle_budget)
            count += 1
            worst = max(worst, g["maxDeviation"])
    # |T|_p = p: the vacuum condition must fail
    counter = vacuum_check(3, free, 0, Fraction(1, 3), 1, cfg.oracle_budget)
    count += 1
    exhibited = sorted({(m, ph) for _, m, ph in values})
    ok = not failures and worst < cfg.tolerance and brute < cfg.tolerance and not counter["holds"]
    metrics = {
        "failures": failures,
        "groupDeviation": worst,
        "bruteForceDeviation": brute,
        "exhibitedValues": [f"{m}@{ph}" for m, ph in exhibited],
        "counterexampleHolds": counter["holds"],
    }
    return _report("vacuum_group", ok, count, metrics, started=t0)


def suite_unitarity_delta(cfg: Config) -> dict:
    t0 = time.perf_counter()
    free = QuadraticLagrangian.free_particle(1, cfg.truncation_order)
    worst = 0.0
    magnitude_ok = True
    count = 0
    for t1, t2 in ((0, 3), (0, 9), (1, 4), (0, 1)):
        rep = unitarity_check(3, free, t1, t2, 1, budget=cfg.oracle_budget)
        worst = max(worst, rep["maxDeviation"])
        magnitude_ok = magnitude_ok and rep["magnitudeLawHolds"]
        count += 1
    delta_dev = 0.0
    for x2 in (Fraction(0), Fraction(1), Fraction(2, 1), Fraction(1, 3), Fraction(5, 9)):
        rep = delta_limit_check(3, free, 0, [3, 9, 27, 81], x2)
        delta_dev = max(delta_dev, rep["limitDeviation"])
        count += 1
    ok = worst < cfg.tolerance and delta_dev < cfg.tolerance and magnitude_ok
    return _report("unitarity_delta", ok, count, {"unitarityDeviation": worst, "deltaDeviation": delta_dev}, started=t0)


SUITES: tuple[tuple[int, str, Callable[[Config], dict]], ...] = (
    (1, "product_formulas", suite_product_formulas),
    (2, "gaussian_vs_oracle", suite_gaussian),
    (3, "lambda_properties", suite_lambda_properties),
    (4, "wronskian_constant", suite_wronskian),
    (5, "det_bbar_identity", suite_det_bbar),
    (6, "free_particle_kernel", suite_free_kernel),
    (7, "composition_identities", suite_composition),
    (8, "real_consistency", suite_real_consistency),
    (9, "vacuum_group", suite_vacuum_group),
    (10, "unitarity_delta", suite_unitarity_delta),
)


SERIES_SUITES = (4, 5, 7, 8)


def run_suite(number: int, cfg: Config) -> dict:
    for k, name, fn in SUITES:
        if k == number:
            try:
                out = fn(cfg)
            except PadelicError as exc:
                warnings = _series_warning(cfg) if k in SERIES_SUITES else []
                # a low truncation order degrades series suites to warnings
                out = _report(name, bool(warnings), 0, {"error": exc.to_dict()}, warnings)
            out["criterion"] = k
            return out
    raise KeyError(f"no suite {number}")


def run_all(cfg: Config, only: list[int] | None = None) -> dict:
    results = [run_suite(k, cfg) for k, _, _ in SUITES if only is None or k in only]
    return {"passed": all(r["passed"] for r in results), "suites": results}


__all__ = ["SUITES", "free_particle_expected", "random_lagrangian", "run_all", "run_suite"]
