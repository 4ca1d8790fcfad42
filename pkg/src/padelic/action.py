"""Classical action of a quadratic Lagrangian with power-series coefficients.

L = 1/2 q'^T A q' + q'^T B q + 1/2 q^T C q + D^T q' + E^T q + eps, with every
coefficient a truncated power series in t over Q. The fundamental matrix is
built by Taylor recursion with standard initial data at t = 0.

Two evaluation modes share the same determinant calculus:

* rational: boundary times t', t'' are rationals and every series is
  evaluated (as a truncated polynomial) at them;
* series: t' = 0 and t'' = T is kept symbolic, so quantities become
  :class:`Laurent` series in T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Sequence

from .exact import PadelicError, SingularError, to_rational
from .linalg import det, det_ring, inverse, is_symmetric, matvec, solve
from .series import Laurent, SeriesQ, check_convergence

DEFAULT_ORDER = 32

SERIES = "series"


def _as_series(x, order: int) -> SeriesQ:
    if isinstance(x, SeriesQ):
        return SeriesQ(x.coeffs, order)
    if isinstance(x, (list, tuple)):
        return SeriesQ([to_rational(c) for c in x], order)
    return SeriesQ.constant(to_rational(x), order)


def _series_matrix(m, n: int, order: int, name: str):
    if m is None:
        return tuple(tuple(SeriesQ([], order) for _ in range(n)) for _ in range(n))
    if len(m) != n or any(len(row) != n for row in m):
        raise ValueError(f"{name} must be {n}x{n}")
    return tuple(tuple(_as_series(x, order) for x in row) for row in m)


def _series_vector(v, n: int, order: int, name: str):
    if v is None:
        return tuple(SeriesQ([], order) for _ in range(n))
    if len(v) != n:
        raise ValueError(f"{name} must have length {n}")
    return tuple(_as_series(x, order) for x in v)


def _const(m) -> list[list[Fraction]]:
    return [[s[0] for s in row] for row in m]


@dataclass(frozen=True)
class QuadraticLagrangian:
    n: int
    A: tuple
    B: tuple
    C: tuple
    D: tuple
    E: tuple
    eps: SeriesQ
    order: int = DEFAULT_ORDER

    @classmethod
    def build(cls, A, B=None, C=None, D=None, E=None, eps=0, order: int = DEFAULT_ORDER) -> "QuadraticLagrangian":
        """Coefficients may be rationals (constants), coefficient lists or SeriesQ."""
        n = len(A)
        lag = cls(
            n,
            _series_matrix(A, n, order, "A"),
            _series_matrix(B, n, order, "B"),
            _series_matrix(C, n, order, "C"),
            _series_vector(D, n, order, "D"),
            _series_vector(E, n, order, "E"),
            _as_series(eps, order),
            order,
        )
        lag.validate()
        return lag

    @classmethod
    def from_json(cls, data: dict, order: int | None = None) -> "QuadraticLagrangian":
        order = int(data.get("order", DEFAULT_ORDER)) if order is None else order
        n = int(data["n"])
        lag = cls.build(
            data["A"], data.get("B"), data.get("C"), data.get("D"), data.get("E"), data.get("eps", 0), order
        )
        if lag.n != n:
            raise ValueError("n does not match the size of A")
        return lag

    @classmethod
    def free_particle(cls, n: int = 1, order: int = DEFAULT_ORDER) -> "QuadraticLagrangian":
        return cls.build([[int(i == j) for j in range(n)] for i in range(n)], order=order)

    @classmethod
    def oscillator(cls, omega_sq=1, order: int = DEFAULT_ORDER) -> "QuadraticLagrangian":
        return cls.build([[1]], C=[[-to_rational(omega_sq)]], order=order)

    def validate(self) -> None:
        if not is_symmetric([list(r) for r in self.A]):
            raise ValueError("A must be symmetric")
        if not is_symmetric([list(r) for r in self.C]):
            raise ValueError("C must be symmetric")
        if det(_const(self.A)) == 0:
            raise SingularError("A(0) is singular", "det A(0) != 0")

    def at(self, t) -> dict[str, Any]:
        """All coefficients evaluated at rational t."""
        ev = lambda s: s.evaluate(t)  # noqa: E731
        return {
            "A": [[ev(s) for s in row] for row in self.A],
            "B": [[ev(s) for s in row] for row in self.B],
            "D": [ev(s) for s in self.D],
        }

    def series_list(self) -> list[SeriesQ]:
        out = [s for m in (self.A, self.B, self.C) for row in m for s in row]
        return out + list(self.D) + list(self.E) + [self.eps]


@dataclass(frozen=True)
class ODESystem:
    """M2 q'' + M1 q' + M0 q = rhs."""

    m2: tuple
    m1: tuple
    m0: tuple
    rhs: tuple


def euler_lagrange(lag: QuadraticLagrangian) -> ODESystem:
    n = lag.n
    A, B, C = lag.A, lag.B, lag.C
    m1 = tuple(tuple(A[i][j].derivative() + B[i][j] - B[j][i] for j in range(n)) for i in range(n))
    m0 = tuple(tuple(B[i][j].derivative() - C[i][j] for j in range(n)) for i in range(n))
    rhs = tuple(lag.E[i] - lag.D[i].derivative() for i in range(n))
    return ODESystem(A, m1, m0, rhs)


def _taylor_solve(system: ODESystem, q0, dq0, order: int, homogeneous: bool) -> list[SeriesQ]:
    """Coefficients q_k (vectors) of the series solution with q(0) = q0, q'(0) = dq0."""
    n = len(q0)
    a0_inv = inverse(_const(system.m2))
    q = [list(map(to_rational, q0)), list(map(to_rational, dq0))]
    zero = Fraction(0)
    for k in range(order - 1):
        # coefficient of t^k in M2 q'' + M1 q' + M0 q - rhs, without the q_{k+2} term
        r = [zero if homogeneous else system.rhs[i][k] for i in range(n)]
        for i in range(n):
            acc = zero
            for j in range(n):
                m2, m1, m0 = system.m2[i][j], system.m1[i][j], system.m0[i][j]
                for s in range(1, k + 1):
                    c = m2[s]
                    if c:
                        acc += c * (k - s + 2) * (k - s + 1) * q[k - s + 2][j]
                for s in range(0, k + 1):
                    c = m1[s]
                    if c:
                        acc += c * (k - s + 1) * q[k - s + 1][j]
                    c = m0[s]
                    if c:
                        acc += c * q[k - s][j]
            r[i] -= acc
        nxt = matvec(a0_inv, r)
        q.append([x / ((k + 2) * (k + 1)) for x in nxt])
    return [SeriesQ([q[k][i] for k in range(order + 1)], order) for i in range(n)]


@dataclass(frozen=True)
class FundamentalMatrix:
    """F (n x 2n), its derivative, a particular solution xi and the constant D."""

    F: tuple
    Fdot: tuple
    xi: tuple
    xidot: tuple
    normalization: Fraction
    order: int

    @property
    def n(self) -> int:
        return len(self.F)

    def rebased(self, g) -> "FundamentalMatrix":
        """F -> F G for a constant invertible 2n x 2n matrix G."""
        g = [[to_rational(x) for x in row] for row in g]
        if det(g) == 0:
            raise SingularError("basis change is singular", "det G != 0")
        two_n = 2 * self.n

        def mul(m):
            return tuple(
                tuple(sum((m[i][k] * g[k][j] for k in range(two_n)), SeriesQ([], m[i][0].order)) for j in range(two_n))
                for i in range(self.n)
            )

        return FundamentalMatrix(mul(self.F), mul(self.Fdot), self.xi, self.xidot, self.normalization * det(g), self.order)

    def series_list(self) -> list[SeriesQ]:
        out = [s for m in (self.F, self.Fdot) for row in m for s in row]
        return out + list(self.xi) + list(self.xidot)


def solve_fundamental(lag: QuadraticLagrangian, order: int | None = None, normalize: bool = True) -> FundamentalMatrix:
    """Series fundamental system with standard initial data at t = 0.

    With ``normalize`` the first column is scaled so that
    det[F; Fdot](t) det A(t) = 1.
    """
    order = lag.order if order is None else order
    if order < 2:
        raise ValueError("series order must be at least 2")
    system = euler_lagrange(lag)
    n = lag.n
    a0 = det(_const(lag.A))
    if a0 == 0:
        raise SingularError("A(0) is singular", "det A(0) != 0")
    cols = []
    for m in range(2 * n):
        init = [Fraction(int(m == k)) for k in range(2 * n)]
        cols.append(_taylor_solve(system, init[:n], init[n:], order, True))
    scale = 1 / a0 if normalize else Fraction(1)
    cols[0] = [s * scale for s in cols[0]]
    F = tuple(tuple(cols[m][k] for m in range(2 * n)) for k in range(n))
    Fdot = tuple(tuple(s.derivative() for s in row) for row in F)
    zero = [Fraction(0)] * n
    xi = tuple(_taylor_solve(system, zero, zero, order, False))
    xidot = tuple(s.derivative() for s in xi)
    return FundamentalMatrix(F, Fdot, xi, xidot, scale, order)


def wronskian_constant(fm: FundamentalMatrix, lag: QuadraticLagrangian) -> SeriesQ:
    """det[F; Fdot] det A as a series; constant by Liouville's formula."""
    w = det_ring([list(r) for r in fm.F] + [list(r) for r in fm.Fdot])
    return w * det_ring([list(r) for r in lag.A])


@dataclass(frozen=True)
class BoundaryData:
    t1: Fraction
    t2: Fraction
    x1: tuple
    x2: tuple

    def __post_init__(self):
        t1, t2 = to_rational(self.t1), to_rational(self.t2)
        if t1 == t2:
            raise PadelicError("boundary times coincide", "t' != t''")
        x1 = tuple(to_rational(x) for x in self.x1)
        x2 = tuple(to_rational(x) for x in self.x2)
        if len(x1) != len(x2):
            raise ValueError("boundary positions differ in dimension")
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)


class _Frame:
    """Values of F, Fdot, xi, A, B at the later (t'') and earlier (t') endpoint."""

    def __init__(self, lag: QuadraticLagrangian, fm: FundamentalMatrix, t1, t2):
        self.n = lag.n
        if t2 == SERIES:
            if to_rational(t1) != 0:
                raise ValueError("series mode is based at t' = 0")
            self.series = True
            late = lambda s: Laurent(0, s)  # noqa: E731
            early = lambda s: s[0]  # noqa: E731
        else:
            self.series = False
            t1, t2 = to_rational(t1), to_rational(t2)
            if t1 == t2:
                raise PadelicError("boundary times coincide", "t' != t''")
            late = lambda s: s.evaluate(t2)  # noqa: E731
            early = lambda s: s.evaluate(t1)  # noqa: E731
        self.t1, self.t2 = t1, t2
        pick = {"late": late, "early": early}
        self.F = {k: [[f(s) for s in row] for row in fm.F] for k, f in pick.items()}
        self.Fdot = {k: [[f(s) for s in row] for row in fm.Fdot] for k, f in pick.items()}
        self.xi = {k: [f(s) for s in fm.xi] for k, f in pick.items()}
        self.A = {k: [[f(s) for s in row] for row in lag.A] for k, f in pick.items()}
        self.B = {k: [[f(s) for s in row] for row in lag.B] for k, f in pick.items()}
        self.script = self.F["late"] + self.F["early"]

    def det(self, m):
        return det_ring(m) if self.series else det(m)


def _nonzero(x) -> bool:
    return not x.is_zero() if isinstance(x, Laurent) else x != 0


def _delta(frame: _Frame):
    d = frame.det(frame.script)
    if not _nonzero(d):
        raise SingularError("Delta(t'', t') vanishes", "Delta != 0")
    return d


def _dotted(frame: _Frame, row: int, side: str, j: int):
    """det of the stacked F with row ``row`` (0-based) replaced by Fdot(t_side) row j."""
    m = [list(r) for r in frame.script]
    m[row] = list(frame.Fdot[side][j])
    return frame.det(m)


def delta_determinants(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData | None = None,
                       t1=0, t2=SERIES) -> dict:
    """Delta, the column-replaced Delta_i (needs boundary data) and every dotted determinant.

    Dotted keys are (i, side, j) with 0-based i over the 2n rows, side
    "late" (t'') or "early" (t'), and j the row of Fdot.
    """
    if boundary is not None:
        t1, t2 = boundary.t1, boundary.t2
    frame = _Frame(lag, fm, t1, t2)
    n = lag.n
    out: dict[str, Any] = {"delta": _delta(frame)}
    out["dotted"] = {
        (i, side, j): _dotted(frame, i, side, j)
        for i in range(2 * n)
        for side in ("late", "early")
        for j in range(n)
    }
    if boundary is not None:
        xx = [boundary.x2[k] - frame.xi["late"][k] for k in range(n)]
        xx += [boundary.x1[k] - frame.xi["early"][k] for k in range(n)]
        out["xxi"] = xx
        cols = []
        for i in range(2 * n):
            m = [list(r) for r in frame.script]
            for r in range(2 * n):
                m[r][i] = xx[r]
            cols.append(frame.det(m))
        out["delta_i"] = cols
    return out


def integration_constants(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData) -> list[Fraction]:
    dd = delta_determinants(lag, fm, boundary)
    return [d / dd["delta"] for d in dd["delta_i"]]


def trajectory(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData) -> tuple[list[SeriesQ], list[SeriesQ]]:
    """The classical path x(t) = F(t) C + xi(t) and its derivative, as series."""
    c = integration_constants(lag, fm, boundary)
    n = lag.n
    x = [sum((fm.F[k][m] * c[m] for m in range(2 * n)), fm.xi[k]) for k in range(n)]
    xd = [sum((fm.Fdot[k][m] * c[m] for m in range(2 * n)), fm.xidot[k]) for k in range(n)]
    return x, xd


def action_coefficients(lag: QuadraticLagrangian, fm: FundamentalMatrix, t1=0, t2=SERIES):
    """(Abar, Bbar, Cbar) from the dotted determinants.

    Rational matrices for rational times; Laurent series in T for t2 = "series".
    """
    frame = _Frame(lag, fm, t1, t2)
    n = lag.n
    delta = _delta(frame)
    a2, a1 = frame.A["late"], frame.A["early"]
    b2, b1 = frame.B["late"], frame.B["early"]
    dot_late = [[_dotted(frame, i, "late", j) for j in range(n)] for i in range(2 * n)]
    dot_early = [[_dotted(frame, i, "early", j) for j in range(n)] for i in range(2 * n)]
    two_delta = delta * 2

    def total(terms):
        acc = terms[0]
        for t in terms[1:]:
            acc = acc + t
        return acc

    abar = [[None] * n for _ in range(n)]
    bbar = [[None] * n for _ in range(n)]
    cbar = [[None] * n for _ in range(n)]
    for k in range(n):
        for l in range(n):
            s = total([a2[l][t] * dot_late[k][t] + a2[k][t] * dot_late[l][t] for t in range(n)])
            abar[k][l] = s / two_delta + (b2[l][k] + b2[k][l]) / 2
            s = total([a2[k][t] * dot_late[n + l][t] - a1[l][t] * dot_early[k][t] for t in range(n)])
            bbar[k][l] = s / two_delta
            s = total([a1[l][t] * dot_early[n + k][t] + a1[k][t] * dot_early[n + l][t] for t in range(n)])
            cbar[k][l] = -(s / two_delta) - (b1[l][k] + b1[k][l]) / 2
    return abar, bbar, cbar


def _integral(s: SeriesQ, t1: Fraction, t2: Fraction) -> Fraction:
    anti = s.antiderivative()
    return anti.evaluate(t2) - anti.evaluate(t1)


def action_value(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData) -> Fraction:
    """S along the classical path, through the boundary-term rewriting of L."""
    n = lag.n
    x, xd = trajectory(lag, fm, boundary)
    t1, t2 = boundary.t1, boundary.t2

    def bracket(t):
        xv = [s.evaluate(t) for s in x]
        xdv = [s.evaluate(t) for s in xd]
        co = lag.at(t)
        out = Fraction(0)
        for i in range(n):
            out += co["D"][i] * xv[i]
            for j in range(n):
                out += xv[i] * (co["A"][i][j] * xdv[j] + co["B"][i][j] * xv[j])
        return out

    integrand = lag.eps * 2
    for i in range(n):
        integrand = integrand + lag.D[i] * xd[i] + lag.E[i] * x[i]
    return (bracket(t2) - bracket(t1)) / 2 + _integral(integrand, t1, t2) / 2


def action_direct(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData) -> Fraction:
    """S = integral of L along the classical path (no use of the equations of motion)."""
    n = lag.n
    x, xd = trajectory(lag, fm, boundary)
    dens = lag.eps
    for i in range(n):
        dens = dens + lag.D[i] * xd[i] + lag.E[i] * x[i]
        for j in range(n):
            dens = dens + xd[i] * lag.A[i][j] * xd[j] / 2 + xd[i] * lag.B[i][j] * x[j] + x[i] * lag.C[i][j] * x[j] / 2
    return _integral(dens, boundary.t1, boundary.t2)


@dataclass(frozen=True)
class ClassicalAction:
    """S(x'', x') = 1/2 x''^T Abar x'' + x''^T Bbar x' + 1/2 x'^T Cbar x' + Dbar.x'' + Ebar.x' + epsbar."""

    Abar: tuple
    Bbar: tuple
    Cbar: tuple
    Dbar: tuple
    Ebar: tuple
    eps_bar: Fraction
    t1: Fraction
    t2: Fraction

    @property
    def n(self) -> int:
        return len(self.Abar)

    def value(self, x2: Sequence, x1: Sequence) -> Fraction:
        x2 = [to_rational(v) for v in x2]
        x1 = [to_rational(v) for v in x1]
        n = self.n
        s = self.eps_bar
        for k in range(n):
            s += self.Dbar[k] * x2[k] + self.Ebar[k] * x1[k]
            for l in range(n):
                s += x2[k] * self.Abar[k][l] * x2[l] / 2 + x2[k] * self.Bbar[k][l] * x1[l]
                s += x1[k] * self.Cbar[k][l] * x1[l] / 2
        return s

    def to_dict(self) -> dict:
        from .exact import format_rational as fr

        mat = lambda m: [[fr(x) for x in row] for row in m]  # noqa: E731
        return {
            "t1": fr(self.t1),
            "t2": fr(self.t2),
            "Abar": mat(self.Abar),
            "Bbar": mat(self.Bbar),
            "Cbar": mat(self.Cbar),
            "Dbar": [fr(x) for x in self.Dbar],
            "Ebar": [fr(x) for x in self.Ebar],
            "epsBar": fr(self.eps_bar),
        }


def full_action(lag: QuadraticLagrangian, fm: FundamentalMatrix, boundary: BoundaryData,
                check: bool = True) -> tuple[ClassicalAction, Fraction]:
    """Interpolate the quadratic form S(x'', x') exactly and evaluate it at ``boundary``.

    With ``check`` the quadratic part must agree with :func:`action_coefficients`
    (exactly when the trajectory series are polynomials, otherwise to a
    relative 1e-12).
    """
    n = lag.n
    t1, t2 = boundary.t1, boundary.t2
    m = 2 * n

    def s_at(z):
        return action_value(lag, fm, BoundaryData(t1, t2, z[n:], z[:n]))

    def unit(*idx):
        z = [Fraction(0)] * m
        for i, sgn in idx:
            z[i] += sgn
        return z

    s0 = s_at(unit())
    plus = [s_at(unit((i, 1))) for i in range(m)]
    minus = [s_at(unit((i, -1))) for i in range(m)]
    grad = [(plus[i] - minus[i]) / 2 for i in range(m)]
    q = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        q[i][i] = plus[i] + minus[i] - 2 * s0
        for j in range(i + 1, m):
            q[i][j] = q[j][i] = s_at(unit((i, 1), (j, 1))) - plus[i] - plus[j] + s0
    ca = ClassicalAction(
        tuple(tuple(q[k][l] for l in range(n)) for k in range(n)),
        tuple(tuple(q[k][n + l] for l in range(n)) for k in range(n)),
        tuple(tuple(q[n + k][n + l] for l in range(n)) for k in range(n)),
        tuple(grad[:n]),
        tuple(grad[n:]),
        s0,
        t1,
        t2,
    )
    if check:
        ab, bb, cb = action_coefficients(lag, fm, t1, t2)
        exact = all(not any(s.tail_terms(1, 1)) for s in fm.series_list())
        for mine, ref in ((ca.Abar, ab), (ca.Bbar, bb), (ca.Cbar, cb)):
            for k in range(n):
                for l in range(n):
                    diff = mine[k][l] - ref[k][l]
                    if exact and diff != 0:
                        raise PadelicError("quadratic form mismatch", "interpolation consistency")
                    if not exact and abs(diff) > Fraction(1, 10**12) * (1 + abs(ref[k][l])):
                        raise PadelicError("quadratic form mismatch", "interpolation consistency")
    return ca, ca.value(boundary.x2, boundary.x1)


def guard(lag: QuadraticLagrangian, fm: FundamentalMatrix, times: Sequence, v, precision: int = 10) -> None:
    """Convergence guard for evaluating every series of the problem at ``times``."""
    series = lag.series_list() + fm.series_list()
    for t in times:
        check_convergence(series, t, v, precision)


def _vec_row_major(m) -> list:
    return [x for row in m for x in row]


def det_bbar_check(lag: QuadraticLagrangian, fm: FundamentalMatrix, t1=0, t2=SERIES) -> dict:
    """det(Bbar) Delta - 1, plus the two-dimensional trace decomposition for n = 2."""
    n = lag.n
    if n not in (1, 2):
        raise PadelicError("det Bbar check supports n in {1, 2}", "n in {1, 2}")
    frame = _Frame(lag, fm, t1, t2)
    delta = _delta(frame)
    _, bbar, _ = action_coefficients(lag, fm, t1, t2)
    db = det_ring(bbar) if frame.series else det(bbar)
    out = {"residual": db * delta - 1, "detBbar": db, "delta": delta}
    if n == 2:
        d = {}
        for i in range(2):
            for j in range(2):
                d[(i + 1, j + 1)] = _dotted(frame, i, "early", j)
                d[(i + 3, j + 1)] = _dotted(frame, i + 2, "late", j)
        tilde = [
            [d[2, 1] * d[4, 1], d[2, 1] * d[4, 2], -d[1, 1] * d[4, 1], -d[1, 1] * d[4, 2]],
            [d[2, 2] * d[4, 1], d[2, 2] * d[4, 2], -d[1, 2] * d[4, 1], -d[1, 2] * d[4, 2]],
            [-d[2, 1] * d[3, 1], -d[2, 1] * d[3, 2], d[1, 1] * d[3, 1], d[1, 1] * d[3, 2]],
            [-d[2, 2] * d[3, 1], -d[2, 2] * d[3, 2], d[1, 2] * d[3, 1], d[1, 2] * d[3, 2]],
        ]
        u = _vec_row_major(frame.A["early"])
        w = _vec_row_major(frame.A["late"])
        tr = None
        for i in range(4):
            for j in range(4):
                term = u[i] * tilde[i][j] * w[j]
                tr = term if tr is None else tr + term
        decomposition = 1 / (delta * 2) + tr / (delta * delta * 4)
        out["decomposition"] = decomposition
        out["decompositionResidual"] = decomposition - db
    return out


def determinant_identity(X, Y, Z, W) -> tuple[Fraction, Fraction]:
    """Both sides of det T = det[Y;Z]^(n-1) det[Y;W]^(n-1) det[Z;W] det[X;Y]."""
    X, Y, Z, W = ([[to_rational(x) for x in row] for row in M] for M in (X, Y, Z, W))
    n = len(Y)
    if any(len(M) != n or any(len(r) != 2 * n for r in M) for M in (X, Y, Z, W)):
        raise ValueError("X, Y, Z, W must all be n x 2n")
    yz, yw = det(Y + Z), det(Y + W)
    t = [[Fraction(0)] * n for _ in range(n)]
    for k in range(n):
        for l in range(n):
            ykl = [list(r) for r in Y]
            ykl[k] = list(X[l])
            t[k][l] = det(ykl + Z) * yw - det(ykl + W) * yz
    rhs = yz ** (n - 1) * yw ** (n - 1) * det(Z + W) * det(X + Y)
    return det(t), rhs


def composition_matrices(lag: QuadraticLagrangian, fm: FundamentalMatrix, t1, t, t2) -> dict:
    """U and the matrix Abar(t, t') + Cbar(t'', t) for a split t' < t < t''."""
    n = lag.n
    first = _Frame(lag, fm, t1, t)
    second = _Frame(lag, fm, t, t2)
    d1, d2 = _delta(first), _delta(second)
    u = [
        [
            _dotted(first, i, "late", j) / (2 * d1) - _dotted(second, n + i, "early", j) / (2 * d2)
            for j in range(n)
        ]
        for i in range(n)
    ]
    a_mid = first.A["late"]
    a1, _, _ = action_coefficients(lag, fm, t1, t)
    _, _, c2 = action_coefficients(lag, fm, t, t2)
    script_h = [[a1[k][l] + c2[k][l] for l in range(n)] for k in range(n)]
    from_u = [
        [sum((a_mid[s][l] * u[k][s] + a_mid[s][k] * u[l][s] for s in range(n)), Fraction(0)) for l in range(n)]
        for k in range(n)
    ]
    return {"U": u, "H_script": script_h, "H_from_U": from_u, "delta_first": d1, "delta_second": d2}


__all__ = [
    "BoundaryData",
    "ClassicalAction",
    "FundamentalMatrix",
    "ODESystem",
    "QuadraticLagrangian",
    "SERIES",
    "action_coefficients",
    "action_direct",
    "action_value",
    "composition_matrices",
    "delta_determinants",
    "det_bbar_check",
    "determinant_identity",
    "euler_lagrange",
    "full_action",
    "guard",
    "integration_constants",
    "solve_fundamental",
    "trajectory",
    "wronskian_constant",
]
