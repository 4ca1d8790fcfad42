"""Small exact linear algebra over Q (and determinants over commutative rings).

Matrices are lists of row lists. Nothing here is clever; sizes are at most
2n x 2n with n <= 3.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from .exact import SingularError

Matrix = list[list[Any]]


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) if isinstance(x, (int, str)) else x for x in row] for row in rows]


def shape(m: Matrix) -> tuple[int, int]:
    return len(m), (len(m[0]) if m else 0)


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def transpose(m: Matrix) -> Matrix:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        out_row = []
        for col in bt:
            acc = row[0] * col[0]
            for x, y in zip(row[1:], col[1:]):
                acc = acc + x * y
            out_row.append(acc)
        out.append(out_row)
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    out = []
    for row in a:
        acc = row[0] * v[0]
        for x, y in zip(row[1:], v[1:]):
            acc = acc + x * y
        out.append(acc)
    return out


def madd(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def msub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mscale(a: Matrix, s) -> Matrix:
    return [[x * s for x in row] for row in a]


def vstack(*blocks: Matrix) -> Matrix:
    out: Matrix = []
    for b in blocks:
        out.extend([list(r) for r in b])
    return out


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def det(m: Matrix) -> Fraction:
    """Determinant over Q by Gaussian elimination."""
    n = len(m)
    if n == 0:
        return Fraction(1)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    result = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        pk = a[k][k]
        result *= pk
        for i in range(k + 1, n):
            f = a[i][k] / pk
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return result * sign


def det_ring(m: Matrix):
    """Determinant over any commutative ring via Laplace expansion with memo.

    O(2^n n) ring multiplications; used for matrices of power series.
    """
    n = len(m)
    if n == 0:
        return 1
    memo: dict[int, Any] = {}

    def rec(row: int, cols: int):
        # determinant of rows row..n-1 restricted to the column set ``cols``
        if row == n:
            return None
        if cols in memo:
            return memo[cols]
        acc = None
        sign = 1
        for j in range(n):
            if cols >> j & 1:
                sub = rec(row + 1, cols & ~(1 << j))
                term = m[row][j] if sub is None else m[row][j] * sub
                if sign < 0:
                    term = -term
                acc = term if acc is None else acc + term
                sign = -sign
        memo[cols] = acc
        return acc

    return rec(0, (1 << n) - 1)


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise SingularError("matrix is singular", "nonsingular matrix")
        a[k], a[piv] = a[piv], a[k]
        pk = a[k][k]
        a[k] = [x / pk for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def solve(m: Matrix, b: Sequence) -> list[Fraction]:
    return matvec(inverse(m), list(b))


def replace_row(m: Matrix, i: int, row: Sequence) -> Matrix:
    out = [list(r) for r in m]
    out[i] = list(row)
    return out


def replace_col(m: Matrix, j: int, col: Sequence) -> Matrix:
    out = [list(r) for r in m]
    for i, x in enumerate(col):
        out[i][j] = x
    return out


def congruence_diagonalize(alpha: Matrix) -> tuple[list[Fraction], Matrix]:
    """Return ``(d, T)`` with ``T^T alpha T = diag(d)`` and ``T`` invertible.

    Symmetric elimination; a zero pivot with a nonzero off-diagonal entry is
    cured by the shear ``x_k -> x_k + x_j`` (no square roots needed).
    """
    n = len(alpha)
    if not is_symmetric(alpha):
        raise ValueError("congruence diagonalisation needs a symmetric matrix")
    a = [[Fraction(x) for x in row] for row in alpha]
    t = identity(n)

    def col_op(dst: int, src: int, f: Fraction):
        # x_dst-column += f * src-column, applied as congruence
        for r in range(n):
            a[r][dst] += f * a[r][src]
        for c in range(n):
            a[dst][c] += f * a[src][c]
        for r in range(n):
            t[r][dst] += f * t[r][src]

    def swap(i: int, j: int):
        for row in a:
            row[i], row[j] = row[j], row[i]
        a[i], a[j] = a[j], a[i]
        for row in t:
            row[i], row[j] = row[j], row[i]

    for k in range(n):
        if a[k][k] == 0:
            j = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if j is not None:
                swap(k, j)
            else:
                j = next((i for i in range(k + 1, n) if a[k][i] != 0), None)
                if j is None:
                    continue
                col_op(k, j, Fraction(1))
        pk = a[k][k]
        if pk == 0:
            continue
        for i in range(k + 1, n):
            if a[k][i] != 0:
                col_op(i, k, -a[k][i] / pk)
    return [a[i][i] for i in range(n)], t
