"""Exact dense linear algebra over any exact field (rationals, tower, t-functions).

Matrices are plain lists of row lists. Nothing here looks at entry types
beyond the field operations, ``== 0`` and (for signs) ``scalar_sign``.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .polynomial import Polynomial
from .tower import TowerElement, tower_sign


def scalar_sign(x) -> int:
    if isinstance(x, TowerElement):
        return tower_sign(x)
    if isinstance(x, (int, Fraction)):
        return (x > 0) - (x < 0)
    raise TypeError(f"no pointwise sign for {type(x).__name__}")


def copy_matrix(M):
    return [list(row) for row in M]


def identity(n: int):
    return [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def submatrix(M, rows: Sequence[int], cols: Sequence[int] | None = None):
    if cols is None:
        cols = rows
    return [[M[i][j] for j in cols] for i in rows]


def matmul(A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = 0
            for l in range(k):
                a = Ai[l]
                if a == 0:
                    continue
                b = B[l][j]
                if b == 0:
                    continue
                acc = acc + a * b
            row.append(acc if not isinstance(acc, int) else Fraction(acc))
        out.append(row)
    return out


def matpow(A, e: int):
    result = identity(len(A))
    base = A
    while e:
        if e & 1:
            result = matmul(result, base)
        base = matmul(base, base)
        e >>= 1
    return result


def mat_equal(A, B) -> bool:
    return len(A) == len(B) and all(
        len(ra) == len(rb) and all(a == b for a, b in zip(ra, rb)) for ra, rb in zip(A, B)
    )


def is_identity(A) -> bool:
    return mat_equal(A, identity(len(A)))


def trace(A):
    acc = 0
    for i in range(len(A)):
        acc = acc + A[i][i]
    return acc


def bareiss_echelon(M, row_order: Sequence[int] | None = None):
    """Fraction-free elimination with row pivoting.

    Returns (rank, pivot_rows, pivot_cols) where pivot_rows are original
    row indices. ``row_order`` fixes the preference order for pivot rows.
    """
    n = len(M)
    if n == 0:
        return 0, [], []
    m = len(M[0])
    order = list(range(n)) if row_order is None else list(row_order)
    A = [list(M[i]) for i in order]
    rows = list(order)
    prev = 1
    r = 0
    pivot_rows, pivot_cols = [], []
    for c in range(m):
        if r == n:
            break
        piv = next((i for i in range(r, n) if A[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            A[piv], A[r] = A[r], A[piv]
            rows[piv], rows[r] = rows[r], rows[piv]
        p = A[r][c]
        for i in range(r + 1, n):
            a_ic = A[i][c]
            Ai, Ar = A[i], A[r]
            for j in range(c + 1, m):
                v = p * Ai[j]
                if a_ic != 0 and Ar[j] != 0:
                    v = v - a_ic * Ar[j]
                Ai[j] = v / prev if prev != 1 else v
            Ai[c] = 0
        prev = p
        pivot_rows.append(rows[r])
        pivot_cols.append(c)
        r += 1
    return r, pivot_rows, pivot_cols


def rank(M, row_order=None) -> int:
    return bareiss_echelon(M, row_order)[0]


def leading_minors(M) -> list:
    """Leading principal minors d_1..d_k, stopping after the first zero."""
    n = len(M)
    A = copy_matrix(M)
    prev = 1
    out = []
    for k in range(n):
        p = A[k][k]
        out.append(p if not isinstance(p, int) else Fraction(p))
        if p == 0:
            break
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = p * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = v / prev if prev != 1 else v
        prev = p
    return out


def determinant(M):
    n = len(M)
    if n == 0:
        return Fraction(1)
    A = copy_matrix(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if piv is None:
                return A[0][0] * 0
            A[k], A[piv] = A[piv], A[k]
            sign = -sign
        p = A[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = p * A[i][j] - A[i][k] * A[k][j]
                A[i][j] = v / prev if prev != 1 else v
        prev = p
    d = A[n - 1][n - 1]
    return d if sign > 0 else -d


def inverse(M):
    n = len(M)
    A = [list(M[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((i for i in range(c, n) if A[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        A[c], A[piv] = A[piv], A[c]
        p = A[c][c]
        A[c] = [v / p for v in A[c]]
        for i in range(n):
            if i != c and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[c])]
    return [row[n:] for row in A]


def charpoly(A) -> Polynomial:
    """det(x I - A) by the Faddeev-LeVerrier recurrence."""
    n = len(A)
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        AM = matmul(A, Mk)
        c_prev = coeffs[n - k + 1]
        Mk = [[AM[i][j] + (c_prev if i == j else 0) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -trace(matmul(A, Mk)) / k
    return Polynomial(coeffs)
