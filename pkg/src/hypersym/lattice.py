"""Smith normal form over the integers and linear congruence solving."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

Matrix = list[list[int]]


def identity(k: int) -> Matrix:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    return [[sum(a[i][k] * b[k][j] for k in range(inner)) for j in range(cols)] for i in range(len(a))]


def matvec(a: Matrix, x: Sequence) -> list:
    return [sum(row[k] * x[k] for k in range(len(x))) for row in a]


def determinant(a: Matrix) -> int:
    """Exact integer determinant (Bareiss fraction-free elimination)."""
    n = len(a)
    if n == 0:
        return 1
    m = [list(row) for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


@dataclass(frozen=True)
class SNFResult:
    """``U @ M @ V == diag`` with ``U``, ``V`` unimodular.

    ``diag`` has ``min(rows, cols)`` entries ``s1 | s2 | ...``, zeros last.
    """

    U: Matrix
    V: Matrix
    diag: tuple[int, ...]
    rows: int
    cols: int

    @property
    def rank(self) -> int:
        return sum(1 for s in self.diag if s != 0)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial torsion orders (entries > 1)."""
        return tuple(s for s in self.diag if s > 1)

    def diagonal_matrix(self) -> Matrix:
        out = [[0] * self.cols for _ in range(self.rows)]
        for i, s in enumerate(self.diag):
            out[i][i] = s
        return out


def smith_normal_form(matrix: Sequence[Sequence[int]]) -> SNFResult:
    a = [[int(v) for v in row] for row in matrix]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    if any(len(row) != cols for row in a):
        raise ValueError("ragged matrix")
    U = identity(rows)
    V = identity(cols)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        ra, rs = a[dst], a[src]
        for k in range(cols):
            ra[k] += q * rs[k]
        ua, us = U[dst], U[src]
        for k in range(rows):
            ua[k] += q * us[k]

    def add_col(dst, src, q):
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    t = 0
    while t < min(rows, cols):
        pivot = None
        for i in range(t, rows):
            for j in range(t, cols):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        while True:
            i, j = pivot
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            for i in range(t + 1, rows):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
            for j in range(t + 1, cols):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
            rest = [(i, t) for i in range(t + 1, rows) if a[i][t]]
            rest += [(t, j) for j in range(t + 1, cols) if a[t][j]]
            if rest:
                pivot = min(rest, key=lambda ij: abs(a[ij[0]][ij[1]]))
                continue
            bad = next(((i, j) for i in range(t + 1, rows) for j in range(t + 1, cols)
                        if a[i][j] % p), None)
            if bad is not None:
                add_row(t, bad[0], 1)
                pivot = (t, t)
                continue
            break
        if a[t][t] < 0:
            a[t] = [-v for v in a[t]]
            U[t] = [-v for v in U[t]]
        t += 1
    diag = tuple(a[i][i] for i in range(min(rows, cols)))
    return SNFResult(U, V, diag, rows, cols)


def solve_congruence(matrix: Sequence[Sequence[int]], rhs: Sequence[int], modulus: int) -> Optional[list[int]]:
    """Some ``x`` in ``0..modulus-1`` with ``matrix @ x == rhs (mod modulus)``, or ``None``."""
    rows = len(matrix)
    cols = len(matrix[0]) if rows else 0
    if cols == 0:
        return [] if all(b % modulus == 0 for b in rhs) else None
    snf = smith_normal_form(matrix)
    ub = matvec(snf.U, rhs)
    y = [0] * cols
    for i in range(rows):
        s = snf.diag[i] if i < len(snf.diag) else 0
        target = ub[i] % modulus
        if s == 0:
            if target:
                return None
            continue
        g = math.gcd(s, modulus)
        if target % g:
            return None
        mod_g = modulus // g
        y[i] = (target // g) * pow(s // g, -1, mod_g) % mod_g if mod_g > 1 else 0
    return [v % modulus for v in matvec(snf.V, y)]
