"""Characteristic polynomial coefficients from generalized traces."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .hypergraph import Hypergraph
from .traces import TraceTable


class InsufficientTraces(ValueError):
    pass


def schur_polynomial(d: int, t: Sequence) -> Fraction:
    """P_d(t_1..t_d), the degree-d part of exp(sum_k t_k z^k).

    Uses ``d P_d = sum_{k=1}^{d} k t_k P_{d-k}`` with ``P_0 = 1``.
    """
    if d < 1:
        raise ValueError("d must be at least 1")
    if len(t) < d:
        raise ValueError(f"need {d} arguments, got {len(t)}")
    p = [Fraction(1)]
    for j in range(1, d + 1):
        p.append(sum((k * Fraction(t[k - 1]) * p[j - k] for k in range(1, j + 1)), Fraction(0)) / j)
    return p[d]


def schur_polynomial_compositions(d: int, t: Sequence) -> Fraction:
    """Same value by the literal double sum over compositions of ``d``.

    Exponential in ``d``; a reference for checking :func:`schur_polynomial`.
    """
    total = Fraction(0)

    def rec(left, parts, prod):
        nonlocal total
        if left == 0:
            total += prod / math.factorial(parts)
            return
        for k in range(1, left + 1):
            rec(left - k, parts + 1, prod * Fraction(t[k - 1]))

    rec(d, 0, Fraction(1))
    return total


@dataclass(frozen=True)
class CharPolyPrefix:
    """Leading coefficients a_0 = 1, a_1..a_k of phi(lambda) = sum a_i lambda^(D-i)."""

    total_degree: int
    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("a_0 must be 1")

    @property
    def depth(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, i: int) -> Fraction:
        if i > self.depth:
            raise IndexError(f"a_{i} is beyond the computed depth {self.depth}")
        return self.coefficients[i]

    def to_records(self) -> list[dict]:
        return [{"i": i, "num": c.numerator, "den": c.denominator} for i, c in enumerate(self.coefficients)]


def total_degree(m: int, n: int) -> int:
    return n * (m - 1) ** (n - 1)


def charpoly_coefficients(tt: TraceTable, k: int | None = None) -> CharPolyPrefix:
    """a_i = P_i(-Tr_1/1, ..., -Tr_i/i) for i <= k."""
    if k is None:
        k = tt.depth
    if k > tt.d_max:
        raise InsufficientTraces(f"prefix depth {k} exceeds the table's d_max {tt.d_max}")
    if k > tt.depth:
        raise InsufficientTraces(f"Tr_{tt.depth + 1} is missing; cannot reach depth {k}")
    t = [-tt[d] / d for d in range(1, k + 1)]
    # the recurrence gives every P_i in one sweep
    coeffs = [Fraction(1)]
    for j in range(1, k + 1):
        coeffs.append(sum((i * t[i - 1] * coeffs[j - i] for i in range(1, j + 1)), Fraction(0)) / j)
    degree = total_degree(tt.m, tt.n) if tt.m else -1
    return CharPolyPrefix(degree, tuple(coeffs))


def codegree_m_formula(g: Hypergraph) -> Fraction:
    """-m^(m-2) (m-1)^(n-m) |E| as an exact rational."""
    m, n = g.m, g.n
    return -Fraction(m) ** (m - 2) * Fraction(m - 1) ** (n - m) * len(g.edges)


def codegree_m_check(g: Hypergraph, tt: TraceTable) -> bool:
    """True iff a_m computed from ``tt`` equals the closed form for the adjacency tensor of ``g``."""
    if tt.depth < g.m:
        raise InsufficientTraces(f"need traces up to d={g.m}, have {tt.depth}")
    prefix = charpoly_coefficients(tt, g.m)
    return prefix[g.m] == codegree_m_formula(g)


def newton_consistency(tt: TraceTable, prefix: CharPolyPrefix) -> bool:
    """Check Tr_d + sum_{i<d} a_i Tr_{d-i} + d a_d = 0 for every d up to the prefix depth."""
    k = min(prefix.depth, tt.depth)
    for d in range(1, k + 1):
        lhs = tt[d] + sum((prefix[i] * tt[d - i] for i in range(1, d)), Fraction(0)) + d * prefix[d]
        if lhs != 0:
            return False
    return True


__all__ = [
    "CharPolyPrefix", "InsufficientTraces", "charpoly_coefficients", "codegree_m_check",
    "codegree_m_formula", "newton_consistency", "schur_polynomial", "schur_polynomial_compositions",
    "total_degree",
]
