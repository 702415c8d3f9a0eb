"""Spectral radius, eigenpair residuals and the two-variable characteristic polynomial."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
import sympy

from .tensor import CompiledTensor, Phasor, SparseTensor, apply, is_weakly_irreducible


class ConvergenceError(RuntimeError):
    pass


def _max_abs(values) -> float:
    return max((abs(complex(v)) for v in values), default=0.0)


def verify_eigenpair(a: SparseTensor, lam, x: Sequence, tol: float | None = None) -> float:
    """Max-norm of ``A x^{m-1} - lam x^{[m-1]}``.

    Exact when ``lam`` and ``x`` are exact. ``tol`` is accepted for symmetry
    with callers; the comparison is left to them.
    """
    if len(x) != a.n:
        raise ValueError(f"vector has length {len(x)}, tensor dimension is {a.n}")
    if all(v == 0 for v in x):
        raise ValueError("eigenvector must be nonzero")
    ax = apply(a, list(x))
    diff = [ax[i] - lam * x[i] ** (a.m - 1) for i in range(a.n)]
    return float(_max_abs(diff))


@dataclass(frozen=True)
class EigenPair:
    lam: complex
    x: tuple
    residual: float

    @classmethod
    def of(cls, a: SparseTensor, lam, x: Sequence) -> "EigenPair":
        """Build a pair with the residual recomputed from ``a``."""
        return cls(lam, tuple(x), verify_eigenpair(a, lam, x))


def _real_nonnegative(a: SparseTensor) -> bool:
    for v in a.entries.values():
        if isinstance(v, (Phasor, complex)) or v < 0:
            return False
    return True


def spectral_radius(a: SparseTensor, tol: float = 1e-12, max_iter: int = 100_000,
                    shift: float | None = None) -> tuple[float, np.ndarray]:
    """Perron root and positive eigenvector of a nonnegative weakly irreducible tensor.

    Iterates ``x -> (A x^{m-1} + eps x^{[m-1]})^{[1/(m-1)]}`` and stops when the
    Collatz-Wielandt bounds ``min_i`` and ``max_i`` of ``(A x^{m-1})_i / x_i^{m-1}``
    are within ``tol``.
    """
    if not _real_nonnegative(a):
        raise ValueError("spectral_radius needs a nonnegative real tensor")
    ok, _ = is_weakly_irreducible(a)
    if not ok:
        raise ValueError("spectral_radius needs a weakly irreducible tensor")
    eps = shift if shift is not None else (1.0 if a.has_zero_diagonal() else 0.0)
    k = a.m - 1
    ct = CompiledTensor(a)
    x = np.ones(a.n)
    for _ in range(max_iter):
        xk = x ** k
        y = ct.apply(x).real + eps * xk
        ratios = y / xk
        lo, hi = ratios.min(), ratios.max()
        if hi - lo < tol:
            return float((lo + hi) / 2 - eps), x
        x = y ** (1.0 / k)
        x = x / x.max()
    raise ConvergenceError(f"power iteration did not converge in {max_iter} steps (gap {hi - lo:.3g})")


# ---------------------------------------------------------------------------
# n = 2 characteristic polynomial
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CharPoly2D:
    """Monic polynomial in lambda, coefficients from the leading term down."""

    coefficients: tuple

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def as_expr(self, var=None):
        lam = var if var is not None else sympy.Symbol("lambda")
        return sum(c * lam ** (self.degree - i) for i, c in enumerate(self.coefficients))

    def is_exact(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coefficients)


def _sym(value):
    if isinstance(value, Fraction):
        return sympy.Rational(value.numerator, value.denominator)
    if isinstance(value, Phasor):
        return _sym(value.magnitude) * sympy.exp(2 * sympy.pi * sympy.I * _sym(value.angle))
    return sympy.sympify(value)


def charpoly_resultant_2d(a: SparseTensor) -> CharPoly2D:
    """Sylvester resultant of the two forms ``(lam I - A) x^{m-1}`` in ``x1, x2``."""
    if a.n != 2:
        raise ValueError(f"two-variable resultant needs n = 2, got n = {a.n}")
    k = a.m - 1
    lam = sympy.Symbol("lambda")
    # coefficient of x1^(k-e) x2^e in form i, e = 0..k
    forms = [[sympy.Integer(0)] * (k + 1) for _ in range(2)]
    for idx, val in a.entries.items():
        e = sum(1 for j in idx[1:] if j == 2)
        forms[idx[0] - 1][e] -= _sym(val)
    forms[0][0] += lam
    forms[1][k] += lam
    size = 2 * k
    rows = []
    for form in forms:
        for shift in range(k):
            row = [sympy.Integer(0)] * size
            row[shift:shift + k + 1] = form
            rows.append(row)
    det = sympy.Matrix(rows).det(method="berkowitz")
    poly = sympy.Poly(sympy.expand(det), lam)
    coeffs = poly.all_coeffs()
    lead = coeffs[0]
    out = []
    for c in coeffs:
        c = sympy.simplify(c / lead)
        if c.is_Rational:
            out.append(Fraction(int(c.p), int(c.q)))
        else:
            out.append(complex(sympy.N(c, 30)))
    if len(out) != size + 1:
        raise AssertionError(f"resultant has degree {len(out) - 1}, expected {size}")
    return CharPoly2D(tuple(out))


def spectrum_2d(a: SparseTensor, tol: float = 1e-10) -> list[complex]:
    """All ``2(m-1)`` eigenvalues with multiplicity, from the resultant polynomial."""
    cp = charpoly_resultant_2d(a)
    roots = np.roots([complex(c) for c in cp.coefficients])
    cleaned = []
    for r in roots:
        re = 0.0 if abs(r.real) < tol else r.real
        im = 0.0 if abs(r.imag) < tol else r.imag
        cleaned.append(complex(re, im))
    return sorted(cleaned, key=lambda z: (-abs(z), -z.real, -z.imag))


def power_sums(roots: Sequence[complex], d: int) -> complex:
    return sum(r ** d for r in roots)


__all__ = [
    "CharPoly2D", "ConvergenceError", "EigenPair", "charpoly_resultant_2d", "power_sums",
    "spectral_radius", "spectrum_2d", "verify_eigenpair",
]
