import cmath
import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import assume, given, settings, strategies as st

from hypersym.hypergraph import Hypergraph, complete_hypergraph
from hypersym.spectral import (
    EigenPair, charpoly_resultant_2d, spectral_radius, spectrum_2d, verify_eigenpair,
)
from hypersym.tensor import SparseTensor, adjacency_tensor, is_weakly_irreducible, matrix_tensor, zero_tensor

from corpus import SHIFT6_ENTRIES, TIGHT6_EDGES

W = cmath.exp(2j * cmath.pi / 3)


@pytest.fixture
def tight6():
    return adjacency_tensor(Hypergraph(6, 3, TIGHT6_EDGES))


@pytest.fixture
def shift6():
    return SparseTensor(3, 6, {idx: 1 for idx in SHIFT6_ENTRIES})


# spectral radius

def test_radius_tight6(tight6):
    rho, x = spectral_radius(tight6)
    assert abs(rho - 3) < 1e-10
    assert np.allclose(x, 1)


def test_radius_single_edge():
    rho, x = spectral_radius(adjacency_tensor(Hypergraph(3, 3, [(1, 2, 3)])))
    assert abs(rho - 1) < 1e-10 and np.allclose(x, 1)


def test_radius_shift6(shift6):
    rho, _ = spectral_radius(shift6)
    assert abs(rho - 1) < 1e-10


def test_radius_complete_hypergraph():
    rho, _ = spectral_radius(adjacency_tensor(complete_hypergraph(5, 3)))
    assert abs(rho - 6) < 1e-9


def test_radius_rejects_bad_input():
    with pytest.raises(ValueError):
        spectral_radius(SparseTensor(2, 2, {(1, 2): -1, (2, 1): 1}))
    with pytest.raises(ValueError):
        spectral_radius(adjacency_tensor(Hypergraph(6, 3, [(1, 2, 3), (4, 5, 6)])))


# residuals

def test_residual_examples(shift6, tight6):
    assert verify_eigenpair(tight6, 3, [1] * 6) == 0
    assert verify_eigenpair(shift6, 1, [1] * 6) == 0
    x11 = [1, W, 1, 1, W, 1]
    assert verify_eigenpair(tight6, 3 * W, x11) < 1e-12
    for j in range(3):
        xj = [1, W ** j, W ** (1 - j), 1, W ** j, W ** (1 - j)]
        assert verify_eigenpair(tight6, 3 * W, xj) < 1e-12


def test_residual_detects_wrong_pair(tight6):
    assert verify_eigenpair(tight6, 2, [1] * 6) == 1
    with pytest.raises(ValueError):
        verify_eigenpair(tight6, 3, [0] * 6)
    with pytest.raises(ValueError):
        verify_eigenpair(tight6, 3, [1] * 5)


def test_eigenpair_recomputes_residual(tight6):
    assert EigenPair.of(tight6, 3, [1] * 6).residual == 0


# two-variable characteristic polynomial

@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=4, max_size=4))
def test_matrix_charpoly(vals):
    a, b, c, d = vals
    cp = charpoly_resultant_2d(matrix_tensor([[a, b], [c, d]]))
    assert cp.coefficients == (1, -(a + d), a * d - b * c)
    assert cp.is_exact()


def test_charpoly_examples():
    cp = charpoly_resultant_2d(SparseTensor(3, 2, {(1, 1, 1): 1}))
    lam = sympy.Symbol("lambda")
    assert sympy.expand(cp.as_expr(lam) - (lam - 1) ** 2 * lam ** 2) == 0
    assert charpoly_resultant_2d(zero_tensor(3, 2)).coefficients == (1, 0, 0, 0, 0)
    assert charpoly_resultant_2d(zero_tensor(4, 2)).degree == 6


def test_charpoly_needs_two_variables(tight6):
    with pytest.raises(ValueError):
        charpoly_resultant_2d(tight6)


def test_spectrum_examples():
    assert np.allclose(spectrum_2d(SparseTensor(3, 2, {(1, 1, 1): 1})), [1, 1, 0, 0])
    assert np.allclose(sorted(z.real for z in spectrum_2d(matrix_tensor([[0, 1], [1, 0]]))), [-1, 1])
    assert spectrum_2d(zero_tensor(3, 2)) == [0, 0, 0, 0]


# invariants

@st.composite
def two_variable_tensors(draw):
    m = draw(st.sampled_from([2, 3, 4]))
    idx = list(itertools.product([1, 2], repeat=m))
    vals = draw(st.lists(st.integers(0, 3), min_size=len(idx), max_size=len(idx)))
    a = SparseTensor(m, 2, dict(zip(idx, vals)))
    assume(is_weakly_irreducible(a)[0])
    return a


@settings(max_examples=40, deadline=None)
@given(two_variable_tensors())
def test_radius_is_largest_modulus(a):
    rho, x = spectral_radius(a)
    assert abs(rho - max(abs(z) for z in spectrum_2d(a))) < 1e-6
    assert verify_eigenpair(a, rho, list(x)) < 1e-8 * max(1.0, rho)


@st.composite
def dominated_pairs(draw):
    m = draw(st.integers(2, 3))
    n = draw(st.integers(2, 4))
    idx = list(itertools.product(range(1, n + 1), repeat=m))
    chosen = draw(st.lists(st.sampled_from(idx), min_size=n, max_size=10, unique=True))
    vals = draw(st.lists(st.integers(1, 4), min_size=len(chosen), max_size=len(chosen)))
    cuts = draw(st.lists(st.integers(0, 3), min_size=len(chosen), max_size=len(chosen)))
    a = SparseTensor(m, n, dict(zip(chosen, vals)))
    assume(is_weakly_irreducible(a)[0])
    b = SparseTensor(m, n, {i: Fraction(v, 1 + c) for i, v, c in zip(chosen, vals, cuts)})
    return a, b


@settings(max_examples=40, deadline=None)
@given(dominated_pairs())
def test_radius_monotone(pair):
    a, b = pair
    assert spectral_radius(b)[0] <= spectral_radius(a)[0] + 1e-9
