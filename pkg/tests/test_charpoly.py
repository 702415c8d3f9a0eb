import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from hypersym.charpoly import (
    CharPolyPrefix, InsufficientTraces, charpoly_coefficients, codegree_m_check, codegree_m_formula,
    newton_consistency, schur_polynomial, schur_polynomial_compositions, total_degree,
)
from hypersym.hypergraph import Hypergraph
from hypersym.spectral import charpoly_resultant_2d
from hypersym.tensor import SparseTensor, adjacency_tensor, matrix_tensor, zero_tensor
from hypersym.traces import TraceTable, trace_table

from corpus import TIGHT6_EDGES, connected_uniform_corpus

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def edge3():
    return adjacency_tensor(Hypergraph(3, 3, [(1, 2, 3)]))


# Schur polynomials

def test_schur_small():
    t1, t2, t3 = Fraction(2, 3), Fraction(-5), Fraction(7, 2)
    assert schur_polynomial(1, [t1]) == t1
    assert schur_polynomial(2, [t1, t2]) == t2 + t1 ** 2 / 2
    assert schur_polynomial(3, [0, 0, t3]) == t3


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 6), st.lists(rationals, min_size=6, max_size=6))
def test_schur_two_paths(d, t):
    assert schur_polynomial(d, t) == schur_polynomial_compositions(d, t)


def test_schur_argument_checks():
    with pytest.raises(ValueError):
        schur_polynomial(0, [])
    with pytest.raises(ValueError):
        schur_polynomial(3, [1, 2])


# coefficients

def test_single_edge_prefix():
    prefix = charpoly_coefficients(trace_table(edge3(), 3))
    assert prefix.coefficients == (1, 0, 0, -3)
    assert prefix.total_degree == total_degree(3, 3) == 12


def test_k2_prefix():
    assert charpoly_coefficients(trace_table(matrix_tensor([[0, 1], [1, 0]]), 2)).coefficients == (1, 0, -1)


def test_zero_tensor_prefix():
    assert charpoly_coefficients(trace_table(zero_tensor(3, 3), 4)).coefficients == (1, 0, 0, 0, 0)


def test_prefix_never_extrapolates():
    tt = trace_table(edge3(), 3)
    with pytest.raises(InsufficientTraces):
        charpoly_coefficients(tt, 4)
    prefix = charpoly_coefficients(tt, 2)
    assert prefix.depth == 2
    with pytest.raises(IndexError):
        prefix[3]
    partial = TraceTable({1: Fraction(0), 2: None, 3: None}, 3, {1: True, 2: False, 3: False}, 3, 3)
    with pytest.raises(InsufficientTraces):
        charpoly_coefficients(partial, 2)


def test_prefix_requires_leading_one():
    with pytest.raises(ValueError):
        CharPolyPrefix(4, (Fraction(2),))


def test_records():
    recs = charpoly_coefficients(trace_table(edge3(), 3)).to_records()
    assert recs[3] == {"i": 3, "num": -3, "den": 1}


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_matrix_charpoly(rows):
    n = len(rows)
    prefix = charpoly_coefficients(trace_table(matrix_tensor(rows), n))
    lam = sympy.Symbol("lambda")
    ref = sympy.Matrix(rows).charpoly(lam).all_coeffs()
    assert list(prefix.coefficients) == [Fraction(int(c)) for c in ref]


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_two_variable_prefix_matches_resultant(m, data):
    idx = list(itertools.product([1, 2], repeat=m))
    vals = data.draw(st.lists(st.integers(0, 2), min_size=len(idx), max_size=len(idx)))
    a = SparseTensor(m, 2, dict(zip(idx, vals)))
    cp = charpoly_resultant_2d(a)
    prefix = charpoly_coefficients(trace_table(a, cp.degree))
    assert prefix.coefficients == cp.coefficients


# codegree checks

def test_codegree_examples():
    g = Hypergraph(3, 3, [(1, 2, 3)])
    assert codegree_m_formula(g) == -3 and codegree_m_check(g, trace_table(edge3(), 3))
    ex = Hypergraph(6, 3, TIGHT6_EDGES)
    assert codegree_m_formula(ex) == -144
    assert codegree_m_check(ex, trace_table(adjacency_tensor(ex), 3))
    empty = Hypergraph(4, 3, [])
    assert codegree_m_check(empty, trace_table(adjacency_tensor(empty), 3))


def test_codegree_needs_depth():
    g = Hypergraph(3, 3, [(1, 2, 3)])
    with pytest.raises(InsufficientTraces):
        codegree_m_check(g, trace_table(edge3(), 2))


def test_low_coefficients_vanish_on_corpus():
    for g in connected_uniform_corpus():
        prefix = charpoly_coefficients(trace_table(adjacency_tensor(g), g.m - 1))
        assert all(prefix[i] == 0 for i in range(1, g.m))


# Newton identities

def test_newton_examples():
    tt = trace_table(edge3(), 3)
    assert newton_consistency(tt, charpoly_coefficients(tt))
    mt = trace_table(matrix_tensor([[1, 2], [3, 4]]), 4)
    assert newton_consistency(mt, charpoly_coefficients(mt))


def test_newton_detects_corruption():
    tt = trace_table(edge3(), 3)
    prefix = charpoly_coefficients(tt)
    bad = TraceTable(dict(tt.values), tt.d_max, dict(tt.complete), tt.m, tt.n)
    bad.values[3] += 1
    assert not newton_consistency(bad, prefix)
