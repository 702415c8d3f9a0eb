import itertools

import pytest
from hypothesis import assume, given, settings, strategies as st

from hypersym.group import GroupError, exact_cyclic_index
from hypersym.hypergraph import (
    Hypergraph, complete_graph, complete_hypergraph, contains_simplex, cycle_graph, generalized_power,
    is_connected,
)
from hypersym.symmetry import (
    CONSISTENT, NOT_SYMMETRIC, SYMMETRIC, ColoringCertificate, SymmetryVerdict, chromatic_upper_bound,
    coloring_exists, cyclic_index_hypergraph, cyclic_index_window, is_ell_symmetric_traces, is_proper,
    odd_transversal, p_hm_symmetry_check, verify_coloring, verify_odd_transversal,
)
from hypersym.tensor import adjacency_tensor, matrix_tensor, zero_tensor

from corpus import TIGHT6_EDGES, connected_uniform_corpus


@pytest.fixture
def tight6_graph():
    return Hypergraph(6, 3, TIGHT6_EDGES)


@pytest.fixture
def tight6(tight6_graph):
    return adjacency_tensor(tight6_graph)


def edge(m):
    return Hypergraph(m, m, [tuple(range(1, m + 1))])


# trace verdicts

def test_tight6_verdicts(tight6):
    v = is_ell_symmetric_traces(tight6, 3, 9)
    assert (v.status, v.depth) == (CONSISTENT, 9)
    v = is_ell_symmetric_traces(tight6, 2, 3)
    assert (v.status, v.witness) == (NOT_SYMMETRIC, 3)


def test_certified_verdict(tight6):
    v = is_ell_symmetric_traces(tight6, 3, 3, certify=True)
    assert v.status == SYMMETRIC and verify_coloring(tight6, v.certificate)


def test_zero_tensor_verdict():
    for ell in (1, 2, 5):
        assert is_ell_symmetric_traces(zero_tensor(3, 3), ell, 4).status == CONSISTENT


def test_verdict_cap_reduces_depth():
    v = is_ell_symmetric_traces(adjacency_tensor(complete_hypergraph(4, 3)), 2, 8, cap=10)
    assert v.depth < 8


def test_negative_verdict_needs_witness():
    with pytest.raises(ValueError):
        SymmetryVerdict(2, NOT_SYMMETRIC, 4, witness=4)
    with pytest.raises(ValueError):
        is_ell_symmetric_traces(zero_tensor(3, 3), 0, 3)


def test_windows(tight6):
    assert cyclic_index_window(tight6, 9).c_hat == 3
    assert cyclic_index_window(adjacency_tensor(edge(3)), 6).c_hat == 3
    w = cyclic_index_window(matrix_tensor([[0, 1], [1, 0]]), 6)
    assert w.c_hat == 2 and w.label == "upper-multiple" and w.complete
    assert cyclic_index_window(zero_tensor(3, 3), 4).c_hat == 0


# colorings

def test_coloring_examples(tight6):
    cert = coloring_exists(adjacency_tensor(edge(3)), 3, 1)
    assert cert.phi == (1, 1, 2) and verify_coloring(adjacency_tensor(edge(3)), cert)
    psi = coloring_exists(tight6, 3, 1, normalize=True)
    assert psi.phi == (3, 1, 3, 3, 1, 3)
    assert psi.color_classes() == {3: [1, 3, 4, 6], 1: [2, 5]}
    assert coloring_exists(adjacency_tensor(complete_hypergraph(4, 3)), 3, 1) is None


def test_coloring_brute_force_k4():
    a = adjacency_tensor(complete_hypergraph(4, 3))
    assert not any(verify_coloring(a, ColoringCertificate(3, phi, 1))
                   for phi in itertools.product((1, 2, 3), repeat=4))


def test_verify_coloring_negative():
    a = adjacency_tensor(edge(3))
    assert not verify_coloring(a, ColoringCertificate(3, (1, 1, 1), 1))


def test_cyclic_index_examples(tight6_graph):
    assert cyclic_index_hypergraph(tight6_graph) == 3
    assert cyclic_index_hypergraph(complete_hypergraph(4, 3)) == 1
    assert cyclic_index_hypergraph(generalized_power(cycle_graph(4), 4, 2)) == 4
    with pytest.raises(ValueError):
        cyclic_index_hypergraph(Hypergraph(6, 3, [(1, 2, 3), (4, 5, 6)]))


# odd transversals

def test_odd_transversal_examples():
    assert odd_transversal(adjacency_tensor(complete_graph(2))).X == {1}
    x = odd_transversal(adjacency_tensor(edge(3))).X
    assert x in ({1}, {2}, {3}, {1, 2, 3})
    x4 = odd_transversal(adjacency_tensor(edge(4))).X
    assert len(x4) % 2 == 1


def test_odd_transversal_absent():
    res = odd_transversal(adjacency_tensor(complete_graph(3)))
    assert not res.exists


# chromatic bounds

def test_chromatic_examples(tight6_graph):
    cb = chromatic_upper_bound(tight6_graph)
    assert (cb.bound, cb.r, cb.c) == (3, 3, 3)
    assert cb.candidates[3] == 9
    assert is_proper(tight6_graph, cb.coloring) and cb.colors_used <= 3
    cb = chromatic_upper_bound(edge(3))
    assert cb.bound == 3 and cb.coloring == (1, 1, 2)
    g = generalized_power(cycle_graph(4), 4, 2)
    cb = chromatic_upper_bound(g)
    assert cb.c == 4 and cb.bound <= 4 and is_proper(g, cb.coloring)


def test_chromatic_needs_symmetry():
    with pytest.raises(GroupError):
        chromatic_upper_bound(complete_hypergraph(4, 3))


# p-hm bipartitions

def test_p_hm_examples(tight6_graph):
    assert p_hm_symmetry_check(tight6_graph)
    assert p_hm_symmetry_check(generalized_power(complete_graph(3), 4, 2))
    assert p_hm_symmetry_check(edge(3))
    with pytest.raises(ValueError):
        p_hm_symmetry_check(complete_graph(3))


# corpus invariants

def test_corpus_coloring_matches_group():
    for g in connected_uniform_corpus():
        c = cyclic_index_hypergraph(g)
        assert c == exact_cyclic_index(adjacency_tensor(g))
        if contains_simplex(g):
            assert c == 1


def test_corpus_window_sandwich():
    for g in connected_uniform_corpus(n_max=4):
        w = cyclic_index_window(adjacency_tensor(g), 6)
        if w.c_hat:
            assert w.c_hat % cyclic_index_hypergraph(g) == 0


@st.composite
def connected_hypergraphs(draw, ms=(2, 3, 4), max_n=6):
    m = draw(st.sampled_from(ms))
    n = draw(st.integers(m, max_n))
    pool = list(itertools.combinations(range(1, n + 1), m))
    edges = draw(st.lists(st.sampled_from(pool), min_size=1, max_size=6, unique=True))
    g = Hypergraph(n, m, edges)
    assume(is_connected(g))
    return g


@settings(max_examples=60, deadline=None)
@given(connected_hypergraphs(), st.data())
def test_coloring_implies_no_refutation(g, data):
    a = adjacency_tensor(g)
    ell = data.draw(st.sampled_from([k for k in range(1, g.m + 1) if g.m % k == 0]))
    cert = coloring_exists(a, g.m, g.m // ell)
    if cert is not None:
        assert verify_coloring(a, cert)
        assert is_ell_symmetric_traces(a, ell, 2 * g.m, cap=20_000).status != NOT_SYMMETRIC


@settings(max_examples=60, deadline=None)
@given(connected_hypergraphs(ms=(2, 4)))
def test_odd_transversal_gives_two_coloring(g):
    a = adjacency_tensor(g)
    res = odd_transversal(a)
    if res.exists:
        assert verify_odd_transversal(a, res.X)
        assert coloring_exists(a, g.m, g.m // 2) is not None


@settings(max_examples=40, deadline=None)
@given(connected_hypergraphs(ms=(3,), max_n=6))
def test_coloring_matches_group_random(g):
    assert cyclic_index_hypergraph(g) == exact_cyclic_index(adjacency_tensor(g))
