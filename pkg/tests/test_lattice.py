import itertools

import pytest
from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from hypersym.lattice import determinant, identity, matmul, smith_normal_form, solve_congruence


def test_identity():
    assert smith_normal_form(identity(3)).diag == (1, 1, 1)


def test_diagonal():
    assert smith_normal_form([[2, 0], [0, 4]]).invariant_factors == (2, 4)


def test_hand_example():
    assert smith_normal_form([[2, 1], [0, 2]]).diag == (1, 4)


def test_empty_and_zero():
    assert smith_normal_form([[0, 0], [0, 0]]).diag == (0, 0)
    assert smith_normal_form([[0, 0, 0]]).rank == 0


def test_determinant():
    assert determinant([[2, 1], [1, 3]]) == 5
    assert determinant([[0, 1], [1, 0]]) == -1
    assert determinant([]) == 1
    assert determinant([[1, 2], [2, 4]]) == 0


matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-6, 6), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=200, deadline=None)
@given(matrices)
def test_snf_certificate_and_oracle(m):
    res = smith_normal_form(m)
    assert matmul(matmul(res.U, m), res.V) == res.diagonal_matrix()
    assert abs(determinant(res.U)) == 1 and abs(determinant(res.V)) == 1
    nz = [s for s in res.diag if s]
    assert all(s > 0 for s in nz)
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert res.diag[len(nz):] == (0,) * (len(res.diag) - len(nz))
    ref = sympy_snf(Matrix(m), domain=ZZ)
    ref_diag = sorted(abs(ref[i, i]) for i in range(min(ref.shape)))
    assert sorted(res.diag) == ref_diag


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 3).flatmap(lambda c: st.tuples(
    st.lists(st.lists(st.integers(-3, 3), min_size=c, max_size=c), min_size=1, max_size=3),
    st.integers(2, 6))), st.data())
def test_congruence_solver_matches_brute_force(case, data):
    mat, mod = case
    rhs = data.draw(st.lists(st.integers(0, mod - 1), min_size=len(mat), max_size=len(mat)))
    cols = len(mat[0])
    brute = any(all((sum(r[k] * x[k] for k in range(cols)) - b) % mod == 0 for r, b in zip(mat, rhs))
                for x in itertools.product(range(mod), repeat=cols))
    sol = solve_congruence(mat, rhs, mod)
    assert (sol is not None) == brute
    if sol is not None:
        assert all((sum(r[k] * sol[k] for k in range(cols)) - b) % mod == 0 for r, b in zip(mat, rhs))


def test_ragged_matrix_rejected():
    with pytest.raises(ValueError):
        smith_normal_form([[1, 2], [3]])
