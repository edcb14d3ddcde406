import random

import pytest
from hypothesis import given, settings, strategies as st

from oracles import maximal_minor_gcd, random_unimodular, rank_mod, sympy_det, sympy_invariants
from orbitor.linalg import (LinalgError, determinant, hermite_normal_form, inverse_unimodular,
                            invariant_factors, is_saturated, matmul, primitive_vector,
                            quotient_projection, rank, saturate_lattice, smith_normal_form)

matrices = st.integers(1, 5).flatmap(lambda m: st.integers(1, 5).flatmap(
    lambda n: st.lists(st.lists(st.integers(-20, 20), min_size=n, max_size=n),
                       min_size=m, max_size=m)))
square = st.integers(1, 5).flatmap(lambda n: st.lists(
    st.lists(st.integers(-20, 20), min_size=n, max_size=n), min_size=n, max_size=n))


def test_snf_small():
    r = smith_normal_form([[2, 4], [6, 8]])
    assert r.diagonal == (2, 4)
    assert matmul(matmul(r.U, [[2, 4], [6, 8]]), r.V) == r.D


def test_snf_zero_and_rectangular():
    r = smith_normal_form([[0, 0, 0], [0, 0, 0]])
    assert r.rank == 0 and r.diagonal == (0, 0)
    r = smith_normal_form([[1, 2, 3]])
    assert r.diagonal == (1,)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_identity_and_chain(A):
    r = smith_normal_form(A)
    assert matmul(matmul(r.U, A), r.V) == r.D
    assert abs(determinant(r.U)) == 1 and abs(determinant(r.V)) == 1
    n = len(A[0])
    assert [list(x) for x in matmul(r.V, r.V_inv)] == [[int(i == j) for j in range(n)] for i in range(n)]
    d = [x for x in r.diagonal if x]
    assert all(b % a == 0 for a, b in zip(d, d[1:]))
    assert all(x >= 0 for x in r.diagonal)
    assert sorted(d) == sympy_invariants(A)
    assert r.rank == rank_mod(A)


@settings(max_examples=150, deadline=None)
@given(square)
def test_determinant_matches_sympy(A):
    assert determinant(A) == sympy_det(A)


def test_determinant_rejects_non_square():
    with pytest.raises(LinalgError):
        determinant([[1, 2, 3], [4, 5, 6]])


def test_known_determinants():
    assert determinant([[2, 0], [0, -1]]) == -2
    assert determinant([[1, 2], [3, 0]]) == -6


def test_rank_over_rationals():
    assert rank([[1, 2], [2, 4]]) == 1
    assert rank([[2, 0], [0, 3]]) == 2


def test_inverse_unimodular():
    rng = random.Random(3)
    for _ in range(30):
        U = random_unimodular(4, rng)
        Ui = inverse_unimodular(U)
        assert [list(r) for r in matmul(U, Ui)] == [[int(i == j) for j in range(4)] for i in range(4)]
    with pytest.raises(LinalgError):
        inverse_unimodular([[2, 0], [0, 1]])


def test_invariant_factors_with_free_part():
    assert invariant_factors([(0, -1), (2, 1)]) == (1, 2)
    assert invariant_factors([(2, 0)], ambient_rank=2) == (2, 0)


def test_primitive_vector():
    assert primitive_vector((4, -6, 0)) == (2, -3, 0)
    with pytest.raises(LinalgError):
        primitive_vector((0, 0))


def test_hnf_is_row_echelon_and_same_lattice():
    H = hermite_normal_form([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    nz = [r for r in H if any(r)]
    pivots = [next(j for j, x in enumerate(r) if x) for r in nz]
    assert pivots == sorted(pivots) and len(set(pivots)) == len(pivots)
    assert all(nz[i][pivots[i]] > 0 for i in range(len(nz)))
    assert abs(sympy_det(nz)) == abs(sympy_det([[2, 4, 4], [-6, 6, 12], [10, -4, -16]]))


def test_saturation_example():
    assert [list(r) for r in saturate_lattice([(2, 0)])] == [[1, 0]]
    assert is_saturated(saturate_lattice([(2, 1, 0)]))
    assert not is_saturated([(2, 0)])


def test_saturation_rejects_dependent_rows():
    with pytest.raises(LinalgError):
        saturate_lattice([(1, 2), (2, 4)])


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.integers(1, n).flatmap(
    lambda k: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=k, max_size=k))))
def test_saturation_properties(gens):
    if rank_mod(gens) < len(gens):
        return
    S = saturate_lattice(gens)
    assert len(S) == len(gens)
    assert maximal_minor_gcd(S) == 1
    assert rank_mod(list(S) + gens) == len(gens)
    assert saturate_lattice(S) == S


def test_quotient_with_hint_matches_worked_example():
    sat = saturate_lattice([(2, 1, 0)])
    q = quotient_projection(sat, [(1, 0, 0), (2, 1, 0), (0, 0, 1)])
    assert [list(r) for r in q.projection] == [[1, -2, 0], [0, 0, 1]]
    images = [q(v) for v in [(0, 1, 2), (0, 1, 0), (0, 0, 1), (0, 2, 1)]]
    assert images == [(-2, 2), (-2, 0), (0, 1), (-4, 1)]
    assert q.target_rank == 2


def test_quotient_hint_validation():
    sat = saturate_lattice([(2, 1, 0)])
    with pytest.raises(LinalgError):
        quotient_projection(sat, [(2, 0, 0), (2, 1, 0), (0, 0, 1)])
    with pytest.raises(LinalgError):
        quotient_projection(sat, [(1, 0, 0), (0, 1, 0), (0, 0, 1)])


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 5).flatmap(lambda n: st.integers(1, n - 1).flatmap(
    lambda k: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n),
                       min_size=k, max_size=k))))
def test_quotient_kernel_exactness(gens):
    if rank_mod(gens) < len(gens):
        return
    S = saturate_lattice(gens)
    q = quotient_projection(S)
    n, k = len(gens[0]), len(gens)
    P = [list(r) for r in q.projection]
    assert all(q(s) == (0,) * (n - k) for s in S)
    assert rank_mod(P) == n - k
    assert maximal_minor_gcd(P) == 1
