from fractions import Fraction
import random

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from badproj.symspace import (PsdStatus, Subspace, SymMatrix, as_fraction, congruence_normalize,
                              determinant, matmul, nullspace, orthogonal_complement, plucker,
                              psd_rank_exact, rank, rref, svec_dim, svec_index, trace_inner, transpose)

from helpers import quad, random_invertible, random_subspace, random_sym, span

small = st.integers(min_value=-6, max_value=6)


def sym_strategy(n):
    return st.lists(small, min_size=svec_dim(n), max_size=svec_dim(n)).map(
        lambda v: SymMatrix.from_svec(n, v))


def test_as_fraction_refuses_floats():
    assert as_fraction(3) == 3
    assert as_fraction("2/3") == Fraction(2, 3)
    with pytest.raises(TypeError):
        as_fraction(0.5)


def test_svec_order():
    assert svec_index(3) == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    m = SymMatrix([[1, 2], [2, 3]])
    assert m.svec() == [1, 2, 3]
    assert SymMatrix.from_svec(2, [1, 2, 3]) == m


def test_trace_inner_examples():
    assert trace_inner(SymMatrix([[1, 0], [0, 0]]), SymMatrix([[0, 1], [1, 0]])) == 0
    for n in (1, 2, 4):
        assert trace_inner(SymMatrix.identity(n), SymMatrix.identity(n)) == n
    assert trace_inner(SymMatrix.diag([1, 1, 0]), SymMatrix.diag([0, 0, 1])) == 0


@given(sym_strategy(3), sym_strategy(3))
def test_trace_inner_is_trace_of_product(a, b):
    prod = matmul(a.rows(), b.rows())
    assert trace_inner(a, b) == sum(prod[i][i] for i in range(3))


def test_orthogonal_complement_rank_gap_example():
    L = span(3, "x1^2", "x2^2 + 2*x1*x3", "2*x2*x3")
    comp = orthogonal_complement(L)
    expected = span(3, "2*x1*x2", "2*x1*x3 - 2*x2^2", "x3^2")
    assert comp.same_span(expected)


def test_orthogonal_complement_of_everything_is_zero():
    full = Subspace(2, [SymMatrix.unit(2, i, j) for i, j in svec_index(2)])
    assert orthogonal_complement(full).k == 0


@given(st.integers(min_value=1, max_value=5), st.integers(min_value=0, max_value=10**6))
def test_complement_dimension_and_orthogonality(n, seed):
    rng = random.Random(seed)
    k = rng.randint(1, svec_dim(n))
    try:
        L = random_subspace(rng, n, k)
    except Exception:
        return
    comp = orthogonal_complement(L)
    assert L.k + comp.k == svec_dim(n)
    for a in L.basis:
        for b in comp.basis:
            assert trace_inner(a, b) == 0


def test_rank_and_nullspace_against_sympy():
    rng = random.Random(5)
    for _ in range(50):
        r, c = rng.randint(1, 5), rng.randint(1, 6)
        rows = [[Fraction(rng.randint(-3, 3)) for _ in range(c)] for _ in range(r)]
        M = sympy.Matrix(rows)
        assert rank(rows) == M.rank()
        ns = nullspace(rows, c)
        assert len(ns) == c - M.rank()
        for v in ns:
            assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)
        red, piv = rref(rows)
        sred, spiv = M.rref()
        assert tuple(piv) == tuple(spiv)


def test_determinant_against_sympy():
    rng = random.Random(6)
    for _ in range(30):
        n = rng.randint(1, 5)
        m = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        assert determinant(m) == sympy.Matrix(m).det()


def test_psd_examples():
    rep = psd_rank_exact(SymMatrix.diag([1, 1, 0, 0]))
    assert rep.status is PsdStatus.POSITIVE_SEMIDEFINITE and rep.rank == 2
    assert sorted(tuple(v) for v in rep.kernel_basis) == sorted([(0, 0, 1, 0), (0, 0, 0, 1)])
    assert psd_rank_exact(SymMatrix([[0, 1], [1, 0]])).status is PsdStatus.INDEFINITE


def test_psd_tangency_point():
    from badproj.instances import FOUR_PENCIL_X, four_pencil
    L = four_pencil(194)
    X = L.combination(FOUR_PENCIL_X)
    rep = psd_rank_exact(X)
    assert rep.is_psd and rep.rank == 2


def test_psd_against_float_oracle():
    rng = random.Random(7)
    checked = 0
    for _ in range(1000):
        n = rng.randint(1, 5)
        kind = rng.random()
        if kind < 0.4:
            g = [[Fraction(rng.randint(-3, 3)) for _ in range(rng.randint(1, n))] for _ in range(n)]
            a = SymMatrix(matmul(g, transpose(g)))
        else:
            a = random_sym(rng, n, -4, 4)
        rep = psd_rank_exact(a)
        assert rep.factorization.reconstruct() == a.rows()
        w = np.linalg.eigvalsh(a.to_numpy())
        if np.all(np.abs(w) > 1e-3):
            checked += 1
            expect_psd = bool(np.all(w > 0))
            assert rep.is_psd == expect_psd
            if expect_psd:
                assert rep.status is PsdStatus.POSITIVE_DEFINITE
        if rep.is_psd:
            assert rep.rank == int(np.sum(w > 1e-9))
    assert checked > 200


def test_negative_semidefinite_is_indefinite():
    assert psd_rank_exact(SymMatrix.diag([-1, 0])).status is PsdStatus.INDEFINITE


@given(st.integers(min_value=0, max_value=10**6))
def test_psd_product_iff_zero_inner(seed):
    # PSD matrices with complementary column spans: zero inner product and zero product
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    g = random_invertible(rng, n)
    r = rng.randint(1, n - 1)
    gi = transpose(g)
    cols_a = [[g[i][j] for j in range(r)] for i in range(n)]
    # columns orthogonal to cols_a come from the inverse transpose
    from badproj.symspace import solve
    inv_t = [solve(gi, [Fraction(int(i == j)) for i in range(n)]) for j in range(n)]
    cols_b = [[inv_t[j][i] for j in range(r, n)] for i in range(n)]
    A = SymMatrix(matmul(cols_a, transpose(cols_a)))
    B = SymMatrix(matmul(cols_b, transpose(cols_b)))
    assert trace_inner(A, B) == 0
    assert all(v == 0 for row in matmul(A.rows(), B.rows()) for v in row)


def test_congruence_normalize_examples():
    L = Subspace(2, [SymMatrix([[1, 1], [1, 1]]), SymMatrix.unit(2, 1, 1)])
    norm = congruence_normalize(L, SymMatrix([[1, 1], [1, 1]]))
    assert norm.rank == 1
    q_new = SymMatrix([[1, 1], [1, 1]]).congruence(norm.frame)
    assert q_new[0, 0] > 0 and q_new[0, 1] == 0 and q_new[1, 1] == 0

    L = Subspace(3, [SymMatrix.diag([1, 1, 0]), SymMatrix.unit(3, 0, 2)])
    norm = congruence_normalize(L, SymMatrix.diag([1, 1, 0]))
    assert norm.rank == 2
    assert SymMatrix.diag([1, 1, 0]).congruence(norm.frame) == SymMatrix.diag([1, 1, 0])


def test_congruence_normalize_three_quadrics():
    from badproj.instances import three_quadrics
    L = three_quadrics()
    q = SymMatrix.outer([5, 7, 7]).scale(6)
    assert L.contains(q)
    norm = congruence_normalize(L, q)
    assert norm.rank == 1
    # the kernel of q is {5x1 + 7x2 + 7x3 = 0}
    ker = psd_rank_exact(q).kernel_basis
    assert all(5 * v[0] + 7 * v[1] + 7 * v[2] == 0 for v in ker) and len(ker) == 2


@given(st.integers(min_value=0, max_value=10**6))
def test_congruence_normalize_kernel(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 5)
    r = rng.randint(1, n)
    g = [[Fraction(rng.randint(-3, 3)) for _ in range(r)] for _ in range(n)]
    q = SymMatrix(matmul(g, transpose(g)))
    L = Subspace.spanned_by(n, [q, random_sym(rng, n)])
    norm = congruence_normalize(L, q)
    s = psd_rank_exact(q).rank
    assert norm.rank == s
    qn = q.congruence(norm.frame)
    for i in range(n):
        for j in range(n):
            if i >= s or j >= s:
                assert qn[i, j] == 0
    assert psd_rank_exact(qn).rank == s


def test_plucker_examples():
    p = plucker(Subspace(2, [SymMatrix.unit(2, 0, 0).scale(Fraction(1, 2)), SymMatrix([[0, 1], [1, 0]])]))
    assert p.subsets == ((0, 1), (0, 2), (1, 2))
    assert p.proportional_to(plucker(span(2, "x1^2", "2*x1*x2")))
    assert plucker(span(2, "x1^2", "2*x1*x2")).coordinates == (1, 0, 0)
    assert plucker(span(2, "x1^2", "x2^2")).coordinates == (0, 1, 0)


@given(st.integers(min_value=0, max_value=10**6))
def test_plucker_basis_change(seed):
    rng = random.Random(seed)
    L = random_subspace(rng, 3, 3)
    M = random_invertible(rng, 3)
    assert plucker(L).proportional_to(plucker(L.change_basis(M)))


def test_subspace_validation():
    with pytest.raises(ValueError):
        Subspace(2, [SymMatrix.identity(2), SymMatrix.identity(2).scale(2)])
    with pytest.raises(ValueError):
        SymMatrix([[1, 2], [3, 4]])
