from itertools import combinations, product
from math import gcd

import pytest
import sympy
from sympy.matrices.normalforms import smith_normal_form as sympy_snf
from hypothesis import assume, given
from hypothesis import strategies as st

from tropex.errors import RankDeficient
from tropex.lattice_affine import (
    IntMatrix, hermite_rows, integer_kernel, invariant_factors, is_saturated, lattice_index,
    lattice_length, saturated_basis, smith_normal_form,
)
from tropex.lattice_affine.lattice import ext_gcd_solution, int_rank

small = st.integers(-6, 6)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def is_diagonal_chain(D):
    diag = [D[i][i] for i in range(min(D.nrows, D.ncols))]
    off = all(D[i][j] == 0 for i in range(D.nrows) for j in range(D.ncols) if i != j)
    nz = [d for d in diag if d]
    chain = all(nz[k + 1] % nz[k] == 0 for k in range(len(nz) - 1))
    return off and chain and all(d >= 0 for d in diag) and diag[:len(nz)] == nz


def test_snf_examples():
    assert smith_normal_form([[2]])[1] == IntMatrix([[2]])
    assert smith_normal_form(IntMatrix.identity(3))[1] == IntMatrix.identity(3)
    U, D, V = smith_normal_form([[2, 4], [6, 8]])
    assert D == IntMatrix([[2, 0], [0, 4]])
    assert U @ IntMatrix([[2, 4], [6, 8]]) @ V == D


def test_lattice_index_examples():
    assert lattice_index([[2]]) == 2
    assert lattice_index(IntMatrix.identity(3)) == 1
    assert lattice_index([[1, 0], [0, 2], [1, 1]]) == 1
    with pytest.raises(RankDeficient):
        lattice_index([[1, 2], [2, 4]])


def test_saturation_examples():
    assert is_saturated(IntMatrix.from_columns([(1, 0), (0, 1)], 2))
    assert not is_saturated([[2]])
    assert not is_saturated(IntMatrix.from_columns([(1, 1), (1, -1)], 2))


def test_saturated_basis_and_kernel():
    assert saturated_basis([(2, 4)], 2) in ([(1, 2)], [(-1, -2)])
    K = integer_kernel([[1, 1, 1]])
    assert len(K) == 2
    assert hermite_rows(K) == hermite_rows([(1, -1, 0), (0, 1, -1)])


def test_hermite_is_canonical():
    assert hermite_rows([(2, 0), (0, 3), (1, 1)]) == [(1, 0), (0, 1)]
    assert hermite_rows([(4, 2), (2, 2)]) == hermite_rows([(2, 0), (0, 2)])
    assert hermite_rows([(0, 0)]) == []


@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_snf_factorization(m, n, data):
    M = IntMatrix(data.draw(matrices(m, n)))
    U, D, V = smith_normal_form(M)
    assert U @ M @ V == D
    assert abs(sympy.Matrix(U).det()) == 1
    assert abs(sympy.Matrix(V).det()) == 1
    assert is_diagonal_chain(D)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_invariant_factors_match_sympy(m, n, data):
    M = data.draw(matrices(m, n))
    oracle = sympy_snf(sympy.Matrix(M), domain=sympy.ZZ)
    expected = [abs(int(oracle[i, i])) for i in range(min(m, n)) if oracle[i, i] != 0]
    assert invariant_factors(M) == expected


@given(st.integers(1, 4), st.integers(1, 3), st.data())
def test_index_is_gcd_of_maximal_minors(m, n, data):
    M = data.draw(matrices(m, n))
    assume(n <= m)
    minors = [int(sympy.Matrix([M[i] for i in rows]).det()) for rows in combinations(range(m), n)]
    g = 0
    for x in minors:
        g = gcd(g, x)
    if g == 0:
        with pytest.raises(RankDeficient):
            lattice_index(M)
        return
    assert lattice_index(M) == g
    prod = 1
    for d in invariant_factors(M):
        prod *= d
    assert prod == g
    assert is_saturated(M) == (g == 1)


@given(st.lists(st.tuples(small, small), min_size=1, max_size=2))
def test_saturation_by_brute_force(cols):
    # Independent columns are saturated iff every integer point of their real
    # span in a box has integer coordinates in the column basis.
    M = IntMatrix.from_columns(cols, 2)
    assume(int_rank(M) == len(cols))
    A = sympy.Matrix(M)
    left_inverse = (A.T * A).inv() * A.T
    expected = True
    for p in product(range(-6, 7), repeat=2):
        c = left_inverse * sympy.Matrix(p)
        if A * c == sympy.Matrix(p) and any(not x.is_integer for x in c):
            expected = False
    assert is_saturated(M) == expected


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=3))
def test_kernel_is_saturated_and_complete(rows):
    K = integer_kernel(rows)
    assert len(K) == 3 - int_rank(rows)
    for k in K:
        assert all(sum(a * b for a, b in zip(r, k)) == 0 for r in rows)
    if K:
        assert is_saturated(IntMatrix.from_columns(K, 3))


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=4))
def test_hermite_spans_same_lattice(vectors):
    H = hermite_rows(vectors)
    assert hermite_rows(H) == H
    assert hermite_rows(list(reversed(vectors))) == H
    if H:
        both = IntMatrix.from_columns(H + [tuple(v) for v in vectors], 3)
        own = IntMatrix.from_columns(H, 3)
        assert invariant_factors(both) == invariant_factors(own)


@given(st.lists(small, min_size=1, max_size=4))
def test_ext_gcd(phi):
    y = ext_gcd_solution(phi)
    g = 0
    for x in phi:
        g = gcd(g, x)
    assert sum(a * b for a, b in zip(phi, y)) == g


@given(st.lists(small, min_size=1, max_size=4))
def test_lattice_length(u):
    g = lattice_length(u)
    assert g >= 0
    if any(u):
        assert all(x % g == 0 for x in u)
        assert lattice_length([x // g for x in u]) == 1
