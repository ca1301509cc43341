from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from extremal_marginals.linalg import (
    DenseMatrix,
    DimensionError,
    adjoint,
    float_csv,
    kron,
    left_null_vector,
    matmul,
    matrix_unit,
    null_space,
    partial_trace_left,
    partial_trace_right,
    rank_exact,
    rank_float,
    read_float_csv,
    singular_values,
    to_float_matrix,
    trace,
    vectorize,
)
from extremal_marginals.scalar import I, RadScalar, sqrt

entry_pool = [RadScalar(0), RadScalar(1), RadScalar(-2), sqrt(2), I, sqrt(3) * I, RadScalar(Fraction(1, 2))]


@st.composite
def matrices(draw, rows=None, cols=None, pool=entry_pool):
    r = rows or draw(st.integers(1, 4))
    c = cols or draw(st.integers(1, 4))
    vals = draw(st.lists(st.sampled_from(pool), min_size=r * c, max_size=r * c))
    return DenseMatrix(r, c, vals)


def test_matrix_unit_is_one_based():
    e = matrix_unit(1, 2, 2)
    assert e[0, 1] == 1 and e.nonzeros() and len(list(e.nonzeros())) == 1
    with pytest.raises(IndexError):
        matrix_unit(3, 1, 2)


def test_matmul_and_shapes():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    b = DenseMatrix.from_rows([[0, 1], [1, 0]])
    assert matmul(a, b) == DenseMatrix.from_rows([[2, 1], [4, 3]])
    with pytest.raises(DimensionError):
        matmul(a, DenseMatrix.zeros(3))


def test_adjoint_conjugates():
    a = DenseMatrix.from_rows([[1, I], [sqrt(2), 0]])
    assert adjoint(a) == DenseMatrix.from_rows([[1, sqrt(2)], [-I, 0]])
    assert adjoint(adjoint(a)) == a


def test_kron_block_layout():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    k = kron(a, DenseMatrix.identity(2))
    assert k.shape == (4, 4)
    assert k[2, 0] == 3 and k[3, 3] == 4 and k[1, 3] == 2 and k[1, 2] == 0


def test_partial_traces_of_product():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    b = DenseMatrix.from_rows([[1, 0, I], [0, 2, 0], [0, 0, 3]])
    z = kron(a, b)
    assert partial_trace_right(z, 2, 3) == a.scale(trace(b))
    assert partial_trace_left(z, 2, 3) == b.scale(trace(a))


def test_rank_exact_small():
    m = DenseMatrix.from_rows([[1, sqrt(2)], [sqrt(2), 2]])
    assert rank_exact(m) == 1
    assert rank_exact(DenseMatrix.identity(4)) == 4
    assert rank_exact(DenseMatrix.zeros(3, 2)) == 0


def test_left_null_vector():
    m = DenseMatrix.from_rows([[1, 0], [0, 1], [1, 1]])
    y = left_null_vector(m)
    row = DenseMatrix(1, 3, y)
    assert matmul(row, m).is_zero() and any(y)
    assert left_null_vector(DenseMatrix.identity(3)) is None


def test_null_space_dimension():
    m = DenseMatrix.from_rows([[1, 2, 3], [2, 4, 6]])
    basis = null_space(m)
    assert len(basis) == 2
    for x in basis:
        assert matmul(m, DenseMatrix(3, 1, x)).is_zero()


def test_json_round_trip():
    a = DenseMatrix.from_rows([[sqrt(2), I], [Fraction(1, 3), 0]])
    assert DenseMatrix.from_json(a.to_json()) == a


def test_csv_round_trip():
    a = DenseMatrix.from_rows([[sqrt(2), I], [Fraction(1, 3), -1]])
    back = read_float_csv(float_csv(to_float_matrix(a)))
    assert np.allclose(back, a.to_numpy(), atol=0, rtol=1e-15)


def test_block_singular_values_match_dense():
    rng = np.random.default_rng(7)
    dense = np.zeros((9, 8), dtype=complex)
    dense[:3, :4] = rng.normal(size=(3, 4))
    dense[3:7, 4:6] = rng.normal(size=(4, 2)) + 1j * rng.normal(size=(4, 2))
    dense[7, 6] = 2.0
    perm_r, perm_c = rng.permutation(9), rng.permutation(8)
    dense = dense[perm_r][:, perm_c]
    s_block = singular_values(sp.csr_matrix(dense))
    s_dense = np.linalg.svd(dense, compute_uv=False)
    assert np.allclose(np.sort(s_block), np.sort(s_dense[s_dense > 1e-14]))
    assert rank_float(sp.csr_matrix(dense)) == np.linalg.matrix_rank(dense) == 6


def test_rank_float_tolerance_override():
    m = np.diag([1.0, 1e-6, 0.0])
    assert rank_float(m) == 2
    assert rank_float(m, tol=1e-3) == 1
    with pytest.raises(ValueError):
        rank_float(m, tol=-1.0)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.data())
def test_trace_and_partial_trace_identities(d1, d2, data):
    z = data.draw(matrices(d1 * d2, d1 * d2))
    t = trace(z)
    assert trace(partial_trace_right(z, d1, d2)) == t
    assert trace(partial_trace_left(z, d1, d2)) == t
    assert partial_trace_right(adjoint(z), d1, d2) == adjoint(partial_trace_right(z, d1, d2))


@settings(max_examples=50, deadline=None)
@given(matrices(), matrices())
def test_kron_rank_multiplicative(a, b):
    assert rank_exact(kron(a, b)) == rank_exact(a) * rank_exact(b)


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_exact_and_float_rank_agree(a):
    assert rank_exact(a) == rank_float(a.to_numpy()) == rank_float(to_float_matrix(a, sparse=True))


@settings(max_examples=50, deadline=None)
@given(matrices(3, 3), matrices(3, 3), matrices(3, 3))
def test_matmul_associative_and_adjoint_antimultiplicative(a, b, c):
    assert matmul(matmul(a, b), c) == matmul(a, matmul(b, c))
    assert adjoint(matmul(a, b)) == matmul(adjoint(b), adjoint(a))


def test_vectorize_is_row_major():
    a = DenseMatrix.from_rows([[1, 2], [3, 4]])
    assert vectorize(a).entries == tuple(RadScalar(x) for x in (1, 2, 3, 4))
