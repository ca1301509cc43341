from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from extremal_marginals.catalog import get_case
from extremal_marginals.certify import EXTREME_DOUBLY, parthasarathy_bound
from extremal_marginals.compose import PreconditionError, bound_attainment_check, compose_extremal, tensor_cpmap
from extremal_marginals.cpmap import KrausFamily, apply, choi_rank, identity_family, marginals
from extremal_marginals.linalg import DenseMatrix, kron, matrix_unit
from extremal_marginals.scalar import I, RadScalar, sqrt

pool = [RadScalar(0), RadScalar(1), RadScalar(-1), sqrt(2), I]


def square(d):
    return st.lists(st.sampled_from(pool), min_size=d * d, max_size=d * d).map(lambda v: DenseMatrix(d, d, v))


def fam(cid):
    return get_case(cid).family


def test_tensor_shapes_and_order():
    F, G = fam("ohno_hermitian(3)"), fam("qubit_to_d(4)")
    T = tensor_cpmap(F, G)
    assert (T.d_in, T.d_out, len(T)) == (6, 12, 12)
    assert T.ops[1] == kron(F.ops[0], G.ops[1])
    assert T.scale == F.scale * G.scale


@pytest.mark.parametrize("a,b,cr", [
    ("ohno_3x3_rank4", "ohno_4x4_rank5", 20),
    ("ohno_hermitian(3)", "ohno_3x3_rank4", 12),
    ("three_to_four", "qubit_to_d(4)", 16),
])
def test_choi_rank_multiplicative(a, b, cr):
    assert choi_rank(tensor_cpmap(fam(a), fam(b))) == cr == choi_rank(fam(a)) * choi_rank(fam(b))


def test_identity_factor():
    G = fam("five_rank6")
    T = tensor_cpmap(identity_family(1), G)
    assert T.ops == G.ops


@settings(max_examples=25, deadline=None)
@given(square(3), square(2))
def test_apply_distributes_over_simple_tensors(a, b):
    F, G = fam("ohno_3x3_rank4"), fam("qubit_to_d(4)")
    assert apply(tensor_cpmap(F, G), kron(a, b)) == kron(apply(F, a), apply(G, b))


def test_tensor_marginals_are_kron_products():
    F, G = fam("qubit_to_d(4)"), fam("cyclic_d_to_d_plus_1(2)")
    m, mf, mg = marginals(tensor_cpmap(F, G)), marginals(F), marginals(G)
    assert m.left == kron(mf.left, mg.left) and m.right == kron(mf.right, mg.right)


def test_compose_extremal_small():
    case = compose_extremal(fam("ohno_hermitian(3)"), fam("ohno_3x3_rank4"))
    assert case.expected.verdict == EXTREME_DOUBLY
    assert case.expected.choi_rank == 12 == parthasarathy_bound(9, 9)


def test_compose_extremal_carries_factor_metadata():
    a, b = get_case("ohno_hermitian(3)"), get_case("three_to_four")
    case = compose_extremal(a.family, b.family, left=a, right=b)
    assert case.id == "tensor:ohno_hermitian(3)×three_to_four"
    assert case.expected.marginal_right == kron(a.expected.marginal_right, b.expected.marginal_right)


def test_rejects_non_hermitian_first_factor():
    with pytest.raises(PreconditionError) as info:
        compose_extremal(fam("ohno_3x3_rank4"), fam("ohno_4x4_rank5"))
    assert info.value.hypothesis == "hermitian"


def test_rejects_non_square_first_factor():
    with pytest.raises(PreconditionError) as info:
        compose_extremal(fam("qubit_to_d(4)"), fam("five_rank6"))
    assert info.value.hypothesis == "square"


def test_rejects_dependent_gram_set():
    F = KrausFamily(2, 2, Fraction(1, 2), (DenseMatrix.identity(2), DenseMatrix.identity(2)))
    with pytest.raises(PreconditionError) as info:
        compose_extremal(F, fam("five_rank6"))
    assert info.value.hypothesis == "gram_independent"


def test_rejects_bilinearly_dependent_second_factor():
    v = matrix_unit(1, 1, 2)
    G = KrausFamily(2, 2, Fraction(1), (v, v.scale(3)))
    with pytest.raises(PreconditionError) as info:
        compose_extremal(fam("ohno_hermitian(3)"), G)
    assert info.value.hypothesis == "bilinear_independent"


def test_bound_attainment():
    assert bound_attainment_check(3) and bound_attainment_check(14)
    assert all(bound_attainment_check(k) for k in range(3, 15))
    with pytest.raises(ValueError):
        bound_attainment_check(15)
    with pytest.raises(ValueError):
        bound_attainment_check(2)
    assert parthasarathy_bound(75, 75) == 106 != 105
