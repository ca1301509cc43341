from fractions import Fraction

import pytest

from extremal_marginals.catalog import (
    UnknownCaseError,
    cyclic_d_to_d_plus_1,
    double_sums,
    get_case,
    list_cases,
    ohno_hermitian,
    qubit_to_d,
    remark_orthogonal,
    report_case_ids,
)
from extremal_marginals.cpmap import KrausFamily, apply, choi_rank, is_minimal, kraus_sums, marginals
from extremal_marginals.linalg import DenseMatrix, adjoint, matmul, matrix_unit
from extremal_marginals.scalar import I, sqrt

ALL_IDS = [c for c in report_case_ids() if not c.startswith("tensor:")]


def test_list_is_deterministic_and_complete():
    ids = [c.id for c in list_cases()]
    assert ids == [c.id for c in list_cases()]
    assert len(ids) == len(set(ids))
    assert "five_rank6" in ids and "five_rank7" in ids
    assert "tensor:ohno_hermitian(3)×ohno_3x3_rank4" in ids
    entry = next(c for c in list_cases() if c.id == "ohno_hermitian(d)")
    assert entry.params == {"d": ">=3"}


@pytest.mark.parametrize("cid", ALL_IDS)
def test_every_case_is_minimal_with_expected_marginals(cid):
    case = get_case(cid)
    assert is_minimal(case.family).minimal
    m = marginals(case.family)
    assert m.left == case.expected.marginal_left
    assert m.right == case.expected.marginal_right
    assert choi_rank(case.family) == case.expected.choi_rank == len(case.family)


def test_unknown_ids_and_ranges():
    for bad in ("nosuch", "ohno_hermitian(2)", "qubit_to_d(3)", "cyclic_d_to_d_plus_1(1)", "tensor:five_rank7"):
        with pytest.raises(UnknownCaseError):
            get_case(bad)
    with pytest.raises(ValueError):
        ohno_hermitian(2)
    with pytest.raises(ValueError):
        qubit_to_d(3)


def test_ohno_hermitian_is_unital_and_hermitian():
    F = get_case("ohno_hermitian(4)").family
    assert apply(F, DenseMatrix.identity(4)) == DenseMatrix.identity(4)
    assert all(v.is_hermitian() for v in F.ops)
    # 1/sqrt(d-1) is stored as sqrt(d-1)/(d-1)
    assert F.ops[1][0, 1] == sqrt(3) * Fraction(1, 3)


def test_ohno_3x3_apply_on_e22():
    F = get_case("ohno_3x3_rank4").family
    assert apply(F, matrix_unit(2, 2, 3)) == DenseMatrix.diag([2, 0, 2]).scale(Fraction(1, 4))


def test_ohno_4x4_operator_sums():
    F = get_case("ohno_4x4_rank5").family
    a, b = kraus_sums(F)
    assert a == b == DenseMatrix.identity(4).scale(4)
    assert F.scale == Fraction(1, 4) and len(F) == 5
    assert any("1/4" in n for n in get_case("ohno_4x4_rank5").notes)


def test_five_rank7_sums_and_sample_product():
    F = get_case("five_rank7").family
    a, b = kraus_sums(F)
    assert a == b == DenseMatrix.identity(5).scale(6)
    w3, w7 = F.ops[2], F.ops[6]
    assert matmul(adjoint(w7), w3) == matrix_unit(2, 5, 5).scale(-(sqrt(6) * I))


def test_five_rank6_sample_product():
    F = get_case("five_rank6").family
    assert matmul(adjoint(F.ops[0]), F.ops[2]) == matrix_unit(2, 5, 5).scale(sqrt(2))


def test_qubit_marginals_at_d4():
    m = marginals(get_case("qubit_to_d(4)").family)
    q = Fraction(1, 8)
    assert m.left == DenseMatrix.from_rows([[Fraction(1, 2), q], [q, Fraction(1, 2)]])
    assert m.right == DenseMatrix.identity(4).scale(Fraction(1, 4))


def test_three_to_four_first_operator():
    w1 = get_case("three_to_four").family.ops[0]
    assert matmul(w1, adjoint(w1)) == DenseMatrix.identity(3)


def test_cyclic_three_reproduces_three_to_four():
    assert cyclic_d_to_d_plus_1(3).family.ops == get_case("three_to_four").family.ops
    with pytest.raises(ValueError):
        cyclic_d_to_d_plus_1(1)


def test_remark_orthogonal_block():
    w = remark_orthogonal()
    assert matmul(w.transpose(), w) == DenseMatrix.identity(3)


def test_remark_operator_sums():
    F = get_case("remark_counterexample").family
    a, b = kraus_sums(F)
    assert a == b == DenseMatrix.identity(4).scale(Fraction(49, 44))
    g, d = double_sums(F)
    # the double sums are (sum V)^*(sum V) and (sum V)(sum V)^*; they are not the identity
    assert g != DenseMatrix.identity(4) and d != DenseMatrix.identity(4)
    assert g[0, 0] == Fraction(449, 616)


def test_export_json_has_expected_block():
    data = get_case("five_rank7").to_json()
    assert data["expected"]["choi_rank"] == 7 and data["expected"]["verdict"] == "extreme-doubly-constrained"
    assert KrausFamily.from_json(data) == get_case("five_rank7").family


def test_tensor_id_separators():
    a = get_case("tensor:ohno_hermitian(3)×ohno_3x3_rank4")
    b = get_case("tensor:ohno_hermitian(3)*ohno_3x3_rank4")
    assert a.family == b.family and a.id == b.id
    assert a.params == {"a.d": 3}
