"""Exact constructors for the Kraus families with their claimed properties.

Every case stores integer/radical operator entries and factors the
normalization into the rational ``scale``.  Case ids are plain names
(``five_rank7``), parameterized names (``ohno_hermitian(4)``) or tensor
presets (``tensor:ohno_hermitian(3)×ohno_3x3_rank4``).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .certify import EXTREME_DOUBLY, EXTREME_UNITAL, parthasarathy_bound
from .cpmap import KrausFamily, MarginalPair
from .linalg import DenseMatrix, adjoint, matmul, matrix_unit
from .scalar import I, RadScalar, sqrt


class UnknownCaseError(KeyError):
    pass


@dataclass(frozen=True)
class Expected:
    choi_rank: int
    bound: int
    verdict: str
    marginal_right: DenseMatrix
    marginal_left: DenseMatrix
    hermitian_ops: bool
    gram_independent: Optional[bool] = None
    dual_gram_independent: Optional[bool] = None


@dataclass(frozen=True)
class CatalogCase:
    id: str
    params: Dict[str, int]
    family: KrausFamily
    expected: Expected
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def marginal_pair(self) -> MarginalPair:
        return MarginalPair(left=self.expected.marginal_left, right=self.expected.marginal_right)

    def to_json(self) -> dict:
        e = self.expected
        out = self.family.to_json()
        out["id"] = self.id
        out["params"] = dict(self.params)
        out["expected"] = {
            "choi_rank": e.choi_rank,
            "bound": e.bound,
            "verdict": e.verdict,
            "marginal_right": e.marginal_right.to_json(),
            "marginal_left": e.marginal_left.to_json(),
            "hermitian_ops": e.hermitian_ops,
        }
        if e.gram_independent is not None:
            out["expected"]["gram_independent"] = e.gram_independent
        if e.dual_gram_independent is not None:
            out["expected"]["dual_gram_independent"] = e.dual_gram_independent
        out["notes"] = list(self.notes)
        return out


def E(i: int, j: int, rows: int, cols: Optional[int] = None) -> DenseMatrix:
    return matrix_unit(i, j, rows, cols)


def _combo(rows: int, cols: int, terms: Sequence[Tuple[object, int, int]]) -> DenseMatrix:
    """``sum c * E_ij`` from ``(c, i, j)`` triples with 1-based indices."""
    items: Dict[Tuple[int, int], RadScalar] = {}
    for c, i, j in terms:
        key = (i - 1, j - 1)
        items[key] = items.get(key, RadScalar(0)) + (c if isinstance(c, RadScalar) else RadScalar(c))
    return DenseMatrix.from_sparse(rows, cols, items)


def _scaled_identity(d: int, c) -> DenseMatrix:
    return DenseMatrix.identity(d).scale(c)


def _case(
    case_id: str,
    params: Dict[str, int],
    d_in: int,
    d_out: int,
    scale,
    ops: Sequence[DenseMatrix],
    verdict: str,
    left: DenseMatrix,
    right: DenseMatrix,
    notes: Sequence[str] = (),
    **extra,
) -> CatalogCase:
    fam = KrausFamily(d_in, d_out, Fraction(scale), tuple(ops))
    expected = Expected(
        choi_rank=len(ops),
        bound=parthasarathy_bound(d_in, d_out),
        verdict=verdict,
        marginal_right=right,
        marginal_left=left,
        hermitian_ops=all(v.is_hermitian() for v in ops),
        **extra,
    )
    return CatalogCase(case_id, dict(params), fam, expected, tuple(notes))


GRAM_NOTE = (
    "the Gram set is linearly independent, so the computed verdict is the stronger "
    "extreme-unital-set; extremality in the doubly constrained set follows"
)


# -- constructors ------------------------------------------------------------------


def ohno_hermitian(d: int) -> CatalogCase:
    """Hermitian family of ``d`` operators on ``M(d)``, unital in both directions."""
    if d < 3:
        raise ValueError(f"ohno_hermitian needs d >= 3, got {d}")
    ops = [_combo(d, d, [(sqrt(Fraction(d - 2, d - 1)), j, j) for j in range(2, d + 1)])]
    c = sqrt(Fraction(1, d - 1))
    for k in range(2, d + 1):
        ops.append(_combo(d, d, [(c, 1, k), (c, k, 1)]))
    ident = DenseMatrix.identity(d)
    return _case(f"ohno_hermitian({d})", {"d": d}, d, d, 1, ops, EXTREME_UNITAL, ident, ident)


def ohno_3x3_rank4() -> CatalogCase:
    ops = [
        _combo(3, 3, [(1, 1, 1)]),
        _combo(3, 3, [(1, 1, 2), (sqrt(2), 2, 3)]),
        _combo(3, 3, [(sqrt(2), 2, 1), (sqrt(3), 3, 2)]),
        _combo(3, 3, [(1, 3, 1), (sqrt(2), 1, 3)]),
    ]
    ident = DenseMatrix.identity(3)
    return _case(
        "ohno_3x3_rank4", {}, 3, 3, Fraction(1, 4), ops, EXTREME_DOUBLY, ident, ident,
        notes=("16 Gram products in a 9-dimensional space are necessarily dependent; "
               "extremality holds for the doubly constrained set",),
    )


def ohno_4x4_rank5() -> CatalogCase:
    ops = [
        _combo(4, 4, [(1, 1, 3), (1, 3, 2)]),
        _combo(4, 4, [(sqrt(2), 2, 4), (sqrt(2), 4, 3)]),
        _combo(4, 4, [(sqrt(2), 1, 4), (sqrt(3), 3, 1)]),
        _combo(4, 4, [(1, 2, 1), (sqrt(2), 4, 2)]),
        _combo(4, 4, [(1, 1, 2), (1, 2, 3)]),
    ]
    ident = DenseMatrix.identity(4)
    return _case(
        "ohno_4x4_rank5", {}, 4, 4, Fraction(1, 4), ops, EXTREME_DOUBLY, ident, ident,
        notes=(
            "printed prefactor 1/5 with sum over j=1..4 is inconsistent with five operators; "
            "scale 1/4 used since sum W_j^* W_j = 4 I",
            "25 Gram products in a 16-dimensional space are necessarily dependent; "
            "extremality holds for the doubly constrained set",
        ),
    )


def five_rank6() -> CatalogCase:
    ops = [
        _combo(5, 5, [(1, 1, 3), (1, 3, 2)]),
        _combo(5, 5, [(1, 2, 4), (1, 4, 3)]),
        _combo(5, 5, [(sqrt(2), 3, 5), (1, 5, 4)]),
        _combo(5, 5, [(1, 1, 4), (1, 4, 2)]),
        _combo(5, 5, [(1, 1, 5), (1, 4, 1), (1, 5, 3)]),
        _combo(5, 5, [(sqrt(2), 2, 1), (1, 5, 2)]),
    ]
    ident = DenseMatrix.identity(5)
    return _case("five_rank6", {}, 5, 5, Fraction(1, 3), ops, EXTREME_DOUBLY, ident, ident)


def five_rank7() -> CatalogCase:
    ops = [
        _combo(5, 5, [(sqrt(2), 1, 3), (1, 3, 2), (1, 5, 4)]),
        _combo(5, 5, [(1, 2, 4), (1, 4, 3)]),
        _combo(5, 5, [(sqrt(2), 3, 5), (sqrt(3), 5, 4)]),
        _combo(5, 5, [(1, 1, 4), (1, 4, 2)]),
        _combo(5, 5, [(1, 1, 5), (2, 4, 1), (1, 5, 3)]),
        _combo(5, 5, [(sqrt(2), 2, 1), (1, 5, 2)]),
        _combo(5, 5, [(sqrt(2), 1, 3), (sqrt(3) * I, 3, 2), (sqrt(3), 2, 5)]),
    ]
    ident = DenseMatrix.identity(5)
    return _case("five_rank7", {}, 5, 5, Fraction(1, 6), ops, EXTREME_DOUBLY, ident, ident)


def qubit_to_d(d: int) -> CatalogCase:
    """``d`` operators of shape ``2 x d``; marginals ``(Z, I_d/d)``."""
    if d < 4:
        raise ValueError(f"qubit_to_d needs d >= 4, got {d}")
    ops = [
        _combo(2, d, [(1, 1, 1), (1, 2, 3)]),
        _combo(2, d, [(1, 1, 2), (1, 2, 1)]),
        _combo(2, d, [(1, 1, 3), (1, 2, 2)]),
    ]
    for k in range(4, d + 1):
        ops.append(_combo(2, d, [(1, 1, k), (1, 2, k)]))
    off = Fraction(d - 3, 2 * d)
    z = DenseMatrix.from_rows([[Fraction(1, 2), off], [off, Fraction(1, 2)]])
    return _case(
        f"qubit_to_d({d})", {"d": d}, 2, d, Fraction(1, 2 * d), ops, EXTREME_UNITAL,
        z, _scaled_identity(d, Fraction(1, d)), notes=(GRAM_NOTE,),
    )


def _shifted_columns(d: int, shift: int) -> DenseMatrix:
    """``d x (d+1)`` matrix whose columns are ``[e_1, ..., e_d, 0]`` rotated right by ``shift``."""
    terms = []
    for t in range(d + 1):
        src = (t - shift) % (d + 1)
        if src < d:
            terms.append((1, src + 1, t + 1))
    return _combo(d, d + 1, terms)


def three_to_four() -> CatalogCase:
    ops = [
        _combo(3, 4, [(1, 1, 1), (1, 2, 2), (1, 3, 3)]),
        _combo(3, 4, [(1, 1, 2), (1, 2, 3), (1, 3, 4)]),
        _combo(3, 4, [(1, 3, 1), (1, 1, 3), (1, 2, 4)]),
        _combo(3, 4, [(1, 2, 1), (1, 3, 2), (1, 1, 4)]),
    ]
    return _case(
        "three_to_four", {}, 3, 4, Fraction(1, 12), ops, EXTREME_UNITAL,
        _scaled_identity(3, Fraction(1, 3)), _scaled_identity(4, Fraction(1, 4)), notes=(GRAM_NOTE,),
    )


def cyclic_d_to_d_plus_1(d: int) -> CatalogCase:
    """``d + 1`` cyclically shifted partial isometries ``C^(d+1) -> C^d``."""
    if d < 2:
        raise ValueError(f"cyclic_d_to_d_plus_1 needs d >= 2, got {d}")
    ops = [_shifted_columns(d, s) for s in range(d + 1)]
    return _case(
        f"cyclic_d_to_d_plus_1({d})", {"d": d}, d, d + 1, Fraction(1, d * d + d), ops, EXTREME_UNITAL,
        _scaled_identity(d, Fraction(1, d)), _scaled_identity(d + 1, Fraction(1, d + 1)),
        notes=("operators beyond W_3 follow the cyclic-shift pattern of the displayed ones", GRAM_NOTE),
    )


def cyclic_shift(d: int) -> DenseMatrix:
    """``S = sum_{k<d} E_{k,k+1} + E_{d,1}``."""
    return _combo(d, d, [(1, k, k + 1) for k in range(1, d)] + [(1, d, 1)])


def remark_orthogonal() -> DenseMatrix:
    rows = [[8, -11, 16], [-19, -8, 4], [-4, 16, 13]]
    return DenseMatrix.from_rows([[Fraction(x, 21) for x in r] for r in rows])


def remark_counterexample() -> CatalogCase:
    """Four operators on ``M(4)``: Gram set independent, dual Gram set dependent."""
    w = remark_orthogonal()
    block = {(0, 0): RadScalar(Fraction(-13, 3))}
    for i in range(3):
        for j in range(3):
            if w[i, j]:
                block[(i + 1, j + 1)] = w[i, j]
    core = DenseMatrix.from_sparse(4, 4, block)
    s = cyclic_shift(4)
    c = RadScalar(Fraction(3, 4)) / sqrt(11)
    ops = []
    power = DenseMatrix.identity(4)
    for _ in range(4):
        power = matmul(power, s)
        ops.append(matmul(matmul(adjoint(power), core), power).scale(c))
    # sum_j V_j^* V_j = c^2 * (169/9 + 3) I = 49/44 I, and likewise for V_j V_j^*
    marg = _scaled_identity(4, Fraction(49, 44))
    return _case(
        "remark_counterexample", {}, 4, 4, 1, ops, EXTREME_UNITAL, marg, marg,
        notes=("the double sums sum_{i,j} V_i^* V_j and sum_{i,j} V_j V_i^* are compared with I_4 "
               "and the exact outcome is reported",),
        gram_independent=True,
        dual_gram_independent=False,
    )


# -- registry ----------------------------------------------------------------------

PLAIN_CASES: Dict[str, Callable[[], CatalogCase]] = {
    "ohno_3x3_rank4": ohno_3x3_rank4,
    "ohno_4x4_rank5": ohno_4x4_rank5,
    "five_rank6": five_rank6,
    "five_rank7": five_rank7,
    "three_to_four": three_to_four,
    "remark_counterexample": remark_counterexample,
}

PARAM_CASES: Dict[str, Tuple[Callable[[int], CatalogCase], int]] = {
    "ohno_hermitian": (ohno_hermitian, 3),
    "qubit_to_d": (qubit_to_d, 4),
    "cyclic_d_to_d_plus_1": (cyclic_d_to_d_plus_1, 2),
}

TENSOR_PREFIX = "tensor:"
TENSOR_SEP = "×"

TENSOR_PRESETS: Tuple[str, ...] = (
    "tensor:ohno_hermitian(3)×ohno_3x3_rank4",
    "tensor:ohno_hermitian(4)×ohno_3x3_rank4",
    "tensor:ohno_3x3_rank4×ohno_4x4_rank5",
) + tuple(f"tensor:ohno_hermitian({k})×five_rank7" for k in range(3, 15))

# concrete parameter values exercised by the batch report
REPORT_PARAMS: Dict[str, Tuple[int, ...]] = {
    "ohno_hermitian": (3, 4, 5),
    "qubit_to_d": (4, 5, 6, 8),
    "cyclic_d_to_d_plus_1": (2, 3, 4, 5, 6),
}

_PARAM_RE = re.compile(r"^([a-z0-9_]+)\((\d+)\)$")


@dataclass(frozen=True)
class CaseInfo:
    id: str
    params: Dict[str, str]

    def to_json(self) -> dict:
        return {"id": self.id, "params": dict(self.params)}


def list_cases() -> List[CaseInfo]:
    out = [CaseInfo(name, {}) for name in sorted(PLAIN_CASES)]
    for name, (_, lo) in sorted(PARAM_CASES.items()):
        out.append(CaseInfo(f"{name}(d)", {"d": f">={lo}"}))
    out.extend(CaseInfo(p, {}) for p in TENSOR_PRESETS)
    return out


def report_case_ids() -> List[str]:
    ids = list(PLAIN_CASES)
    for name, values in REPORT_PARAMS.items():
        ids.extend(f"{name}({v})" for v in values)
    ids.extend(TENSOR_PRESETS)
    return sorted(ids)


def split_tensor_id(case_id: str) -> Tuple[str, str]:
    body = case_id[len(TENSOR_PREFIX):]
    for sep in (TENSOR_SEP, "*"):
        if sep in body:
            a, b = body.split(sep, 1)
            return a.strip(), b.strip()
    raise UnknownCaseError(f"tensor id {case_id!r} needs two factors separated by {TENSOR_SEP!r}")


def get_case(case_id: str) -> CatalogCase:
    case_id = case_id.strip()
    if case_id.startswith(TENSOR_PREFIX):
        from .compose import tensor_case

        a, b = split_tensor_id(case_id)
        return tensor_case(get_case(a), get_case(b))
    if case_id in PLAIN_CASES:
        return PLAIN_CASES[case_id]()
    m = _PARAM_RE.match(case_id)
    if m and m.group(1) in PARAM_CASES:
        ctor, lo = PARAM_CASES[m.group(1)]
        d = int(m.group(2))
        if d < lo:
            raise UnknownCaseError(f"{m.group(1)} needs d >= {lo}, got {d}")
        return ctor(d)
    raise UnknownCaseError(f"unknown case id {case_id!r}")


def double_sums(F: KrausFamily) -> Tuple[DenseMatrix, DenseMatrix]:
    """Unscaled ``(sum_{i,j} V_i^* V_j, sum_{i,j} V_j V_i^*)``."""
    total = F.ops[0]
    for v in F.ops[1:]:
        total = total + v
    return matmul(adjoint(total), total), matmul(total, adjoint(total))
