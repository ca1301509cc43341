"""Completely positive maps given by Kraus families.

A family ``F`` with operators ``V_j`` of shape ``d_in x d_out`` represents

    Phi(X) = scale * sum_j V_j^* X V_j        (X in M(d_in), Phi(X) in M(d_out))

and its dual ``Phi^*(Y) = scale * sum_j V_j Y V_j^*``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .linalg import (
    DenseMatrix,
    DimensionError,
    adjoint,
    kron,
    left_null_vector,
    matmul,
    matrix_unit,
    partial_trace_left,
    partial_trace_right,
    rank_exact,
    stack_rows,
    trace,
)
from .scalar import ONE, ZERO, RadScalar, as_rational


class NormalizationError(ValueError):
    """The family is not state-normalized, i.e. ``tr(Phi(I)) != 1``."""

    def __init__(self, trace_value: RadScalar):
        super().__init__(f"state normalization requires tr(Phi(I)) = 1, got {trace_value}")
        self.trace_value = trace_value


@dataclass(frozen=True)
class KrausFamily:
    d_in: int
    d_out: int
    scale: Fraction
    ops: Tuple[DenseMatrix, ...]

    def __post_init__(self):
        object.__setattr__(self, "scale", as_rational(self.scale))
        object.__setattr__(self, "ops", tuple(self.ops))
        if not self.ops:
            raise ValueError("a Kraus family needs at least one operator")
        if self.scale <= 0:
            raise ValueError(f"scale must be positive, got {self.scale}")
        for k, v in enumerate(self.ops):
            if v.shape != (self.d_in, self.d_out):
                raise DimensionError(
                    f"operator {k + 1} has shape {v.rows}x{v.cols}, expected {self.d_in}x{self.d_out}"
                )

    def __len__(self) -> int:
        return len(self.ops)

    def rescaled(self, factor) -> "KrausFamily":
        return KrausFamily(self.d_in, self.d_out, self.scale * as_rational(factor), self.ops)

    def with_scale(self, scale) -> "KrausFamily":
        return KrausFamily(self.d_in, self.d_out, scale, self.ops)

    def to_json(self) -> dict:
        return {
            "d_in": self.d_in,
            "d_out": self.d_out,
            "scale": str(self.scale),
            "ops": [v.to_json() for v in self.ops],
        }

    @classmethod
    def from_json(cls, data: dict) -> "KrausFamily":
        return cls(
            int(data["d_in"]),
            int(data["d_out"]),
            Fraction(data["scale"]),
            tuple(DenseMatrix.from_json(m) for m in data["ops"]),
        )


@dataclass(frozen=True)
class MarginalPair:
    """``left = Phi^*(I_{d_out})`` (d_in x d_in), ``right = Phi(I_{d_in})`` (d_out x d_out)."""

    left: DenseMatrix
    right: DenseMatrix

    def to_json(self) -> dict:
        return {"left": self.left.to_json(), "right": self.right.to_json()}


@dataclass(frozen=True)
class Minimality:
    minimal: bool
    rank: int
    size: int
    witness: Optional[Tuple[RadScalar, ...]] = None


@dataclass(frozen=True)
class StatePicture:
    rho: DenseMatrix
    rho1: DenseMatrix
    rho2: DenseMatrix
    marginals: MarginalPair
    checks: dict = field(default_factory=dict)


def apply(F: KrausFamily, X: DenseMatrix) -> DenseMatrix:
    if X.shape != (F.d_in, F.d_in):
        raise DimensionError(f"apply expects a {F.d_in}x{F.d_in} input, got {X.rows}x{X.cols}")
    total = DenseMatrix.zeros(F.d_out)
    if X.is_zero():
        return total
    for v in F.ops:
        total = total + matmul(matmul(adjoint(v), X), v)
    return total.scale(F.scale)


def dual_apply(F: KrausFamily, Y: DenseMatrix) -> DenseMatrix:
    if Y.shape != (F.d_out, F.d_out):
        raise DimensionError(f"dual_apply expects a {F.d_out}x{F.d_out} input, got {Y.rows}x{Y.cols}")
    total = DenseMatrix.zeros(F.d_in)
    if Y.is_zero():
        return total
    for v in F.ops:
        total = total + matmul(matmul(v, Y), adjoint(v))
    return total.scale(F.scale)


def choi_matrix_by_definition(F: KrausFamily) -> DenseMatrix:
    """``sum_ij E_ij (x) Phi(E_ij)``; slow, kept as the reference construction."""
    d = F.d_in
    total = DenseMatrix.zeros(d * F.d_out)
    for i in range(1, d + 1):
        for j in range(1, d + 1):
            e = matrix_unit(i, j, d)
            total = total + kron(e, apply(F, e))
    return total


def choi_matrix(F: KrausFamily) -> DenseMatrix:
    """Choi matrix with the unnormalized ``Omega = sum_j e_j (x) e_j``.

    ``Phi(E_ij) = sum_k conj(V_k[i, :])^T V_k[j, :]``, so the entry at
    ``((i, a), (j, b))`` is ``scale * sum_k conj(V_k[i, a]) V_k[j, b]``;
    this avoids the ``d_in^2`` applications of the definition.
    """
    n = F.d_in * F.d_out
    acc = {}
    for v in F.ops:
        nz = [(k, x.conjugate(), x) for k, x in enumerate(v.entries) if x]
        for p, cx, _ in nz:
            for q, _, y in nz:
                prod = cx * y
                prev = acc.get((p, q))
                acc[(p, q)] = prod if prev is None else prev + prod
    entries = [ZERO] * (n * n)
    for (p, q), x in acc.items():
        if x:
            entries[p * n + q] = x
    return DenseMatrix._raw(n, n, tuple(entries)).scale(F.scale)


def choi_rank(F: KrausFamily) -> int:
    return rank_exact(choi_matrix(F))


def marginals(F: KrausFamily) -> MarginalPair:
    return MarginalPair(
        left=dual_apply(F, DenseMatrix.identity(F.d_out)),
        right=apply(F, DenseMatrix.identity(F.d_in)),
    )


def operator_matrix(F: KrausFamily) -> DenseMatrix:
    """Vectorized Kraus operators stacked as rows."""
    return stack_rows(F.ops)


def is_minimal(F: KrausFamily) -> Minimality:
    """Linear independence of the operators, with a dependence vector when it fails."""
    m = operator_matrix(F)
    r = rank_exact(m)
    if r == len(F):
        return Minimality(True, r, len(F))
    witness = left_null_vector(m)
    return Minimality(False, r, len(F), tuple(witness))


def trace_of_output(F: KrausFamily) -> RadScalar:
    return trace(apply(F, DenseMatrix.identity(F.d_in)))


def state_normalized(F: KrausFamily) -> KrausFamily:
    """Rescale so that ``tr(Phi(I)) = 1``; the trace must be rational."""
    t = trace_of_output(F)
    if not t.is_rational() or t.to_rational() <= 0:
        raise NormalizationError(t)
    return F.rescaled(1 / t.to_rational())


def state_from_cpmap(F: KrausFamily) -> StatePicture:
    """The bipartite state ``rho = J(Phi)`` together with both reductions."""
    t = trace_of_output(F)
    if t != ONE:
        raise NormalizationError(t)
    rho = choi_matrix(F)
    rho1 = partial_trace_right(rho, F.d_in, F.d_out)
    rho2 = partial_trace_left(rho, F.d_in, F.d_out)
    marg = marginals(F)
    checks = {
        "trace_one": trace(rho) == ONE,
        "rho2_equals_phi_identity": rho2 == marg.right,
        # tr_2(J(Phi)) = ((Phi^*(I))^*)^T
        "rho1_equals_dual_identity": rho1 == adjoint(marg.left).transpose(),
    }
    if not (checks["rho2_equals_phi_identity"] and checks["rho1_equals_dual_identity"]):
        raise AssertionError(f"marginal identities failed: {checks}")
    return StatePicture(rho, rho1, rho2, marg, checks)


def kraus_family(d_in: int, d_out: int, ops: Sequence[DenseMatrix], scale=1) -> KrausFamily:
    return KrausFamily(d_in, d_out, as_rational(scale), tuple(ops))


def identity_family(d: int, scale=1) -> KrausFamily:
    return KrausFamily(d, d, as_rational(scale), (DenseMatrix.identity(d),))


def operators_hermitian(F: KrausFamily) -> bool:
    return all(v.is_hermitian() for v in F.ops)


def kraus_sums(F: KrausFamily) -> Tuple[DenseMatrix, DenseMatrix]:
    """Unscaled ``(sum_j V_j^* V_j, sum_j V_j V_j^*)``."""
    a = DenseMatrix.zeros(F.d_out)
    b = DenseMatrix.zeros(F.d_in)
    for v in F.ops:
        a = a + matmul(adjoint(v), v)
        b = b + matmul(v, adjoint(v))
    return a, b

