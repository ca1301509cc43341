"""Tensor products of Kraus families and the extremality-preserving product."""
from __future__ import annotations

import math
from typing import Optional

from .catalog import CatalogCase, Expected, TENSOR_PREFIX, TENSOR_SEP
from .certify import (
    EXTREME_DOUBLY,
    EXTREME_UNITAL,
    NOT_EXTREME,
    Independence,
    bilinear_independence,
    gram_independence,
    parthasarathy_bound,
)
from .cpmap import KrausFamily, operators_hermitian
from .linalg import kron

# exact elimination is the default up to this product dimension
EXACT_DIM_LIMIT = 15


class PreconditionError(ValueError):
    """A hypothesis of the product theorem does not hold; ``hypothesis`` names it."""

    def __init__(self, hypothesis: str, message: str):
        super().__init__(f"{hypothesis}: {message}")
        self.hypothesis = hypothesis


def tensor_cpmap(F: KrausFamily, G: KrausFamily) -> KrausFamily:
    """Operators ``kron(V_i, W_j)`` in lexicographic ``(i, j)`` order."""
    ops = tuple(kron(v, w) for v in F.ops for w in G.ops)
    return KrausFamily(F.d_in * G.d_in, F.d_out * G.d_out, F.scale * G.scale, ops)


def _tensor_id(a: str, b: str) -> str:
    return f"{TENSOR_PREFIX}{a}{TENSOR_SEP}{b}"


def _default_mode(d: int) -> str:
    return "exact" if d <= EXACT_DIM_LIMIT else "float"


def check_preconditions(F: KrausFamily, G: KrausFamily, mode: Optional[str] = None) -> None:
    if F.d_in != F.d_out:
        raise PreconditionError("square", f"first factor maps M({F.d_in}) to M({F.d_out})")
    if not operators_hermitian(F):
        raise PreconditionError("hermitian", "first factor has non-Hermitian Kraus operators")
    mf = mode or _default_mode(F.d_in)
    if not gram_independence(F, mf):
        raise PreconditionError("gram_independent", "Gram set of the first factor is linearly dependent")
    mg = mode or _default_mode(max(G.d_in, G.d_out))
    if not bilinear_independence(G, mg):
        raise PreconditionError("bilinear_independent", "second factor is not bi-linearly independent")


def compose_extremal(
    F: KrausFamily,
    G: KrausFamily,
    mode: Optional[str] = None,
    case_id: Optional[str] = None,
    left: Optional[CatalogCase] = None,
    right: Optional[CatalogCase] = None,
) -> CatalogCase:
    """Product of a Hermitian unital-extreme family with a bi-linearly independent one.

    The preconditions are checked first; the conclusion is then re-certified
    on the product family instead of being taken on trust.
    """
    check_preconditions(F, G, mode)
    T = tensor_cpmap(F, G)
    m = mode or _default_mode(max(T.d_in, T.d_out))
    result: Independence = bilinear_independence(T, m)
    if not result.independent:
        raise AssertionError(
            f"product family failed re-certification: bilinear rank {result.rank} < {result.size}"
        )
    cid = case_id or (_tensor_id(left.id, right.id) if left and right else "tensor")
    return _product_case(cid, T, left, right, EXTREME_DOUBLY, ("conclusion re-certified in " + m + " mode",))


def _product_case(cid, T, left, right, verdict, notes=()) -> CatalogCase:
    if left is not None and right is not None:
        mr = kron(left.expected.marginal_right, right.expected.marginal_right)
        ml = kron(left.expected.marginal_left, right.expected.marginal_left)
        params = {f"a.{k}": v for k, v in left.params.items()}
        params.update({f"b.{k}": v for k, v in right.params.items()})
        notes = tuple(left.notes) + tuple(right.notes) + tuple(notes)
    else:
        from .cpmap import marginals

        mg = marginals(T)
        mr, ml, params = mg.right, mg.left, {}
    expected = Expected(
        choi_rank=len(T),
        bound=parthasarathy_bound(T.d_in, T.d_out),
        verdict=verdict,
        marginal_right=mr,
        marginal_left=ml,
        hermitian_ops=operators_hermitian(T),
    )
    return CatalogCase(cid, params, T, expected, tuple(notes))


def tensor_case(a: CatalogCase, b: CatalogCase) -> CatalogCase:
    """Catalog entry for ``a (x) b`` without running any certification.

    The expected verdict follows from the factors: the product theorem applies
    when ``a`` has Hermitian operators and an independent Gram set; a product
    whose Choi rank exceeds the rank bound cannot be extreme.
    """
    T = tensor_cpmap(a.family, b.family)
    bound = parthasarathy_bound(T.d_in, T.d_out)
    if len(T) > bound:
        verdict = NOT_EXTREME
    elif a.expected.hermitian_ops and a.family.d_in == a.family.d_out and a.expected.verdict == EXTREME_UNITAL:
        verdict = EXTREME_DOUBLY
    else:
        verdict = b.expected.verdict
    return _product_case(_tensor_id(a.id, b.id), T, a, b, verdict)


def bound_attainment_check(k: int) -> bool:
    """``floor(sqrt(2 (5k)^2 - 1)) == 7k`` in integer arithmetic, for ``3 <= k <= 14``."""
    if not 3 <= k <= 14:
        raise ValueError(f"bound attainment is only claimed for 3 <= k <= 14, got k={k}")
    d = 5 * k
    return math.isqrt(2 * d * d - 1) == 7 * k and parthasarathy_bound(d, d) == 7 * k
