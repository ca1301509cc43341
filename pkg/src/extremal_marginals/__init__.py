"""Exact verification of extreme points of quantum marginal sets via Kraus families."""
from .scalar import I, ONE, ZERO, RadScalar, sqrt
from .linalg import DenseMatrix, kron, matmul, matrix_unit, rank_exact, rank_float
from .cpmap import KrausFamily, MarginalPair, apply, choi_matrix, choi_rank, dual_apply, marginals
from .certify import Certificate, certify, parthasarathy_bound
from .catalog import CatalogCase, get_case, list_cases
from .compose import compose_extremal, tensor_cpmap

__all__ = [
    "I", "ONE", "ZERO", "RadScalar", "sqrt",
    "DenseMatrix", "kron", "matmul", "matrix_unit", "rank_exact", "rank_float",
    "KrausFamily", "MarginalPair", "apply", "choi_matrix", "choi_rank", "dual_apply", "marginals",
    "Certificate", "certify", "parthasarathy_bound",
    "CatalogCase", "get_case", "list_cases",
    "compose_extremal", "tensor_cpmap",
]
