"""Dense matrices over :class:`RadScalar` and a floating-point cross-check path.

Tensor products use the lexicographic basis order ``(i, j) < (i', j')`` iff
``i < i'`` or ``i == i'`` and ``j < j'``, so ``kron(A, B)`` is the block
matrix ``[a_ij B]`` and the composite index of ``(i, k)`` in
``C^d1 (x) C^d2`` is ``i*d2 + k``.  Indices are 0-based throughout the code;
:func:`matrix_unit` is the one helper that speaks the 1-based ``E_ij``
notation.
"""
from __future__ import annotations

import csv
import io
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .scalar import ONE, ZERO, RadScalar, ScalarLike, scalar

SparseRow = Dict[int, RadScalar]


class DimensionError(ValueError):
    """Raised when matrix shapes are incompatible with an operation."""


class DenseMatrix:
    """Immutable ``rows x cols`` matrix of :class:`RadScalar`, stored row-major."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[ScalarLike]):
        if rows < 1 or cols < 1:
            raise DimensionError(f"shape must be positive, got {rows}x{cols}")
        entries = tuple(scalar(e) for e in entries)
        if len(entries) != rows * cols:
            raise DimensionError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self.entries = entries

    @classmethod
    def _raw(cls, rows: int, cols: int, entries: Tuple[RadScalar, ...]) -> "DenseMatrix":
        obj = cls.__new__(cls)
        obj.rows, obj.cols, obj.entries = rows, cols, entries
        return obj

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[ScalarLike]]) -> "DenseMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        if any(len(r) != cols for r in data):
            raise DimensionError("ragged row data")
        return cls(rows, cols, [x for r in data for x in r])

    @classmethod
    def zeros(cls, rows: int, cols: Optional[int] = None) -> "DenseMatrix":
        cols = rows if cols is None else cols
        return cls._raw(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, d: int) -> "DenseMatrix":
        return cls.diag([ONE] * d)

    @classmethod
    def diag(cls, values: Sequence[ScalarLike]) -> "DenseMatrix":
        d = len(values)
        entries = [ZERO] * (d * d)
        for k, v in enumerate(values):
            entries[k * d + k] = scalar(v)
        return cls._raw(d, d, tuple(entries))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, items: Dict[Tuple[int, int], ScalarLike]) -> "DenseMatrix":
        entries = [ZERO] * (rows * cols)
        for (i, j), v in items.items():
            entries[i * cols + j] = entries[i * cols + j] + scalar(v)
        return cls._raw(rows, cols, tuple(entries))

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: Tuple[int, int]) -> RadScalar:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(f"index {ij} out of range for {self.rows}x{self.cols}")
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Tuple[RadScalar, ...]:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def to_lists(self) -> List[List[RadScalar]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def nonzeros(self) -> Iterable[Tuple[int, int, RadScalar]]:
        c = self.cols
        for k, v in enumerate(self.entries):
            if v:
                yield k // c, k % c, v

    def sparse_rows(self) -> List[SparseRow]:
        c = self.cols
        return [
            {j: v for j, v in enumerate(self.entries[i * c:(i + 1) * c]) if v}
            for i in range(self.rows)
        ]

    # -- algebra ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DenseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self.entries))

    def __add__(self, other: "DenseMatrix") -> "DenseMatrix":
        _require_same_shape(self, other)
        return DenseMatrix._raw(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "DenseMatrix") -> "DenseMatrix":
        _require_same_shape(self, other)
        return DenseMatrix._raw(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "DenseMatrix":
        return DenseMatrix._raw(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c: ScalarLike) -> "DenseMatrix":
        c = scalar(c)
        return DenseMatrix._raw(self.rows, self.cols, tuple(a * c if a else ZERO for a in self.entries))

    def __mul__(self, c: ScalarLike) -> "DenseMatrix":
        if isinstance(c, DenseMatrix):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "DenseMatrix") -> "DenseMatrix":
        return matmul(self, other)

    def adjoint(self) -> "DenseMatrix":
        return adjoint(self)

    def transpose(self) -> "DenseMatrix":
        r, c = self.rows, self.cols
        return DenseMatrix._raw(c, r, tuple(self.entries[i * c + j] for j in range(c) for i in range(r)))

    def conjugate(self) -> "DenseMatrix":
        return DenseMatrix._raw(self.rows, self.cols, tuple(a.conjugate() for a in self.entries))

    @property
    def H(self) -> "DenseMatrix":
        return adjoint(self)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_hermitian(self) -> bool:
        return self.is_square() and self == adjoint(self)

    def is_zero(self) -> bool:
        return not any(self.entries)

    def to_numpy(self) -> np.ndarray:
        return np.array([e.to_float() for e in self.entries], dtype=complex).reshape(self.rows, self.cols)

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "entries": [e.to_json() for e in self.entries]}

    @classmethod
    def from_json(cls, data: dict) -> "DenseMatrix":
        return cls(int(data["rows"]), int(data["cols"]), [RadScalar.from_json(e) for e in data["entries"]])

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"DenseMatrix({self.rows}x{self.cols}: [{body}])"


def _require_same_shape(a: DenseMatrix, b: DenseMatrix) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch {a.shape} vs {b.shape}")


def _require_square(a: DenseMatrix) -> None:
    if a.rows != a.cols:
        raise DimensionError(f"expected a square matrix, got {a.rows}x{a.cols}")


def matrix_unit(i: int, j: int, rows: int, cols: Optional[int] = None) -> DenseMatrix:
    """``E_ij`` with 1-based ``i, j`` in ``M(rows x cols)``."""
    cols = rows if cols is None else cols
    if not (1 <= i <= rows and 1 <= j <= cols):
        raise IndexError(f"E_{i}{j} does not exist in M({rows}x{cols})")
    return DenseMatrix.from_sparse(rows, cols, {(i - 1, j - 1): ONE})


def matmul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.cols != b.rows:
        raise DimensionError(f"cannot multiply {a.rows}x{a.cols} by {b.rows}x{b.cols}")
    n, m, p = a.rows, a.cols, b.cols
    b_rows = b.sparse_rows()
    out = [ZERO] * (n * p)
    for i in range(n):
        acc: Dict[int, RadScalar] = {}
        for k, aik in enumerate(a.entries[i * m:(i + 1) * m]):
            if not aik:
                continue
            for j, bkj in b_rows[k].items():
                prev = acc.get(j)
                acc[j] = aik * bkj if prev is None else prev + aik * bkj
        for j, v in acc.items():
            out[i * p + j] = v
    return DenseMatrix._raw(n, p, tuple(out))


def adjoint(a: DenseMatrix) -> DenseMatrix:
    r, c = a.rows, a.cols
    return DenseMatrix._raw(c, r, tuple(a.entries[i * c + j].conjugate() for j in range(c) for i in range(r)))


def kron(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    r1, c1, r2, c2 = a.rows, a.cols, b.rows, b.cols
    cols = c1 * c2
    out = [ZERO] * (r1 * r2 * cols)
    b_nz = list(b.nonzeros())
    for i, j, aij in a.nonzeros():
        for k, l, bkl in b_nz:
            out[(i * r2 + k) * cols + j * c2 + l] = aij * bkl
    return DenseMatrix._raw(r1 * r2, cols, tuple(out))


def trace(a: DenseMatrix) -> RadScalar:
    _require_square(a)
    total = ZERO
    for k in range(a.rows):
        total = total + a.entries[k * a.cols + k]
    return total


def _require_bipartite(z: DenseMatrix, d1: int, d2: int) -> None:
    if z.rows != d1 * d2 or z.cols != d1 * d2:
        raise DimensionError(f"expected a {d1 * d2}x{d1 * d2} matrix for d1={d1}, d2={d2}, got {z.rows}x{z.cols}")


def partial_trace_right(z: DenseMatrix, d1: int, d2: int) -> DenseMatrix:
    """Trace out the second factor: ``result[i, j] = sum_k Z[(i,k), (j,k)]``."""
    _require_bipartite(z, d1, d2)
    n = d1 * d2
    out = []
    for i in range(d1):
        for j in range(d1):
            s = ZERO
            for k in range(d2):
                v = z.entries[(i * d2 + k) * n + j * d2 + k]
                if v:
                    s = s + v
            out.append(s)
    return DenseMatrix._raw(d1, d1, tuple(out))


def partial_trace_left(z: DenseMatrix, d1: int, d2: int) -> DenseMatrix:
    """Trace out the first factor: ``result[i, j] = sum_k Z[(k,i), (k,j)]``."""
    _require_bipartite(z, d1, d2)
    n = d1 * d2
    out = []
    for i in range(d2):
        for j in range(d2):
            s = ZERO
            for k in range(d1):
                v = z.entries[(k * d2 + i) * n + k * d2 + j]
                if v:
                    s = s + v
            out.append(s)
    return DenseMatrix._raw(d2, d2, tuple(out))


def vectorize(a: DenseMatrix) -> DenseMatrix:
    """Row-major flattening into a ``1 x rows*cols`` row vector."""
    return DenseMatrix._raw(1, a.rows * a.cols, a.entries)


def stack_rows(vectors: Sequence[DenseMatrix]) -> DenseMatrix:
    """Stack row vectors (or flattened matrices) into one matrix."""
    if not vectors:
        raise DimensionError("nothing to stack")
    width = len(vectors[0].entries)
    if any(len(v.entries) != width for v in vectors):
        raise DimensionError("cannot stack vectors of different lengths")
    return DenseMatrix._raw(len(vectors), width, tuple(x for v in vectors for x in v.entries))


# -- exact elimination ---------------------------------------------------------


def _axpy(row: SparseRow, f: RadScalar, pivot: SparseRow) -> SparseRow:
    """Return ``row - f * pivot`` with zeros dropped."""
    out = dict(row)
    for k, v in pivot.items():
        cur = out.get(k)
        delta = f * v
        if cur is None:
            out[k] = -delta
        else:
            new = cur - delta
            if new:
                out[k] = new
            else:
                del out[k]
    return out


def row_echelon(rows: List[SparseRow], ncols: int) -> List[Tuple[int, SparseRow]]:
    """Forward elimination; returns ``(pivot column, normalized pivot row)`` pairs.

    Columns are scanned left to right and the first remaining row with a
    nonzero entry in the column becomes the pivot.  Pivot rows are scaled so
    the pivot entry is exactly 1.
    """
    active = [r for r in rows if r]
    pivots: List[Tuple[int, SparseRow]] = []
    for c in range(ncols):
        if not active:
            break
        idx = next((k for k, r in enumerate(active) if c in r), None)
        if idx is None:
            continue
        prow = active.pop(idx)
        inv = prow[c].inverse()
        prow = {k: v * inv for k, v in prow.items()}
        remaining = []
        for r in active:
            f = r.get(c)
            if f is not None:
                r = _axpy(r, f, prow)
            if r:
                remaining.append(r)
        active = remaining
        pivots.append((c, prow))
    return pivots


def reduced_row_echelon(rows: List[SparseRow], ncols: int) -> List[Tuple[int, SparseRow]]:
    pivots = row_echelon(rows, ncols)
    for k in range(len(pivots) - 1, -1, -1):
        c, prow = pivots[k]
        for m in range(k):
            c2, r2 = pivots[m]
            f = r2.get(c)
            if f is not None:
                pivots[m] = (c2, _axpy(r2, f, prow))
    return pivots


def rank_exact(a: DenseMatrix) -> int:
    return len(row_echelon(a.sparse_rows(), a.cols))


def null_vector(a: DenseMatrix) -> Optional[List[RadScalar]]:
    """First basis vector of ``ker(a)`` from the reduced echelon form, or ``None``.

    The first free column is set to 1, other free columns to 0, and pivot
    variables are solved by back-substitution.
    """
    basis = null_space(a, limit=1)
    return basis[0] if basis else None


def null_space(a: DenseMatrix, limit: Optional[int] = None) -> List[List[RadScalar]]:
    pivots = reduced_row_echelon(a.sparse_rows(), a.cols)
    pivot_cols = {c for c, _ in pivots}
    basis = []
    for f in range(a.cols):
        if f in pivot_cols:
            continue
        x = [ZERO] * a.cols
        x[f] = ONE
        for c, prow in pivots:
            v = prow.get(f)
            if v is not None:
                x[c] = -v
        basis.append(x)
        if limit is not None and len(basis) >= limit:
            break
    return basis


def left_null_vector(a: DenseMatrix) -> Optional[List[RadScalar]]:
    """Nonzero ``y`` with ``y^T a = 0`` (a dependence among the rows), or ``None``."""
    return null_vector(a.transpose())


# -- float path ------------------------------------------------------------------

FloatMatrix = Union[np.ndarray, sp.spmatrix, sp.sparray]


def to_float_matrix(a: DenseMatrix, sparse: bool = False) -> FloatMatrix:
    if not sparse:
        return a.to_numpy()
    data, ri, ci = [], [], []
    for i, j, v in a.nonzeros():
        ri.append(i)
        ci.append(j)
        data.append(v.to_float())
    return sp.csr_matrix((np.array(data, dtype=complex), (ri, ci)), shape=a.shape)


def _singular_values_by_block(m: FloatMatrix) -> Tuple[np.ndarray, Tuple[int, int]]:
    """All singular values of ``m``, computed block by block.

    Rows and columns linked by a nonzero entry form the connected components
    of a bipartite graph; after permutation the matrix is block diagonal, so
    its singular values are the union of the blocks' singular values.
    """
    coo = sp.coo_matrix(m)
    coo.eliminate_zeros()
    r, c = coo.shape
    if coo.nnz == 0:
        return np.zeros(0), (r, c)
    adj = sp.coo_matrix((np.ones(coo.nnz), (coo.row, coo.col + r)), shape=(r + c, r + c))
    ncomp, labels = connected_components(adj, directed=False)
    csr = coo.tocsr()
    row_lab, col_lab = labels[:r], labels[r:]
    row_order = np.argsort(row_lab, kind="stable")
    col_order = np.argsort(col_lab, kind="stable")
    row_bounds = np.searchsorted(row_lab[row_order], np.arange(ncomp + 1))
    col_bounds = np.searchsorted(col_lab[col_order], np.arange(ncomp + 1))
    values = []
    for k in range(ncomp):
        rs = row_order[row_bounds[k]:row_bounds[k + 1]]
        cs = col_order[col_bounds[k]:col_bounds[k + 1]]
        if len(rs) == 0 or len(cs) == 0:
            continue
        block = csr[rs][:, cs].toarray()
        values.append(np.linalg.svd(block, compute_uv=False))
    return np.concatenate(values), (r, c)


def singular_values(m: FloatMatrix) -> np.ndarray:
    if sp.issparse(m):
        s, _ = _singular_values_by_block(m)
    else:
        m = np.asarray(m, dtype=complex)
        s = np.linalg.svd(m, compute_uv=False) if m.size else np.zeros(0)
    return np.sort(s)[::-1]


def hermitian_eigenvalues(m: FloatMatrix) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Sparse inputs are split into the connected components of their index
    graph; each component is a principal block and the spectra are joined.
    Indices outside every block contribute zero eigenvalues.
    """
    if not sp.issparse(m):
        return np.linalg.eigvalsh(np.asarray(m, dtype=complex))
    n = m.shape[0]
    csr = sp.csr_matrix(m)
    csr.eliminate_zeros()
    pattern = sp.csr_matrix((np.ones(csr.nnz), csr.indices, csr.indptr), shape=csr.shape)
    ncomp, labels = connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(ncomp + 1))
    values = []
    for k in range(ncomp):
        idx = order[bounds[k]:bounds[k + 1]]
        values.append(np.linalg.eigvalsh(csr[idx][:, idx].toarray()))
    out = np.concatenate(values) if values else np.zeros(n)
    return np.sort(out)


def rank_float(m: FloatMatrix, tol: Union[float, str, None] = "auto") -> int:
    """Number of singular values above ``tol``.

    ``"auto"`` (or ``None``) means ``max(rows, cols) * eps * sigma_max``.
    Sparse inputs are decomposed into independent blocks first, which gives
    the same singular values as a dense SVD at a fraction of the cost.
    """
    s = singular_values(m)
    if s.size == 0:
        return 0
    if tol is None or tol == "auto":
        rows, cols = m.shape
        tol = max(rows, cols) * np.finfo(float).eps * s[0]
    elif float(tol) < 0:
        raise ValueError("tolerance must be nonnegative")
    return int(np.count_nonzero(s > float(tol)))


def float_csv(m: FloatMatrix) -> str:
    """CSV with an ``re,im`` pair per entry, one line per matrix row."""
    arr = m.toarray() if sp.issparse(m) else np.asarray(m, dtype=complex)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in arr:
        writer.writerow([repr(float(x)) for z in row for x in (z.real, z.imag)])
    return buf.getvalue()


def read_float_csv(text: str) -> np.ndarray:
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    vals = np.array([[float(x) for x in r] for r in rows])
    return vals[:, 0::2] + 1j * vals[:, 1::2]
