"""CSR sparse matrices, the dense-column profiler, and Matrix Market I/O."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import dense
from .errors import DimensionError, EncUndefined, ParamError, ParseError

T1 = "T1"
T2 = "T2"
DENSE = "DENSE"


@dataclass
class CSRMatrix:
    """Compressed-sparse-row matrix over float64.

    Column indices are strictly increasing within each row.  Explicitly
    stored zeros are tolerated but never required.
    """

    rows: int
    cols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_ptr = np.asarray(self.row_ptr, dtype=np.int64)
        self.col_idx = np.asarray(self.col_idx, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.rows < 1 or self.cols < 1:
            raise DimensionError("matrix dimensions must be positive")
        if self.row_ptr.shape != (self.rows + 1,):
            raise DimensionError("row_ptr must have rows+1 entries")
        if self.row_ptr[0] != 0 or self.row_ptr[-1] != self.values.size:
            raise DimensionError("row_ptr must start at 0 and end at nnz")
        if np.any(np.diff(self.row_ptr) < 0):
            raise DimensionError("row_ptr must be non-decreasing")
        if self.col_idx.shape != self.values.shape:
            raise DimensionError("col_idx and values must have equal length")
        if self.values.size:
            if self.col_idx.min() < 0 or self.col_idx.max() >= self.cols:
                raise DimensionError("column index out of range")
            rows_of = _entry_rows(self)
            same_row = rows_of[1:] == rows_of[:-1]
            if np.any((np.diff(self.col_idx) <= 0) & same_row):
                raise DimensionError("column indices must increase within a row")
        if not np.isfinite(self.values).all():
            raise ValueError("matrix contains non-finite entries")

    @property
    def nnz(self) -> int:
        return int(self.values.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CSRMatrix):
            return NotImplemented
        return (
            self.rows == other.rows
            and self.cols == other.cols
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
            and np.array_equal(self.values, other.values)
        )


def _entry_rows(s: CSRMatrix) -> np.ndarray:
    """Row index of every stored entry."""
    return np.repeat(np.arange(s.rows, dtype=np.int64), np.diff(s.row_ptr))


@dataclass
class SparsityProfile:
    """Column-density summary: counts of dense columns and entry bounds.

    ``kind`` is T1 when there is at least one dense column but not all are
    dense, T2 when there is none, and DENSE when every column is dense.
    """

    v: int
    t1: int
    t2: int
    c: float
    dense_cols: list[int] = field(default_factory=list)
    kind: str = T2


def profile_sparsity(x: CSRMatrix, dense_fraction: float = 0.25) -> SparsityProfile:
    """Classify columns by nonzero count against dense_fraction * rows."""
    if not 0.0 < dense_fraction <= 1.0:
        raise ParamError("dense_fraction must lie in (0, 1]")
    live = x.values != 0.0
    counts = np.bincount(x.col_idx[live], minlength=x.cols)
    threshold = dense_fraction * x.rows
    dense_mask = counts >= threshold
    v = int(dense_mask.sum())
    t1 = int(counts[dense_mask].max()) if v else 0
    t2 = int(counts[~dense_mask].max()) if v < x.cols else 0
    c = float(np.max(np.abs(x.values[live]))) if live.any() else 0.0
    if v == x.cols:
        kind = DENSE
    elif v > 0:
        kind = T1
    else:
        kind = T2
    return SparsityProfile(
        v=v, t1=t1, t2=t2, c=c,
        dense_cols=np.flatnonzero(dense_mask).tolist(),
        kind=kind,
    )


def spmm(s: CSRMatrix, d) -> np.ndarray:
    """Sparse @ dense."""
    d = dense.as_matrix(d)
    if d.shape[0] != s.cols:
        raise DimensionError(f"inner dimensions disagree: {s.rows}x{s.cols} x {d.shape}")
    out = np.zeros((s.rows, d.shape[1]))
    if s.nnz:
        contrib = s.values[:, None] * d[s.col_idx]
        np.add.at(out, _entry_rows(s), contrib)
    return out


def dense_times_sparse(d, s: CSRMatrix) -> np.ndarray:
    """Dense @ sparse."""
    d = dense.as_matrix(d)
    if d.shape[1] != s.rows:
        raise DimensionError(f"inner dimensions disagree: {d.shape} x {s.rows}x{s.cols}")
    out = np.zeros((s.cols, d.shape[0]))
    if s.nnz:
        contrib = s.values[:, None] * d[:, _entry_rows(s)].T
        np.add.at(out, s.col_idx, contrib)
    return out.T


def to_dense(s: CSRMatrix) -> np.ndarray:
    out = np.zeros((s.rows, s.cols))
    out[_entry_rows(s), s.col_idx] = s.values
    return out


def from_dense(d, drop_tol: float = 0.0) -> CSRMatrix:
    """Compress a dense matrix, dropping entries with |entry| <= drop_tol."""
    d = dense.as_matrix(d)
    if drop_tol < 0.0:
        raise ParamError("drop_tol must be non-negative")
    keep = np.abs(d) > drop_tol
    rows, cols = np.nonzero(keep)
    row_ptr = np.zeros(d.shape[0] + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=d.shape[0]), out=row_ptr[1:])
    return CSRMatrix(d.shape[0], d.shape[1], row_ptr, cols, d[keep])


def max_abs(s: CSRMatrix) -> float:
    """Largest entry magnitude."""
    return float(np.max(np.abs(s.values))) if s.nnz else 0.0


def enc_beta(s: CSRMatrix) -> float:
    """Element-norm-condition coefficient beta = m * c^2 / ||X||_2^2.

    Scale-invariant; bounded in the number of stacked block copies for the
    block-structured generator families.
    """
    c = max_abs(s)
    if c == 0.0:
        raise EncUndefined("beta is undefined for the zero matrix")
    x = to_dense(s)
    two = dense.singular_values(x if s.rows >= s.cols else x.T)[0]
    return float(s.rows) * c * c / (two * two)


# ---------------------------------------------------------------------------
# Matrix Market exchange format ("coordinate real general" only)
# ---------------------------------------------------------------------------

_MM_BANNER = "%%matrixmarket"


def read_matrix_market(path) -> CSRMatrix:
    """Read a "coordinate real general" Matrix Market file into CSR.

    One-based indices become zero-based, duplicate entries are summed, and
    entries are sorted within each row.
    """
    with open(path, "r", encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    if not lines:
        raise ParseError("empty file", 1)
    banner = lines[0].split()
    if len(banner) != 5 or banner[0].lower() != _MM_BANNER:
        raise ParseError("expected '%%MatrixMarket matrix coordinate real general' banner", 1)
    obj, fmt, fld, sym = (tok.lower() for tok in banner[1:])
    if (obj, fmt, fld, sym) != ("matrix", "coordinate", "real", "general"):
        raise ParseError(
            f"unsupported variant '{obj} {fmt} {fld} {sym}'; "
            "only 'matrix coordinate real general' is accepted", 1)
    lineno = 1
    for lineno, raw in enumerate(lines[1:], start=2):
        text = raw.strip()
        if text and not text.startswith("%"):
            break
    else:
        raise ParseError("missing size line", len(lines))
    parts = text.split()
    if len(parts) != 3:
        raise ParseError("size line must be 'rows cols nnz'", lineno)
    try:
        rows, cols, nnz = (int(p) for p in parts)
    except ValueError:
        raise ParseError("size line must contain integers", lineno) from None
    if rows < 1 or cols < 1 or nnz < 0:
        raise ParseError("invalid matrix dimensions", lineno)

    ii = np.empty(nnz, dtype=np.int64)
    jj = np.empty(nnz, dtype=np.int64)
    vv = np.empty(nnz, dtype=np.float64)
    seen = 0
    for lineno, raw in enumerate(lines[lineno:], start=lineno + 1):
        text = raw.strip()
        if not text or text.startswith("%"):
            continue
        if seen >= nnz:
            raise ParseError(f"more than {nnz} entries", lineno)
        parts = text.split()
        if len(parts) != 3:
            raise ParseError("entry must be 'row col value'", lineno)
        try:
            i, j, val = int(parts[0]), int(parts[1]), float(parts[2])
        except ValueError:
            raise ParseError("malformed entry", lineno) from None
        if not 1 <= i <= rows or not 1 <= j <= cols:
            raise ParseError(f"index ({i}, {j}) out of range", lineno)
        ii[seen], jj[seen], vv[seen] = i - 1, j - 1, val
        seen += 1
    if seen != nnz:
        raise ParseError(f"expected {nnz} entries, found {seen}", len(lines))

    order = np.lexsort((jj, ii))
    ii, jj, vv = ii[order], jj[order], vv[order]
    if nnz:
        new_group = np.empty(nnz, dtype=bool)
        new_group[0] = True
        new_group[1:] = (ii[1:] != ii[:-1]) | (jj[1:] != jj[:-1])
        starts = np.flatnonzero(new_group)
        vv = np.add.reduceat(vv, starts)
        ii, jj = ii[starts], jj[starts]
    row_ptr = np.zeros(rows + 1, dtype=np.int64)
    np.cumsum(np.bincount(ii, minlength=rows), out=row_ptr[1:])
    return CSRMatrix(rows, cols, row_ptr, jj, vv)


def write_matrix_market(s: CSRMatrix, path) -> None:
    """Write CSR as "coordinate real general" with exact value round-trip."""
    with open(path, "w", encoding="utf-8") as handle:
        handle.write("%%MatrixMarket matrix coordinate real general\n")
        handle.write(f"{s.rows} {s.cols} {s.nnz}\n")
        rows = _entry_rows(s)
        for i, j, v in zip(rows.tolist(), s.col_idx.tolist(), s.values.tolist()):
            handle.write(f"{i + 1} {j + 1} {v!r}\n")
