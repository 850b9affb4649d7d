"""Random embeddings: CountSketch, Gaussian sketch, and their composition.

Operators are built from ``numpy``'s counter-based Philox generator, so a
seed fully determines an operator independently of platform or call order.
The Gaussian entries are scaled by 1/sqrt(s), which makes E||Omega x||^2 =
||x||^2 and is what the subspace-embedding guarantees require.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import floor, sqrt

import numpy as np

from . import dense, sparse
from .errors import DimensionError, ParamError

_MASK64 = (1 << 64) - 1


def mix_seed(master: int, index: int) -> int:
    """Public splitmix64-style mixer; derived streams never overlap.

    Used both for per-trial seeds (seed_i = mix_seed(master, i), so adding
    trials never changes earlier ones) and for the sub-operators of a
    composed sketch.
    """
    z = (master + 0x9E3779B97F4A7C15 * (index + 1)) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


@dataclass
class CountSketchOp:
    """One signed nonzero per input coordinate; Frobenius norm sqrt(m) exactly."""

    out_rows: int
    in_rows: int
    row_of: np.ndarray
    sign_of: np.ndarray
    seed: int


@dataclass
class GaussianSketchOp:
    out_rows: int
    in_rows: int
    entries: np.ndarray
    seed: int


@dataclass
class MultiSketchOp:
    """CountSketch followed by a Gaussian sketch."""

    count: CountSketchOp
    gauss: GaussianSketchOp

    def __post_init__(self):
        if self.gauss.in_rows != self.count.out_rows:
            raise DimensionError("stage dimensions do not chain")
        if not self.gauss.out_rows <= self.count.out_rows <= self.count.in_rows:
            raise ParamError("need s2 <= s1 <= m")


@dataclass
class EmbeddingParams:
    """Distortion interval and failure probability of a (composed) sketch."""

    eps_s: float
    eps_b: float
    p_f: float


def build_countsketch(s1: int, m: int, seed: int) -> CountSketchOp:
    if not 1 <= s1 <= m:
        raise ParamError(f"need 1 <= s1 <= m, got s1={s1}, m={m}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    row_of = rng.integers(0, s1, size=m, dtype=np.int64)
    sign_of = 2.0 * rng.integers(0, 2, size=m, dtype=np.int64) - 1.0
    return CountSketchOp(s1, m, row_of, sign_of, seed)


def build_gaussian(s: int, m_in: int, seed: int) -> GaussianSketchOp:
    if not 1 <= s <= m_in:
        raise ParamError(f"need 1 <= s <= m_in, got s={s}, m_in={m_in}")
    rng = np.random.Generator(np.random.Philox(key=seed))
    entries = rng.standard_normal((s, m_in)) / sqrt(s)
    return GaussianSketchOp(s, m_in, entries, seed)


def build_multisketch(s1: int, s2: int, m: int, seed: int) -> MultiSketchOp:
    """Independent stages from sub-seeds mix_seed(seed, 0) and mix_seed(seed, 1)."""
    if not 1 <= s2 <= s1 <= m:
        raise ParamError(f"need 1 <= s2 <= s1 <= m, got s2={s2}, s1={s1}, m={m}")
    return MultiSketchOp(
        count=build_countsketch(s1, m, mix_seed(seed, 0)),
        gauss=build_gaussian(s2, s1, mix_seed(seed, 1)),
    )


def apply_countsketch(op: CountSketchOp, x) -> np.ndarray:
    """Accumulate signed input rows into their target rows, in row order.

    Costs O(nnz) for CSR input.
    """
    out_cols = x.cols if isinstance(x, sparse.CSRMatrix) else None
    if out_cols is not None:
        if x.rows != op.in_rows:
            raise DimensionError(f"operator expects {op.in_rows} rows, got {x.rows}")
        out = np.zeros((op.out_rows, out_cols))
        if x.nnz:
            rows = np.repeat(np.arange(x.rows, dtype=np.int64), np.diff(x.row_ptr))
            np.add.at(out, (op.row_of[rows], x.col_idx), op.sign_of[rows] * x.values)
        return out
    x = dense.as_matrix(x)
    if x.shape[0] != op.in_rows:
        raise DimensionError(f"operator expects {op.in_rows} rows, got {x.shape[0]}")
    out = np.zeros((op.out_rows, x.shape[1]))
    np.add.at(out, op.row_of, op.sign_of[:, None] * x)
    return out


def apply_gaussian(op: GaussianSketchOp, x) -> np.ndarray:
    if isinstance(x, sparse.CSRMatrix):
        x = sparse.to_dense(x)
    x = dense.as_matrix(x)
    if x.shape[0] != op.in_rows:
        raise DimensionError(f"operator expects {op.in_rows} rows, got {x.shape[0]}")
    return dense.matmul(op.entries, x)


def apply_multi(op: MultiSketchOp, x) -> np.ndarray:
    return apply_gaussian(op.gauss, apply_countsketch(op.count, x))


def densify(op) -> np.ndarray:
    """Operator as an explicit dense matrix (test and measurement aid)."""
    if isinstance(op, CountSketchOp):
        out = np.zeros((op.out_rows, op.in_rows))
        out[op.row_of, np.arange(op.in_rows)] = op.sign_of
        return out
    if isinstance(op, GaussianSketchOp):
        return op.entries.copy()
    if isinstance(op, MultiSketchOp):
        return dense.matmul(densify(op.gauss), densify(op.count))
    raise TypeError(f"not a sketch operator: {type(op)!r}")


def _tolerant_ceil(value: float) -> int:
    """Ceiling that forgives float dust just above an integer."""
    base = floor(value)
    if value - base <= 1e-9 * max(1.0, abs(value)):
        return int(base)
    return int(base) + 1


def countsketch_min_rows(n: int, eps: float, p: float) -> int:
    """Smallest admissible CountSketch size: ceil((n^2 + n) / (eps^2 p))."""
    if not 0.0 < eps < 1.0 or not 0.0 < p < 1.0:
        raise ParamError("need 0 < eps < 1 and 0 < p < 1")
    if n < 1:
        raise ParamError("need n >= 1")
    return _tolerant_ceil((n * n + n) / (eps * eps * p))


def gaussian_rows_hint(n: int, y: float) -> int:
    """Practical Gaussian sketch size ceil(y * n) for an oversampling y >= 1."""
    if y < 1.0:
        raise ParamError("need y >= 1")
    return _tolerant_ceil(y * n)


def combine_embedding(e1: float, p1: float, e2: float, p2: float) -> EmbeddingParams:
    """Distortion of two independently drawn sketches applied in sequence.

    eps_s = e1 + e2 - e1 e2 bounds the shrink side, eps_b = e1 + e2 + e1 e2
    the stretch side, and p_f = p1 + p2 - p1 p2 the failure probability.
    """
    return EmbeddingParams(
        eps_s=(e1 + e2) - e1 * e2,
        eps_b=(e1 + e2) + e1 * e2,
        p_f=(p1 + p2) - p1 * p2,
    )


def _apply_any(op, x) -> np.ndarray:
    if isinstance(op, CountSketchOp):
        return apply_countsketch(op, x)
    if isinstance(op, GaussianSketchOp):
        return apply_gaussian(op, x)
    if isinstance(op, MultiSketchOp):
        return apply_multi(op, x)
    raise TypeError(f"not a sketch operator: {type(op)!r}")


def verify_embedding(op, x, eps, trials: int, seed: int) -> float:
    """Empirical frequency of the two-sided norm-preservation inequality.

    Draws ``trials`` random coefficient vectors c, forms vectors X c from the
    column space of ``x``, and counts how often
    sqrt(1 - eps_lo) ||Xc|| <= ||Op Xc|| <= sqrt(1 + eps_hi) ||Xc||.
    ``eps`` is a scalar, or an (eps_lo, eps_hi) pair for composed sketches.
    """
    if trials < 1:
        raise ParamError("need trials >= 1")
    if isinstance(eps, EmbeddingParams):
        lo, hi = eps.eps_s, eps.eps_b
    elif np.ndim(eps) == 0:
        lo = hi = float(eps)
    else:
        lo, hi = (float(e) for e in eps)
    x = sparse.to_dense(x) if isinstance(x, sparse.CSRMatrix) else dense.as_matrix(x)
    rng = np.random.Generator(np.random.Philox(key=seed))
    coeff = rng.standard_normal((x.shape[1], trials))
    vectors = dense.matmul(x, coeff)
    images = _apply_any(op, vectors)
    nx = np.sqrt(dense.fixed_sum_rows(vectors * vectors))
    ny = np.sqrt(dense.fixed_sum_rows(images * images))
    ok = (np.sqrt(1.0 - lo) * nx <= ny) & (ny <= np.sqrt(1.0 + hi) * nx)
    return float(np.count_nonzero(ok)) / trials
