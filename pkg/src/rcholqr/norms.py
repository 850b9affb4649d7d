"""Frobenius, spectral, and max-column-norm ("g") norms plus derived ratios."""

from __future__ import annotations

import numpy as np

from . import dense, sparse
from .errors import UndefinedRatio


def _as_dense(x) -> np.ndarray:
    if isinstance(x, sparse.CSRMatrix):
        return sparse.to_dense(x)
    return dense.as_matrix(x)


def fro_norm(x) -> float:
    x = _as_dense(x)
    return float(np.sqrt(dense.fixed_sum(x * x)))


def two_norm(x) -> float:
    """Largest singular value (Gram eigenvalues; wide inputs transposed)."""
    x = _as_dense(x)
    if x.shape[0] < x.shape[1]:
        x = x.T
    return float(dense.singular_values(x)[0])


def g_bracket(x) -> float:
    """Largest column 2-norm."""
    x = _as_dense(x)
    return float(np.sqrt(np.max(dense.fixed_sum_rows(x * x))))


def g_norm(x) -> float:
    """sqrt(cols) times the largest column 2-norm; a true matrix norm."""
    x = _as_dense(x)
    return float(np.sqrt(x.shape[1])) * g_bracket(x)


def eta(x) -> float:
    """Largest entry magnitude relative to the spectral norm, in (0, 1]."""
    x = _as_dense(x)
    denom = two_norm(x)
    if denom == 0.0:
        raise UndefinedRatio("eta is undefined for the zero matrix")
    return float(np.max(np.abs(x))) / denom


def j_ratio(x) -> float:
    """g-norm over spectral norm, in [1, sqrt(cols)]."""
    x = _as_dense(x)
    denom = two_norm(x)
    if denom == 0.0:
        raise UndefinedRatio("j is undefined for the zero matrix")
    return g_norm(x) / denom
