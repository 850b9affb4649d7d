"""Dense kernels with a fixed, platform-independent summation scheme.

Matrices are plain C-ordered float64 ``numpy`` arrays.  Every reduction in
``matmul``/``gram`` (and the norm helpers built on :func:`fixed_sum`) uses the
same deterministic scheme: the summation axis is cut into 32-wide blocks,
each block is accumulated left to right, and block partials are combined by
a binary tree whose shape depends only on the operand sizes.  Results are
therefore bit-reproducible across runs, thread counts, and BLAS builds,
while rounding error grows like the block size plus the tree depth instead
of linearly in the reduced dimension.
"""

from __future__ import annotations

import numpy as np

from .errors import (
    CholeskyBreakdown,
    DimensionError,
    RankDeficient,
    SingularTriangular,
    SymmetryError,
)

UNIT_ROUNDOFF = 2.0 ** -53

_BLOCK = 32


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Validate and convert to a 2-D float64 array with finite entries."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise DimensionError(f"{name} must be 2-D, got shape {a.shape}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise DimensionError(f"{name} must be non-empty, got shape {a.shape}")
    if not np.isfinite(a).all():
        raise ValueError(f"{name} contains non-finite entries")
    return a


def _tree_fold(stack: list[np.ndarray]):
    total = stack[-1]
    for part in stack[-2::-1]:
        total = part + total
    return total


def _matmul_core(at: np.ndarray, b: np.ndarray) -> np.ndarray:
    """sum_l outer(at[l], b[l]) under the fixed blocked-pairwise scheme.

    ``at`` is the transposed left operand, so both inputs are walked along
    contiguous rows.  Small outputs take a cumsum fast path; both paths
    perform the identical sequence of additions, so the choice (a function
    of shape only) never changes a bit of the result.
    """
    k, m = at.shape
    n = b.shape[1]
    small = m * n <= 4096
    tmp = None if small else np.empty((m, n))
    levels: list[int] = []
    stack: list[np.ndarray] = []
    for lo in range(0, k, _BLOCK):
        hi = min(k, lo + _BLOCK)
        if small:
            prods = at[lo:hi, :, None] * b[lo:hi, None, :]
            np.cumsum(prods, axis=0, out=prods)
            acc = prods[-1].copy()
        else:
            acc = at[lo][:, None] * b[lo]
            for l in range(lo + 1, hi):
                np.multiply(at[l][:, None], b[l], out=tmp)
                acc += tmp
        level = 0
        while levels and levels[-1] == level:
            levels.pop()
            acc = stack.pop() + acc
            level += 1
        levels.append(level)
        stack.append(acc)
    return _tree_fold(stack)


def matmul(a, b) -> np.ndarray:
    """Matrix product with the fixed deterministic summation scheme."""
    a = as_matrix(a, "left operand")
    b = as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise DimensionError(
            f"inner dimensions disagree: {a.shape} x {b.shape}"
        )
    return _matmul_core(np.ascontiguousarray(a.T), np.ascontiguousarray(b))


def gram(x) -> np.ndarray:
    """X^T X, exactly symmetric (upper triangle computed, then mirrored)."""
    x = as_matrix(x)
    if x.shape[0] < x.shape[1]:
        raise DimensionError(f"need rows >= cols, got shape {x.shape}")
    g = _matmul_core(x, x)
    return np.triu(g) + np.triu(g, 1).T


def fixed_sum(v) -> float:
    """Deterministic sum of a 1-D array (same blocked-pairwise scheme)."""
    v = np.asarray(v, dtype=np.float64).ravel()
    n = v.size
    if n == 0:
        return 0.0
    blocks = -(-n // _BLOCK)
    w = np.zeros(blocks * _BLOCK)
    w[:n] = v
    w = w.reshape(blocks, _BLOCK)
    acc = w[:, 0].copy()
    for l in range(1, _BLOCK):
        acc += w[:, l]
    while acc.size > 1:
        if acc.size % 2:
            acc = np.concatenate([acc, [0.0]])
        acc = acc[0::2] + acc[1::2]
    return float(acc[0])


def fixed_sum_rows(m: np.ndarray) -> np.ndarray:
    """Column-wise deterministic sums of a 2-D array (axis 0)."""
    rows, cols = m.shape
    blocks = -(-rows // _BLOCK)
    w = np.zeros((blocks * _BLOCK, cols))
    w[:rows] = m
    w = w.reshape(blocks, _BLOCK, cols)
    acc = w[:, 0, :].copy()
    for l in range(1, _BLOCK):
        acc += w[:, l, :]
    while acc.shape[0] > 1:
        if acc.shape[0] % 2:
            acc = np.concatenate([acc, np.zeros((1, cols))])
        acc = acc[0::2] + acc[1::2]
    return acc[0]


def cholesky(g) -> np.ndarray:
    """Upper-triangular R with R^T R = G for symmetric positive definite G.

    Only the upper triangle of ``g`` is referenced.  Raises
    :class:`CholeskyBreakdown` with the pivot index as soon as a pivot is
    non-positive or non-finite; no shifting or perturbation is attempted.
    """
    g = as_matrix(g, "gram matrix")
    n = g.shape[0]
    if g.shape[1] != n:
        raise DimensionError(f"expected square matrix, got {g.shape}")
    a = np.triu(g).copy()
    r = np.zeros((n, n))
    for k in range(n):
        pivot = a[k, k]
        if not np.isfinite(pivot) or pivot <= 0.0:
            raise CholeskyBreakdown(k)
        d = np.sqrt(pivot)
        r[k, k] = d
        r[k, k + 1:] = a[k, k + 1:] / d
        a[k + 1:, k + 1:] -= np.outer(r[k, k + 1:], r[k, k + 1:])
    return r


def trisolve_right(x, r) -> np.ndarray:
    """Solve W R = X for W by per-row back-substitution.

    ``r`` is upper triangular; the strictly lower part is never read.
    """
    x = as_matrix(x)
    r = as_matrix(r, "triangular factor")
    n = x.shape[1]
    if r.shape != (n, n):
        raise DimensionError(f"factor shape {r.shape} does not match {x.shape}")
    diag = np.diagonal(r)
    if np.any(diag == 0.0):
        raise SingularTriangular("zero diagonal entry in triangular factor")
    w = np.empty_like(x)
    for j in range(n):
        acc = x[:, j].copy()
        for l in range(j):
            acc -= w[:, l] * r[l, j]
        w[:, j] = acc / diag[j]
    return w


def sym_eigenvalues(s, max_sweeps: int = 100) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, descending, by cyclic Jacobi.

    Sweeps run until the off-diagonal Frobenius mass drops below
    1e-14 * ||S||_F or ``max_sweeps`` is hit.
    """
    s = as_matrix(s, "symmetric matrix")
    n = s.shape[0]
    if s.shape[1] != n:
        raise DimensionError(f"expected square matrix, got {s.shape}")
    fro = float(np.sqrt(np.sum(s * s)))
    if float(np.sqrt(np.sum((s - s.T) ** 2))) > 1e-12 * max(fro, 1e-300):
        raise SymmetryError("input is not symmetric to 1e-12 relative")
    a = 0.5 * (s + s.T)
    threshold_sq = (1e-14 * fro) ** 2
    for _ in range(max_sweeps):
        off_sq = float(np.sum(a * a) - np.sum(np.diagonal(a) ** 2))
        if not off_sq > threshold_sq:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                diff = a[q, q] - a[p, p]
                if abs(apq) < 1e-36 * abs(diff):
                    t = apq / diff
                else:
                    theta = diff / (2.0 * apq)
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                sn = t * c
                rp = a[p, :].copy()
                rq = a[q, :].copy()
                a[p, :] = c * rp - sn * rq
                a[q, :] = sn * rp + c * rq
                cp = a[:, p].copy()
                cq = a[:, q].copy()
                a[:, p] = c * cp - sn * cq
                a[:, q] = sn * cp + c * cq
                a[p, q] = 0.0
                a[q, p] = 0.0
    return np.sort(np.diagonal(a).copy())[::-1]


def singular_values(x) -> np.ndarray:
    """Singular values (descending) via eigenvalues of the Gram matrix.

    The squaring limits resolution: values below about
    sqrt(u) * ||X||_2 are not trustworthy, so condition numbers are only
    measurable up to roughly 1e8.
    """
    x = as_matrix(x)
    lam = sym_eigenvalues(gram(x))
    return np.sqrt(np.maximum(lam, 0.0))


def cond2(x) -> float:
    """2-norm condition number sigma_1 / sigma_n; see singular_values."""
    sv = singular_values(x)
    if sv[-1] < 1e-300:
        raise RankDeficient("smallest singular value is numerically zero")
    return float(sv[0] / sv[-1])
