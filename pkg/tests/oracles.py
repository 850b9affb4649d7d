"""Independent reference implementations used only by the tests."""

from __future__ import annotations

import math

import numpy as np

BLOCK = 32


def matmul_compensated(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exactly rounded sums of floating products, via math.fsum."""
    m, k = a.shape
    n = b.shape[1]
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            out[i, j] = math.fsum(a[i, l] * b[l, j] for l in range(k))
    return out


def matmul_reference(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Scalar replay of the production summation scheme.

    32-wide blocks accumulated left to right, block partials merged by the
    streaming binary-counter pairwise stack, leftovers folded newest-first.
    Must agree bit for bit with rcholqr.dense.matmul.
    """
    m, k = a.shape
    n = b.shape[1]
    out = np.empty((m, n))
    for i in range(m):
        for j in range(n):
            levels: list[int] = []
            stack: list[float] = []
            for lo in range(0, k, BLOCK):
                acc = a[i, lo] * b[lo, j]
                for l in range(lo + 1, min(k, lo + BLOCK)):
                    acc += a[i, l] * b[l, j]
                level = 0
                while levels and levels[-1] == level:
                    levels.pop()
                    acc = stack.pop() + acc
                    level += 1
                levels.append(level)
                stack.append(acc)
            total = stack[-1]
            for part in stack[-2::-1]:
                total = part + total
            out[i, j] = total
    return out


def householder_qr(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """LAPACK Householder QR, normalized to a positive R diagonal."""
    q, r = np.linalg.qr(x)
    signs = np.sign(np.diagonal(r))
    signs = np.where(signs == 0.0, 1.0, signs)
    return q * signs, signs[:, None] * r
