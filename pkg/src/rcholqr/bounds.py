"""Executable admissibility conditions, condition-number limits, and error
bound predictions for the factorization algorithms.

Everything here is plain arithmetic in the unit roundoff ``u`` (2^-53 by
default, overridable for sensitivity checks).  The limits are sufficient
conditions: a report with ``admissible=False`` does not stop an algorithm
from running, and the experiment families routinely succeed well past the
certified region.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import dense, norms, sparse
from .errors import AssumptionViolated, ParamError, RankDeficient
from .sketch import EmbeddingParams, combine_embedding

U = dense.UNIT_ROUNDOFF

CHOLQR2 = "cholqr2"
SR = "sr"
MR = "mr"

# Orthogonality-bound coefficients (conservative, alternate).  The composed
# sketch carries both a stated 6 a^2 and a derived 5 a^2 coefficient; the
# conservative one is what predicted_orth returns.
ORTH_COEFFS = {MR: (6.0, 5.0), SR: (5.0, 5.0), CHOLQR2: (6.0, 5.9)}


def gamma(n: int, u: float = U) -> float:
    """Accumulated-rounding factor n u / (1 - n u), defined while n u < 1."""
    nu = n * u
    if nu >= 1.0:
        raise ParamError(f"gamma undefined: n*u = {nu} >= 1")
    return nu / (1.0 - nu)


def _size_factor(m: int, n: int, u: float) -> float:
    return m * n * u + n * (n + 1) * u


def check_size(m: int, n: int, u: float = U) -> tuple[bool, bool]:
    """(m n u <= 1/64, n (n+1) u <= 1/64)."""
    if not m >= n >= 1:
        raise ParamError(f"need m >= n >= 1, got m={m}, n={n}")
    return (m * n * u <= 1.0 / 64.0, n * (n + 1) * u <= 1.0 / 64.0)


def _assumption_rhs(m: int, n: int, u: float) -> float:
    return (32.0 / 3.0) * math.sqrt(_size_factor(m, n, u)) + 2.0 / 87.0


def check_assumption_multi(eps_s: float, eps_b: float, m: int, n: int,
                           u: float = U) -> bool:
    """Embedding distortion leaves enough headroom for the rounding terms."""
    lhs = math.sqrt(1.0 - eps_s) / math.sqrt(1.0 + eps_b)
    return lhs >= _assumption_rhs(m, n, u)


def check_assumption_single(eps: float, m: int, n: int, u: float = U) -> bool:
    return check_assumption_multi(eps, eps, m, n, u)


def const_a(eps_s: float, eps_b: float) -> float:
    """Condition-number cap of the preconditioned matrix, composed sketch."""
    den = 0.87 * math.sqrt((1.0 - eps_s) / (1.0 + eps_b)) - 0.02
    if den <= 0.0:
        raise AssumptionViolated("distortion too large for the kappa(W) bound")
    return 1.16 / den


def const_b(eps: float) -> float:
    """Single-sketch analogue of const_a."""
    return const_a(eps, eps)


def const_d(a: float, m: int, n: int, u: float = U) -> float:
    return 5.0 * a * a * _size_factor(m, n, u)


def const_h(b: float, m: int, n: int, u: float = U) -> float:
    return const_d(b, m, n, u)


def sparse_weight(v: int, t1: int, t2: int, n: int) -> float:
    """sqrt(v t1 + n t2), the nonzero-mass term of the sparse model."""
    return math.sqrt(v * t1 + n * t2)


def gaussian_two_norm_bound(out_rows: int, in_rows: int, c_gauss: float = 2.0) -> float:
    """Probabilistic 2-norm cap 1 + C (sqrt(in/out) + 3/sqrt(out))."""
    return 1.0 + c_gauss * (math.sqrt(in_rows / out_rows) + 3.0 / math.sqrt(out_rows))


def countsketch_fro_norm(m: int) -> float:
    """Exact Frobenius norm of any one-nonzero-per-coordinate operator."""
    return math.sqrt(m)


def const_t(s1: int, s2: int, m: int, eps1: float,
            norm_o1_f: float | None = None, norm_o2_2: float | None = None,
            u: float = U, c_gauss: float = 2.0) -> float:
    """Sketching-stage rounding coefficient of the composed sketch."""
    o1 = countsketch_fro_norm(m) if norm_o1_f is None else norm_o1_f
    o2 = gaussian_two_norm_bound(s2, s1, c_gauss) if norm_o2_2 is None else norm_o2_2
    inner = math.sqrt(1.0 + eps1) + 1.1 * m * u * o1
    return 1.1 * s1 * u * math.sqrt(s2) * o2 * inner + 1.1 * m * u * o1 * o2


def const_k(s1: int, s2: int, m: int, eps1: float, v: int, t1: int, t2: int,
            n: int, norm_o1_f: float | None = None, norm_o2_2: float | None = None,
            u: float = U, c_gauss: float = 2.0) -> float:
    """const_t scaled by the nonzero-mass term (exact identity)."""
    return const_t(s1, s2, m, eps1, norm_o1_f, norm_o2_2, u, c_gauss) \
        * sparse_weight(v, t1, t2, n)


def const_t1(m: int, s: int, norm_o_2: float | None = None,
             u: float = U, c_gauss: float = 2.0) -> float:
    """Sketching-stage rounding coefficient of the single Gaussian sketch."""
    o2 = gaussian_two_norm_bound(s, m, c_gauss) if norm_o_2 is None else norm_o_2
    return 1.1 * m * u * math.sqrt(s) * o2


def const_k1(m: int, s: int, v: int, t1: int, t2: int, n: int,
             norm_o_2: float | None = None, u: float = U,
             c_gauss: float = 2.0) -> float:
    return const_t1(m, s, norm_o_2, u, c_gauss) * sparse_weight(v, t1, t2, n)


@dataclass
class SketchParams:
    """Sketch sizes and embedding parameters of one algorithm configuration."""

    mode: str  # CHOLQR2 | SR | MR
    e1: float = 0.0
    p1: float = 0.0
    e2: float = 0.0
    p2: float = 0.0
    s1: int = 0
    s2: int = 0

    @classmethod
    def multi(cls, e1: float, p1: float, e2: float, p2: float,
              s1: int, s2: int) -> "SketchParams":
        return cls(MR, e1, p1, e2, p2, s1, s2)

    @classmethod
    def single(cls, eps: float, p: float, s: int) -> "SketchParams":
        return cls(SR, e1=eps, p1=p, s1=s)

    @classmethod
    def none(cls) -> "SketchParams":
        return cls(CHOLQR2)

    def embedding(self) -> EmbeddingParams:
        if self.mode == MR:
            return combine_embedding(self.e1, self.p1, self.e2, self.p2)
        if self.mode == SR:
            return EmbeddingParams(self.e1, self.e1, self.p1)
        return EmbeddingParams(0.0, 0.0, 0.0)


def _two_term_min(first_den: float, pre: float, tail: float) -> float:
    return min(first_den, pre * tail)


def kappa_limit(algorithm: str, kind: str, profile: sparse.SparsityProfile,
                params: SketchParams, m: int, n: int, eta: float, j: float,
                u: float = U, c_gauss: float = 2.0) -> float:
    """Largest certified condition number for (algorithm, matrix class).

    Sparse-column classes use the entry-ratio route (through eta and the
    nonzero mass), everything else the g-norm route (through j); T1 inputs
    take the smaller of the two.  Falls to AssumptionViolated when the
    embedding distortion is too large to certify anything.
    """
    v, t1, t2 = profile.v, profile.t1, profile.t2
    sw = sparse_weight(v, t1, t2, n)
    emb = params.embedding()
    if algorithm == CHOLQR2:
        base = math.sqrt(m * u + (n + 1) * u)
        k2 = 1.0 / (10.5 * j * base)
        if kind == sparse.T1:
            k1 = 1.0 / (10.5 * eta * base * sw)
            return min(k1, k2)
        return k2
    if algorithm == MR:
        root_s = math.sqrt(1.0 - emb.eps_s)
        root_b = math.sqrt(1.0 + emb.eps_b)
        tail = math.sqrt((1.0 - emb.eps_s) / (params.s2 * u + (n + 1) * u))
        t = const_t(params.s1, params.s2, m, params.e1, u=u, c_gauss=c_gauss)
        k = t * sw
        w = _two_term_min(root_s / (10.5 * j * t),
                          1.0 / (10.5 * j * (root_b + t)), tail)
        if kind == sparse.T1:
            r = _two_term_min(root_s / (10.5 * eta * k),
                              1.0 / (10.5 * eta * (root_b * sw + k)), tail)
            return min(r, w)
        return w
    if algorithm == SR:
        eps, s = params.e1, params.s1
        root = math.sqrt(1.0 - eps)
        root_b = math.sqrt(1.0 + eps)
        tail = math.sqrt((1.0 - eps) / (s * u + (n + 1) * u))
        t1c = const_t1(m, s, u=u, c_gauss=c_gauss)
        k1c = t1c * sw
        w1 = _two_term_min(root / (10.5 * j * t1c),
                           1.0 / (10.5 * j * (root_b + t1c)), tail)
        if kind == sparse.T1:
            r1 = _two_term_min(root / (10.5 * eta * k1c),
                               1.0 / (10.5 * eta * (root_b * sw + k1c)), tail)
            return min(r1, w1)
        return w1
    raise ParamError(f"unknown algorithm {algorithm!r}")


def predicted_orth(algorithm: str, params: SketchParams, m: int, n: int,
                   u: float = U) -> float:
    """Orthogonality bound; the conservative coefficient when two are stated."""
    factor = _size_factor(m, n, u)
    coeff = ORTH_COEFFS[algorithm][0]
    if algorithm == MR:
        emb = params.embedding()
        a = const_a(emb.eps_s, emb.eps_b)
        return coeff * a * a * factor
    if algorithm == SR:
        b = const_b(params.e1)
        return coeff * b * b * factor
    return coeff * factor


def predicted_resid(algorithm: str, kind: str, profile: sparse.SparsityProfile,
                    params: SketchParams, m: int, n: int, norm_x_2: float,
                    eta: float, j: float, u: float = U,
                    c_gauss: float = 2.0) -> float:
    """Residual bound for (algorithm, matrix class), linear in ||X||_2."""
    v, t1, t2 = profile.v, profile.t1, profile.t2
    sw = sparse_weight(v, t1, t2, n)
    n_sqrt_n = n * math.sqrt(n)
    scale = u * norm_x_2
    if algorithm == CHOLQR2:
        if kind == sparse.T1:
            return (2.52 * eta * sw + 1.34 * math.sqrt(n)) * n_sqrt_n * scale
        return (2.52 * j + 1.34 * math.sqrt(n)) * n_sqrt_n * scale
    emb = params.embedding()
    if algorithm == MR:
        t = const_t(params.s1, params.s2, m, params.e1, u=u, c_gauss=c_gauss)
        amp = const_a(emb.eps_s, emb.eps_b)
        grow = const_d(amp, m, n, u)
    else:
        t = const_t1(m, params.s1, u=u, c_gauss=c_gauss)
        amp = const_b(params.e1)
        grow = const_h(amp, m, n, u)
    root_s = math.sqrt(1.0 - emb.eps_s)
    root_b = math.sqrt(1.0 + emb.eps_b)
    lead = (1.32 + 1.34 * math.sqrt(1.0 + grow)) / root_s
    tail = 1.34 * math.sqrt(1.0 + grow) / root_s
    if kind == sparse.T1:
        k = t * sw
        return lead * (root_b * sw + k) * eta * n_sqrt_n * scale \
            + tail * (root_b + k * eta) * n * n * scale
    return lead * (root_b + t) * j * n_sqrt_n * scale \
        + tail * (root_b + t * j) * n * n * scale


def complexity_estimate(algorithm: str, m: int, n: int,
                        s1: int = 0, s2: int = 0) -> int:
    """Leading-term flop count of the stage that differs between algorithms."""
    if algorithm == MR:
        return m * n + s2 * s1 * n + s2 * n * n
    if algorithm == SR:
        return s1 * m * n + s1 * n * n
    if algorithm == CHOLQR2:
        return m * n * n
    raise ParamError(f"unknown algorithm {algorithm!r}")


@dataclass
class BoundReport:
    """Evaluated conditions and predictions for one (matrix, algorithm) pair."""

    algorithm: str
    matrix_class: str
    m: int
    n: int
    size_ok: tuple[bool, bool]
    assumption_ok: bool
    kappa_limit: float
    kappa_measured: float
    admissible: bool
    constants: dict[str, float] = field(default_factory=dict)
    predicted_orth: float = 0.0
    predicted_resid: float = 0.0


def build_bound_report(x, algorithm: str, params: SketchParams,
                       dense_fraction: float = 0.25, u: float = U,
                       c_gauss: float = 2.0) -> BoundReport:
    """Profile a matrix and evaluate every condition and bound for one run."""
    if isinstance(x, sparse.CSRMatrix):
        csr = x
        xd = sparse.to_dense(x)
    else:
        xd = dense.as_matrix(x)
        csr = sparse.from_dense(xd)
    m, n = xd.shape
    profile = sparse.profile_sparsity(csr, dense_fraction)
    size_ok = check_size(m, n, u)
    emb = params.embedding()
    if algorithm == MR:
        assumption_ok = check_assumption_multi(emb.eps_s, emb.eps_b, m, n, u)
    elif algorithm == SR:
        assumption_ok = check_assumption_single(params.e1, m, n, u)
    else:
        assumption_ok = True
    # one spectrum measurement feeds ||X||_2, kappa, eta, and j
    sv = dense.singular_values(xd)
    norm_x = float(sv[0])
    if norm_x == 0.0:
        raise RankDeficient("zero matrix has no condition number")
    eta_m = float(np.max(np.abs(xd))) / norm_x
    j_m = norms.g_norm(xd) / norm_x
    kappa = float(sv[0] / sv[-1]) if sv[-1] >= 1e-300 else math.inf
    limit = kappa_limit(algorithm, profile.kind, profile, params, m, n,
                        eta_m, j_m, u, c_gauss)
    constants = {
        "gamma_n": gamma(n, u),
        "eta": eta_m,
        "j": j_m,
    }
    if algorithm == MR:
        constants["a"] = const_a(emb.eps_s, emb.eps_b)
        constants["d"] = const_d(constants["a"], m, n, u)
        constants["t"] = const_t(params.s1, params.s2, m, params.e1,
                                 u=u, c_gauss=c_gauss)
        constants["k"] = constants["t"] * sparse_weight(
            profile.v, profile.t1, profile.t2, n)
    elif algorithm == SR:
        constants["b"] = const_b(params.e1)
        constants["h"] = const_h(constants["b"], m, n, u)
        constants["t1"] = const_t1(m, params.s1, u=u, c_gauss=c_gauss)
        constants["k1"] = constants["t1"] * sparse_weight(
            profile.v, profile.t1, profile.t2, n)
    admissible = bool(size_ok[0] and size_ok[1] and assumption_ok
                      and kappa <= limit)
    return BoundReport(
        algorithm=algorithm,
        matrix_class=profile.kind,
        m=m,
        n=n,
        size_ok=size_ok,
        assumption_ok=assumption_ok,
        kappa_limit=limit,
        kappa_measured=kappa,
        admissible=admissible,
        constants=constants,
        predicted_orth=predicted_orth(algorithm, params, m, n, u),
        predicted_resid=predicted_resid(algorithm, profile.kind, profile,
                                        params, m, n, norm_x, eta_m, j_m,
                                        u, c_gauss),
    )
