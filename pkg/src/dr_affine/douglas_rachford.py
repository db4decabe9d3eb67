"""
Douglas-Rachford splitting for two affine subspaces U, V (not necessarily
intersecting).

The operator ``T = Id - P_U + P_V R_U`` is materialised as an explicit
:class:`~dr_affine.affine.AffineMap`. Its governing sequence ``T^n x``
drifts off to infinity when U and V are disjoint, but the shadow
``P_U T^n x`` converges linearly (rate = cosine of the Friedrichs angle) to
the projection of ``x`` onto the normal solutions ``Z_v = U cap (v + V)``,
where ``v`` is the gap vector.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .affine import AffineMap, fixed_points, inner_shift, outer_shift
from .errors import DimensionError, InvariantError
from .subspace import (
    EPS_ORTH,
    AffineSubspace,
    as_vector,
    gap_vector,
    intersect,
    orth_complement,
    orthonormalize,
    parallel_sum,
    project,
    translate,
)

__all__ = [
    "DrProblem",
    "IterationTrace",
    "NormalSolutionData",
    "dr_map",
    "normal_dr_map",
    "run",
    "normal_solutions",
    "friedrichs_cosine",
    "best_approximation",
    "rate_estimate",
    "displacement_check",
    "dual_shadow",
    "ERROR_FLOOR",
]

#: Shadow errors at or below this are treated as machine noise.
ERROR_FLOOR = 1e-13
#: Minimum number of points in the rate-fitting window.
MIN_FIT_POINTS = 10


@dataclass(frozen=True, eq=False)
class DrProblem:
    U: AffineSubspace
    V: AffineSubspace
    x0: np.ndarray

    def __post_init__(self):
        if self.U.dim != self.V.dim:
            raise DimensionError(f"U has dimension {self.U.dim}, V has {self.V.dim}")
        object.__setattr__(self, "x0", as_vector(self.x0, dim=self.U.dim, name="x0"))

    @property
    def dim(self):
        return self.U.dim


@dataclass(frozen=True, eq=False)
class IterationTrace:
    """Rows are indexed by the iteration counter ``n = 0..N``.

    Attributes
    ----------
    governing : ndarray (N+1, dim)
        ``T^n x0``.
    shadow : ndarray (N+1, dim)
        ``P_U T^n x0``.
    shadow_drift : ndarray (N+1, dim)
        ``P_U (T^n x0 + n v)``.
    shadow_shifted : ndarray (N+1, dim)
        ``P_U (T_{-v})^n x0`` iterated with the normal DR map.
    displacement : ndarray (N+1, dim)
        ``T^n x0 - T^{n+1} x0``.
    shadow_error : ndarray (N+1,)
        ``|shadow_n - limit|``.
    gap, limit : ndarray
        The gap vector and the shadow limit ``P_{Z_v} x0``.
    """

    governing: np.ndarray
    shadow: np.ndarray
    shadow_drift: np.ndarray
    shadow_shifted: np.ndarray
    displacement: np.ndarray
    shadow_error: np.ndarray
    gap: np.ndarray
    limit: np.ndarray

    def __len__(self):
        return self.governing.shape[0]

    @property
    def identity_gap(self):
        """Per-step largest pairwise distance among the three shadows."""
        a, b, c = self.shadow, self.shadow_drift, self.shadow_shifted
        return np.max(
            np.stack(
                [
                    np.linalg.norm(a - b, axis=1),
                    np.linalg.norm(a - c, axis=1),
                    np.linalg.norm(b - c, axis=1),
                ]
            ),
            axis=0,
        )

    @property
    def displacement_residual(self):
        """``|T^n x0 - T^{n+1} x0 - v|`` per step."""
        return np.linalg.norm(self.displacement - self.gap, axis=1)


@dataclass(frozen=True, eq=False)
class NormalSolutionData:
    v: np.ndarray
    Z_v: AffineSubspace
    K_v: AffineSubspace
    fix_shifted: AffineSubspace
    cF: float


def _projector_map(S):
    P = S.projector()
    return AffineMap(P, S.anchor - P @ S.anchor, check=False)


def _compose(F, G):
    """``F o G``."""
    return AffineMap(F.linear @ G.linear, F.linear @ G.offset + F.offset, check=False)


def _combine(*terms):
    """Linear combination ``sum c_i F_i`` of affine maps given as (c, F)."""
    n = terms[0][1].dim
    L = np.zeros((n, n))
    b = np.zeros(n)
    for c, F in terms:
        L = L + c * F.linear
        b = b + c * F.offset
    return AffineMap(L, b, check=False)


def dr_map(U, V):
    """The DR operator ``T_{U,V} = Id - P_U + P_V R_U`` as an affine map.

    It is assembled twice, once from the reflector form and once from the
    expanded form ``Id - P_U - P_V + 2 P_V P_U``; the two must agree to
    1e-12 (relative to the anchor scale).
    """
    if U.dim != V.dim:
        raise DimensionError(f"U has dimension {U.dim}, V has {V.dim}")
    n = U.dim
    I = AffineMap.identity(n)
    PU, PV = _projector_map(U), _projector_map(V)
    RU = _combine((2.0, PU), (-1.0, I))
    T = _combine((1.0, I), (-1.0, PU), (1.0, _compose(PV, RU)))
    T2 = _combine((1.0, I), (-1.0, PU), (-1.0, PV), (2.0, _compose(PV, PU)))
    scale = 1.0 + np.linalg.norm(U.anchor) + np.linalg.norm(V.anchor)
    if not T.allclose(T2, atol=1e-12 * scale):
        raise InvariantError("the two DR operator formulas disagree")
    return AffineMap(T.linear, T.offset)


def normal_dr_map(U, V, v=None):
    """``T_{U, v+V}``, which equals the inner and outer normal shifts
    ``T_{-v} = v + T`` of ``T = T_{U,V}``."""
    v = gap_vector(U, V) if v is None else as_vector(v, dim=U.dim, name="v")
    TN = dr_map(U, translate(V, v))
    T = dr_map(U, V)
    scale = 1.0 + np.linalg.norm(U.anchor) + np.linalg.norm(V.anchor)
    for shifted in (inner_shift(T, -v), outer_shift(T, -v)):
        if not TN.allclose(shifted, atol=1e-10 * scale):
            raise InvariantError("normal DR map differs from the shifted DR map")
    return TN


def friedrichs_cosine(P, Q):
    """Cosine of the Friedrichs angle between two linear subspaces.

    Both subspaces are reduced modulo ``W = P cap Q`` by projecting their
    bases onto ``W^perp`` and re-orthonormalizing; the cosine is the largest
    singular value of the cross-Gram matrix of the reduced bases (0 when
    either reduced space is trivial).
    """
    if not (P.is_linear and Q.is_linear):
        raise ValueError("friedrichs_cosine needs linear subspaces")
    if P.dim != Q.dim:
        raise DimensionError(f"dimension mismatch: {P.dim} vs {Q.dim}")
    W = intersect(P, Q)
    Wb = W.basis

    def reduce(S):
        rows = S.basis - (S.basis @ Wb.T) @ Wb
        return orthonormalize(rows, tol=EPS_ORTH, dim=S.dim)

    Pr, Qr = reduce(P), reduce(Q)
    if not (Pr.shape[0] and Qr.shape[0]):
        return 0.0
    s = np.linalg.svd(Pr @ Qr.T, compute_uv=False)
    return float(min(max(s[0], 0.0), 1.0))


def normal_solutions(U, V):
    """Gap vector, normal and dual normal solutions, ``Fix T_{-v}`` and the
    Friedrichs cosine of the pair."""
    v = gap_vector(U, V)
    Zv = intersect(U, translate(V, v))
    if Zv is None:
        raise InvariantError("U cap (v + V) is empty; the gap vector is wrong")
    Kv = orth_complement(parallel_sum(U, V))
    fix = fixed_points(normal_dr_map(U, V, v))
    if fix is None:
        raise InvariantError("the normal DR map has no fixed points")
    cF = friedrichs_cosine(U.parallel, V.parallel)
    return NormalSolutionData(v=v, Z_v=Zv, K_v=Kv, fix_shifted=fix, cF=cF)


def best_approximation(U, V, x):
    """``P_{Z_v} x``: the limit of the DR shadows, computed directly."""
    x = as_vector(x, dim=U.dim)
    v = gap_vector(U, V)
    Zv = intersect(U, translate(V, v))
    if Zv is None:
        raise InvariantError("U cap (v + V) is empty; the gap vector is wrong")
    return project(Zv, x)


def run(problem, n_iters, limit=None, rtol=1e-9):
    """Iterate the DR operator from ``problem.x0``.

    Records the governing sequence, the shadow computed three ways, and the
    displacement. Raises :class:`InvariantError` when the three shadow
    expressions drift apart by more than ``rtol * (1 + |x0|)``.

    Parameters
    ----------
    problem : DrProblem
    n_iters : int
        Number of steps N (the trace has N+1 rows).
    limit : array_like, optional
        Known shadow limit; defaults to :func:`best_approximation`.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be positive")
    U, V, x0 = problem.U, problem.V, problem.x0
    T = dr_map(U, V)
    v = gap_vector(U, V)
    TN = normal_dr_map(U, V, v)
    limit = best_approximation(U, V, x0) if limit is None else as_vector(limit, dim=U.dim, name="limit")

    N = n_iters
    gov = np.empty((N + 2, U.dim))
    shifted = np.empty((N + 1, U.dim))
    gov[0] = x0
    shifted[0] = x0
    for k in range(N + 1):
        gov[k + 1] = T.linear @ gov[k] + T.offset
        if k < N:
            shifted[k + 1] = TN.linear @ shifted[k] + TN.offset

    PU = U.projector()
    cU = U.anchor - PU @ U.anchor
    counter = np.arange(N + 1)[:, None]
    governing = gov[: N + 1]
    shadow = governing @ PU.T + cU
    shadow_drift = (governing + counter * v) @ PU.T + cU
    shadow_shifted = shifted @ PU.T + cU

    trace = IterationTrace(
        governing=governing,
        shadow=shadow,
        shadow_drift=shadow_drift,
        shadow_shifted=shadow_shifted,
        displacement=gov[: N + 1] - gov[1:],
        shadow_error=np.linalg.norm(shadow - limit, axis=1),
        gap=v,
        limit=limit,
    )
    worst = trace.identity_gap.max()
    if worst > rtol * (1.0 + np.linalg.norm(x0)):
        raise InvariantError(f"shadow expressions disagree by {worst:.3e}")
    return trace


def rate_estimate(trace, limit=None, floor=ERROR_FLOOR):
    """Empirical linear rate of the shadow sequence.

    Fits ``log |shadow_n - limit|`` against ``n`` by least squares over the
    last half of the steps whose error exceeds `floor` (at least
    ``MIN_FIT_POINTS`` of them) and returns ``exp(slope)``. Returns 0 when
    fewer than ``MIN_FIT_POINTS`` steps are above the floor.
    """
    if limit is None:
        err = trace.shadow_error
    else:
        err = np.linalg.norm(trace.shadow - as_vector(limit, dim=trace.shadow.shape[1]), axis=1)
    idx = np.flatnonzero(err > floor)
    if idx.size < MIN_FIT_POINTS:
        return 0.0
    window = idx[-max(MIN_FIT_POINTS, idx.size // 2):]
    slope, _ = np.polyfit(window.astype(float), np.log(err[window]), 1)
    return float(np.exp(slope))


def displacement_check(trace, v=None):
    """Largest ``|T^n x - T^{n+1} x - v|`` over the final 10% of the trace."""
    v = trace.gap if v is None else as_vector(v, dim=trace.governing.shape[1], name="v")
    resid = np.linalg.norm(trace.displacement - v, axis=1)
    tail = max(1, int(np.ceil(0.1 * resid.size)))
    return float(resid[-tail:].max())


def dual_shadow(problem, n_iters):
    """Dual shadows ``(Id - P_U) T^n x0`` for ``n = 0..n_iters``.

    When U and V are disjoint their norms grow like ``n |v|``.
    """
    if n_iters < 1:
        raise ValueError("n_iters must be positive")
    U = problem.U
    T = dr_map(U, problem.V)
    out = np.empty((n_iters + 1, U.dim))
    x = problem.x0
    for k in range(n_iters + 1):
        out[k] = x - project(U, x)
        x = T.linear @ x + T.offset
    return out
