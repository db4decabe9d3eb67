"""
Affine subspaces of R^n stored as an anchor point plus an orthonormal basis
of the parallel linear space.

Every set here is closed (finite dimension), so projections, intersections
and the gap vector between two sets are computed exactly up to rounding.
Singletons (empty basis) and the whole space (full basis) are ordinary
values, not special cases.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InfeasibleError

__all__ = [
    "EPS_ORTH",
    "EPS_MEM",
    "membership_tol",
    "as_vector",
    "AffineSubspace",
    "orthonormalize",
    "project",
    "reflect",
    "translate",
    "parallel_sum",
    "orth_complement",
    "intersect",
    "gap_vector",
    "same_set",
]

#: Gram-Schmidt drop threshold and rank cut-off.
EPS_ORTH = 1e-10
#: Membership / intersection residual tolerance (overridable by DR_AFFINE_TOL).
EPS_MEM = 1e-8


def membership_tol():
    """Return the membership tolerance, honouring ``DR_AFFINE_TOL``."""
    raw = os.environ.get("DR_AFFINE_TOL")
    if raw is None:
        return EPS_MEM
    tol = float(raw)
    if not np.isfinite(tol) or tol <= 0:
        raise ValueError(f"DR_AFFINE_TOL must be a positive number, got {raw!r}")
    return tol


def as_vector(x, dim=None, name="x"):
    """Convert `x` to a read-only 1-D float array, checking finiteness and
    (optionally) dimension."""
    arr = np.array(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionError(f"{name} must be 1-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} has non-finite entries")
    if dim is not None and arr.shape[0] != dim:
        raise DimensionError(f"{name} has dimension {arr.shape[0]}, expected {dim}")
    arr.setflags(write=False)
    return arr


def _as_rows(vectors, dim=None):
    rows = [np.asarray(v, dtype=float) for v in vectors]
    if not rows:
        if dim is None:
            raise DimensionError("cannot infer the dimension of an empty vector list")
        return np.zeros((0, dim))
    if dim is None:
        dim = rows[0].shape[0] if rows[0].ndim == 1 else -1
    for r in rows:
        if r.ndim != 1 or r.shape[0] != dim:
            raise DimensionError(f"vector of shape {r.shape} in a list of dimension {dim}")
        if not np.all(np.isfinite(r)):
            raise ValueError("non-finite entry in vector list")
    return np.vstack(rows)


def orthonormalize(vectors, tol=EPS_ORTH, dim=None):
    """Orthonormal basis of the span of `vectors`.

    Classical Gram-Schmidt with one reorthogonalization pass. A vector is
    dropped when its residual against the running basis has norm at most
    ``tol * (1 + |input|)``.

    Parameters
    ----------
    vectors : sequence of array_like or 2-D array
        Spanning vectors (rows when given as an array).
    tol : float
        Relative drop threshold, must be positive.
    dim : int, optional
        Ambient dimension; required only when `vectors` is empty.

    Returns
    -------
    basis : ndarray, shape (k, n)
        Orthonormal rows spanning the same space.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    rows = _as_rows(list(vectors), dim)
    n = rows.shape[1]
    basis = []
    for r in rows:
        w = r.copy()
        for _ in range(2):
            for q in basis:
                w -= (q @ w) * q
        nw = np.linalg.norm(w)
        if nw <= tol * (1.0 + np.linalg.norm(r)):
            continue
        basis.append(w / nw)
    return np.array(basis).reshape(len(basis), n)


@dataclass(frozen=True, eq=False)
class AffineSubspace:
    """The set ``anchor + span(basis)``.

    Use :meth:`from_span` or :meth:`from_equations` rather than the raw
    constructor when the basis is not already orthonormal.
    """

    anchor: np.ndarray
    basis: np.ndarray

    def __post_init__(self):
        anchor = as_vector(self.anchor, name="anchor")
        n = anchor.shape[0]
        if n == 0:
            raise DimensionError("ambient dimension must be positive")
        basis = np.array(self.basis, dtype=float).reshape(-1, n) if np.size(self.basis) else np.zeros((0, n))
        if basis.shape[0] > n:
            raise DimensionError("more basis vectors than the ambient dimension")
        if not np.all(np.isfinite(basis)):
            raise ValueError("basis has non-finite entries")
        gram = basis @ basis.T
        if basis.shape[0] and np.max(np.abs(gram - np.eye(basis.shape[0]))) > 1e3 * EPS_ORTH:
            raise ValueError("basis is not orthonormal; use AffineSubspace.from_span")
        basis.setflags(write=False)
        object.__setattr__(self, "anchor", anchor)
        object.__setattr__(self, "basis", basis)

    @classmethod
    def from_span(cls, anchor, vectors=(), tol=EPS_ORTH):
        """``anchor + span(vectors)``; dependent vectors are dropped."""
        anchor = as_vector(anchor, name="anchor")
        return cls(anchor, orthonormalize(vectors, tol=tol, dim=anchor.shape[0]))

    @classmethod
    def linear(cls, vectors, dim=None):
        """The linear subspace ``span(vectors)`` through the origin."""
        basis = orthonormalize(vectors, dim=dim)
        return cls(np.zeros(basis.shape[1]), basis)

    @classmethod
    def whole_space(cls, dim):
        return cls(np.zeros(dim), np.eye(dim))

    @classmethod
    def point(cls, p):
        p = as_vector(p, name="p")
        return cls(p, np.zeros((0, p.shape[0])))

    @classmethod
    def from_equations(cls, matrix, rhs):
        """The solution set ``{x : M x = c}``.

        Raises
        ------
        InfeasibleError
            If the system is inconsistent.
        """
        M = np.atleast_2d(np.asarray(matrix, dtype=float))
        c = as_vector(rhs, dim=M.shape[0], name="rhs")
        if not np.all(np.isfinite(M)):
            raise ValueError("matrix has non-finite entries")
        x, *_ = np.linalg.lstsq(M, c, rcond=None)
        if np.linalg.norm(M @ x - c) > membership_tol() * (1.0 + np.linalg.norm(c)):
            raise InfeasibleError("the linear system M x = c has no solution")
        _, s, vt = np.linalg.svd(M)
        rank = int(np.sum(s > EPS_ORTH * max(s.max(initial=0.0), 1.0)))
        return cls(x, vt[rank:])

    @property
    def dim(self):
        """Ambient dimension n."""
        return self.anchor.shape[0]

    @property
    def rank(self):
        """Dimension of the parallel space."""
        return self.basis.shape[0]

    @property
    def is_linear(self):
        return bool(np.all(self.anchor == 0.0))

    @property
    def parallel(self):
        """The parallel linear space ``S - S``."""
        return AffineSubspace(np.zeros(self.dim), self.basis)

    def projector(self):
        """Matrix of the orthogonal projector onto the parallel space."""
        return self.basis.T @ self.basis

    def contains(self, x, tol=None):
        x = as_vector(x, dim=self.dim)
        tol = membership_tol() if tol is None else tol
        d = x - self.anchor
        r = d - self.basis.T @ (self.basis @ d)
        return bool(np.linalg.norm(r) <= tol * (1.0 + np.linalg.norm(x)))

    def canonical(self):
        """Same set, anchored at its minimal-norm point."""
        a = self.anchor - self.basis.T @ (self.basis @ self.anchor)
        return AffineSubspace(a, self.basis)

    def __repr__(self):
        return f"AffineSubspace(dim={self.dim}, rank={self.rank}, anchor={np.array2string(self.anchor, precision=4)})"


def _check_same_dim(*sets):
    dims = {s.dim for s in sets}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")


def project(S, x):
    """Orthogonal projection of `x` onto `S`."""
    x = as_vector(x, dim=S.dim)
    d = x - S.anchor
    return S.anchor + S.basis.T @ (S.basis @ d)


def reflect(S, x):
    """Reflection ``2 P_S x - x``."""
    x = as_vector(x, dim=S.dim)
    return 2.0 * project(S, x) - x


def translate(S, w):
    """The set ``w + S``."""
    w = as_vector(w, dim=S.dim, name="w")
    return AffineSubspace(S.anchor + w, S.basis)


def parallel_sum(S1, S2):
    """Linear subspace ``par S1 + par S2``."""
    _check_same_dim(S1, S2)
    basis = orthonormalize(np.vstack([S1.basis, S2.basis]), dim=S1.dim)
    return AffineSubspace(np.zeros(S1.dim), basis)


def orth_complement(S):
    """Orthogonal complement of a linear subspace.

    Raises
    ------
    ValueError
        If `S` does not pass through the origin.
    """
    if not S.is_linear:
        raise ValueError("orth_complement needs a linear subspace (zero anchor)")
    n, k = S.dim, S.rank
    if k == 0:
        return AffineSubspace.whole_space(n)
    # rows k: of V^T span the null space of the (orthonormal) basis
    _, _, vt = np.linalg.svd(S.basis, full_matrices=True)
    comp = vt[k:]
    # one Gram-Schmidt pass against S to remove rounding leakage
    comp = comp - (comp @ S.basis.T) @ S.basis
    return AffineSubspace(np.zeros(n), orthonormalize(comp, dim=n))


def intersect(S1, S2):
    """Intersection of two affine subspaces, or ``None`` when empty.

    The parallel space is the complement of the sum of complements. The
    anchor comes from a minimal-norm least-squares solve of
    ``a1 + B1 s = a2 + B2 t``; the result is re-anchored at its
    minimal-norm point.
    """
    _check_same_dim(S1, S2)
    comp = parallel_sum(orth_complement(S1.parallel), orth_complement(S2.parallel))
    par = orth_complement(comp)

    rhs = S2.anchor - S1.anchor
    A = np.hstack([S1.basis.T, -S2.basis.T])
    if A.shape[1]:
        coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
        residual = np.linalg.norm(A @ coef - rhs)
        point = S1.anchor + S1.basis.T @ coef[: S1.rank]
    else:
        residual = np.linalg.norm(rhs)
        point = S1.anchor
    if residual > membership_tol() * (1.0 + np.linalg.norm(rhs)):
        return None
    anchor = point - par.basis.T @ (par.basis @ point)
    return AffineSubspace(anchor, par.basis)


def gap_vector(U, V):
    """Minimal-norm element of ``U - V``.

    Computed as the projection of ``anchor_U - anchor_V`` onto
    ``(par U + par V)^perp``; norms below the membership tolerance are
    snapped to an exact zero (consistent problem).
    """
    _check_same_dim(U, V)
    s = parallel_sum(U, V)
    d = U.anchor - V.anchor
    v = d - s.basis.T @ (s.basis @ d)
    if np.linalg.norm(v) <= membership_tol():
        v = np.zeros(U.dim)
    v.setflags(write=False)
    return v


def same_set(S1, S2, tol=None):
    """True when the two subspaces are equal as sets (to tolerance)."""
    _check_same_dim(S1, S2)
    if S1.rank != S2.rank:
        return False
    if not S2.contains(S1.anchor, tol=tol):
        return False
    # parallel spaces: each basis vector of S1 must lie in par S2
    resid = S1.basis - (S1.basis @ S2.basis.T) @ S2.basis
    tol = membership_tol() if tol is None else tol
    return bool(np.all(np.linalg.norm(resid, axis=1) <= tol)) if S1.rank else True
