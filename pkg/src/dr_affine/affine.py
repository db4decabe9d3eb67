"""
Affine nonexpansive operators ``T x = L x + b``.

For such maps the infimal displacement vector is ``v = P_{Fix L}(-b)`` and
the three "normalised" sequences

    (T_{-v})^n x,    T^n x + n v,    (v + T)^n x

coincide. :func:`shifted_iterate` computes all three and refuses to return
if they disagree.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, InvariantError
from .subspace import EPS_ORTH, AffineSubspace, as_vector, membership_tol

__all__ = [
    "EPS_NX",
    "AffineMap",
    "spectral_norm",
    "inner_shift",
    "outer_shift",
    "affine_gap",
    "iterate_closed_form",
    "shifted_iterate",
    "fixed_points",
]

#: Slack allowed on the spectral norm of the linear part.
EPS_NX = 1e-8


def spectral_norm(L, iters=200, tol=1e-10):
    """Power-iteration estimate of the largest singular value of `L`."""
    L = np.asarray(L, dtype=float)
    n = L.shape[1]
    if not n:
        return 0.0
    x = np.random.default_rng(0).standard_normal(n)
    x /= np.linalg.norm(x)
    sigma = 0.0
    for _ in range(iters):
        y = L.T @ (L @ x)
        ny = np.linalg.norm(y)
        if ny == 0.0:
            return 0.0
        x = y / ny
        new = np.sqrt(ny)
        if abs(new - sigma) <= tol * max(new, 1.0):
            sigma = new
            break
        sigma = new
    return float(sigma)


@dataclass(frozen=True, eq=False)
class AffineMap:
    """The map ``x -> linear @ x + offset``.

    Construction rejects linear parts with spectral norm above
    ``1 + EPS_NX``; pass ``check=False`` only for maps known to be
    nonexpansive by construction.
    """

    linear: np.ndarray
    offset: np.ndarray
    check: bool = True

    def __post_init__(self):
        b = as_vector(self.offset, name="offset")
        L = np.array(self.linear, dtype=float)
        if L.shape != (b.shape[0], b.shape[0]):
            raise DimensionError(f"linear part has shape {L.shape}, offset has length {b.shape[0]}")
        if not np.all(np.isfinite(L)):
            raise ValueError("linear part has non-finite entries")
        if self.check:
            nrm = spectral_norm(L)
            if nrm > 1.0 + EPS_NX:
                raise ValueError(f"linear part has norm {nrm:.6g} > 1: map is not nonexpansive")
        L.setflags(write=False)
        object.__setattr__(self, "linear", L)
        object.__setattr__(self, "offset", b)

    @classmethod
    def identity(cls, dim):
        return cls(np.eye(dim), np.zeros(dim), check=False)

    @classmethod
    def translation(cls, shift):
        """``x -> x + shift``."""
        shift = as_vector(shift, name="shift")
        return cls(np.eye(shift.shape[0]), shift, check=False)

    @property
    def dim(self):
        return self.offset.shape[0]

    def __call__(self, x):
        x = as_vector(x, dim=self.dim)
        return self.linear @ x + self.offset

    def iterate(self, x, n):
        """``T^n x`` by repeated application (naive reference)."""
        y = as_vector(x, dim=self.dim)
        for _ in range(n):
            y = self.linear @ y + self.offset
        return y

    def allclose(self, other, atol=1e-12):
        """Entrywise comparison of linear parts and offsets."""
        scale = 1.0 + max(np.abs(self.offset).max(initial=0.0), np.abs(other.offset).max(initial=0.0))
        return bool(
            np.max(np.abs(self.linear - other.linear), initial=0.0) <= atol
            and np.max(np.abs(self.offset - other.offset), initial=0.0) <= atol * scale
        )


def inner_shift(T, w):
    """``x -> T(x - w)``."""
    w = as_vector(w, dim=T.dim, name="w")
    return AffineMap(T.linear, T.offset - T.linear @ w, check=False)


def outer_shift(T, w):
    """``x -> -w + T x``."""
    w = as_vector(w, dim=T.dim, name="w")
    return AffineMap(T.linear, T.offset - w, check=False)


def _fix_linear_basis(L):
    # ker(Id - L) with singular values <= EPS_ORTH * sigma_max treated as 0
    n = L.shape[0]
    _, s, vt = np.linalg.svd(np.eye(n) - L)
    smax = s.max(initial=0.0)
    if smax == 0.0:
        return np.eye(n)
    rank = int(np.sum(s > EPS_ORTH * smax))
    return vt[rank:]


def affine_gap(T):
    """Infimal displacement vector ``v = P_{Fix L}(-b)`` of ``T = L + b``."""
    basis = _fix_linear_basis(T.linear)
    v = basis.T @ (basis @ (-T.offset))
    if np.linalg.norm(v) <= membership_tol():
        v = np.zeros(T.dim)
    v.setflags(write=False)
    return v


def iterate_closed_form(T, x, n):
    """``T^n x = L^n x + sum_{k<n} L^k b``.

    The two sums are accumulated separately from running powers applied to
    `x` and to `b`; no matrix power is formed.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = as_vector(x, dim=T.dim)
    Lx = x.copy()
    Lb = T.offset.copy()
    acc = np.zeros(T.dim)
    for _ in range(n):
        Lx = T.linear @ Lx
        acc += Lb
        Lb = T.linear @ Lb
    return Lx + acc


def shifted_iterate(T, x, n, v=None, rtol=1e-10):
    """``(T_{-v})^n x`` with ``v = affine_gap(T)``.

    Computed three ways (inner-shifted map, drift-corrected iterate and the
    outer-shifted map); an :class:`InvariantError` is raised if any two
    disagree by more than ``rtol * (1 + |x| + n |v|)``.
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    x = as_vector(x, dim=T.dim)
    v = affine_gap(T) if v is None else as_vector(v, dim=T.dim, name="v")
    inner = inner_shift(T, -v).iterate(x, n)
    drift = T.iterate(x, n) + n * v
    outer = outer_shift(T, -v).iterate(x, n)
    scale = 1.0 + np.linalg.norm(x) + n * np.linalg.norm(v)
    worst = max(np.linalg.norm(inner - drift), np.linalg.norm(inner - outer), np.linalg.norm(drift - outer))
    if worst > rtol * scale:
        raise InvariantError(f"shifted iterates disagree by {worst:.3e} (n={n})")
    return inner


def fixed_points(T):
    """``Fix T`` as an :class:`AffineSubspace`, or ``None`` when empty.

    Solves ``(Id - L) y = b`` by minimal-norm least squares; the solution
    set is rejected when the residual exceeds the membership tolerance.
    """
    n = T.dim
    A = np.eye(n) - T.linear
    y, *_ = np.linalg.lstsq(A, T.offset, rcond=EPS_ORTH)
    if np.linalg.norm(A @ y - T.offset) > membership_tol() * (1.0 + np.linalg.norm(T.offset)):
        return None
    return AffineSubspace(y, _fix_linear_basis(T.linear)).canonical()
