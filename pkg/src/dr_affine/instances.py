"""Seeded random affine-pair instances with a prescribed gap."""

import numpy as np

from .douglas_rachford import DrProblem
from .errors import InfeasibleError
from .subspace import AffineSubspace, orth_complement, orthonormalize, parallel_sum

__all__ = ["random_instance", "random_subspace", "MAX_SEED_RETRIES"]

MAX_SEED_RETRIES = 20


def random_subspace(rng, n, k, anchor=None):
    """``anchor + span`` of k Gaussian vectors (Haar-distributed span)."""
    basis = orthonormalize(rng.standard_normal((k, n)), dim=n)
    return AffineSubspace(np.zeros(n) if anchor is None else anchor, basis)


def _attempt(rng, n, du, dv, gap):
    U = random_subspace(rng, n, du)
    Vpar = random_subspace(rng, n, dv)
    comp = orth_complement(parallel_sum(U, Vpar))
    span = parallel_sum(U, Vpar)
    offset = span.basis.T @ rng.standard_normal(span.rank) if span.rank else np.zeros(n)
    if gap > 0:
        if comp.rank == 0:
            return None
        w = comp.basis.T @ rng.standard_normal(comp.rank)
        w /= np.linalg.norm(w)
        offset = offset + gap * w
    V = AffineSubspace(offset, Vpar.basis)
    x0 = rng.standard_normal(n)
    return DrProblem(U, V, x0)


def random_instance(n, du, dv, gap, seed):
    """Random problem with ``|gap_vector(U, V)| == gap``.

    U passes through the origin; V is anchored at ``gap * w`` (w a unit
    vector orthogonal to ``par U + par V``) plus a random in-span offset; x0
    is standard Gaussian. Deterministic in `seed`. When ``gap > 0`` and the
    two spans fill R^n, up to ``MAX_SEED_RETRIES`` consecutive seeds are
    tried before giving up.

    Raises
    ------
    InfeasibleError
        No seed produced a pair with room for a nonzero gap.
    """
    if gap < 0:
        raise ValueError("gap must be nonnegative")
    if not (0 <= du <= n and 0 <= dv <= n) or n < 1:
        raise ValueError(f"invalid dimensions n={n}, du={du}, dv={dv}")
    for attempt in range(MAX_SEED_RETRIES):
        rng = np.random.default_rng(seed + attempt)
        problem = _attempt(rng, n, du, dv, gap)
        if problem is not None:
            return problem
    raise InfeasibleError(
        f"par U + par V fills R^{n} for {MAX_SEED_RETRIES} seeds; a gap of {gap} is impossible"
    )
