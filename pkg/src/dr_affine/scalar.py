"""
Closed-form scalar operators and a planar counterexample.

* :class:`IdMinusProjection` -- ``T = Id - P_[a,b]`` on R, firmly
  nonexpansive. With ``0 < alpha < beta`` this is the operator whose
  drift-corrected iterates ``T^n x + n v`` converge to a point outside
  ``Fix(v + T)``.
* :class:`DampedShift` -- a nonexpansive, non-affine operator for which the
  inner-shifted, outer-shifted and drift-corrected sequences have three
  different limits.
* :func:`rotation_dr_map` -- DR operator of the affine pair ``A = S``,
  ``B = -S + b`` (S the quarter-turn rotation) whose shadows diverge.

Every closed form has a naive-iteration twin used as its test oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .affine import AffineMap
from .subspace import as_vector

__all__ = [
    "Interval",
    "IdMinusProjection",
    "DampedShift",
    "iterate",
    "ex27_operator",
    "ex27_iterate_closed",
    "ex27_iterate_naive",
    "ex27_limit",
    "ex33_operator",
    "ex33_q",
    "ex33_sequences",
    "ex33_sequences_naive",
    "ex33_limits",
    "ex33_no_single_operator_witness",
    "rotation_dr_map",
    "rotation_dr_trace",
    "quarter_turn",
    "id_minus_proj_fix_sets",
]


class Interval(NamedTuple):
    """Closed interval ``[lo, hi]``; infinite ends are open."""

    lo: float
    hi: float

    def __contains__(self, x):
        return self.lo <= x <= self.hi

    def __str__(self):
        lo = "(-inf" if self.lo == -math.inf else f"[{self.lo:g}"
        hi = "inf)" if self.hi == math.inf else f"{self.hi:g}]"
        return f"{lo}, {hi}"


def iterate(f, x, n):
    """``f^n(x)`` by repeated evaluation."""
    for _ in range(n):
        x = f(x)
    return x


@dataclass(frozen=True)
class IdMinusProjection:
    """``T x = x - P_[a,b] x`` on the real line."""

    a: float
    b: float

    def __post_init__(self):
        if not self.a <= self.b:
            raise ValueError(f"need a <= b, got [{self.a}, {self.b}]")

    def __call__(self, x):
        return x - min(max(x, self.a), self.b)

    @property
    def gap(self):
        """``v = P_C 0``."""
        return min(max(0.0, self.a), self.b)

    def inner_shifted(self, x):
        """``T_{-v} x = T(x + v)``."""
        return self(x + self.gap)

    def outer_shifted(self, x):
        """``(v + T) x``."""
        return self.gap + self(x)


@dataclass(frozen=True)
class DampedShift:
    """``T x = x - beta`` for ``x <= beta`` and ``alpha (x - beta)`` beyond,
    with ``0 < alpha < 1`` and ``beta > 0``. Its gap vector is ``v = beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0 and self.beta > 0.0):
            raise ValueError(f"need 0 < alpha < 1 and beta > 0, got alpha={self.alpha}, beta={self.beta}")

    def __call__(self, x):
        return x - self.beta if x <= self.beta else self.alpha * (x - self.beta)

    @property
    def gap(self):
        return self.beta

    def inner_shifted(self, x):
        return self(x + self.beta)

    def outer_shifted(self, x):
        return self.beta + self(x)


# -- first scalar example: T = Id - P_[alpha, beta] ---------------------------


def _check_ex27(alpha, beta):
    if not 0.0 < alpha < beta:
        raise ValueError(f"need 0 < alpha < beta, got alpha={alpha}, beta={beta}")


def ex27_operator(alpha, beta):
    _check_ex27(alpha, beta)
    return IdMinusProjection(alpha, beta)


def ex27_iterate_closed(alpha, beta, x, n):
    """``T^n x + n alpha`` for ``T = Id - P_[alpha, beta]`` in closed form."""
    _check_ex27(alpha, beta)
    if n < 0:
        raise ValueError("n must be nonnegative")
    if x <= alpha or n == 0:
        return x
    if x <= beta:
        return alpha
    K = math.floor(x / beta)
    if n <= K:
        return x - n * (beta - alpha)
    return min(alpha, x - K * beta) + K * alpha


def ex27_iterate_naive(alpha, beta, x, n):
    T = ex27_operator(alpha, beta)
    return iterate(T, x, n) + n * alpha


def ex27_limit(alpha, beta, x):
    """``lim_n T^n x + n alpha``; exceeds alpha (so leaves
    ``Fix(v + T) = (-inf, alpha]``) exactly when ``x > beta``."""
    _check_ex27(alpha, beta)
    if x <= alpha:
        return x
    if x <= beta:
        return alpha
    K = math.floor(x / beta)
    return min(alpha, x - K * beta) + alpha * K


# -- second scalar example: damped shift --------------------------------------


def ex33_operator(alpha, beta):
    return DampedShift(alpha, beta)


def ex33_q(alpha, beta, x, snap=1e-12):
    """First n with ``T^n x <= beta`` (for ``x > beta``).

    The logarithm is snapped to the nearest integer when within `snap` of
    it, otherwise rounding can flip the ceiling.
    """
    ex33_operator(alpha, beta)
    if x <= beta:
        return 0
    t = math.log(beta / (alpha * beta + (1.0 - alpha) * x)) / math.log(alpha)
    r = round(t)
    if abs(t - r) <= snap:
        return int(r)
    return math.ceil(t)


def _geometric(alpha, beta, x, n):
    return alpha**n * x - alpha * (1.0 - alpha**n) / (1.0 - alpha) * beta + n * beta


def ex33_sequences(alpha, beta, x, n):
    """Closed forms of ``((T_{-v})^n x, (v+T)^n x, T^n x + n v)``."""
    ex33_operator(alpha, beta)
    if n < 0:
        raise ValueError("n must be nonnegative")
    an = alpha**n
    inner = an * max(x, 0.0) + min(x, 0.0)
    outer = an * max(x - beta, 0.0) + min(x, beta)
    if x <= beta:
        drift = x
    else:
        q = ex33_q(alpha, beta, x)
        drift = _geometric(alpha, beta, x, min(n, q))
    return inner, outer, drift


def ex33_sequences_naive(alpha, beta, x, n):
    T = ex33_operator(alpha, beta)
    return (
        iterate(T.inner_shifted, x, n),
        iterate(T.outer_shifted, x, n),
        iterate(T, x, n) + n * beta,
    )


def ex33_limits(alpha, beta, x):
    """Limits of the three sequences of :func:`ex33_sequences`."""
    ex33_operator(alpha, beta)
    if x <= beta:
        drift = x
    else:
        drift = _geometric(alpha, beta, x, ex33_q(alpha, beta, x))
    return min(x, 0.0), min(x, beta), drift


def ex33_no_single_operator_witness(alpha, beta, x=None, margin=1e-6, n_max=50):
    """A pair (x, n) with ``(v+T)^n x != T^n x + n v``.

    Any operator S with ``S^n = T^n + n v`` for all n equals ``v + T`` (take
    n = 1), so one mismatch at n >= 2 rules S out. Only ``x > beta`` can
    differ. The scan is deterministic: x over ``beta * (2, 3, ..., 10)``
    followed by a finer grid in ``(beta, 2 beta)``, or only the given `x`;
    n runs from 2 upward and the first hit is returned.
    """
    ex33_operator(alpha, beta)
    if x is None:
        grid = [m * beta for m in range(2, 11)] + [beta * (1.0 + k / 20.0) for k in range(1, 20)]
    else:
        grid = [float(x)]
    for xx in grid:
        for n in range(2, n_max + 1):
            _, outer, drift = ex33_sequences(alpha, beta, xx, n)
            if abs(outer - drift) > margin:
                return float(xx), n
    raise RuntimeError(f"no witness found with n <= {n_max}")


# -- planar rotation counterexample -------------------------------------------


def quarter_turn():
    """Counter-clockwise rotation by pi/2."""
    return np.array([[0.0, -1.0], [1.0, 0.0]])


def _check_b(b):
    b = as_vector(b, dim=2, name="b")
    if not np.any(b):
        raise ValueError("b must be nonzero")
    return b


def rotation_dr_map(b):
    """DR operator ``1/2 (Id + R_B R_A)`` for ``A = S`` and ``B = -S + b``.

    Built from the resolvents ``J_A = 1/2 (Id - S)`` and
    ``J_B x = 1/2 (x - b + S x - S b)``; the result is the translation
    ``x -> x - 1/2 (Id + S) b``.
    """
    b = _check_b(b)
    S = quarter_turn()
    I = np.eye(2)
    JA = AffineMap(0.5 * (I - S), np.zeros(2), check=False)
    JB = AffineMap(0.5 * (I + S), -0.5 * (b + S @ b), check=False)
    RA = AffineMap(2 * JA.linear - I, 2 * JA.offset, check=False)
    RB = AffineMap(2 * JB.linear - I, 2 * JB.offset, check=False)
    RBRA = AffineMap(RB.linear @ RA.linear, RB.linear @ RA.offset + RB.offset, check=False)
    return AffineMap(0.5 * (I + RBRA.linear), 0.5 * RBRA.offset)


def rotation_dr_trace(b, x, n_iters):
    """``|J_A T^n x|`` for ``n = 0..n_iters``.

    Uses ``T^n x = x - n v`` with ``v = 1/2 (Id + S) b``; the increments tend
    to ``|J_A v| = |b| / 2``.
    """
    b = _check_b(b)
    x = as_vector(x, dim=2)
    if n_iters < 1:
        raise ValueError("n_iters must be positive")
    S = quarter_turn()
    JA = 0.5 * (np.eye(2) - S)
    v = 0.5 * (b + S @ b)
    return [float(np.linalg.norm(JA @ (x - n * v))) for n in range(n_iters + 1)]


# -- Id - P_C fixed-point sets ------------------------------------------------


def id_minus_proj_fix_sets(a, b):
    """``Fix(v + T)`` and ``Fix(T_{-v})`` for ``T = Id - P_[a,b]``.

    ``x in Fix(v + T)`` iff ``P_C x = v`` and ``x in Fix(T_{-v})`` iff
    ``P_C(x + v) = v``, with ``v = P_C 0``. The second set is the first
    translated by ``-v``.
    """
    if not a <= b:
        raise ValueError(f"need a <= b, got [{a}, {b}]")
    v = min(max(0.0, a), b)
    if a == b:
        outer = Interval(-math.inf, math.inf)
    elif v == a:
        outer = Interval(-math.inf, a)
    elif v == b:
        outer = Interval(b, math.inf)
    else:
        outer = Interval(v, v)
    inner = Interval(outer.lo - v, outer.hi - v)
    return outer, inner
