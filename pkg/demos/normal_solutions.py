"""
Gap vector, normal solutions and fixed points
==============================================

Shifting V by the gap vector v makes the problem consistent. The shifted DR
map T_{-v} has fixed points Z_v + K_v, with Z_v = U cap (v + V) and
K_v = (par U)^perp cap (par V)^perp.
"""

import numpy as np

import dr_affine as dra

rng = np.random.default_rng(5)
U = dra.AffineSubspace.from_span(rng.standard_normal(5), rng.standard_normal((2, 5)))
V = dra.AffineSubspace.from_span(rng.standard_normal(5), rng.standard_normal((1, 5)))

data = dra.normal_solutions(U, V)
print("v       ", np.round(data.v, 4))
print("dim Z_v ", data.Z_v.rank, "  dim K_v", data.K_v.rank, "  dim Fix", data.fix_shifted.rank)

###############################################################################
# For an affine T the inner shift T(x + v) and the outer shift v + T x are the
# same map, and (v + T)^n = T^n + n v.

T = dra.dr_map(U, V)
inner, outer = dra.inner_shift(T, -data.v), dra.outer_shift(T, -data.v)
print("inner == outer:", inner.allclose(outer))
x = rng.standard_normal(5)
print("(v+T)^7 x - (T^7 x + 7 v):", np.abs(outer.iterate(x, 7) - T.iterate(x, 7) - 7 * data.v).max())

###############################################################################
# A point z + k with z in Z_v and k in K_v is fixed by the shifted map.

z = data.Z_v.anchor + data.Z_v.basis.T @ rng.standard_normal(data.Z_v.rank)
k = data.K_v.basis.T @ rng.standard_normal(data.K_v.rank)
print("fixed-point residual:", np.linalg.norm(inner(z + k) - (z + k)))
