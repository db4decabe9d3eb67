"""
Diverging shadows for a pair of affine operators
=================================================

Take A = S, the quarter-turn rotation, and B = -S + b. Both are affine and
their normal problem is solved by every point of the plane, yet the DR
shadows J_A T^n x run off at speed |b| / 2.
"""

import numpy as np

import dr_affine as dra
from dr_affine import scalar

b = np.array([2.0, 0.0])
T = scalar.rotation_dr_map(b)
print("L =", T.linear.tolist(), " offset =", T.offset)

v = dra.affine_gap(T)
print("v =", v, "  Fix(v + T) has dimension", dra.fixed_points(dra.outer_shift(T, -v)).rank)

norms = scalar.rotation_dr_trace(b, [0.0, 0.0], 10)
print("|J_A T^n 0| for n = 0..10:", [round(t, 12) for t in norms])
