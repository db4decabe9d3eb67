"""
Non-affine operators on the line
=================================

For affine maps the inner shift, the outer shift and the drift-corrected
iterates all coincide. Two scalar operators show what goes wrong otherwise.

First, T = Id - P_[1, 2]. It has gap v = 1, and T^n x + n v is Fejer monotone
with respect to Fix(v + T) = (-inf, 1]. Its limit can nevertheless land
outside that set.
"""

from dr_affine import scalar

alpha, beta = 1.0, 2.0
fix_outer, fix_inner = scalar.id_minus_proj_fix_sets(alpha, beta)
print("Fix(v+T)  =", fix_outer, "   Fix T_{-v} =", fix_inner)
for x in (0.5, 1.5, 5.0, 9.0):
    lim = scalar.ex27_limit(alpha, beta, x)
    print(f"x={x:4}  limit {lim:4}  in Fix(v+T): {lim in fix_outer}")

###############################################################################
# Second, the damped shift T x = x - 1 for x <= 1 and 0.5 (x - 1) beyond.
# Starting from x = 3 the three sequences settle at three different points.

a, b = 0.5, 1.0
print(" n   (T_-v)^n x   (v+T)^n x   T^n x + n v")
for n in range(6):
    inner, outer, drift = scalar.ex33_sequences(a, b, 3.0, n)
    print(f"{n:2d}   {inner:10.5f}   {outer:9.5f}   {drift:11.5f}")
print("limits:", scalar.ex33_limits(a, b, 3.0))

###############################################################################
# No single operator S can satisfy S^n = T^n + n v for all n: n = 1 forces
# S = v + T, and the two sequences already differ at n = 2.

x, n = scalar.ex33_no_single_operator_witness(a, b, x=3.0)
_, outer, drift = scalar.ex33_sequences(a, b, x, n)
print(f"witness x={x}, n={n}: (v+T)^n x = {outer}, T^n x + n v = {drift}")
