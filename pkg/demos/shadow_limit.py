"""
Shadows of Douglas-Rachford on two affine subspaces
====================================================

When U and V do not meet, the governing sequence T^n x runs off to infinity
but its shadow P_U T^n x still converges, to the projection of x onto the
set of best approximation points in U.
"""

import numpy as np

import dr_affine as dra

# two skew lines in R^3, one unit apart
U = dra.AffineSubspace.linear([[1.0, 0.0, 0.0]])
V = dra.AffineSubspace.from_span([0.0, 0.0, 1.0], [[0.0, 1.0, 0.0]])
x0 = np.array([1.0, 1.0, 1.0])

trace = dra.run(dra.DrProblem(U, V, x0), 30)
print("gap vector v          ", trace.gap)
print("|governing_30|        ", np.linalg.norm(trace.governing[-1]))
print("shadow_30             ", trace.shadow[-1])
print("best approximation    ", dra.best_approximation(U, V, x0))

###############################################################################
# The governing sequence drifts by -v each step, so T^n x + n v stays bounded.
# Shadows computed from T^n x, from T^n x + n v, and from the normal map agree.

print("max shadow disagreement", trace.identity_gap.max())

###############################################################################
# A random instance: the shadow error decays like cF^n, where cF is the
# cosine of the Friedrichs angle between the parallel spaces.

p = dra.random_instance(n=10, du=3, dv=3, gap=0.5, seed=1)
trace = dra.run(p, 200)
data = dra.normal_solutions(p.U, p.V)
print("cF                    ", data.cF)
print("fitted rate           ", dra.rate_estimate(trace))
for n in (0, 10, 20, 40, 80):
    print(f"  n={n:3d}  error {trace.shadow_error[n]:.3e}   cF^n {data.cF ** n:.3e}")
