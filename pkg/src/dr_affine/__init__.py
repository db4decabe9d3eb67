"""Douglas-Rachford splitting for two (possibly disjoint) affine subspaces."""

from .affine import (
    AffineMap,
    affine_gap,
    fixed_points,
    inner_shift,
    iterate_closed_form,
    outer_shift,
    shifted_iterate,
)
from .douglas_rachford import (
    DrProblem,
    IterationTrace,
    NormalSolutionData,
    best_approximation,
    displacement_check,
    dr_map,
    dual_shadow,
    friedrichs_cosine,
    normal_dr_map,
    normal_solutions,
    rate_estimate,
    run,
)
from .errors import DimensionError, InfeasibleError, InvariantError
from .instances import random_instance
from .subspace import (
    AffineSubspace,
    gap_vector,
    intersect,
    orth_complement,
    orthonormalize,
    parallel_sum,
    project,
    reflect,
    translate,
)

__version__ = "0.1.0"
