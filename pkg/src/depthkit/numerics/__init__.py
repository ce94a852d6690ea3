"""Numerical building blocks shared by the depth routines."""
from .linalg import cholesky_factor, cholesky_inverse, inverse_sqrt, log_det_spd
from .lp import (
    INFEASIBLE,
    ITERATION_LIMIT,
    OPTIMAL,
    UNBOUNDED,
    LpProblem,
    LpSolution,
    lp_solve,
)
from .geometry import (
    BOUNDARY,
    INTERIOR,
    OUTSIDE,
    Hull2D,
    affine_rank,
    convex_hull_2d,
    diameter_scale,
    in_convex_hull,
    point_in_polygon,
)
from .rng import RandomSource, as_generator, uniform_sphere_direction, uniform_sphere_directions

__all__ = [
    "cholesky_factor", "cholesky_inverse", "inverse_sqrt", "log_det_spd",
    "LpProblem", "LpSolution", "lp_solve",
    "OPTIMAL", "INFEASIBLE", "UNBOUNDED", "ITERATION_LIMIT",
    "Hull2D", "convex_hull_2d", "in_convex_hull", "point_in_polygon",
    "affine_rank", "diameter_scale", "INTERIOR", "BOUNDARY", "OUTSIDE",
    "RandomSource", "as_generator", "uniform_sphere_direction", "uniform_sphere_directions",
]
