"""Discrete piecewise-linear minimal surfaces.

Construction, numerical solving, verification, and periodic tiling of
triangulated surfaces that are critical for area at every interior vertex,
including a catalog of explicit triply-periodic examples.
"""

from .energy import (
    area_gradient,
    finite_difference_gradient,
    gradient_field,
    minimality_residual,
    surface_area,
    triangle_area,
)
from .mesh import (
    DegenerateGeometryError,
    InvalidMeshError,
    NonManifoldError,
    SimplicialSurface,
    surfaces_equal,
)
from .solver import (
    SolveProblem,
    SolveReport,
    VertexConstraint,
    residual,
    solve,
    verify_closed_form,
)
from .symmetry import (
    Box,
    BudgetExceededError,
    GeneratorSet,
    RigidMotion,
    apply_motion,
    detect_periods,
    extend,
    find_translations,
    half_turn_about_edge,
    motion_is_symmetry,
    reflection_across_plane,
)
from .verify import (
    IntersectionReport,
    brute_force_intersection_check,
    cross_validate,
    printed_equation_residuals,
    self_intersection_check,
    trace_distance,
)
from . import catalog, io

__version__ = "0.1.0"

__all__ = [
    "SimplicialSurface",
    "InvalidMeshError",
    "NonManifoldError",
    "DegenerateGeometryError",
    "surfaces_equal",
    "triangle_area",
    "surface_area",
    "area_gradient",
    "gradient_field",
    "finite_difference_gradient",
    "minimality_residual",
    "RigidMotion",
    "GeneratorSet",
    "Box",
    "BudgetExceededError",
    "half_turn_about_edge",
    "reflection_across_plane",
    "apply_motion",
    "extend",
    "detect_periods",
    "motion_is_symmetry",
    "find_translations",
    "VertexConstraint",
    "SolveProblem",
    "SolveReport",
    "residual",
    "solve",
    "verify_closed_form",
    "IntersectionReport",
    "self_intersection_check",
    "brute_force_intersection_check",
    "printed_equation_residuals",
    "cross_validate",
    "trace_distance",
    "catalog",
    "io",
    "__version__",
]
