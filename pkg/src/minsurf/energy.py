"""Discrete area, the vertex area gradient, and a finite-difference oracle.

The gradient of total triangle area with respect to a vertex ``p`` is, summed
over the triangles ``(p, q, r)`` of its star,

    grad_p = 1/2 * sum  n x (r - q),      n = unit normal of (p, q, r),

i.e. one half of the 90-degree in-plane rotations of the opposite edges.
A surface is minimal when this vector vanishes at every interior vertex.
"""

from __future__ import annotations

import numpy as np

from .mesh import DEGENERACY_FACTOR, DegenerateGeometryError, SimplicialSurface

__all__ = [
    "triangle_area",
    "surface_area",
    "area_gradient",
    "gradient_field",
    "finite_difference_gradient",
    "minimality_residual",
    "MinimalityReport",
]

DEFAULT_MINIMALITY_TOL = 1e-10  # closed-form geometry
SOLVER_MINIMALITY_TOL = 1e-8  # solver-produced geometry
DEFAULT_FD_STEP = 1e-6


def triangle_area(p, q, r) -> float:
    """Euclidean area of the triangle with corners ``p, q, r``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    r = np.asarray(r, dtype=float)
    return 0.5 * float(np.linalg.norm(np.cross(r - p, q - p)))


def surface_area(surface: SimplicialSurface) -> float:
    """Sum of all triangle areas."""
    return float(surface.triangle_areas().sum())


def _unit_normals(surface: SimplicialSurface) -> np.ndarray:
    p = surface.positions[surface.triangles]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norms = np.linalg.norm(n, axis=1)
    longest = surface.edge_lengths().max(axis=1)
    bad = norms < 2.0 * DEGENERACY_FACTOR * longest**2
    if bad.any():
        raise DegenerateGeometryError(
            f"degenerate triangle(s) in gradient evaluation: rows "
            f"{np.flatnonzero(bad).tolist()}"
        )
    return n / norms[:, None]


def gradient_field(surface: SimplicialSurface) -> np.ndarray:
    """Area gradient at every vertex, shape ``(n_vertices, 3)``."""
    pos = surface.positions
    tri = surface.triangles
    grad = np.zeros_like(pos)
    if len(tri) == 0:
        return grad
    n = _unit_normals(surface)
    p, q, r = pos[tri[:, 0]], pos[tri[:, 1]], pos[tri[:, 2]]
    # contribution at each corner: half the rotated opposite edge
    np.add.at(grad, tri[:, 0], 0.5 * np.cross(n, r - q))
    np.add.at(grad, tri[:, 1], 0.5 * np.cross(n, p - r))
    np.add.at(grad, tri[:, 2], 0.5 * np.cross(n, q - p))
    return grad


def area_gradient(surface: SimplicialSurface, vertex: int) -> np.ndarray:
    """Area gradient at one vertex (sums 90-degree rotated star edges)."""
    v = int(vertex)
    if v < 0 or v >= surface.vertex_count:
        raise ValueError(f"unknown vertex id {vertex}")
    pos = surface.positions
    grad = np.zeros(3)
    for a, q, r in surface.star(v):
        n = np.cross(pos[q] - pos[a], pos[r] - pos[a])
        norm = np.linalg.norm(n)
        edge = max(
            np.linalg.norm(pos[q] - pos[a]),
            np.linalg.norm(pos[r] - pos[q]),
            np.linalg.norm(pos[a] - pos[r]),
        )
        if norm < 2.0 * DEGENERACY_FACTOR * edge**2:
            raise DegenerateGeometryError(
                f"degenerate triangle in star of vertex {vertex}"
            )
        grad += 0.5 * np.cross(n / norm, pos[r] - pos[q])
    return grad


def finite_difference_gradient(
    surface: SimplicialSurface, vertex: int, h: float = DEFAULT_FD_STEP
) -> np.ndarray:
    """Central-difference gradient of total area under moves of one vertex.

    Only the star of ``vertex`` contributes to the difference, so only those
    triangle areas are re-evaluated.
    """
    if h <= 0:
        raise ValueError("step size must be positive")
    v = int(vertex)
    if v < 0 or v >= surface.vertex_count:
        raise ValueError(f"unknown vertex id {vertex}")
    star = surface.star(v)
    pos = surface.positions

    def star_area(point: np.ndarray) -> float:
        total = 0.0
        for a, q, r in star:
            total += triangle_area(point, pos[q], pos[r])
        return total

    grad = np.zeros(3)
    for i in range(3):
        step = np.zeros(3)
        step[i] = h
        grad[i] = (star_area(pos[v] + step) - star_area(pos[v] - step)) / (2.0 * h)
    return grad


class MinimalityReport:
    """Per-vertex gradient norms at interior vertices plus a pass flag."""

    def __init__(self, norms: dict[int, float], tol: float):
        self.norms = norms
        self.tol = tol
        self.worst = max(norms.values()) if norms else 0.0
        self.passed = self.worst <= tol

    def failing_vertices(self) -> list[int]:
        return [v for v, g in self.norms.items() if g > self.tol]

    def __bool__(self) -> bool:  # pragma: no cover
        return self.passed

    def __repr__(self) -> str:  # pragma: no cover
        state = "pass" if self.passed else "fail"
        return (
            f"MinimalityReport({state}, {len(self.norms)} vertices, "
            f"worst={self.worst:.3e}, tol={self.tol:.1e})"
        )


def minimality_residual(
    surface: SimplicialSurface,
    tol: float = DEFAULT_MINIMALITY_TOL,
    vertices=None,
) -> MinimalityReport:
    """Gradient norms at interior vertices (or a given subset of them).

    The surface is minimal when every interior vertex has vanishing area
    gradient; a surface with no interior vertices passes vacuously.
    """
    if vertices is None:
        vertices = surface.interior_vertices()
    grads = gradient_field(surface)
    norms = {int(v): float(np.linalg.norm(grads[v])) for v in vertices}
    return MinimalityReport(norms, tol)
