"""Newton-type solving of area-criticality conditions for free parameters.

A solve problem packages a parameterized surface family together with the
gradient components that must vanish. Systems are tiny (at most a dozen
unknowns), so Jacobians come from central finite differences and damping is
a simple step-halving line search on the residual norm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .mesh import InvalidMeshError, SimplicialSurface

__all__ = [
    "VertexConstraint",
    "SolveProblem",
    "SolveReport",
    "residual",
    "solve",
    "verify_closed_form",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 50
JACOBIAN_STEP = 1e-7
MIN_DAMPING = 1e-12


@dataclass(frozen=True)
class VertexConstraint:
    """Degrees of freedom of one vertex during a solve.

    kind is one of ``fixed``, ``free``, ``on_plane``, ``on_line`` or
    ``parametric``. ``on_plane`` carries (point, normal), ``on_line`` carries
    (point, direction), ``parametric`` carries coordinate expressions in the
    problem's named scalars.
    """

    kind: str
    data: tuple = ()

    def __post_init__(self):
        kinds = ("fixed", "free", "on_plane", "on_line", "parametric")
        if self.kind not in kinds:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind == "on_plane":
            point, normal = self.data
            if np.linalg.norm(np.asarray(normal, dtype=float)) == 0.0:
                raise ValueError("plane normal must be non-zero")
        if self.kind == "on_line":
            point, direction = self.data
            if np.linalg.norm(np.asarray(direction, dtype=float)) == 0.0:
                raise ValueError("line direction must be non-zero")


@dataclass
class SolveProblem:
    """A parameterized family of surfaces plus the residual that must vanish.

    ``residual_fn`` maps a parameter dict to the stacked vector of gradient
    components at the designated residual vertices (projected onto the
    directions that are not forced to zero by symmetry).
    """

    parameters: dict[str, float]
    residual_fn: Callable[[dict], np.ndarray]
    bounds: dict[str, tuple[float, float]] = field(default_factory=dict)
    surface: SimplicialSurface | None = None
    constraints: dict[int, VertexConstraint] = field(default_factory=dict)
    breakdown_fn: Callable[[dict], dict[str, float]] | None = None
    description: str = ""

    def names(self) -> list[str]:
        return list(self.parameters)

    def clip(self, values: dict) -> dict:
        out = dict(values)
        for name, (lo, hi) in self.bounds.items():
            margin = 1e-9 * max(1.0, abs(hi - lo) if math.isfinite(hi - lo) else 1.0)
            if out[name] <= lo:
                out[name] = lo + margin
            if out[name] >= hi:
                out[name] = hi - margin
        return out

    def check_bounds(self, values: dict) -> None:
        for name, (lo, hi) in self.bounds.items():
            v = values.get(name, self.parameters[name])
            if not (lo < v < hi):
                raise ValueError(f"parameter {name}={v} outside ({lo}, {hi})")


@dataclass
class SolveReport:
    converged: bool
    iterations: int
    final_parameters: dict[str, float]
    residual_norm: float
    per_vertex_gradient_norms: dict[str, float] = field(default_factory=dict)
    jacobian_condition: float = float("nan")
    message: str = ""

    def __repr__(self) -> str:  # pragma: no cover
        state = "converged" if self.converged else "did not converge"
        params = ", ".join(
            f"{k}={v:.10g}" for k, v in self.final_parameters.items()
        )
        return (
            f"SolveReport({state} in {self.iterations} iterations, "
            f"|residual|={self.residual_norm:.3e}, {params})"
        )


def residual(problem: SolveProblem, parameter_values: dict) -> np.ndarray:
    """Stacked interior-vertex gradient components at the given parameters."""
    problem.check_bounds(parameter_values)
    values = dict(problem.parameters)
    values.update(parameter_values)
    return np.asarray(problem.residual_fn(values), dtype=float)


def _eval(problem: SolveProblem, x: np.ndarray, names) -> np.ndarray:
    values = dict(zip(names, x))
    values = problem.clip(values)
    return np.asarray(problem.residual_fn(values), dtype=float)


def _jacobian(problem, x, names, r0, step=JACOBIAN_STEP):
    m, n = len(r0), len(x)
    J = np.zeros((m, n))
    for j in range(n):
        dx = np.zeros(n)
        dx[j] = step
        try:
            rp = _eval(problem, x + dx, names)
        except InvalidMeshError:
            rp = None
        try:
            rm = _eval(problem, x - dx, names)
        except InvalidMeshError:
            rm = None
        if rp is not None and rm is not None:
            J[:, j] = (rp - rm) / (2.0 * step)
        elif rp is not None:
            J[:, j] = (rp - r0) / step
        elif rm is not None:
            J[:, j] = (r0 - rm) / step
    return J


def solve(
    problem: SolveProblem,
    method: str = "newton_fd_jacobian",
    tol: float = DEFAULT_TOL,
    max_iter: int = DEFAULT_MAX_ITER,
) -> SolveReport:
    """Drive the residual to zero; non-convergence is reported, not raised.

    ``newton_fd_jacobian`` is damped Newton with a finite-difference Jacobian
    solved in least squares (residuals may be over-determined), falling back
    to gradient descent on the squared residual when a step stalls.
    ``damped_gradient_descent`` uses only the fallback.
    """
    if method not in ("newton_fd_jacobian", "damped_gradient_descent"):
        raise ValueError(f"unknown method {method!r}")
    names = problem.names()
    x = np.array([problem.parameters[n] for n in names], dtype=float)
    cond = float("nan")

    def norm(r):
        return float(np.linalg.norm(r))

    try:
        r = _eval(problem, x, names)
    except InvalidMeshError as exc:
        return SolveReport(False, 0, dict(zip(names, x)), float("inf"), message=str(exc))

    if len(r) < len(x):
        raise ValueError("residual dimension must be at least parameter dimension")

    iterations = 0
    message = ""
    while norm(r) > tol and iterations < max_iter:
        iterations += 1
        J = _jacobian(problem, x, names, r)
        cond = float(np.linalg.cond(J))
        if method == "newton_fd_jacobian":
            step, *_ = np.linalg.lstsq(J, -r, rcond=None)
        else:
            step = -J.T @ r
        # damping: halve until the residual norm decreases
        alpha = 1.0
        improved = False
        while alpha >= MIN_DAMPING:
            try:
                r_new = _eval(problem, x + alpha * step, names)
            except InvalidMeshError:
                alpha *= 0.5
                continue
            if norm(r_new) < norm(r):
                x = x + alpha * step
                r = r_new
                improved = True
                break
            alpha *= 0.5
        if not improved and method == "newton_fd_jacobian":
            # Newton stalled: one gradient-descent attempt on 0.5*|r|^2
            gd = -J.T @ r
            alpha = 1.0 / max(1.0, norm(gd))
            while alpha >= MIN_DAMPING:
                try:
                    r_new = _eval(problem, x + alpha * gd, names)
                except InvalidMeshError:
                    alpha *= 0.5
                    continue
                if norm(r_new) < norm(r):
                    x = x + alpha * gd
                    r = r_new
                    improved = True
                    break
                alpha *= 0.5
        if not improved:
            message = "step size underflow (stalled)"
            break

    values = problem.clip(dict(zip(names, x)))
    breakdown = problem.breakdown_fn(values) if problem.breakdown_fn else {}
    converged = norm(r) <= tol
    if not converged and not message:
        message = f"residual {norm(r):.3e} above tolerance after {iterations} iterations"
    return SolveReport(
        converged,
        iterations,
        {k: float(v) for k, v in values.items()},
        norm(r),
        per_vertex_gradient_norms=breakdown,
        jacobian_condition=cond,
        message=message,
    )


def verify_closed_form(
    example_id: str,
    residual_tol: float = 1e-10,
    recovery_tol: float = 1e-8,
) -> bool:
    """Check a catalog closed form: tiny residual, and recoverable by Newton.

    The recorded values must give residual below ``residual_tol``, and a
    solve started from a ±10% perturbation of each value must return to them
    within ``recovery_tol``. Examples without free parameters pass vacuously.
    """
    from . import catalog

    values, _tag = catalog.closed_form(example_id)
    problem = catalog.solve_problem(example_id)
    if problem is None or not problem.parameters:
        return True
    fixed = {k: v for k, v in values.items() if k not in problem.parameters}
    free = {k: v for k, v in values.items() if k in problem.parameters}
    if fixed:
        problem = catalog.solve_problem(example_id, fixed)
    if float(np.linalg.norm(residual(problem, free))) > residual_tol:
        return False
    start = {
        k: v * (1.1 if i % 2 == 0 else 0.9)
        for i, (k, v) in enumerate(free.items())
    }
    problem.parameters.update(problem.clip(start))
    report = solve(problem, tol=1e-12, max_iter=DEFAULT_MAX_ITER)
    if report.residual_norm > 1e-8:
        return False
    return all(
        abs(report.final_parameters[k] - free[k]) <= recovery_tol for k in free
    )
