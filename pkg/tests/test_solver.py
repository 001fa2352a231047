import math

import numpy as np
import pytest

from minsurf import catalog
from minsurf.energy import gradient_field
from minsurf.io import realize_domain_spec
from minsurf.mesh import SimplicialSurface
from minsurf.solver import (
    SolveProblem,
    VertexConstraint,
    residual,
    solve,
    verify_closed_form,
)

SQRT2 = math.sqrt(2.0)


class TestResidual:
    def test_solved_fan_residual_is_zero(self):
        problem = catalog.solve_problem("superman_3")
        values = {"a": (3 - SQRT2) / 2, "b": 0.5, "c": 0.5}
        assert np.linalg.norm(residual(problem, values)) <= 1e-12

    def test_clp_explicit_solution(self):
        problem = catalog.solve_problem("clp")
        values = {"a": (SQRT2 - 1) / 2, "b": (SQRT2 - 1) / 2}
        assert np.linalg.norm(residual(problem, values)) <= 1e-12

    def test_assembled_ring_explicit_solution(self):
        problem = catalog.solve_problem("schwarzP_3")
        a = (3 * SQRT2 - math.sqrt(3)) / (6 * SQRT2 - math.sqrt(3))
        assert np.linalg.norm(residual(problem, {"a": a})) <= 1e-12

    def test_out_of_bounds_rejected(self):
        problem = catalog.solve_problem("schwarzP_3")
        with pytest.raises(ValueError):
            residual(problem, {"a": 1.5})


class TestSolve:
    def test_fan_recovers_closed_form(self):
        problem = catalog.solve_problem("superman_3")
        problem.parameters.update({"a": 0.6, "b": 0.6, "c": 0.6})
        report = solve(problem, tol=1e-12)
        assert report.converged
        assert report.final_parameters["a"] == pytest.approx(
            0.7928932188134524, abs=1e-8
        )
        assert report.final_parameters["b"] == pytest.approx(0.5, abs=1e-8)
        assert report.final_parameters["c"] == pytest.approx(0.5, abs=1e-8)

    def test_trigonal_prism_recovers_closed_form(self):
        problem = catalog.solve_problem("ht")
        problem.parameters.update({"a": 0.8, "c": 0.7, "s": 0.8})
        report = solve(problem, tol=1e-12)
        assert report.converged
        expected = (2 + SQRT2) / 4
        assert report.final_parameters["a"] == pytest.approx(expected, abs=1e-8)
        assert report.final_parameters["s"] == pytest.approx(expected, abs=1e-8)
        assert report.final_parameters["c"] == pytest.approx(0.75, abs=1e-8)

    def test_helical_fan_root_in_range(self):
        problem = catalog.solve_problem("fischer_koch")
        report = solve(problem, tol=1e-10)
        assert report.converged
        assert 0 < report.final_parameters["b"] < 1

    def test_gradient_descent_method(self):
        problem = catalog.solve_problem("fischer_koch")
        problem.parameters.update({"b": 0.62})
        report = solve(problem, method="damped_gradient_descent", tol=1e-8,
                       max_iter=2000)
        assert report.converged
        assert report.final_parameters["b"] == pytest.approx(0.6408956563, abs=1e-6)

    def test_unknown_method(self):
        problem = catalog.solve_problem("superman_3")
        with pytest.raises(ValueError):
            solve(problem, method="bogus")

    def test_solver_idempotent_at_solution(self):
        problem = catalog.solve_problem("clp")
        solution = (SQRT2 - 1) / 2
        problem.parameters.update({"a": solution, "b": solution})
        report = solve(problem, tol=1e-10)
        assert report.iterations == 0
        assert report.final_parameters["a"] == pytest.approx(solution, abs=1e-12)

    def test_nonconvergence_reported_not_raised(self):
        problem = SolveProblem(
            parameters={"t": 1.0},
            residual_fn=lambda values: np.array([values["t"] ** 2 + 1.0]),
        )
        report = solve(problem, tol=1e-12, max_iter=5)
        assert not report.converged
        assert report.message

    def test_jacobian_condition_reported(self):
        problem = catalog.solve_problem("clp")
        problem.parameters.update({"a": 0.25, "b": 0.25})
        report = solve(problem, tol=1e-12)
        assert report.converged
        assert np.isfinite(report.jacobian_condition)
        assert report.jacobian_condition < 1e3


class TestVerifyClosedForm:
    @pytest.mark.parametrize(
        "example_id", ["superman_3", "schwarzP_3", "clp", "ht"]
    )
    def test_closed_forms_verify(self, example_id):
        assert verify_closed_form(example_id)

    def test_fully_determined_passes_vacuously(self):
        assert verify_closed_form("superman_1")


class TestSymmetryReductionCrossCheck:
    """Full-free-vertex solves reach the same positions as the reduced ones."""

    def _interior_free_problem(self, example_id, coord_names, build_positions):
        entry_spec = catalog.domain_spec(example_id)
        defaults = entry_spec.parameter_defaults()

        def residual_fn(values):
            surface = build_positions(values)
            grads = gradient_field(surface)
            apex = surface.vertex_count - 1
            return grads[apex]

        params = {name: 0.45 for name in coord_names}
        return SolveProblem(
            parameters=params,
            residual_fn=residual_fn,
            constraints={0: VertexConstraint("free")},
            description=f"{example_id} free interior vertex",
        )

    def test_fan_reduction(self):
        spec = catalog.domain_spec("superman_3")

        def build(values):
            params = spec.parameter_defaults()
            params.update({"a": values["px"], "b": values["py"], "c": values["pz"]})
            surface, _ = realize_domain_spec(spec, params)
            return surface

        problem = self._interior_free_problem("superman_3", ("px", "py", "pz"), build)
        problem.parameters.update({"px": 0.7, "py": 0.45, "pz": 0.55})
        report = solve(problem, tol=1e-12)
        assert report.converged
        # the free solve lands on the symmetric configuration with b = c
        assert report.final_parameters["py"] == pytest.approx(
            report.final_parameters["pz"], abs=1e-6
        )
        assert report.final_parameters["px"] == pytest.approx(
            (3 - SQRT2) / 2, abs=1e-6
        )

    def test_box_fan_reduction(self):
        spec = catalog.domain_spec("clp")

        def build(values):
            pts = []
            params = spec.parameter_defaults()
            x, y = params["x"], params["y"]
            pts = [
                (x, 0, 0), (0, 0, 0), (0, y, 0), (0, y, 1), (0, 0, 1), (x, 0, 1),
                (values["px"], values["py"], values["pz"]),
            ]
            tris = [(j, (j + 1) % 6, 6) for j in range(6)]
            return SimplicialSurface(pts, tris)

        problem = self._interior_free_problem("clp", ("px", "py", "pz"), build)
        problem.parameters.update({"px": 0.25, "py": 0.22, "pz": 0.45})
        report = solve(problem, tol=1e-12)
        assert report.converged
        # the free vertex settles onto the mid-plane, validating the
        # half-height reduction
        assert report.final_parameters["pz"] == pytest.approx(0.5, abs=1e-6)
        assert report.final_parameters["px"] == pytest.approx(
            (SQRT2 - 1) / 2, abs=1e-6
        )
        assert report.final_parameters["py"] == pytest.approx(
            (SQRT2 - 1) / 2, abs=1e-6
        )

    def test_segment_crossing_reduction(self):
        # free crossing vertex plus the two shape parameters: five unknowns
        spec = catalog.domain_spec("iwp")
        closed, _ = catalog.closed_form("iwp")

        base_problem = catalog.solve_problem("iwp")

        def residual_fn(values):
            a, b = values["a"], values["b"]
            pts = [
                (b, 0, b), (b, 0, 0), (b, b, 0), (1, 1, a), (1, a, 1),
                (values["px"], values["py"], values["pz"]),
            ]
            tris = [(0, 1, 2), (0, 2, 5), (2, 3, 5), (3, 4, 5), (4, 0, 5)]
            surface = SimplicialSurface(pts, tris)
            grads = gradient_field(surface)
            rows = list(grads[5])
            inv2 = 1 / SQRT2
            rows.append(float(np.dot((inv2, 0, inv2), grads[0])))
            rows.append(float(np.dot((inv2, inv2, 0), grads[2])))
            # conditions at the far edge-line vertices pin the free vertex
            rows.append(float(grads[3][2]))
            rows.append(float(grads[4][1]))
            return np.array(rows)

        problem = SolveProblem(
            parameters={
                "a": 0.32, "b": 0.57,
                "px": 0.77, "py": 0.46, "pz": 0.44,
            },
            residual_fn=residual_fn,
        )
        report = solve(problem, tol=1e-12, max_iter=80)
        assert report.converged
        assert report.final_parameters["a"] == pytest.approx(closed["a"], abs=1e-6)
        assert report.final_parameters["b"] == pytest.approx(closed["b"], abs=1e-6)
        # at the solution the four fan corners are coplanar and the interior
        # vertex is area-critical anywhere on that flat sheet; the free solve
        # must land on it (the parametric choice pins the segment crossing,
        # which lies on the same sheet, so the traces agree)
        a, b = closed["a"], closed["b"]
        p1 = np.array([b, 0, b])
        p3 = np.array([b, b, 0])
        p4 = np.array([1, 1, a])
        p5 = np.array([1, a, 1])
        normal = np.cross(p3 - p1, p4 - p1)
        normal /= np.linalg.norm(normal)
        assert abs(np.dot(p5 - p1, normal)) <= 1e-9  # corners coplanar
        p6 = np.array(
            [report.final_parameters[k] for k in ("px", "py", "pz")]
        )
        assert abs(np.dot(p6 - p1, normal)) <= 1e-6
