import json

import numpy as np
import pytest

from minsurf import catalog
from minsurf.cli import main
from minsurf.io import export_mesh, import_mesh
from minsurf.mesh import SimplicialSurface


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestList:
    def test_text(self, capsys):
        code, out, _ = run(capsys, "list")
        assert code == 0
        assert "superman_3" in out
        assert "4 triangles" in out

    def test_json(self, capsys):
        code, out, _ = run(capsys, "list", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        ids = {row["example_id"] for row in payload["examples"]}
        assert "fischer_koch" in ids and "catenoid_PH_family" in ids


class TestGenerate:
    def test_export_obj(self, capsys, tmp_path):
        out_path = tmp_path / "p1.obj"
        code, out, _ = run(capsys, "generate", "schwarzP_1", "-o", str(out_path))
        assert code == 0
        mesh = import_mesh(out_path)
        assert mesh.vertex_count == 7
        assert mesh.triangle_count == 6

    def test_parameterized_generate(self, capsys, tmp_path):
        out_path = tmp_path / "s.obj"
        code, _, _ = run(
            capsys, "generate", "superman_1", "--param", "x=0.5", "-o", str(out_path)
        )
        assert code == 0
        mesh = import_mesh(out_path)
        assert any(np.allclose(p, (0.5, 0.5, 0.25)) for p in mesh.positions)

    def test_unknown_example_usage_error(self, capsys):
        code, _, err = run(capsys, "generate", "nosuch")
        assert code == 2
        assert "nosuch" in err

    def test_bad_param_usage_error(self, capsys):
        code, _, _ = run(capsys, "generate", "superman_1", "--param", "x=abc")
        assert code == 2


class TestSolve:
    def test_fan_solution_reported(self, capsys):
        code, out, _ = run(capsys, "solve", "superman_3", "--param", "z=1")
        assert code == 0
        assert "a = 0.7928932" in out
        assert "b = 0.5" in out

    def test_prism_solution(self, capsys):
        code, out, _ = run(capsys, "solve", "ht", "--param", "b=1")
        assert code == 0
        assert "0.8535533" in out
        assert "c = 0.75" in out

    def test_helical_fan_converges(self, capsys):
        code, out, _ = run(
            capsys, "solve", "fischer_koch", "--param", "a=1", "--format", "json"
        )
        assert code == 0
        payload = json.loads(out)
        assert payload["converged"]
        assert 0 < payload["parameters"]["b"] < 1

    def test_report_file(self, capsys, tmp_path):
        report = tmp_path / "report.json"
        code, _, _ = run(capsys, "solve", "clp", "--report", str(report))
        assert code == 0
        payload = json.loads(report.read_text())
        assert payload["converged"]

    def test_spec_file_input(self, capsys, tmp_path):
        from minsurf.io import serialize_domain_spec

        spec = catalog.domain_spec("superman_3")
        path = tmp_path / "fan.spec"
        path.write_text(serialize_domain_spec(spec))
        code, out, _ = run(capsys, "solve", str(path), "--param", "z=1")
        assert code == 0
        assert "0.79289" in out


class TestTile:
    def test_window_export_and_periods(self, capsys, tmp_path):
        out_path = tmp_path / "tile.obj"
        code, out, _ = run(
            capsys, "tile", "superman_1", "--param", "x=1",
            "--window", "-1:2", "-o", str(out_path),
        )
        assert code == 0
        assert "(2, 0, 0)" in out
        assert "minimality: pass" in out
        mesh = import_mesh(out_path)
        assert mesh.triangle_count > 100

    def test_bad_window_usage_error(self, capsys):
        code, _, _ = run(capsys, "tile", "superman_1", "--window", "oops")
        assert code == 2

    def test_budget_exceeded_runtime_error(self, capsys):
        code, _, err = run(
            capsys, "tile", "superman_1", "--window", "-4:6", "--depth", "5"
        )
        assert code == 3
        assert "max_copies" in err


class TestVerify:
    def test_example_passes(self, capsys):
        code, out, _ = run(capsys, "verify", "superman_3", "--format", "json")
        assert code == 0
        payload = json.loads(out)
        assert payload["minimality"]["passed"]
        assert payload["intersections"] == 0

    def test_perturbed_mesh_fails(self, capsys, tmp_path):
        surface, _, _ = catalog.instantiate("superman_3")
        positions = surface.positions.copy()
        interior = surface.interior_vertices()
        positions[interior[0], 0] += 1e-3
        bumped = SimplicialSurface(positions, surface.triangles)
        path = tmp_path / "perturbed.obj"
        export_mesh(bumped, "obj", path)
        code, out, _ = run(capsys, "verify", "--mesh", str(path))
        assert code == 1
        assert "FAIL" in out

    def test_missing_target_usage_error(self, capsys):
        code, _, _ = run(capsys, "verify")
        assert code == 2
