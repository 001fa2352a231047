import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from minsurf import catalog
from minsurf.mesh import (
    DegenerateGeometryError,
    InvalidMeshError,
    NonManifoldError,
    SimplicialSurface,
    surfaces_equal,
)

from conftest import fan_surface, random_one_ring


class TestConstruction:
    def test_rejects_out_of_range_index(self):
        with pytest.raises(InvalidMeshError):
            SimplicialSurface([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 3)])

    def test_rejects_repeated_vertex_in_triangle(self):
        with pytest.raises(InvalidMeshError):
            SimplicialSurface([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 1)])

    def test_rejects_degenerate_triangle(self):
        with pytest.raises(DegenerateGeometryError):
            SimplicialSurface(
                [(0, 0, 0), (1, 0, 0), (2, 0, 1e-14)], [(0, 1, 2)]
            )

    def test_rejects_nonmanifold_edge(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1)]
        tris = [(0, 1, 2), (1, 0, 3), (0, 1, 4)]
        with pytest.raises(NonManifoldError):
            SimplicialSurface(pts, tris)

    def test_rejects_inconsistent_orientation(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 1, 1)]
        # both triangles run the shared edge 0 -> 1
        with pytest.raises(InvalidMeshError):
            SimplicialSurface(pts, [(0, 1, 2), (0, 1, 3)])

    def test_rejects_coincident_vertices(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1e-12, 0, 0)]
        with pytest.raises(InvalidMeshError):
            SimplicialSurface(pts, [(0, 1, 2), (1, 3, 2)])

    def test_rejects_duplicate_triangle(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0)]
        with pytest.raises(InvalidMeshError):
            SimplicialSurface(pts, [(0, 1, 2), (2, 1, 0)])

    def test_nonfinite_positions_rejected(self):
        with pytest.raises(InvalidMeshError):
            SimplicialSurface([(0, 0, 0), (1, 0, 0), (0, np.inf, 0)], [(0, 1, 2)])


class TestStar:
    def test_single_triangle(self, unit_triangle):
        assert unit_triangle.star(0) == [(0, 1, 2)]
        assert unit_triangle.star(1) == [(1, 2, 0)]

    def test_unknown_vertex(self, unit_triangle):
        with pytest.raises(ValueError):
            unit_triangle.star(7)

    def test_fan_piece_interior_star(self):
        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        star = surface.star(8)
        assert len(star) == 8
        assert all(t[0] == 8 for t in star)

    def test_fan_piece_boundary_star(self):
        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        star = surface.star(0)
        assert sorted(star) == [(0, 1, 8), (0, 8, 7)]


class TestBoundary:
    def test_closed_tetrahedron_has_none(self, tetrahedron):
        assert tetrahedron.boundary_edges() == set()
        assert tetrahedron.is_closed()

    def test_octagon_fan_boundary(self):
        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        edges = surface.boundary_edges()
        assert edges == {(j, (j + 1) % 8) for j in range(8)}

    def test_helical_fan_boundary(self):
        surface, _, _ = catalog.instantiate("fischer_koch")
        edges = surface.boundary_edges()
        assert edges == {(j, (j + 1) % 8) for j in range(8)}

    def test_classification(self, tetrahedron):
        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        classes = surface.classify_vertices()
        assert [classes[v] for v in range(8)] == ["boundary"] * 8
        assert classes[8] == "interior"
        assert all(v == "interior" for v in tetrahedron.classify_vertices().values())

    def test_interior_matches_closed_fan(self, rng):
        # p is interior iff its star forms a single closed fan around it
        for _ in range(25):
            surface = random_one_ring(rng)
            apex = surface.vertex_count - 1
            assert not surface.vertex_is_boundary()[apex]
            assert all(
                surface.vertex_is_boundary()[v] for v in range(apex)
            )

    def test_assembled_ring_has_no_interior_vertices(self):
        # the four welded strips leave every vertex on a mirror plane
        surface, _, _ = catalog.instantiate("schwarzP_3")
        assert len(surface.interior_vertices()) == 0


class TestWeld:
    def test_exact_shared_edge(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (1, 0, 0), (0, 0, 0), (0, 0, -1)]
        tris = [(0, 1, 2), (3, 4, 5)]
        welded = SimplicialSurface(pts, tris, check=False).weld(1e-9)
        assert welded.vertex_count == 4
        assert welded.triangle_count == 2

    def test_duplicate_triangles_collapse(self):
        pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 0), (1, 0, 0), (0, 1, 0)]
        tris = [(0, 1, 2), (3, 4, 5)]
        welded = SimplicialSurface(pts, tris, check=False).weld(1e-9)
        assert welded.vertex_count == 3
        assert welded.triangle_count == 1

    def test_half_turn_image_welds_to_sixteen(self):
        from minsurf.symmetry import half_turn_about_edge

        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        motion = half_turn_about_edge(
            surface.positions[0], surface.positions[1]
        )
        image_positions = motion(surface.positions)
        pts = np.concatenate([surface.positions, image_positions])
        tris = np.concatenate(
            [surface.triangles, surface.triangles[:, ::-1] + 9]
        )
        welded = SimplicialSurface(pts, tris, check=False).weld(1e-9)
        assert welded.vertex_count == 16
        assert welded.triangle_count == 16

    def test_degenerate_collapse_raises(self):
        surface = SimplicialSurface(
            [(0, 0, 0), (1e-12, 0, 0), (0, 1, 0)], [(0, 1, 2)], check=False
        )
        with pytest.raises(DegenerateGeometryError):
            surface.weld(1e-9)

    def test_weld_tolerance_must_be_positive(self, unit_triangle):
        with pytest.raises(ValueError):
            unit_triangle.weld(0.0)

    @settings(max_examples=20, deadline=None)
    @given(st.integers(min_value=0, max_value=10_000))
    def test_weld_idempotent(self, seed):
        rng = np.random.default_rng(seed)
        surface = random_one_ring(rng)
        once = surface.weld(1e-9)
        twice = once.weld(1e-9)
        assert np.allclose(once.positions, twice.positions)
        assert np.array_equal(once.triangles, twice.triangles)


class TestInvariantsOnCatalog:
    @pytest.mark.parametrize("example_id", catalog.entry_ids())
    def test_examples_satisfy_invariants(self, example_id):
        surface, _, _ = catalog.instantiate(example_id)
        # constructor re-validation: face counts, orientation, degeneracy
        SimplicialSurface(surface.positions, surface.triangles)

    def test_surfaces_equal_ignores_labeling(self, unit_triangle):
        relabeled = SimplicialSurface(
            [(1, 0, 0), (0, 1, 0), (0, 0, 0)], [(1, 2, 0)]
        )
        assert surfaces_equal(unit_triangle, relabeled)
