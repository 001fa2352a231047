import numpy as np
import pytest

from minsurf import catalog
from minsurf.energy import minimality_residual, surface_area
from minsurf.mesh import canonical_triangle_set, canonical_vertex_set
from minsurf.symmetry import (
    Box,
    BudgetExceededError,
    GeneratorSet,
    apply_motion,
    detect_periods,
    extend,
    find_translations,
    half_turn_about_edge,
    identity_motion,
    motion_is_symmetry,
    reflection_across_plane,
    rotation_about_axis,
    translation_motion,
)


class TestMotions:
    def test_half_turn_about_x_axis_edge(self):
        motion = half_turn_about_edge((0, 0, 0), (1, 0, 0))
        assert np.allclose(motion((0, 1, 0)), (0, -1, 0))
        assert motion.kind == "half_turn_rotation"

    def test_half_turn_is_involution(self, rng):
        for _ in range(10):
            p, q = rng.normal(size=(2, 3))
            motion = half_turn_about_edge(p, q)
            square = motion.compose(motion)
            assert np.abs(square.linear - np.eye(3)).max() <= 1e-12
            assert np.abs(square.translation).max() <= 1e-12

    def test_half_turn_fixes_axis(self):
        motion = half_turn_about_edge((1, 0, 0), (1, 1, 0))
        for t in (-1.0, 0.3, 2.0):
            point = np.array([1.0, t, 0.0])
            assert np.allclose(motion(point), point)

    def test_half_turn_about_box_edge(self):
        # the image of the fan apex under rotation about the edge through
        # (1,0,0) and (1,1,0)
        motion = half_turn_about_edge((1, 0, 0), (1, 1, 0))
        assert np.allclose(motion((0.5, 0.5, 0.5)), (1.5, 0.5, -0.5))

    def test_degenerate_edge_rejected(self):
        with pytest.raises(ValueError):
            half_turn_about_edge((1, 1, 1), (1, 1, 1))

    def test_reflection_across_z_plane(self):
        motion = reflection_across_plane((0, 0, 0), (0, 0, 1))
        assert np.allclose(motion((1, 2, 3)), (1, 2, -3))
        assert motion.kind == "reflection"
        assert motion.det == pytest.approx(-1.0)

    def test_reflection_across_offset_plane(self):
        motion = reflection_across_plane((0, 0, 6), (0, 0, 1))
        assert np.allclose(motion((3, 3, 3)), (3, 3, 9))

    def test_zero_normal_rejected(self):
        with pytest.raises(ValueError):
            reflection_across_plane((0, 0, 0), (0, 0, 0))

    def test_parallel_reflections_compose_to_translation(self):
        m1 = reflection_across_plane((0, 0, 0), (0, 0, 1))
        m2 = reflection_across_plane((0, 0, 6), (0, 0, 1))
        composed = m2.compose(m1)
        assert composed.kind == "translation"
        assert np.allclose(composed.translation, (0, 0, 12))

    def test_classification_of_screw(self):
        rot = rotation_about_axis((0, 0, 0), (0, 0, 1), np.pi)
        screw = translation_motion((0, 0, 1)).compose(rot)
        assert screw.kind == "screw"

    def test_orthogonality_enforced(self):
        with pytest.raises(ValueError):
            from minsurf.symmetry import RigidMotion

            RigidMotion(np.eye(3) * 2.0, np.zeros(3))


class TestGeneratorSet:
    def test_annotation_validated(self):
        motion = half_turn_about_edge((0, 0, 0), (1, 0, 0))
        GeneratorSet([motion], [("edge", ((0, 0, 0), (1, 0, 0)))])
        with pytest.raises(ValueError):
            GeneratorSet([motion], [("edge", ((0, 0, 1), (1, 0, 1)))])

    def test_plane_annotation(self):
        motion = reflection_across_plane((0, 0, 6), (0, 0, 1))
        GeneratorSet([motion], [("plane", ((0, 0, 6), (0, 0, 1)))])
        with pytest.raises(ValueError):
            GeneratorSet([motion], [("plane", ((0, 0, 0), (0, 0, 1)))])


class TestApply:
    def test_identity(self, hexagon_fan):
        moved = apply_motion(hexagon_fan, identity_motion())
        assert np.allclose(moved.positions, hexagon_fan.positions)
        assert np.array_equal(moved.triangles, hexagon_fan.triangles)

    def test_area_preserved(self, hexagon_fan):
        motion = rotation_about_axis((1, 2, 3), (3, -1, 2), 0.777)
        moved = apply_motion(hexagon_fan, motion)
        assert surface_area(moved) == pytest.approx(
            surface_area(hexagon_fan), rel=1e-12
        )

    def test_reflection_flips_orientation(self, unit_triangle):
        moved = apply_motion(
            unit_triangle, reflection_across_plane((0, 0, 0), (0, 0, 1))
        )
        assert np.array_equal(moved.triangles, [[2, 1, 0]])

    def test_half_turn_image_shares_one_edge(self):
        surface, _, _ = catalog.instantiate("superman_1", {"x": 1.0})
        motion = half_turn_about_edge(surface.positions[0], surface.positions[1])
        window = Box.around(surface.positions, 3.0)
        glued = extend(surface, [motion], window)
        assert glued.vertex_count == 16
        # exactly one edge acquired two faces: total edges 2*12 - 1
        _, counts, _, _ = glued._edge_counts()
        assert (counts == 2).sum() == 17  # 8 interior per copy + the seam


class TestExtend:
    def test_empty_generators_returns_seed(self, hexagon_fan):
        out = extend(hexagon_fan, [], Box((-2, -2, -2), (2, 2, 2)))
        assert out is hexagon_fan

    def test_octagon_window_extension_is_minimal(self):
        surface, gens, _ = catalog.instantiate("superman_1", {"x": 1.0})
        window = Box((-1, -1, -1), (2, 2, 2))
        ext = extend(surface, gens.motions, window)
        core = window.inset(ext.longest_edge())
        check = [
            v for v in ext.interior_vertices() if core.contains(ext.positions[v])
        ]
        report = minimality_residual(ext, tol=1e-10, vertices=check)
        assert check and report.passed

    def test_generator_order_irrelevant(self, rng):
        surface, gens, _ = catalog.instantiate("superman_1", {"x": 1.0})
        window = Box((-1, -1, -1), (2, 2, 2))
        base = extend(surface, gens.motions, window)
        for _ in range(3):
            shuffled = list(gens.motions)
            rng.shuffle(shuffled)
            other = extend(surface, shuffled, window)
            assert canonical_vertex_set(base) == canonical_vertex_set(other)
            assert canonical_triangle_set(base) == canonical_triangle_set(other)

    def test_budget_exceeded(self):
        surface, gens, _ = catalog.instantiate("superman_1", {"x": 1.0})
        with pytest.raises(BudgetExceededError) as info:
            extend(surface, gens.motions, Box((-4, -4, -4), (5, 5, 5)), max_copies=10)
        assert info.value.placed > 10

    def test_reflection_group_overlap_translation(self):
        # two parallel wall reflections 6 apart compose to a 12-translation;
        # the welded window must agree with its own translate on the overlap
        surface, gens, _ = catalog.instantiate("schwarzP_1")
        window = Box((-6, -6, -6), (12, 12, 12))
        ext = extend(surface, gens.motions, window)
        periods = detect_periods(
            ext, [(12, 0, 0), (0, 12, 0), (0, 0, 12)], window=window, margin=0.0
        )
        assert len(periods) == 3


@pytest.fixture(scope="module")
def p_extension():
    surface, gens, _ = catalog.instantiate("schwarzP_1")
    window = Box((-6, -6, -6), (12, 12, 12))
    return extend(surface, gens.motions, window), window


class TestPeriodsAndSymmetry:

    def test_non_period_rejected(self, p_extension):
        ext, window = p_extension
        assert detect_periods(ext, [(1, 0, 0)], window=window, margin=0.0) == []

    def test_empty_candidates(self, p_extension):
        ext, window = p_extension
        assert detect_periods(ext, [], window=window) == []

    def test_identity_is_symmetry(self, p_extension):
        ext, window = p_extension
        assert motion_is_symmetry(ext, identity_motion(), window=window)

    def test_quarter_turn_symmetry_of_assembled_ring(self):
        surface, gens, _ = catalog.instantiate("schwarzP_3")
        window = Box((-2, -2, -2), (2, 2, 2))
        ext = extend(surface, gens.motions, window)
        quarter = rotation_about_axis((0, 0, 0), (0, 0, 1), np.pi / 2)
        assert motion_is_symmetry(ext, quarter, window=window, margin=0.1)

    def test_generic_reflection_is_not_symmetry(self):
        surface, gens, _ = catalog.instantiate("superman_2")
        window = Box((-1.5, -1.5, -1.5), (2.5, 2.5, 2.5))
        ext = extend(surface, gens.motions, window)
        bogus = reflection_across_plane((0.5, 0.5, 0.5), (1, 0, 0))
        assert not motion_is_symmetry(ext, bogus, window=window, margin=0.1)

    def test_find_translations_octagon(self):
        _, gens, _ = catalog.instantiate("superman_1", {"x": 1.0})
        vecs = find_translations(gens.motions, max_elements=600)
        lengths = sorted(round(float(np.linalg.norm(v)), 6) for v in vecs[:6])
        assert lengths[0] == pytest.approx(2.0)

    def test_minimality_transport(self):
        # if the seed's vertices are all critical inside the window, so is
        # every window-interior vertex of the extension
        surface, gens, _ = catalog.instantiate("clp")
        window = catalog.window_covering_periods("clp", n_periods=1)
        ext = extend(surface, gens.motions, window)
        core = window.inset(ext.longest_edge())
        check = [
            v for v in ext.interior_vertices() if core.contains(ext.positions[v])
        ]
        report = minimality_residual(ext, tol=1e-10, vertices=check)
        assert check and report.passed
