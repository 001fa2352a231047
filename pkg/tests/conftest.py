import numpy as np
import pytest

from minsurf.mesh import SimplicialSurface


def fan_surface(boundary, apex):
    """Closed fan: boundary loop plus one interior apex vertex."""
    pts = [tuple(p) for p in boundary] + [tuple(apex)]
    n = len(boundary)
    tris = [(j, (j + 1) % n, n) for j in range(n)]
    return SimplicialSurface(pts, tris)


def random_one_ring(rng, n_min=5, n_max=9):
    """Random non-degenerate fan around an interior vertex at the origin."""
    n = int(rng.integers(n_min, n_max + 1))
    angles = np.sort(rng.uniform(0, 2 * np.pi, size=n))
    # enforce a minimum angular gap so triangles stay well-shaped
    while np.min(np.diff(np.concatenate([angles, [angles[0] + 2 * np.pi]]))) < 0.2:
        angles = np.sort(rng.uniform(0, 2 * np.pi, size=n))
    radii = rng.uniform(0.5, 1.5, size=n)
    heights = rng.uniform(-0.4, 0.4, size=n)
    ring = np.stack(
        [radii * np.cos(angles), radii * np.sin(angles), heights], axis=1
    )
    apex = np.concatenate([rng.uniform(-0.2, 0.2, size=2), rng.uniform(-0.5, 0.5, size=1)])
    return fan_surface(ring, apex)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


@pytest.fixture
def unit_triangle():
    return SimplicialSurface([(0, 0, 0), (1, 0, 0), (0, 1, 0)], [(0, 1, 2)])


@pytest.fixture
def tetrahedron():
    pts = [(0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1)]
    tris = [(0, 2, 1), (0, 1, 3), (1, 2, 3), (0, 3, 2)]
    return SimplicialSurface(pts, tris)


@pytest.fixture
def hexagon_fan():
    ring = [
        (np.cos(k * np.pi / 3), np.sin(k * np.pi / 3), 0.0) for k in range(6)
    ]
    return fan_surface(ring, (0.0, 0.0, 0.0))
