"""Simplicial surface data model: oriented triangle meshes with manifold checks."""

from __future__ import annotations

import numpy as np

__all__ = [
    "DEGENERACY_FACTOR",
    "WELD_TOLERANCE",
    "InvalidMeshError",
    "NonManifoldError",
    "DegenerateGeometryError",
    "SimplicialSurface",
    "surfaces_equal",
    "canonical_vertex_set",
    "canonical_triangle_set",
]

# A triangle is degenerate when its area drops below this factor times the
# square of its longest edge (scale invariant).
DEGENERACY_FACTOR = 1e-12

# Default absolute distance below which two vertices count as coincident.
WELD_TOLERANCE = 1e-9


class InvalidMeshError(ValueError):
    """Mesh data violates a structural invariant."""


class NonManifoldError(InvalidMeshError):
    """An edge is bounded by three or more triangles."""


class DegenerateGeometryError(InvalidMeshError):
    """A triangle is collapsed below the degeneracy threshold."""


def _as_positions(positions) -> np.ndarray:
    pos = np.array(positions, dtype=float)
    if pos.size == 0:
        pos = pos.reshape(0, 3)
    if pos.ndim != 2 or pos.shape[1] != 3:
        raise InvalidMeshError(f"positions must have shape (n, 3), got {pos.shape}")
    return pos


def _as_triangles(triangles) -> np.ndarray:
    tri = np.array(triangles, dtype=np.int64)
    if tri.size == 0:
        tri = tri.reshape(0, 3)
    if tri.ndim != 2 or tri.shape[1] != 3:
        raise InvalidMeshError(f"triangles must have shape (m, 3), got {tri.shape}")
    return tri


def _canonical_triangle_rows(tri: np.ndarray) -> np.ndarray:
    """Rotate each triangle so its smallest index comes first (orientation kept),
    then sort rows lexicographically."""
    if len(tri) == 0:
        return tri
    shift = np.argmin(tri, axis=1)
    rows = np.arange(len(tri))[:, None]
    cols = (shift[:, None] + np.arange(3)[None, :]) % 3
    rotated = tri[rows, cols]
    order = np.lexsort((rotated[:, 2], rotated[:, 1], rotated[:, 0]))
    return rotated[order]


def _cell_index(positions: np.ndarray, tol: float) -> dict:
    cells: dict[tuple, list[int]] = {}
    keys = np.floor(positions / tol).astype(np.int64)
    for i, key in enumerate(map(tuple, keys)):
        cells.setdefault(key, []).append(i)
    return cells


_NEIGHBOR_OFFSETS = [
    (dx, dy, dz)
    for dx in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dz in (-1, 0, 1)
]


def _close_pairs(positions: np.ndarray, tol: float):
    """Yield index pairs (i < j) of vertices within ``tol`` of each other."""
    cells = _cell_index(positions, tol)
    keys = np.floor(positions / tol).astype(np.int64)
    tol2 = tol * tol
    for i in range(len(positions)):
        kx, ky, kz = keys[i]
        for dx, dy, dz in _NEIGHBOR_OFFSETS:
            bucket = cells.get((kx + dx, ky + dy, kz + dz))
            if bucket is None:
                continue
            for j in bucket:
                if j <= i:
                    continue
                d = positions[i] - positions[j]
                if d @ d <= tol2:
                    yield i, j


class SimplicialSurface:
    """Oriented triangle mesh realizing a simplicial surface in 3-space.

    Parameters
    ----------
    positions : (n, 3) array_like
        Vertex coordinates, all finite.
    triangles : (m, 3) array_like of int
        Vertex index triples. The order is orientation-bearing; neighboring
        triangles must induce opposite directions on their shared edge.
    check : bool
        Validate all structural invariants on construction (edge manifoldness,
        consistent orientation, non-degeneracy, no coincident vertices).

    Notes
    -----
    Instances are immutable: the coordinate and index arrays are frozen, and
    every operation that changes the mesh returns a new surface.
    """

    def __init__(self, positions, triangles, check: bool = True):
        self.positions = _as_positions(positions)
        self.triangles = _as_triangles(triangles)
        self.positions.setflags(write=False)
        self.triangles.setflags(write=False)
        self._cache: dict = {}
        if check:
            self._validate()

    # ------------------------------------------------------------------ #
    # basic properties

    @property
    def vertex_count(self) -> int:
        return len(self.positions)

    @property
    def triangle_count(self) -> int:
        return len(self.triangles)

    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        if self.vertex_count == 0:
            z = np.zeros(3)
            return z, z
        return self.positions.min(axis=0), self.positions.max(axis=0)

    def diameter(self) -> float:
        lo, hi = self.bbox()
        return float(np.linalg.norm(hi - lo))

    def edge_lengths(self) -> np.ndarray:
        p = self.positions[self.triangles]
        e = np.stack(
            [p[:, 1] - p[:, 0], p[:, 2] - p[:, 1], p[:, 0] - p[:, 2]], axis=1
        )
        return np.linalg.norm(e, axis=2)

    def longest_edge(self) -> float:
        if self.triangle_count == 0:
            return 0.0
        return float(self.edge_lengths().max())

    # ------------------------------------------------------------------ #
    # connectivity

    def _directed_edges(self) -> np.ndarray:
        return self.triangles[:, [0, 1, 1, 2, 2, 0]].reshape(-1, 2)

    def _edge_counts(self):
        """Undirected edges and their face counts."""
        if "edge_counts" not in self._cache:
            de = self._directed_edges()
            und = np.sort(de, axis=1)
            key = und[:, 0] * (self.vertex_count + 1) + und[:, 1]
            uniq, inverse, counts = np.unique(
                key, return_inverse=True, return_counts=True
            )
            first = np.zeros(len(uniq), dtype=np.int64)
            first[inverse[::-1]] = np.arange(len(de))[::-1]
            self._cache["edge_counts"] = (und[first], counts, de, inverse)
        return self._cache["edge_counts"]

    def boundary_edges(self) -> set[tuple[int, int]]:
        """Edges bounding exactly one triangle, directed as in that triangle."""
        und, counts, de, inverse = self._edge_counts()
        boundary_keys = counts[inverse] == 1
        return {tuple(edge) for edge in de[boundary_keys]}

    def is_closed(self) -> bool:
        return not self.boundary_edges()

    def vertex_is_boundary(self) -> np.ndarray:
        """Boolean array: True where the vertex lies on a boundary edge."""
        if "vertex_is_boundary" not in self._cache:
            flags = np.zeros(self.vertex_count, dtype=bool)
            for u, v in self.boundary_edges():
                flags[u] = True
                flags[v] = True
            self._cache["vertex_is_boundary"] = flags
        return self._cache["vertex_is_boundary"]

    def classify_vertices(self) -> dict[int, str]:
        """Map each vertex id to ``"interior"`` or ``"boundary"``."""
        flags = self.vertex_is_boundary()
        return {
            int(v): ("boundary" if flags[v] else "interior")
            for v in range(self.vertex_count)
        }

    def interior_vertices(self) -> np.ndarray:
        return np.flatnonzero(~self.vertex_is_boundary())

    def star(self, vertex: int) -> list[tuple[int, int, int]]:
        """Triangles containing ``vertex``, each rotated to start at it.

        The cyclic order of each triangle is preserved, so orientation is
        unchanged.
        """
        v = int(vertex)
        if v < 0 or v >= self.vertex_count:
            raise ValueError(f"unknown vertex id {vertex}")
        mask = (self.triangles == v).any(axis=1)
        out = []
        for row in self.triangles[mask]:
            k = int(np.flatnonzero(row == v)[0])
            out.append((int(row[k]), int(row[(k + 1) % 3]), int(row[(k + 2) % 3])))
        return out

    # ------------------------------------------------------------------ #
    # validation

    def triangle_areas(self) -> np.ndarray:
        p = self.positions[self.triangles]
        n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        return 0.5 * np.linalg.norm(n, axis=1)

    def _validate(self) -> None:
        if not np.isfinite(self.positions).all():
            raise InvalidMeshError("vertex coordinates must be finite")
        tri = self.triangles
        if len(tri) == 0:
            return
        if tri.min() < 0 or tri.max() >= self.vertex_count:
            raise InvalidMeshError("triangle index out of range")
        if (
            (tri[:, 0] == tri[:, 1])
            | (tri[:, 1] == tri[:, 2])
            | (tri[:, 2] == tri[:, 0])
        ).any():
            raise InvalidMeshError("triangle with repeated vertex")

        # duplicate triangles (same vertex set)
        srt = np.sort(tri, axis=1)
        v1 = np.int64(self.vertex_count + 1)
        tri_key = (srt[:, 0] * v1 + srt[:, 1]) * v1 + srt[:, 2]
        if len(np.unique(tri_key)) != len(tri_key):
            raise InvalidMeshError("duplicate triangle (same vertex set)")

        # degeneracy: area relative to the squared longest edge
        areas = self.triangle_areas()
        longest = self.edge_lengths().max(axis=1)
        bad = areas < DEGENERACY_FACTOR * longest**2
        if bad.any():
            raise DegenerateGeometryError(
                f"degenerate triangle(s) at rows {np.flatnonzero(bad).tolist()}"
            )

        _, counts, _, _ = self._edge_counts()
        if (counts > 2).any():
            raise NonManifoldError("an edge bounds more than two triangles")
        # each directed edge may appear only once: together with the face-count
        # bound this enforces globally consistent orientation
        de = self._directed_edges()
        de_key = de[:, 0] * v1 + de[:, 1]
        if len(np.unique(de_key)) != len(de_key):
            raise InvalidMeshError(
                "two triangles induce the same direction on a shared edge "
                "(inconsistent orientation)"
            )

        # coincident vertices within the welding tolerance
        for i, j in _close_pairs(self.positions, WELD_TOLERANCE):
            raise InvalidMeshError(
                f"vertices {i} and {j} coincide within the welding tolerance"
            )

    # ------------------------------------------------------------------ #
    # welding

    def weld(self, tolerance: float = WELD_TOLERANCE) -> "SimplicialSurface":
        """Merge vertices within ``tolerance`` and collapse duplicate triangles.

        Vertex indices of the result are relabeled deterministically
        (lexicographic by position). Raises if the welded mesh violates any
        surface invariant.
        """
        if tolerance <= 0:
            raise ValueError("welding tolerance must be positive")
        n = self.vertex_count
        parent = np.arange(n)

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for i, j in _close_pairs(self.positions, tolerance):
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

        root = np.array([find(i) for i in range(n)])
        clusters: dict[int, list[int]] = {}
        for i, r in enumerate(root):
            clusters.setdefault(int(r), []).append(i)

        # representative coordinates: lexicographically smallest member
        rep_pos = {}
        for r, members in clusters.items():
            coords = self.positions[members]
            best = min(range(len(members)), key=lambda k: tuple(coords[k]))
            rep_pos[r] = coords[best]

        roots_sorted = sorted(rep_pos, key=lambda r: tuple(rep_pos[r]))
        new_id = {r: k for k, r in enumerate(roots_sorted)}
        positions = np.array([rep_pos[r] for r in roots_sorted])
        remap = np.array([new_id[int(r)] for r in root])

        tri = remap[self.triangles]
        collapsed = (
            (tri[:, 0] == tri[:, 1])
            | (tri[:, 1] == tri[:, 2])
            | (tri[:, 2] == tri[:, 0])
        )
        if collapsed.any():
            raise DegenerateGeometryError("welding collapsed a triangle")

        tri = _canonical_triangle_rows(tri)
        # drop duplicates by vertex set, keeping the first canonical row
        seen: set[tuple[int, int, int]] = set()
        keep = []
        for row in tri:
            key = tuple(sorted(row))
            if key not in seen:
                seen.add(key)
                keep.append(row)
        tri = np.array(keep, dtype=np.int64).reshape(-1, 3)
        return SimplicialSurface(positions, tri)

    def __repr__(self) -> str:  # pragma: no cover
        return (
            f"SimplicialSurface({self.vertex_count} vertices, "
            f"{self.triangle_count} triangles)"
        )


# ---------------------------------------------------------------------- #
# set-style comparisons (used for orbit/periodicity checks)


def canonical_vertex_set(surface: SimplicialSurface, decimals: int = 9) -> set:
    pts = np.round(surface.positions, decimals)
    pts = pts + 0.0  # normalize -0.0
    return {tuple(p) for p in pts}


def canonical_triangle_set(surface: SimplicialSurface, decimals: int = 9) -> set:
    pts = np.round(surface.positions, decimals) + 0.0
    out = set()
    for row in surface.triangles:
        out.add(frozenset(map(tuple, pts[row])))
    return out


def surfaces_equal(
    a: SimplicialSurface, b: SimplicialSurface, decimals: int = 9
) -> bool:
    """Equality of vertex and triangle sets up to index relabeling."""
    return canonical_vertex_set(a, decimals) == canonical_vertex_set(
        b, decimals
    ) and canonical_triangle_set(a, decimals) == canonical_triangle_set(b, decimals)
