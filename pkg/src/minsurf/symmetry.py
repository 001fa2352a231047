"""Rigid motions, generator sets, and bounded orbit expansion of a seed mesh."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .mesh import WELD_TOLERANCE, InvalidMeshError, SimplicialSurface

__all__ = [
    "RigidMotion",
    "GeneratorSet",
    "Box",
    "BudgetExceededError",
    "identity_motion",
    "translation_motion",
    "half_turn_about_edge",
    "half_turn_about_line",
    "reflection_across_plane",
    "rotation_about_axis",
    "apply_motion",
    "extend",
    "detect_periods",
    "motion_is_symmetry",
    "find_translations",
]

ORTHOGONALITY_TOL = 1e-12
MOTION_KEY_DECIMALS = 9
DEFAULT_MAX_COPIES = 10_000


class BudgetExceededError(RuntimeError):
    """Orbit expansion placed more copies than the allowed budget."""

    def __init__(self, placed: int, max_copies: int):
        super().__init__(
            f"orbit expansion exceeded max_copies={max_copies} "
            f"({placed} copies already placed)"
        )
        self.placed = placed
        self.max_copies = max_copies


def _classify(linear: np.ndarray, translation: np.ndarray) -> str:
    det = float(np.linalg.det(linear))
    trace = float(np.trace(linear))
    is_id = np.allclose(linear, np.eye(3), atol=1e-12)
    if det > 0:
        if is_id:
            return "translation"
        # fixed points exist iff (I - A) x = t is solvable
        lhs = np.eye(3) - linear
        x, residual, *_ = np.linalg.lstsq(lhs, translation, rcond=None)
        has_fixed = np.allclose(lhs @ x, translation, atol=1e-9)
        if abs(trace + 1.0) < 1e-9 and has_fixed:
            return "half_turn_rotation"
        if not has_fixed:
            return "screw"
        return "general"  # proper rotation by another angle
    # improper part
    if abs(trace - 1.0) < 1e-9 and np.allclose(linear, linear.T, atol=1e-9):
        lhs = np.eye(3) - linear
        x, *_ = np.linalg.lstsq(lhs, translation, rcond=None)
        if np.allclose(lhs @ x, translation, atol=1e-9):
            return "reflection"
    return "general"


@dataclass(frozen=True)
class RigidMotion:
    """Orthogonal linear part plus translation: ``x -> linear @ x + translation``."""

    linear: np.ndarray
    translation: np.ndarray
    kind: str = field(default="", compare=False)

    def __post_init__(self):
        lin = np.asarray(self.linear, dtype=float).reshape(3, 3)
        tr = np.asarray(self.translation, dtype=float).reshape(3)
        if not np.allclose(lin.T @ lin, np.eye(3), atol=1e-10):
            raise ValueError("linear part is not orthogonal")
        lin.setflags(write=False)
        tr.setflags(write=False)
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)
        if not self.kind:
            object.__setattr__(self, "kind", _classify(lin, tr))

    # motions compare and hash through a quantized key so they can be used
    # for group-element deduplication
    def key(self, decimals: int = MOTION_KEY_DECIMALS) -> tuple:
        vals = np.concatenate([self.linear.ravel(), self.translation])
        return tuple(np.round(vals, decimals) + 0.0)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RigidMotion):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def det(self) -> float:
        return float(np.linalg.det(self.linear))

    def __call__(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return pts @ self.linear.T + self.translation

    def compose(self, other: "RigidMotion") -> "RigidMotion":
        """Motion equal to ``self`` applied after ``other``."""
        return RigidMotion(
            self.linear @ other.linear,
            self.linear @ other.translation + self.translation,
        )

    def inverse(self) -> "RigidMotion":
        inv = self.linear.T
        return RigidMotion(inv, -inv @ self.translation)

    def is_identity(self, tol: float = 1e-12) -> bool:
        return bool(
            np.allclose(self.linear, np.eye(3), atol=tol)
            and np.allclose(self.translation, 0.0, atol=tol)
        )


def identity_motion() -> RigidMotion:
    return RigidMotion(np.eye(3), np.zeros(3))


def translation_motion(vector) -> RigidMotion:
    return RigidMotion(np.eye(3), np.asarray(vector, dtype=float))


def half_turn_about_line(point, direction) -> RigidMotion:
    """180-degree rotation about the line through ``point`` along ``direction``."""
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise ValueError("axis direction must be non-zero")
    d = d / norm
    a = np.asarray(point, dtype=float)
    linear = 2.0 * np.outer(d, d) - np.eye(3)
    return RigidMotion(linear, a - linear @ a)


def half_turn_about_edge(p, q) -> RigidMotion:
    """180-degree rotation about the line containing the segment ``p q``."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.allclose(p, q):
        raise ValueError("edge endpoints coincide; axis is undefined")
    return half_turn_about_line(p, q - p)


def reflection_across_plane(point, normal) -> RigidMotion:
    """Reflection across the plane through ``point`` with normal ``normal``."""
    n = np.asarray(normal, dtype=float)
    norm = np.linalg.norm(n)
    if norm == 0.0:
        raise ValueError("plane normal must be non-zero")
    n = n / norm
    a = np.asarray(point, dtype=float)
    linear = np.eye(3) - 2.0 * np.outer(n, n)
    return RigidMotion(linear, a - linear @ a)


def rotation_about_axis(point, direction, angle: float) -> RigidMotion:
    """Rotation by ``angle`` about the line through ``point`` along ``direction``."""
    d = np.asarray(direction, dtype=float)
    norm = np.linalg.norm(d)
    if norm == 0.0:
        raise ValueError("axis direction must be non-zero")
    d = d / norm
    K = np.array(
        [[0.0, -d[2], d[1]], [d[2], 0.0, -d[0]], [-d[1], d[0], 0.0]]
    )
    linear = np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)
    a = np.asarray(point, dtype=float)
    return RigidMotion(linear, a - linear @ a)


@dataclass
class GeneratorSet:
    """A finite list of rigid motions used to grow a surface by its orbit.

    Generators may carry an annotation recording the boundary edge (pair of
    points) or plane (point, normal) they are required to fix; annotations are
    validated on construction.
    """

    motions: list[RigidMotion]
    annotations: list[object] = field(default_factory=list)

    def __post_init__(self):
        if self.annotations and len(self.annotations) != len(self.motions):
            raise ValueError("annotations must match motions one-to-one")
        for motion, note in zip(self.motions, self.annotations):
            if note is None:
                continue
            kind, data = note
            if kind == "edge":
                p, q = (np.asarray(x, dtype=float) for x in data)
                for point in (p, q, 0.5 * (p + q)):
                    if np.linalg.norm(motion(point) - point) > 1e-10:
                        raise ValueError(
                            "annotated generator does not fix its edge"
                        )
            elif kind == "plane":
                point, normal = (np.asarray(x, dtype=float) for x in data)
                n = normal / np.linalg.norm(normal)
                u = np.eye(3)[int(np.argmin(np.abs(n)))]
                t1 = np.cross(n, u)
                t1 /= np.linalg.norm(t1)
                t2 = np.cross(n, t1)
                for probe in (point, point + t1, point + t2):
                    if np.linalg.norm(motion(probe) - probe) > 1e-10:
                        raise ValueError(
                            "annotated generator does not fix its plane"
                        )
            else:
                raise ValueError(f"unknown annotation kind {kind!r}")

    def __iter__(self):
        return iter(self.motions)

    def __len__(self) -> int:
        return len(self.motions)


@dataclass(frozen=True)
class Box:
    """Axis-aligned box used as an extension window."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo = np.asarray(self.lo, dtype=float).reshape(3)
        hi = np.asarray(self.hi, dtype=float).reshape(3)
        if (hi <= lo).any():
            raise ValueError("window must have positive extent on every axis")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @staticmethod
    def around(points, margin: float = 0.0) -> "Box":
        pts = np.asarray(points, dtype=float).reshape(-1, 3)
        return Box(pts.min(axis=0) - margin, pts.max(axis=0) + margin)

    def inflated(self, margin: float) -> "Box":
        return Box(self.lo - margin, self.hi + margin)

    def inset(self, margin: float) -> "Box":
        return Box(self.lo + margin, self.hi - margin)

    def intersects(self, lo, hi) -> bool:
        return bool((np.asarray(hi) >= self.lo).all() and (np.asarray(lo) <= self.hi).all())

    def contains(self, points) -> np.ndarray:
        pts = np.asarray(points, dtype=float)
        return ((pts >= self.lo) & (pts <= self.hi)).all(axis=-1)


def apply_motion(surface: SimplicialSurface, motion: RigidMotion) -> SimplicialSurface:
    """Transform a surface; triangle order flips when the motion is improper."""
    positions = motion(surface.positions)
    triangles = surface.triangles
    if motion.det < 0:
        triangles = triangles[:, ::-1]
    return SimplicialSurface(positions, triangles)


def _with_inverses(generators) -> list[RigidMotion]:
    seen: dict[tuple, RigidMotion] = {}
    for g in generators:
        for motion in (g, g.inverse()):
            seen.setdefault(motion.key(), motion)
    return list(seen.values())


def _flip_parity(motion: RigidMotion) -> int:
    """Orientation flip a generator imposes on the copy it glues on.

    Generators that fix their seam pointwise (reflections across planes
    through boundary edges, 180-degree rotations about boundary edges)
    reproduce the seam edge with the same direction, so the glued copy must
    have its triangles reversed. Translations and other rotations glue a
    different edge onto the seam and keep the orientation.
    """
    return 1 if motion.kind in ("reflection", "half_turn_rotation") else 0


def extend(
    seed: SimplicialSurface,
    generators,
    window: Box,
    max_copies: int = DEFAULT_MAX_COPIES,
    weld_tolerance: float = WELD_TOLERANCE,
    frontier_margin: float | None = None,
) -> SimplicialSurface:
    """Breadth-first orbit of ``seed`` under the generated group, welded.

    Copies are kept when their bounding box intersects the window. The
    frontier is explored slightly beyond the window so that copies reachable
    only through its surroundings are not missed. Output is deterministic for
    fixed inputs and independent of generator ordering up to relabeling.
    """
    if max_copies < 1:
        raise ValueError("max_copies must be at least one")
    gens = _with_inverses(generators)
    if not gens:
        return seed

    if frontier_margin is None:
        frontier_margin = 1.5 * seed.diameter()
    explore = window.inflated(frontier_margin)

    base = seed.positions
    identity = identity_motion()
    parity = {g.key(): _flip_parity(g) for g in gens}
    elements: dict[tuple, int] = {identity.key(): 0}
    placed: list[tuple[RigidMotion, int]] = []
    queue: deque[tuple[RigidMotion, int]] = deque([(identity, 0)])

    def consider(motion: RigidMotion, flip: int) -> bool:
        pts = motion(base)
        lo, hi = pts.min(axis=0), pts.max(axis=0)
        if not explore.intersects(lo, hi):
            return False
        if window.intersects(lo, hi):
            placed.append((motion, flip))
            if len(placed) > max_copies:
                raise BudgetExceededError(len(placed), max_copies)
        return True

    consider(identity, 0)
    while queue:
        current, flip = queue.popleft()
        for g in gens:
            # right multiplication: the new copy is the image of the seed's
            # own neighbor, so breadth-first search stays geometrically local
            nxt = current.compose(g)
            nxt_flip = flip ^ parity[g.key()]
            key = nxt.key()
            if key in elements:
                if elements[key] != nxt_flip:
                    raise InvalidMeshError(
                        "generators glue the seed onto itself with opposite "
                        "orientations (non-orientable identification)"
                    )
                continue
            elements[key] = nxt_flip
            if consider(nxt, nxt_flip):
                queue.append((nxt, nxt_flip))

    chunks = []
    tris = []
    offset = 0
    for motion, flip in placed:
        chunks.append(motion(base))
        t = seed.triangles
        if flip:
            t = t[:, ::-1]
        tris.append(t + offset)
        offset += len(base)
    merged = SimplicialSurface(
        np.concatenate(chunks), np.concatenate(tris), check=False
    )
    return merged.weld(weld_tolerance)


class _PointIndex:
    """Nearest-point lookup on a fixed tolerance grid."""

    def __init__(self, points: np.ndarray, tol: float):
        self.points = points
        self.tol = tol
        self.cells: dict[tuple, list[int]] = {}
        keys = np.floor(points / tol).astype(np.int64)
        for i, key in enumerate(map(tuple, keys)):
            self.cells.setdefault(key, []).append(i)

    def match(self, point: np.ndarray) -> int | None:
        kx, ky, kz = np.floor(point / self.tol).astype(np.int64)
        best, best_d = None, self.tol
        for dx in (-1, 0, 1):
            for dy in (-1, 0, 1):
                for dz in (-1, 0, 1):
                    for j in self.cells.get((kx + dx, ky + dy, kz + dz), ()):
                        d = float(np.linalg.norm(self.points[j] - point))
                        if d <= best_d:
                            best, best_d = j, d
        return best


def _triangle_key_set(surface: SimplicialSurface) -> set[frozenset]:
    return {frozenset(map(int, row)) for row in surface.triangles}


def motion_is_symmetry(
    surface: SimplicialSurface,
    motion: RigidMotion,
    window: Box | None = None,
    tol: float = 1e-9,
    margin: float | None = None,
) -> bool:
    """True when the motion maps the windowed mesh into itself.

    Only vertices and triangles whose images stay well inside the window are
    required to have matches; the test is vacuous (and fails) when no image
    stays inside. When the surface was grown with :func:`extend`, pass that
    window here: everything strictly inside it is guaranteed present, so a
    small margin suffices. Without a window the mesh bounding box is used
    and the margin defaults to one longest edge.
    """
    if window is None:
        window = Box.around(surface.positions)
        if margin is None:
            margin = surface.longest_edge()
    if margin is None:
        margin = 1e-6 * float(np.linalg.norm(window.hi - window.lo))
    margin = min(margin, 0.49 * float((window.hi - window.lo).min()))
    core = window.inset(margin)
    index = _PointIndex(surface.positions, tol)
    images = motion(surface.positions)
    inside = core.contains(images)
    if not inside.any():
        return False
    vmap = np.full(surface.vertex_count, -1, dtype=np.int64)
    for v in np.flatnonzero(inside):
        j = index.match(images[v])
        if j is None:
            return False
        vmap[v] = j
    tri_keys = _triangle_key_set(surface)
    tri_inside = inside[surface.triangles].all(axis=1)
    for row in surface.triangles[tri_inside]:
        mapped = frozenset(int(vmap[v]) for v in row)
        if mapped not in tri_keys:
            return False
    return True


def detect_periods(
    surface: SimplicialSurface,
    candidate_translations,
    tol: float = 1e-9,
    margin: float | None = None,
    window: Box | None = None,
) -> list[np.ndarray]:
    """Confirm which candidate translations are symmetries of the window."""
    confirmed = []
    for vec in candidate_translations:
        motion = translation_motion(vec)
        if motion_is_symmetry(
            surface, motion, window=window, tol=tol, margin=margin
        ):
            confirmed.append(np.asarray(vec, dtype=float))
    return confirmed


def find_translations(
    generators,
    max_elements: int = 4000,
    max_results: int = 12,
    length_cap: float | None = None,
) -> list[np.ndarray]:
    """Search products of generators for translations, shortest first.

    Breadth-first enumeration of the generated group; every pair of elements
    sharing a linear part differs by a translation of the surface's lattice,
    so translations are mined from per-linear-part buckets rather than only
    from words whose linear part is exactly the identity.
    """
    gens = _with_inverses(generators)
    identity = identity_motion()
    elements = {identity.key(): identity}
    queue = deque([identity])
    buckets: dict[tuple, np.ndarray] = {}
    found: dict[tuple, np.ndarray] = {}

    def note(motion: RigidMotion) -> None:
        lin_key = tuple(np.round(motion.linear.ravel(), MOTION_KEY_DECIMALS) + 0.0)
        anchor = buckets.setdefault(lin_key, motion.translation)
        vec = motion.translation - anchor
        norm = float(np.linalg.norm(vec))
        if norm > 1e-9 and (length_cap is None or norm <= length_cap):
            found.setdefault(tuple(np.round(vec, 9) + 0.0), vec)
            found.setdefault(tuple(np.round(-vec, 9) + 0.0), -vec)

    note(identity)
    while queue and len(elements) < max_elements:
        current = queue.popleft()
        for g in gens:
            nxt = current.compose(g)
            key = nxt.key()
            if key in elements:
                continue
            elements[key] = nxt
            note(nxt)
            queue.append(nxt)
    vectors = sorted(found.values(), key=lambda v: float(np.linalg.norm(v)))
    if max_results is None:
        return vectors
    # shortest first, but the greedy rank basis always survives truncation
    rank_basis: list[np.ndarray] = []
    for v in vectors:
        trial = rank_basis + [v]
        if np.linalg.matrix_rank(np.stack(trial), tol=1e-9) == len(trial):
            rank_basis = trial
    kept = vectors[:max_results]
    for b in rank_basis:
        if not any(b is k or np.allclose(b, k) for k in kept):
            kept.append(b)
    return kept
