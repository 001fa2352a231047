"""Catalog of discrete triply-periodic minimal surface examples.

Each entry packages a parameterized fundamental piece (symbolic vertex
coordinates over named scalars), the rigid motions that extend it to the
complete surface, the conditions its free parameters must satisfy, and the
known solution values. Entries are addressable by stable string ids.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .energy import gradient_field
from .io import DomainSpec, Generator, Parameter, realize_domain_spec
from .mesh import SimplicialSurface
from .solver import SolveProblem, solve
from .symmetry import (
    Box,
    GeneratorSet,
    _PointIndex,
    apply_motion,
    extend,
    find_translations,
    half_turn_about_edge,
    reflection_across_plane,
    rotation_about_axis,
    translation_motion,
)

__all__ = [
    "CatalogInfo",
    "catalog_list",
    "entry_ids",
    "instantiate",
    "closed_form",
    "solve_problem",
    "periods",
    "window_covering_periods",
    "fundamental_triangle_count",
    "domain_spec",
    "catenoid_meridian",
    "catenoid_ring",
    "catenoid_extensions",
    "CATENOID_MODES",
]

_SQ2 = math.sqrt(2.0)
_SQ3 = math.sqrt(3.0)


# --------------------------------------------------------------------- #
# entry plumbing


@dataclass
class _ResidualTerm:
    vertex: str
    directions: tuple | None = None  # rows of the projection; None = identity


@dataclass
class _Entry:
    spec: DomainSpec
    summary: str
    count: int
    free_params: tuple[str, ...] = ()
    closed: dict | None = None  # analytic values at the default parameters
    assemble: Callable | None = None
    residual_terms: list = field(default_factory=list)
    periods_fn: Callable | None = None
    validate: Callable | None = None
    derive_start: Callable | None = None

    @property
    def example_id(self) -> str:
        return self.spec.name


_REGISTRY: dict[str, _Entry] = {}


def _register(entry: _Entry) -> _Entry:
    _REGISTRY[entry.example_id] = entry
    return entry


def _merge_params(entry: _Entry, values: dict | None) -> dict:
    params = entry.spec.parameter_defaults()
    values = values or {}
    unknown = set(values) - set(params)
    if unknown:
        raise ValueError(f"unknown parameter(s) {sorted(unknown)}")
    if any(k not in values for k in entry.free_params):
        free_defaults, _tag = _solution_values(entry, params, values)
        params.update(free_defaults)
    params.update({k: float(v) for k, v in values.items()})
    entry.spec.check_ranges(params)
    if entry.validate:
        entry.validate(params)
    return params


def _locate(surface: SimplicialSurface, point, tol: float = 1e-6) -> int:
    idx = _PointIndex(surface.positions, tol)
    v = idx.match(np.asarray(point, dtype=float))
    if v is None:
        raise ValueError(f"no vertex near {point}")
    return int(v)


def _vertex_point(spec: DomainSpec, name: str, params: dict) -> np.ndarray:
    i = spec.vertex_names.index(name)
    return spec.vertex_positions(params)[i]


def _residual_surface(entry: _Entry, params: dict):
    seed, _gens = realize_domain_spec(entry.spec, params)
    return entry.assemble(seed, params) if entry.assemble else seed


def _residual_fn(entry: _Entry):
    """Stacked area-criticality conditions, evaluated on the piece itself.

    Interior residual vertices carry their full gradient. For a vertex on
    mirror planes or rotation axes of the extension group, the complete-star
    gradient is the stabilizer-symmetrized piece gradient, so its component
    along any stabilizer-fixed direction is proportional to the same
    component of the piece gradient; only those components are taken.
    """

    def fn(values: dict) -> np.ndarray:
        surf = _residual_surface(entry, values)
        grads = gradient_field(surf)
        rows = []
        for term in entry.residual_terms:
            point = _vertex_point(entry.spec, term.vertex, values)
            g = grads[_locate(surf, point)]
            if term.directions is None:
                rows.extend(g)
            else:
                for d in term.directions:
                    rows.append(float(np.dot(d, g)))
        return np.array(rows)

    return fn


def _breakdown_fn(entry: _Entry):
    def fn(values: dict) -> dict[str, float]:
        surf = _residual_surface(entry, values)
        grads = gradient_field(surf)
        out = {}
        for term in entry.residual_terms:
            point = _vertex_point(entry.spec, term.vertex, values)
            g = grads[_locate(surf, point)]
            if term.directions is None:
                out[term.vertex] = float(np.linalg.norm(g))
            else:
                proj = np.array([np.dot(d, g) for d in term.directions])
                out[term.vertex] = float(np.linalg.norm(proj))
        return out

    return fn


# --------------------------------------------------------------------- #
# assemblies


def _double_across_y0(seed: SimplicialSurface, params: dict) -> SimplicialSurface:
    mirror = apply_motion(seed, reflection_across_plane((0, 0, 0), (0, 1, 0)))
    positions = np.concatenate([seed.positions, mirror.positions])
    tris = np.concatenate(
        [seed.triangles, mirror.triangles + seed.vertex_count]
    )
    return SimplicialSurface(positions, tris, check=False).weld()


def _assemble_four_rotations(seed: SimplicialSurface, params: dict) -> SimplicialSurface:
    chunks, tris, off = [], [], 0
    for k in range(4):
        rot = rotation_about_axis((0, 0, 0), (0, 0, 1), 0.5 * k * math.pi)
        chunks.append(rot(seed.positions))
        tris.append(seed.triangles + off)
        off += seed.vertex_count
    return SimplicialSurface(
        np.concatenate(chunks), np.concatenate(tris), check=False
    ).weld()


# --------------------------------------------------------------------- #
# example definitions


def _fan_triangles(names: list[str], apex: str) -> list[tuple[str, str, str]]:
    n = len(names)
    return [(names[j], names[(j + 1) % n], apex) for j in range(n)]


def _reflection_generators(planes) -> list[Generator]:
    out = []
    for point, normal in planes:
        out.append(Generator("reflection", (tuple(point), tuple(normal))))
    return out


def _box_reflections(axes_offsets) -> list[Generator]:
    gens = []
    for axis, offsets in enumerate(axes_offsets):
        for off in offsets:
            point = ["0", "0", "0"]
            normal = ["0", "0", "0"]
            point[axis] = str(off)
            normal[axis] = "1"
            gens.append(Generator("reflection", (tuple(point), tuple(normal))))
    return gens


def _superman_1() -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"]
    exprs = {
        "p1": ("1", "0", "0"),
        "p2": ("1", "1", "0"),
        "p3": ("1", "1", "x"),
        "p4": ("0", "1", "x"),
        "p5": ("0", "1", "0"),
        "p6": ("0", "0", "0"),
        "p7": ("0", "0", "x"),
        "p8": ("1", "0", "x"),
        "p9": ("1/2", "1/2", "x/2"),
    }
    gens = [
        Generator("half_turn", (names[j], names[(j + 1) % 8])) for j in range(8)
    ]
    spec = DomainSpec(
        name="superman_1",
        parameters=[Parameter("x", 1.0, 0.0, math.inf)],
        vertex_names=names + ["p9"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p9"),
        constraints={"p9": "fixed"},
        generators=gens,
    )
    return _Entry(
        spec,
        "eight-triangle fan over a skew octagon on a box; edge rotations",
        count=8,
        periods_fn=lambda p: [
            (2.0, 0.0, 0.0),
            (0.0, 2.0, 0.0),
            (0.0, 0.0, 2.0 * p["x"]),
        ],
    )


def _superman_2() -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5", "p6"]
    exprs = {
        "p1": ("0", "0", "0"),
        "p2": ("x", "0", "0"),
        "p3": ("x", "y", "0"),
        "p4": ("x", "y", "1"),
        "p5": ("0", "y", "1"),
        "p6": ("0", "0", "1"),
        "p7": ("x/2", "y/2", "1/2"),
    }
    gens = [
        Generator("half_turn", (names[j], names[(j + 1) % 6])) for j in range(6)
    ]
    spec = DomainSpec(
        name="superman_2",
        parameters=[
            Parameter("x", 1.0, 0.0, math.inf),
            Parameter("y", 1.0, 0.0, math.inf),
        ],
        vertex_names=names + ["p7"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p7"),
        constraints={"p7": "fixed"},
        generators=gens,
    )
    return _Entry(
        spec,
        "six-triangle fan over a skew hexagon on a box; edge rotations",
        count=6,
        periods_fn=lambda p: [
            (2.0 * p["x"], 0.0, 0.0),
            (0.0, 2.0 * p["y"], 0.0),
            (0.0, 0.0, 2.0),
        ],
    )


def _superman_3() -> _Entry:
    names = ["p1", "p2", "p3", "p4"]
    # at z = 1 the up-down symmetry of the doubled piece forces c = b; for
    # other heights all three interior coordinates are free
    exprs = {
        "p1": ("0", "0", "0"),
        "p2": ("1", "1", "0"),
        "p3": ("1", "1", "z"),
        "p4": ("1", "0", "z"),
        "p5": ("a", "b", "c"),
    }
    gens = [
        Generator("half_turn_line", (("0", "0", "0"), ("1", "1", "0"))),
        Generator("half_turn_line", (("0", "0", "0"), ("1", "-1", "0"))),
        Generator("half_turn_line", (("1", "1", "0"), ("0", "0", "1"))),
        Generator("half_turn_line", (("1", "-1", "0"), ("0", "0", "1"))),
        Generator("half_turn_line", (("1", "0", "z"), ("0", "1", "0"))),
    ]
    spec = DomainSpec(
        name="superman_3",
        parameters=[
            Parameter("z", 1.0, 0.0, math.inf),
            Parameter("a", (3.0 - _SQ2) / 2.0, 0.0, 1.0),
            Parameter("b", 0.5, 0.0, 1.0),
            Parameter("c", 0.5, 0.0, math.inf),
        ],
        vertex_names=names + ["p5"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p5"),
        constraints={"p5": "parametric"},
        generators=gens,
    )
    return _Entry(
        spec,
        "four-triangle fan; the doubled piece extends by edge rotations",
        count=4,
        free_params=("a", "b", "c"),
        closed={"a": (3.0 - _SQ2) / 2.0, "b": 0.5, "c": 0.5},
        assemble=_double_across_y0,
        residual_terms=[_ResidualTerm("p5")],
        validate=lambda p: _require(0 < p["c"] < p["z"], "need 0 < c < z"),
        periods_fn=lambda p: [
            (2.0, 2.0, 0.0),
            (2.0, -2.0, 0.0),
            (0.0, 0.0, 4.0 * p["z"]),
        ],
        derive_start=lambda p: {"a": 0.75, "b": 0.45, "c": 0.45 * p["z"]},
    )


def _superman_4() -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5"]
    exprs = {
        "p1": ("0", "0", "0"),
        "p2": ("1", "1", "0"),
        "p3": ("1", "1", "z"),
        "p4": ("0", "1", "z"),
        "p5": ("0", "0", "z"),
        "p6": ("a", "1-a", "b"),
    }
    gens = [
        Generator("half_turn_line", (("0", "0", "0"), ("1", "1", "0"))),
        Generator("half_turn_line", (("1", "1", "0"), ("0", "0", "1"))),
        Generator("half_turn_line", (("0", "1", "z"), ("1", "0", "0"))),
        Generator("half_turn_line", (("0", "0", "z"), ("0", "1", "0"))),
        Generator("half_turn_line", (("0", "0", "0"), ("0", "0", "1"))),
    ]
    spec = DomainSpec(
        name="superman_4",
        parameters=[
            Parameter("z", 1.0, 0.0, math.inf),
            Parameter("a", 0.6, 0.0, 1.0),
            Parameter("b", 0.5, 0.0, math.inf),
        ],
        vertex_names=names + ["p6"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p6"),
        constraints={"p6": "parametric"},
        generators=gens,
    )
    return _Entry(
        spec,
        "five-triangle fan over a skew pentagon; edge rotations",
        count=5,
        free_params=("a", "b"),
        residual_terms=[_ResidualTerm("p6")],
        validate=lambda p: _require(0 < p["b"] < p["z"], "b must lie in (0, z)"),
        periods_fn=lambda p: [
            (2.0, 0.0, 0.0),
            (0.0, 2.0, 0.0),
            (0.0, 0.0, 4.0 * p["z"]),
        ],
        derive_start=lambda p: {"a": 0.35, "b": 0.6 * p["z"]},
    )


def _schwarz_p1() -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5", "p6"]
    exprs = {
        "p1": ("3", "0", "6"),
        "p2": ("6", "0", "3"),
        "p3": ("6", "3", "0"),
        "p4": ("3", "6", "0"),
        "p5": ("0", "6", "3"),
        "p6": ("0", "3", "6"),
        "p7": ("3", "3", "3"),
    }
    spec = DomainSpec(
        name="schwarzP_1",
        parameters=[],
        vertex_names=names + ["p7"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p7"),
        constraints={"p7": "fixed"},
        generators=_box_reflections([(0, 6), (0, 6), (0, 6)]),
    )
    return _Entry(
        spec,
        "planar hexagon fan inscribed in a box; face reflections",
        count=6,
        periods_fn=lambda p: [(12.0, 0, 0), (0, 12.0, 0), (0, 0, 12.0)],
    )


def _schwarz_p2() -> _Entry:
    coords = [
        (3, 0, 6), (4, 0, 4), (6, 0, 3), (6, 2, 2), (6, 3, 0), (4, 4, 0),
        (3, 6, 0), (2, 6, 2), (0, 6, 3), (0, 4, 4), (0, 3, 6), (2, 2, 6),
    ]
    names = [f"p{i + 1}" for i in range(12)]
    exprs = {n: tuple(str(c) for c in coords[i]) for i, n in enumerate(names)}
    exprs["p13"] = ("3", "3", "3")
    spec = DomainSpec(
        name="schwarzP_2",
        parameters=[],
        vertex_names=names + ["p13"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p13"),
        constraints={"p13": "fixed"},
        generators=_box_reflections([(0, 6), (0, 6), (0, 6)]),
    )
    return _Entry(
        spec,
        "twelve-triangle non-planar dodecagon fan; face reflections",
        count=12,
        periods_fn=lambda p: [(12.0, 0, 0), (0, 12.0, 0), (0, 0, 12.0)],
    )


def _schwarz_p3() -> _Entry:
    exprs = {
        "p1": ("a", "-a", "1"),
        "p2": ("a", "a", "1"),
        "p3": ("a", "1", "a"),
        "p4": ("a", "1", "-a"),
        "p5": ("a", "a", "-1"),
        "p6": ("a", "-a", "-1"),
        "p7": ("1", "-a", "a"),
        "p8": ("1", "a", "a"),
        "p9": ("1", "a", "-a"),
        "p10": ("1", "-a", "-a"),
    }
    triangles = [
        ("p1", "p2", "p7"), ("p2", "p8", "p7"), ("p2", "p3", "p8"),
        ("p3", "p4", "p8"), ("p4", "p9", "p8"), ("p4", "p5", "p9"),
        ("p5", "p6", "p9"), ("p6", "p10", "p9"),
    ]
    a_star = (3.0 * _SQ2 - _SQ3) / (6.0 * _SQ2 - _SQ3)
    spec = DomainSpec(
        name="schwarzP_3",
        parameters=[Parameter("a", a_star, 0.0, 1.0)],
        vertex_names=list(exprs),
        vertex_exprs=exprs,
        triangles=triangles,
        generators=_box_reflections([(-1, 1), (-1, 1), (-1, 1)]),
    )
    tangential = ((0.0, 1.0, 0.0), (0.0, 0.0, 1.0))
    return _Entry(
        spec,
        "32-triangle ring assembled from four rotated strips; face reflections",
        count=32,
        free_params=("a",),
        closed={"a": a_star},
        assemble=_assemble_four_rotations,
        residual_terms=[
            _ResidualTerm("p7", tangential),
            _ResidualTerm("p8", tangential),
            _ResidualTerm("p9", tangential),
        ],
        periods_fn=lambda p: [(4.0, 0, 0), (0, 4.0, 0), (0, 0, 4.0)],
        derive_start=lambda p: {"a": 0.4},
    )


def _clp(name: str, extra_reflections: int) -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5", "p6"]
    exprs = {
        "p1": ("x", "0", "0"),
        "p2": ("0", "0", "0"),
        "p3": ("0", "y", "0"),
        "p4": ("0", "y", "1"),
        "p5": ("0", "0", "1"),
        "p6": ("x", "0", "1"),
        "p7": ("a", "b", "1/2"),
    }
    # with a wall reflection included, the edge lying inside that wall is no
    # longer a boundary edge of the doubled piece, so its rotation is not a
    # symmetry of the new surface and must leave the generator set
    skipped_edges = set()
    if extra_reflections >= 1:
        skipped_edges.add(("p6", "p1"))
    if extra_reflections >= 2:
        skipped_edges.add(("p3", "p4"))
    gens = [
        Generator("half_turn", (names[j], names[(j + 1) % 6]))
        for j in range(6)
        if (names[j], names[(j + 1) % 6]) not in skipped_edges
    ]
    if extra_reflections >= 1:
        gens.append(
            Generator("reflection", (("x", "0", "0"), ("1", "0", "0")))
        )
    if extra_reflections >= 2:
        gens.append(
            Generator("reflection", (("0", "y", "0"), ("0", "1", "0")))
        )
    spec = DomainSpec(
        name=name,
        parameters=[
            Parameter("x", _SQ2 / 2.0, 0.0, math.inf),
            Parameter("y", _SQ2 / 2.0, 0.0, math.inf),
            Parameter("a", (_SQ2 - 1.0) / 2.0, 0.0, math.inf),
            Parameter("b", (_SQ2 - 1.0) / 2.0, 0.0, math.inf),
        ],
        vertex_names=names + ["p7"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p7"),
        constraints={"p7": "parametric"},
        generators=gens,
    )
    summaries = {
        0: "six-triangle fan on an open box; edge rotations",
        1: "six-triangle fan plus one wall reflection; rotation extension",
        2: "six-triangle fan plus two wall reflections; rotation extension",
    }
    return _Entry(
        spec,
        summaries[extra_reflections],
        count=6,
        free_params=("a", "b"),
        closed=(
            {"a": (_SQ2 - 1.0) / 2.0, "b": (_SQ2 - 1.0) / 2.0}
        ),
        residual_terms=[_ResidualTerm("p7")],
        validate=lambda p: _require(
            0 < p["a"] < p["x"] and 0 < p["b"] < p["y"],
            "need 0 < a < x and 0 < b < y",
        ),
        periods_fn=(
            (lambda p: [
                (2.0 * p["x"], 2.0 * p["y"], 0.0),
                (2.0 * p["x"], -2.0 * p["y"], 0.0),
                (0.0, 0.0, 2.0),
            ])
            if extra_reflections == 0
            else (lambda p: [
                (4.0 * p["x"], 0.0, 0.0),
                (0.0, 2.0 * p["y"], 0.0),
                (0.0, 0.0, 2.0),
            ])
            if extra_reflections == 1
            else (lambda p: [
                (2.0 * p["x"], 2.0 * p["y"], 0.0),
                (-2.0 * p["x"], 2.0 * p["y"], 0.0),
                (0.0, 0.0, 2.0),
            ])
        ),
        derive_start=lambda p: {"a": 0.3 * p["x"], "b": 0.3 * p["y"]},
    )


def _iwp() -> _Entry:
    t = "b/(1+b-a)"
    exprs = {
        "p1": ("b", "0", "b"),
        "p2": ("b", "0", "0"),
        "p3": ("b", "b", "0"),
        "p4": ("1", "1", "a"),
        "p5": ("1", "a", "1"),
        "p6": (f"b+(1-b)*({t})", t, t),
    }
    triangles = [
        ("p1", "p2", "p3"), ("p1", "p3", "p6"), ("p3", "p4", "p6"),
        ("p4", "p5", "p6"), ("p5", "p1", "p6"),
    ]
    gens = [
        Generator("reflection", (("0", "0", "0"), ("1", "-1", "0"))),
        Generator("reflection", (("0", "0", "0"), ("1", "0", "-1"))),
    ] + _box_reflections([(0, 1), (0, 1), (0, 1)])
    spec = DomainSpec(
        name="iwp",
        parameters=[
            Parameter("a", 0.31, 0.0, 1.0),
            Parameter("b", 0.56, 0.5, 1.0),
        ],
        vertex_names=list(exprs),
        vertex_exprs=exprs,
        triangles=triangles,
        constraints={"p6": "parametric"},
        generators=gens,
    )
    inv2 = 1.0 / _SQ2
    return _Entry(
        spec,
        "five triangles: flat cap plus a fan through a segment crossing",
        count=5,
        free_params=("a", "b"),
        residual_terms=[
            _ResidualTerm("p1", ((inv2, 0.0, inv2),)),
            _ResidualTerm("p3", ((inv2, inv2, 0.0),)),
            _ResidualTerm("p6"),
        ],
        periods_fn=lambda p: [(2.0, 0, 0), (0, 2.0, 0), (0, 0, 2.0)],
        derive_start=lambda p: {"a": 0.31, "b": 0.56},
    )


def _frd() -> _Entry:
    # Pentagon over five mirror strata: an axis point, one point on each of
    # the two far edge-lines of the cell, a body-diagonal point, and one
    # vertex free in the y = z mirror. A plain quadrilateral on the same
    # strata admits no area-critical configuration; the fifth vertex is what
    # makes the conditions solvable, giving three triangles.
    exprs = {
        "v1": ("alpha", "0", "0"),
        "v2": ("1", "beta", "0"),
        "v3": ("1", "1", "delta"),
        "v4": ("gamma", "gamma", "gamma"),
        "v5": ("u", "w", "w"),
    }
    triangles = [("v2", "v3", "v4"), ("v2", "v4", "v5"), ("v2", "v5", "v1")]
    gens = [
        Generator("reflection", (("0", "0", "0"), ("1", "-1", "0"))),
        Generator("reflection", (("0", "0", "0"), ("1", "0", "-1"))),
    ] + _box_reflections([(0, 1), (0, 1), (0, 1)])
    start = {
        "alpha": 0.894, "beta": 0.4, "delta": 0.087,
        "gamma": 0.483, "u": 0.885, "w": 0.216,
    }
    spec = DomainSpec(
        name="frd",
        parameters=[
            Parameter("alpha", start["alpha"], 0.0, 1.0),
            Parameter("beta", start["beta"], 0.0, 1.0),
            Parameter("delta", start["delta"], 0.0, 1.0),
            Parameter("gamma", start["gamma"], 0.0, 1.0),
            Parameter("u", start["u"], 0.0, 1.0),
            Parameter("w", start["w"], 0.0, 1.0),
        ],
        vertex_names=list(exprs),
        vertex_exprs=exprs,
        triangles=triangles,
        generators=gens,
    )
    s3 = 1.0 / _SQ3
    s2 = 1.0 / _SQ2
    return _Entry(
        spec,
        "three-triangle fan over mirror strata of the diagonal cell",
        count=3,
        free_params=("alpha", "beta", "delta", "gamma", "u", "w"),
        residual_terms=[
            _ResidualTerm("v1", ((1.0, 0.0, 0.0),)),
            _ResidualTerm("v2", ((0.0, 1.0, 0.0),)),
            _ResidualTerm("v3", ((0.0, 0.0, 1.0),)),
            _ResidualTerm("v4", ((s3, s3, s3),)),
            _ResidualTerm("v5", ((1.0, 0.0, 0.0), (0.0, s2, s2))),
        ],
        periods_fn=lambda p: [(2.0, 0, 0), (0, 2.0, 0), (0, 0, 2.0)],
        derive_start=lambda p: dict(start),
    )


def _ht() -> _Entry:
    exprs = {
        "p1": ("a/2", "sqrt(3)*a/2", "b"),
        "p2": ("1/2", "sqrt(3)/2", "c"),
        "p3": ("2-3*s/2", "sqrt(3)*s/2", "0"),
        "p4": ("2-3*s/2", "-sqrt(3)*s/2", "0"),
        "p5": ("1/2", "-sqrt(3)/2", "c"),
        "p6": ("a/2", "-sqrt(3)*a/2", "b"),
        "p7": ("1/2", "0", "c"),
    }
    names = ["p1", "p2", "p3", "p4", "p5", "p6"]
    gens = [
        Generator("reflection", (("0", "0", "0"), ("sqrt(3)", "-1", "0"))),
        Generator("reflection", (("0", "0", "0"), ("sqrt(3)", "1", "0"))),
        Generator("reflection", (("0", "0", "0"), ("0", "0", "1"))),
        Generator("reflection", (("0", "0", "b"), ("0", "0", "1"))),
        Generator("reflection", (("2", "0", "0"), ("1", "sqrt(3)", "0"))),
        Generator("reflection", (("2", "0", "0"), ("1", "-sqrt(3)", "0"))),
    ]
    spec = DomainSpec(
        name="ht",
        parameters=[
            Parameter("b", 1.0, 0.0, math.inf),
            Parameter("a", (2.0 + _SQ2) / 4.0, 0.0, 1.0),
            Parameter("s", (2.0 + _SQ2) / 4.0, 0.0, 1.0),
            Parameter("c", 0.75, 0.0, math.inf),
        ],
        vertex_names=names + ["p7"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p7"),
        constraints={"p7": "parametric"},
        generators=gens,
    )
    return _Entry(
        spec,
        "six-triangle fan in a trigonal prism of mirror planes",
        count=6,
        free_params=("a", "s", "c"),
        closed={"a": (2.0 + _SQ2) / 4.0, "s": (2.0 + _SQ2) / 4.0, "c": 0.75},
        residual_terms=[
            _ResidualTerm("p1", ((0.5, _SQ3 / 2.0, 0.0),)),
            _ResidualTerm("p2", ((0.0, 0.0, 1.0),)),
            _ResidualTerm("p3", ((-_SQ3 / 2.0, 0.5, 0.0),)),
            _ResidualTerm("p7"),
        ],
        validate=lambda p: _require(0 < p["c"] < p["b"], "need 0 < c < b"),
        periods_fn=lambda p: [
            (6.0, 0.0, 0.0),
            (3.0, 3.0 * _SQ3, 0.0),
            (0.0, 0.0, 2.0 * p["b"]),
        ],
        derive_start=lambda p: {
            "a": 0.85, "s": 0.85, "c": 0.75 * p["b"],
        },
    )


def _fischer_koch() -> _Entry:
    names = ["p1", "p2", "p3", "p4", "p5", "p6", "p7", "p8"]
    exprs = {
        "p1": ("0", "0", "-1"),
        "p2": ("0", "0", "-2"),
        "p3": ("a", "0", "-2"),
        "p4": ("a", "0", "1"),
        "p5": ("0", "0", "1"),
        "p6": ("0", "0", "2"),
        "p7": ("a/2", "sqrt(3)*a/2", "2"),
        "p8": ("a/2", "sqrt(3)*a/2", "-1"),
        "p9": ("sqrt(3)*b/2", "b/2", "0"),
    }
    gens = [
        Generator("half_turn", (names[j], names[(j + 1) % 8])) for j in range(8)
    ]
    spec = DomainSpec(
        name="fischer_koch",
        parameters=[
            Parameter("a", 1.0, 0.0, math.inf),
            Parameter("b", 0.64, 0.0, math.inf),
        ],
        vertex_names=names + ["p9"],
        vertex_exprs=exprs,
        triangles=_fan_triangles(names, "p9"),
        constraints={"p9": "parametric"},
        generators=gens,
    )
    return _Entry(
        spec,
        "eight-triangle fan over a helical octagon; edge rotations",
        count=8,
        free_params=("b",),
        residual_terms=[_ResidualTerm("p9")],
        validate=lambda p: _require(0 < p["b"] < p["a"], "need 0 < b < a"),
        periods_fn=lambda p: [
            (p["a"], _SQ3 * p["a"], 0.0),
            (2.0 * p["a"], 0.0, 0.0),
            (0.0, 0.0, 6.0),
        ],
        derive_start=lambda p: {"b": 0.6 * p["a"]},
    )


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ValueError(message)


# --------------------------------------------------------------------- #
# discrete catenoid family

CATENOID_MODES = (
    "schwarz_P_rotations",
    "schwarz_H_rotations",
    "hexagonal_translations",
    "method2_reflections",
)


def catenoid_meridian(
    r: float, delta: float, k: int, z0: float, j0: int, j1: int
) -> list[np.ndarray]:
    """Vertices of one meridian of a discrete minimal catenoid, in y = 0.

    The profile follows ``x = r cosh(a z / r)`` sampled at heights
    ``z0 + j delta`` with the growth rate that makes the ring area-critical:
    ``a = (r/delta) arccosh(1 + delta^2 / (r^2 (1 + cos(2 pi / k))))``.
    """
    if r <= 0 or delta <= 0:
        raise ValueError("r and delta must be positive")
    if int(k) != k or k < 3:
        raise ValueError("k must be an integer >= 3")
    if int(j0) != j0 or int(j1) != j1 or j0 >= j1:
        raise ValueError("need integers j0 < j1")
    theta = 2.0 * math.pi / k
    a = (r / delta) * math.acosh(
        1.0 + (delta * delta) / (r * r * (1.0 + math.cos(theta)))
    )
    out = []
    for j in range(int(j0), int(j1) + 1):
        z = z0 + j * delta
        out.append(np.array([r * math.cosh(a * z / r), 0.0, z]))
    return out


def catenoid_ring(meridian, k: int) -> SimplicialSurface:
    """Surface of revolution samples: k rotated meridians, trapezoids split
    by the diagonal running from lower-left to upper-right in the
    (meridian, level) grid."""
    if int(k) != k or k < 3:
        raise ValueError("k must be an integer >= 3")
    k = int(k)
    levels = len(meridian)
    if levels < 2:
        raise ValueError("meridian needs at least two vertices")
    positions = np.zeros((k * levels, 3))
    for m in range(k):
        angle = 2.0 * math.pi * m / k
        c, s = math.cos(angle), math.sin(angle)
        for j, p in enumerate(meridian):
            x, _, z = p
            positions[m * levels + j] = (c * x, s * x, z)
    tris = []
    for m in range(k):
        m2 = (m + 1) % k
        for j in range(levels - 1):
            a = m * levels + j
            b = m2 * levels + j
            c2 = m2 * levels + j + 1
            d = m * levels + j + 1
            tris.append((a, b, c2))
            tris.append((a, c2, d))
    return SimplicialSurface(positions, tris)


def _ring_structure(ring: SimplicialSurface):
    zs = np.unique(np.round(ring.positions[:, 2], 9))
    levels = len(zs)
    k = ring.vertex_count // levels
    if k * levels != ring.vertex_count or k < 3:
        raise ValueError("surface does not look like a catenoid ring")
    gaps = np.diff(zs)
    if not np.allclose(gaps, gaps[0], atol=1e-9):
        raise ValueError("meridian levels are not equally spaced")
    delta = float(gaps[0])
    height = float(zs[-1] - zs[0])
    return k, float(zs[0]), float(zs[-1]), delta, height


def catenoid_extensions(ring: SimplicialSurface, mode: str) -> GeneratorSet:
    """Generator sets that extend a catenoid ring to a periodic surface.

    Rotation modes use 180-degree rotations about the boundary polygon
    edges (square boundaries for k = 4, triangular for k = 3). The
    translation mode additionally records the lattice vectors of the
    resulting surface; the reflection mode swaps two boundary rotations for
    a reflection across a vertical plane through opposite boundary edges.
    """
    if mode not in CATENOID_MODES:
        raise ValueError(f"unknown mode {mode!r}")
    k, z_lo, z_hi, delta, height = _ring_structure(ring)
    if mode in ("schwarz_P_rotations", "method2_reflections") and k != 4:
        raise ValueError(f"mode {mode!r} requires k = 4")
    if mode in ("schwarz_H_rotations", "hexagonal_translations") and k != 3:
        raise ValueError("hexagonal modes require k = 3")
    if abs(z_lo + z_hi) > 1e-9:
        raise ValueError(
            "ring must be symmetric about z = 0 (choose z0 = 0 with "
            "j0 = -j1, or z0 = delta/2 with j0 = -j1 - 1)"
        )
    motions = []
    annotations = []
    pos = ring.positions
    skip_plane = None
    if mode == "method2_reflections":
        # vertical plane through one top edge and the bottom edge below it;
        # those edges become interior after the reflection, so their
        # rotations are not symmetries of the new surface
        top = [e for e in sorted(ring.boundary_edges()) if pos[e[0], 2] > 0]
        u, v = top[0]
        normal = np.cross(pos[v] - pos[u], (0.0, 0.0, 1.0))
        skip_plane = (pos[u], normal / np.linalg.norm(normal))
    for u, v in sorted(ring.boundary_edges()):
        if skip_plane is not None:
            point, normal = skip_plane
            if (
                abs(np.dot(pos[u] - point, normal)) < 1e-9
                and abs(np.dot(pos[v] - point, normal)) < 1e-9
            ):
                continue
        motions.append(half_turn_about_edge(pos[u], pos[v]))
        annotations.append(("edge", (pos[u], pos[v])))
    if mode == "hexagonal_translations":
        vertical = translation_motion((0.0, 0.0, 2.0 * height))
        horizontals = [
            translation_motion(v)
            for v in find_translations(motions, max_elements=600, max_results=4)
            if abs(v[2]) < 1e-9
        ][:2]
        motions.append(vertical)
        annotations.append(None)
        for m in horizontals:
            motions.append(m)
            annotations.append(None)
    elif mode == "method2_reflections":
        point, normal = skip_plane
        motions.append(reflection_across_plane(point, normal))
        annotations.append(("plane", (point, normal)))
    return GeneratorSet(motions, annotations)


_CATENOID_DEFAULTS = {
    "r": 1.0, "delta": 1.0, "k": 4.0, "z0": 0.0, "j0": -2.0, "j1": 2.0,
}


def _catenoid_params(values: dict | None) -> dict:
    params = dict(_CATENOID_DEFAULTS)
    if values:
        unknown = set(values) - set(params)
        if unknown:
            raise ValueError(f"unknown parameter(s) {sorted(unknown)}")
        params.update({k: float(v) for k, v in values.items()})
    return params


def _catenoid_instance(values: dict | None, mode: str | None):
    p = _catenoid_params(values)
    meridian = catenoid_meridian(
        p["r"], p["delta"], int(p["k"]), p["z0"], int(p["j0"]), int(p["j1"])
    )
    ring = catenoid_ring(meridian, int(p["k"]))
    if mode is None:
        mode = "schwarz_P_rotations" if int(p["k"]) == 4 else "schwarz_H_rotations"
    return ring, catenoid_extensions(ring, mode), p


# --------------------------------------------------------------------- #
# registry

for _factory in (
    _superman_1,
    _superman_2,
    _superman_3,
    _superman_4,
    _schwarz_p1,
    _schwarz_p2,
    _schwarz_p3,
    _iwp,
    _frd,
    _ht,
    _fischer_koch,
):
    _register(_factory())
_register(_clp("clp", 0))
_register(_clp("clp_method2_superman", 1))
_register(_clp("clp_method2_P", 2))

CATENOID_ID = "catenoid_PH_family"


# --------------------------------------------------------------------- #
# derived solutions


def _params_key(entry_id: str, params: dict) -> tuple:
    return (entry_id,) + tuple(sorted((k, round(v, 12)) for k, v in params.items()))


_DERIVED_CACHE: dict[tuple, dict] = {}


def _iwp_scalar_root() -> tuple[float, float]:
    """Reduce the two interior conditions to one scalar equation in b.

    Substituting the first condition's solution for a into the second leaves
    ``(3 - s)(1 - b) = b sqrt(2) sqrt(3 - 4b + 2b^2 + s)`` with
    ``s = sqrt(-3 + 8b - 4b^2)``; the root in (1/2, 1) is found by bisection.
    """

    def a_of_b(b: float) -> float:
        return 0.5 * (2.0 * b - 1.0 + math.sqrt(-3.0 + 8.0 * b - 4.0 * b * b))

    def f(b: float) -> float:
        s = math.sqrt(-3.0 + 8.0 * b - 4.0 * b * b)
        return (3.0 - s) * (1.0 - b) - b * _SQ2 * math.sqrt(
            3.0 - 4.0 * b + 2.0 * b * b + s
        )

    lo, hi = 0.5 + 1e-12, 1.0 - 1e-12
    flo = f(lo)
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if f(mid) * flo > 0:
            lo = mid
        else:
            hi = mid
    b = 0.5 * (lo + hi)
    return a_of_b(b), b


def _solution_values(
    entry: _Entry, fixed_params: dict, overrides: dict
) -> tuple[dict, str]:
    """Values for the free parameters plus a provenance tag."""
    if not entry.free_params:
        return {}, "analytic"
    defaults = entry.spec.parameter_defaults()
    fixed = {
        k: float(fixed_params.get(k, defaults[k]))
        for k in defaults
        if k not in entry.free_params
    }
    fixed.update(
        {k: float(v) for k, v in overrides.items() if k not in entry.free_params}
    )
    at_defaults = all(
        math.isclose(fixed[k], defaults[k], rel_tol=0, abs_tol=1e-12)
        for k in fixed
    )
    if entry.closed is not None and at_defaults:
        return dict(entry.closed), "analytic"
    if entry.example_id == "iwp":
        a, b = _iwp_scalar_root()
        return {"a": a, "b": b}, "numeric"
    key = _params_key(entry.example_id, fixed)
    if key not in _DERIVED_CACHE:
        start = entry.derive_start(fixed) if entry.derive_start else None
        problem = _build_problem(entry, fixed, start)
        report = solve(problem, tol=1e-11, max_iter=80)
        if not report.converged:
            raise RuntimeError(
                f"no solved values for {entry.example_id} at {fixed}: "
                f"{report.message}"
            )
        _DERIVED_CACHE[key] = {
            k: report.final_parameters[k] for k in entry.free_params
        }
    return dict(_DERIVED_CACHE[key]), "numeric"


def _build_problem(
    entry: _Entry, fixed_params: dict, start: dict | None = None
) -> SolveProblem:
    defaults = entry.spec.parameter_defaults()
    fixed = dict(defaults)
    fixed.update(fixed_params)

    def residual_fn(values: dict) -> np.ndarray:
        merged = dict(fixed)
        merged.update(values)
        return _residual_fn(entry)(merged)

    def breakdown(values: dict) -> dict:
        merged = dict(fixed)
        merged.update(values)
        return _breakdown_fn(entry)(merged)

    params = {}
    for name in entry.free_params:
        if start and name in start:
            params[name] = float(start[name])
        elif entry.closed is not None:
            params[name] = float(entry.closed[name])
        else:
            params[name] = float(defaults[name])
    bounds = {
        name: entry.spec.parameter_ranges()[name] for name in entry.free_params
    }
    seed, _ = realize_domain_spec(entry.spec, {**fixed, **params})
    index = {n: i for i, n in enumerate(entry.spec.vertex_names)}
    from .solver import VertexConstraint

    constraints = {}
    for vname, kind in entry.spec.constraints.items():
        data = entry.spec.vertex_exprs[vname] if kind == "parametric" else ()
        constraints[index[vname]] = VertexConstraint(kind, data)
    return SolveProblem(
        parameters=params,
        residual_fn=residual_fn,
        bounds=bounds,
        surface=seed,
        constraints=constraints,
        breakdown_fn=breakdown,
        description=entry.example_id,
    )


# --------------------------------------------------------------------- #
# public API


@dataclass(frozen=True)
class CatalogInfo:
    example_id: str
    triangle_count: str
    parameters: dict
    free_parameters: tuple
    has_closed_form: bool
    summary: str


def entry_ids() -> list[str]:
    return sorted(_REGISTRY) + [CATENOID_ID]


def catalog_list() -> list[CatalogInfo]:
    """Descriptors for every example: id, counts, parameters, solutions."""
    out = []
    for name in sorted(_REGISTRY):
        entry = _REGISTRY[name]
        params = {
            p.name: (p.default, (p.lo, p.hi)) for p in entry.spec.parameters
        }
        out.append(
            CatalogInfo(
                example_id=name,
                triangle_count=str(entry.count),
                parameters=params,
                free_parameters=entry.free_params,
                has_closed_form=entry.closed is not None,
                summary=entry.summary,
            )
        )
    out.append(
        CatalogInfo(
            example_id=CATENOID_ID,
            triangle_count="2n",
            parameters={
                k: (v, (-math.inf, math.inf))
                for k, v in _CATENOID_DEFAULTS.items()
            },
            free_parameters=(),
            has_closed_form=True,
            summary="stacked catenoid rings: square or triangular profiles",
        )
    )
    return out


def _entry(example_id: str) -> _Entry:
    try:
        return _REGISTRY[example_id]
    except KeyError:
        raise ValueError(f"unknown example {example_id!r}") from None


def domain_spec(example_id: str) -> DomainSpec:
    return _entry(example_id).spec


def instantiate(
    example_id: str,
    parameter_values: dict | None = None,
    mode: str | None = None,
):
    """Realize an example: (surface, generator set, solve problem).

    Free parameters default to the recorded solution values. The returned
    surface is the assembled fundamental piece used for extension (for
    entries built by welding transformed copies, the welded assembly).
    """
    if example_id == CATENOID_ID:
        ring, gens, _ = _catenoid_instance(parameter_values, mode)
        return ring, gens, None
    entry = _entry(example_id)
    params = _merge_params(entry, parameter_values)
    seed, gens = realize_domain_spec(entry.spec, params)
    if entry.assemble:
        seed = entry.assemble(seed, params)
    problem = None
    if entry.free_params:
        fixed = {k: v for k, v in params.items() if k not in entry.free_params}
        problem = _build_problem(entry, fixed)
        problem.parameters.update(
            {k: params[k] for k in entry.free_params}
        )
    if example_id == "iwp":
        # the crossing vertex comes from two boundary segments; record how
        # far from a true intersection the realized point sits
        pos = seed.positions
        i6 = _locate(seed, _vertex_point(entry.spec, "p6", params))
        i1 = _locate(seed, _vertex_point(entry.spec, "p1", params))
        i4 = _locate(seed, _vertex_point(entry.spec, "p4", params))
        d14 = pos[i6] - _closest_point_on_segment(pos[i1], pos[i4], pos[i6])
        entry.spec.metadata["crossing_residual"] = format(
            float(np.linalg.norm(d14)), ".3e"
        )
    return seed, gens, problem


def _closest_point_on_segment(a, b, p):
    ab = b - a
    t = float(np.clip(np.dot(p - a, ab) / np.dot(ab, ab), 0.0, 1.0))
    return a + t * ab


def closed_form(
    example_id: str, parameter_values: dict | None = None
) -> tuple[dict, str]:
    """Solution values for an example's free parameters plus a provenance
    tag: ``analytic`` for closed forms, ``numeric`` for solver-derived."""
    if example_id == CATENOID_ID:
        return dict(_CATENOID_DEFAULTS), "analytic"
    entry = _entry(example_id)
    defaults = entry.spec.parameter_defaults()
    overrides = dict(parameter_values or {})
    values, tag = _solution_values(entry, defaults, overrides)
    full = dict(defaults)
    full.update(overrides)
    full.update(values)
    return full, tag


def solve_problem(
    example_id: str, fixed_values: dict | None = None
) -> SolveProblem | None:
    """The solve problem for an example's free parameters (None if fully
    determined)."""
    if example_id == CATENOID_ID:
        return None
    entry = _entry(example_id)
    if not entry.free_params:
        return None
    fixed = {
        k: float(v)
        for k, v in (fixed_values or {}).items()
        if k not in entry.free_params
    }
    start = None
    if fixed_values:
        start = {
            k: float(v) for k, v in fixed_values.items() if k in entry.free_params
        }
        if entry.derive_start:
            base = entry.derive_start(
                {**entry.spec.parameter_defaults(), **fixed}
            )
            base.update(start)
            start = base
    return _build_problem(entry, fixed, start or None)


def periods(
    example_id: str,
    parameter_values: dict | None = None,
    mode: str | None = None,
) -> list[np.ndarray]:
    """Lattice vectors of the example's extension (candidates to confirm)."""
    if example_id == CATENOID_ID:
        ring, gens, p = _catenoid_instance(parameter_values, mode)
        height = p["delta"] * (p["j1"] - p["j0"])
        vertical = np.array([0.0, 0.0, 2.0 * height])
        horizontals = [
            v
            for v in find_translations(gens.motions, max_elements=900)
            if abs(v[2]) < 1e-9
        ]
        basis = _independent_horizontals(horizontals)
        return basis + [vertical]
    entry = _entry(example_id)
    params = _merge_params(entry, parameter_values)
    if entry.periods_fn is not None:
        return [np.asarray(v, dtype=float) for v in entry.periods_fn(params)]
    key = _params_key("periods:" + example_id, params)
    if key not in _DERIVED_CACHE:
        _, gens = realize_domain_spec(entry.spec, params)
        vectors = find_translations(gens.motions, max_elements=2500)
        _DERIVED_CACHE[key] = _lattice_basis(vectors)
    return list(_DERIVED_CACHE[key])


def _independent_horizontals(vectors) -> list[np.ndarray]:
    basis = []
    for v in vectors:
        if all(
            np.linalg.norm(np.cross(v, b)) > 1e-9 * np.linalg.norm(v)
            for b in basis
        ):
            basis.append(np.asarray(v, dtype=float))
        if len(basis) == 2:
            break
    return basis


def _lattice_basis(vectors) -> list[np.ndarray]:
    basis: list[np.ndarray] = []
    for v in vectors:
        trial = basis + [np.asarray(v, dtype=float)]
        m = np.stack(trial)
        if np.linalg.matrix_rank(m, tol=1e-9) == len(trial):
            basis = trial
        if len(basis) == 3:
            break
    return basis


def window_covering_periods(
    example_id: str,
    parameter_values: dict | None = None,
    n_periods: int = 2,
    margin: float | None = None,
    mode: str | None = None,
) -> Box:
    """Axis-aligned box covering the piece plus ``n_periods`` lattice steps."""
    surface, _, _ = instantiate(example_id, parameter_values, mode=mode)
    vecs = periods(example_id, parameter_values, mode=mode)
    lo, hi = surface.bbox()
    corners = [lo, hi]
    points = []
    for i in range(n_periods + 1):
        for j in range(n_periods + 1):
            for k in range(n_periods + 1):
                shift = i * vecs[0] + j * vecs[1] + k * vecs[2]
                for c in corners:
                    points.append(c + shift)
    if margin is None:
        margin = 0.25 * surface.longest_edge()
    return Box.around(np.array(points), margin)


def fundamental_triangle_count(
    example_id: str, parameter_values: dict | None = None
) -> int:
    """Triangle count of the fundamental piece (2n for the catenoid family)."""
    if example_id == CATENOID_ID:
        p = _catenoid_params(parameter_values)
        return 2 * int(-p["j0"])
    return _entry(example_id).count
