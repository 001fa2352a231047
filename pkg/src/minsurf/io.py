"""Mesh export/import, arithmetic expressions, and the domain-spec file format."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .mesh import SimplicialSurface
from .symmetry import (
    GeneratorSet,
    half_turn_about_edge,
    half_turn_about_line,
    reflection_across_plane,
    translation_motion,
)

__all__ = [
    "ExpressionError",
    "SpecParseError",
    "parse_expression",
    "evaluate_expression",
    "expression_names",
    "DomainSpec",
    "parse_domain_spec",
    "serialize_domain_spec",
    "realize_domain_spec",
    "export_mesh",
    "import_mesh",
]


# --------------------------------------------------------------------- #
# expression language: + - * /, parentheses, sqrt/cos/sin/cosh/arccosh, pi


class ExpressionError(ValueError):
    """Bad arithmetic expression; carries the offending position."""

    def __init__(self, message: str, position: int | None = None):
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)
        self.position = position


_FUNCTIONS = {
    "sqrt": math.sqrt,
    "cos": math.cos,
    "sin": math.sin,
    "cosh": math.cosh,
    "arccosh": math.acosh,
}

_CONSTANTS = {"pi": math.pi}

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/(),]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            where = pos + (len(text) - pos - len(stripped))
            raise ExpressionError(f"unexpected character {stripped[0]!r}", where)
        if m.lastgroup == "num":
            tokens.append(("num", float(m.group("num")), m.start("num")))
        elif m.lastgroup == "name":
            tokens.append(("name", m.group("name"), m.start("name")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names):
        self.text = text
        self.tokens = _tokenize(text)
        self.k = 0
        self.names = None if names is None else set(names)

    def peek(self):
        return self.tokens[self.k]

    def next(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.next()
        if kind != "op" or val != op:
            raise ExpressionError(f"expected {op!r}", pos)

    def parse(self):
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected token {val!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.next()
                node = ("bin", val, node, self.term())
            else:
                return node

    def term(self):
        node = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "*/":
                self.next()
                node = ("bin", val, node, self.factor())
            else:
                return node

    def factor(self):
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.next()
            node = self.factor()
            return node if val == "+" else ("neg", node)
        return self.atom()

    def atom(self):
        kind, val, pos = self.next()
        if kind == "num":
            return ("num", val)
        if kind == "name":
            nkind, nval, _ = self.peek()
            if nkind == "op" and nval == "(":
                if val not in _FUNCTIONS:
                    raise ExpressionError(f"unknown function {val!r}", pos)
                self.next()
                args = [self.expr()]
                while True:
                    akind, aval, apos = self.peek()
                    if akind == "op" and aval == ",":
                        self.next()
                        args.append(self.expr())
                    else:
                        break
                self.expect_op(")")
                if len(args) != 1:
                    raise ExpressionError(
                        f"function {val!r} takes one argument", pos
                    )
                return ("call", val, args[0])
            if val in _CONSTANTS:
                return ("const", val)
            if self.names is not None and val not in self.names:
                raise ExpressionError(f"unknown identifier {val!r}", pos)
            return ("param", val)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        raise ExpressionError(f"unexpected token {val!r}", pos)


def parse_expression(text: str, names=None):
    """Parse an arithmetic expression; ``names`` restricts the identifiers."""
    return _Parser(text, names).parse()


def _eval_node(node, values: dict) -> float:
    tag = node[0]
    if tag == "num":
        return node[1]
    if tag == "const":
        return _CONSTANTS[node[1]]
    if tag == "param":
        try:
            return float(values[node[1]])
        except KeyError:
            raise ExpressionError(f"missing value for parameter {node[1]!r}")
    if tag == "neg":
        return -_eval_node(node[1], values)
    if tag == "call":
        return _FUNCTIONS[node[1]](_eval_node(node[2], values))
    if tag == "bin":
        a = _eval_node(node[2], values)
        b = _eval_node(node[3], values)
        op = node[1]
        if op == "+":
            return a + b
        if op == "-":
            return a - b
        if op == "*":
            return a * b
        return a / b
    raise ExpressionError(f"bad expression node {tag!r}")


def evaluate_expression(text_or_node, values=None) -> float:
    node = (
        parse_expression(text_or_node)
        if isinstance(text_or_node, str)
        else text_or_node
    )
    return _eval_node(node, values or {})


def expression_names(node) -> set[str]:
    tag = node[0]
    if tag == "param":
        return {node[1]}
    if tag == "neg":
        return expression_names(node[1])
    if tag == "call":
        return expression_names(node[2])
    if tag == "bin":
        return expression_names(node[2]) | expression_names(node[3])
    return set()


# --------------------------------------------------------------------- #
# domain specifications


class SpecParseError(ValueError):
    """Domain-spec document is malformed; message carries the line number."""

    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


@dataclass
class Parameter:
    name: str
    default: float
    lo: float = -math.inf
    hi: float = math.inf


@dataclass
class Generator:
    """Recipe item: an edge-rotation, plane-reflection, or translation."""

    kind: str  # "half_turn" | "half_turn_line" | "reflection" | "translation"
    data: tuple  # vertex names or expression triples


@dataclass
class DomainSpec:
    """Parameterized fundamental domain with symbolic vertex coordinates."""

    name: str
    parameters: list[Parameter] = field(default_factory=list)
    vertex_names: list[str] = field(default_factory=list)
    vertex_exprs: dict[str, tuple[str, str, str]] = field(default_factory=dict)
    triangles: list[tuple[str, str, str]] = field(default_factory=list)
    constraints: dict[str, str] = field(default_factory=dict)
    generators: list[Generator] = field(default_factory=list)
    metadata: dict[str, str] = field(default_factory=dict)

    def parameter_defaults(self) -> dict[str, float]:
        return {p.name: p.default for p in self.parameters}

    def parameter_ranges(self) -> dict[str, tuple[float, float]]:
        return {p.name: (p.lo, p.hi) for p in self.parameters}

    def check_ranges(self, values: dict) -> None:
        for p in self.parameters:
            v = float(values.get(p.name, p.default))
            if not (p.lo < v < p.hi):
                raise ValueError(
                    f"parameter {p.name}={v} outside range ({p.lo}, {p.hi})"
                )

    def vertex_positions(self, values: dict) -> np.ndarray:
        names = set(values) | set(_CONSTANTS)
        out = np.zeros((len(self.vertex_names), 3))
        for i, vname in enumerate(self.vertex_names):
            for j, expr in enumerate(self.vertex_exprs[vname]):
                node = parse_expression(expr, names)
                out[i, j] = _eval_node(node, values)
        return out

    def triangle_indices(self) -> np.ndarray:
        index = {n: i for i, n in enumerate(self.vertex_names)}
        return np.array(
            [[index[a], index[b], index[c]] for a, b, c in self.triangles],
            dtype=np.int64,
        )


def _expr_triple(text: str, line: int) -> tuple[str, str, str]:
    parts = [p.strip() for p in text.split(";")]
    if len(parts) != 3 or not all(parts):
        raise SpecParseError("expected three ';'-separated expressions", line)
    return tuple(parts)


def parse_domain_spec(document: str) -> DomainSpec:
    """Parse the textual domain-spec format (see README for the grammar)."""
    spec = DomainSpec(name="")
    param_names: set[str] = set()
    for lineno, raw in enumerate(document.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        head, _, rest = text.partition(" ")
        rest = rest.strip()
        try:
            if head == "surface":
                if not rest:
                    raise SpecParseError("missing surface name", lineno)
                spec.name = rest
            elif head == "param":
                m = re.match(
                    r"(\w+)\s*=\s*(\S+)(?:\s+range\s+(\S+)\s+(\S+))?$", rest
                )
                if not m:
                    raise SpecParseError("bad param line", lineno)
                name, default, lo, hi = m.groups()
                p = Parameter(
                    name,
                    evaluate_expression(default),
                    -math.inf if lo in (None, "-inf") else evaluate_expression(lo),
                    math.inf if hi in (None, "inf") else evaluate_expression(hi),
                )
                spec.parameters.append(p)
                param_names.add(name)
            elif head == "vertex":
                m = re.match(r"(\w+)\s*=\s*\((.*)\)$", rest)
                if not m:
                    raise SpecParseError("bad vertex line", lineno)
                vname, triple = m.groups()
                if vname in spec.vertex_exprs:
                    raise SpecParseError(f"duplicate vertex {vname!r}", lineno)
                exprs = _expr_triple(triple, lineno)
                for e in exprs:
                    node = parse_expression(e, param_names | set(_CONSTANTS))
                    del node
                spec.vertex_names.append(vname)
                spec.vertex_exprs[vname] = exprs
            elif head == "triangle":
                names = rest.split()
                if len(names) != 3:
                    raise SpecParseError("triangle needs three vertices", lineno)
                for n in names:
                    if n not in spec.vertex_exprs:
                        raise SpecParseError(f"unknown vertex {n!r}", lineno)
                spec.triangles.append(tuple(names))
            elif head == "constraint":
                m = re.match(r"(\w+)\s*=\s*(\w+)$", rest)
                if not m:
                    raise SpecParseError("bad constraint line", lineno)
                vname, kind = m.groups()
                if vname not in spec.vertex_exprs:
                    raise SpecParseError(f"unknown vertex {vname!r}", lineno)
                if kind not in ("fixed", "free", "parametric"):
                    raise SpecParseError(f"unknown constraint {kind!r}", lineno)
                spec.constraints[vname] = kind
            elif head == "generator":
                kind, _, payload = rest.partition(" ")
                payload = payload.strip()
                if kind == "half_turn":
                    names = payload.split()
                    if len(names) != 2:
                        raise SpecParseError(
                            "half_turn needs two vertex names", lineno
                        )
                    for n in names:
                        if n not in spec.vertex_exprs:
                            raise SpecParseError(f"unknown vertex {n!r}", lineno)
                    spec.generators.append(Generator("half_turn", tuple(names)))
                elif kind in ("half_turn_line", "reflection"):
                    m = re.match(r"\((.*)\)\s*\((.*)\)$", payload)
                    if not m:
                        raise SpecParseError(
                            f"{kind} needs two parenthesized triples", lineno
                        )
                    a = _expr_triple(m.group(1), lineno)
                    b = _expr_triple(m.group(2), lineno)
                    for e in a + b:
                        parse_expression(e, param_names | set(_CONSTANTS))
                    spec.generators.append(Generator(kind, (a, b)))
                elif kind == "translation":
                    m = re.match(r"\((.*)\)$", payload)
                    if not m:
                        raise SpecParseError(
                            "translation needs a parenthesized triple", lineno
                        )
                    a = _expr_triple(m.group(1), lineno)
                    for e in a:
                        parse_expression(e, param_names | set(_CONSTANTS))
                    spec.generators.append(Generator("translation", (a,)))
                else:
                    raise SpecParseError(f"unknown generator kind {kind!r}", lineno)
            elif head == "meta":
                key, _, value = rest.partition("=")
                spec.metadata[key.strip()] = value.strip()
            else:
                raise SpecParseError(f"unknown directive {head!r}", lineno)
        except ExpressionError as exc:
            raise SpecParseError(str(exc), lineno) from exc
    if not spec.name:
        raise SpecParseError("document is missing a 'surface' line", 1)
    if not spec.triangles:
        raise SpecParseError("document defines no triangles", 1)
    index = {n: i for i, n in enumerate(spec.vertex_names)}
    for a, b, c in spec.triangles:
        if len({index[a], index[b], index[c]}) != 3:
            raise SpecParseError(f"degenerate triangle {a} {b} {c}", 1)
    return spec


def serialize_domain_spec(spec: DomainSpec) -> str:
    lines = [f"surface {spec.name}"]
    for p in spec.parameters:
        lo = "-inf" if math.isinf(p.lo) else _fmt(p.lo)
        hi = "inf" if math.isinf(p.hi) else _fmt(p.hi)
        lines.append(f"param {p.name} = {_fmt(p.default)} range {lo} {hi}")
    for name in spec.vertex_names:
        x, y, z = spec.vertex_exprs[name]
        lines.append(f"vertex {name} = ({x}; {y}; {z})")
    for a, b, c in spec.triangles:
        lines.append(f"triangle {a} {b} {c}")
    for vname, kind in spec.constraints.items():
        lines.append(f"constraint {vname} = {kind}")
    for g in spec.generators:
        if g.kind == "half_turn":
            lines.append(f"generator half_turn {g.data[0]} {g.data[1]}")
        elif g.kind in ("half_turn_line", "reflection"):
            a, b = g.data
            lines.append(
                f"generator {g.kind} ({'; '.join(a)}) ({'; '.join(b)})"
            )
        else:
            (a,) = g.data
            lines.append(f"generator translation ({'; '.join(a)})")
    for key, value in spec.metadata.items():
        lines.append(f"meta {key} = {value}")
    return "\n".join(lines) + "\n"


def realize_domain_spec(
    spec: DomainSpec, values: dict | None = None
) -> tuple[SimplicialSurface, GeneratorSet]:
    """Evaluate a spec at parameter values: mesh plus generator set."""
    params = spec.parameter_defaults()
    if values:
        params.update(values)
    spec.check_ranges(params)
    positions = spec.vertex_positions(params)
    surface = SimplicialSurface(positions, spec.triangle_indices())
    index = {n: i for i, n in enumerate(spec.vertex_names)}

    motions = []
    annotations = []
    for g in spec.generators:
        if g.kind == "half_turn":
            p = positions[index[g.data[0]]]
            q = positions[index[g.data[1]]]
            motions.append(half_turn_about_edge(p, q))
            annotations.append(("edge", (p, q)))
        elif g.kind == "half_turn_line":
            point = [evaluate_expression(e, params) for e in g.data[0]]
            direction = [evaluate_expression(e, params) for e in g.data[1]]
            motions.append(half_turn_about_line(point, direction))
            annotations.append(None)
        elif g.kind == "reflection":
            point = [evaluate_expression(e, params) for e in g.data[0]]
            normal = [evaluate_expression(e, params) for e in g.data[1]]
            motions.append(reflection_across_plane(point, normal))
            annotations.append(("plane", (point, normal)))
        else:
            vec = [evaluate_expression(e, params) for e in g.data[0]]
            motions.append(translation_motion(vec))
            annotations.append(None)
    return surface, GeneratorSet(motions, annotations)


# --------------------------------------------------------------------- #
# mesh files


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def export_mesh(surface: SimplicialSurface, fmt: str, path) -> None:
    """Write a mesh as OBJ, ASCII PLY, or OFF.

    Output is byte-identical for identical input: positions are printed with
    17 significant digits and no metadata or timestamps are emitted.
    """
    fmt = fmt.lower()
    pos = surface.positions
    tri = surface.triangles
    lines: list[str] = []
    if fmt == "obj":
        for p in pos:
            lines.append(f"v {_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for t in tri:
            lines.append(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}")
    elif fmt in ("ply", "ply_ascii"):
        lines += [
            "ply",
            "format ascii 1.0",
            f"element vertex {len(pos)}",
            "property double x",
            "property double y",
            "property double z",
            f"element face {len(tri)}",
            "property list uchar int vertex_indices",
            "end_header",
        ]
        for p in pos:
            lines.append(f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for t in tri:
            lines.append(f"3 {t[0]} {t[1]} {t[2]}")
    elif fmt == "off":
        lines.append("OFF")
        lines.append(f"{len(pos)} {len(tri)} 0")
        for p in pos:
            lines.append(f"{_fmt(p[0])} {_fmt(p[1])} {_fmt(p[2])}")
        for t in tri:
            lines.append(f"3 {t[0]} {t[1]} {t[2]}")
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _format_of(path) -> str:
    text = str(path).lower()
    for ext in ("obj", "ply", "off"):
        if text.endswith("." + ext):
            return ext
    raise ValueError(f"cannot infer mesh format from {path!r}")


def import_mesh(path, fmt: str | None = None) -> SimplicialSurface:
    """Read a mesh written by :func:`export_mesh` (OBJ, ASCII PLY, or OFF)."""
    fmt = (fmt or _format_of(path)).lower()
    with open(path, "r", encoding="ascii") as fh:
        lines = [ln.strip() for ln in fh]
    positions: list[list[float]] = []
    triangles: list[list[int]] = []
    if fmt == "obj":
        for ln in lines:
            if ln.startswith("v "):
                positions.append([float(x) for x in ln.split()[1:4]])
            elif ln.startswith("f "):
                idx = [int(x.split("/")[0]) - 1 for x in ln.split()[1:]]
                if len(idx) != 3:
                    raise ValueError("only triangular faces are supported")
                triangles.append(idx)
    elif fmt in ("ply", "ply_ascii"):
        if not lines or lines[0] != "ply":
            raise ValueError("not a PLY file")
        nv = nf = 0
        k = 0
        for k, ln in enumerate(lines):
            if ln.startswith("element vertex"):
                nv = int(ln.split()[-1])
            elif ln.startswith("element face"):
                nf = int(ln.split()[-1])
            elif ln == "end_header":
                break
        body = [ln for ln in lines[k + 1 :] if ln]
        for ln in body[:nv]:
            positions.append([float(x) for x in ln.split()[:3]])
        for ln in body[nv : nv + nf]:
            parts = ln.split()
            if parts[0] != "3":
                raise ValueError("only triangular faces are supported")
            triangles.append([int(x) for x in parts[1:4]])
    elif fmt == "off":
        if not lines or lines[0] != "OFF":
            raise ValueError("not an OFF file")
        body = [ln for ln in lines[1:] if ln and not ln.startswith("#")]
        nv, nf, _ = (int(x) for x in body[0].split())
        for ln in body[1 : 1 + nv]:
            positions.append([float(x) for x in ln.split()[:3]])
        for ln in body[1 + nv : 1 + nv + nf]:
            parts = ln.split()
            if parts[0] != "3":
                raise ValueError("only triangular faces are supported")
            triangles.append([int(x) for x in parts[1:4]])
    else:
        raise ValueError(f"unknown mesh format {fmt!r}")
    return SimplicialSurface(positions, triangles)
