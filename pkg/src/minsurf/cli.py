"""Command-line front end: list, generate, solve, tile, verify."""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog, io, verify
from .energy import minimality_residual
from .mesh import InvalidMeshError
from .solver import SolveProblem, solve
from .symmetry import Box, BudgetExceededError, detect_periods, extend

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


class _UsageError(ValueError):
    pass


def _parse_params(pairs) -> tuple[dict, str | None]:
    """Split repeated ``name=value`` flags into numbers plus optional mode."""
    values: dict[str, float] = {}
    mode = None
    for pair in pairs or ():
        name, sep, raw = pair.partition("=")
        if not sep or not name:
            raise _UsageError(f"bad --param {pair!r}; expected name=value")
        if name == "mode":
            mode = raw
            continue
        try:
            values[name] = float(raw)
        except ValueError:
            raise _UsageError(f"parameter {name!r} needs a numeric value")
    return values, mode


def _parse_window(text: str) -> Box:
    try:
        parts = text.split(",")
        if len(parts) == 1:
            lo, hi = (float(x) for x in parts[0].split(":"))
            return Box((lo, lo, lo), (hi, hi, hi))
        if len(parts) == 3:
            lows, highs = [], []
            for part in parts:
                lo, hi = (float(x) for x in part.split(":"))
                lows.append(lo)
                highs.append(hi)
            return Box(lows, highs)
    except _UsageError:
        raise
    except Exception:
        pass
    raise _UsageError(
        f"bad --window {text!r}; expected lo:hi or lo:hi,lo:hi,lo:hi"
    )


def _emit(args, payload: dict, text_lines: list[str]) -> None:
    if getattr(args, "format", "text") == "json":
        print(json.dumps(payload, indent=2, sort_keys=True, default=_jsonify))
    else:
        for line in text_lines:
            print(line)


def _jsonify(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    raise TypeError(f"not serializable: {type(obj)!r}")


# --------------------------------------------------------------------- #
# subcommands


def cmd_list(args) -> int:
    rows = catalog.catalog_list()
    payload = []
    lines = []
    for info in rows:
        params = {
            name: {"default": d, "range": list(r)}
            for name, (d, r) in info.parameters.items()
        }
        payload.append(
            {
                "example_id": info.example_id,
                "triangles": info.triangle_count,
                "parameters": params,
                "free_parameters": list(info.free_parameters),
                "closed_form": info.has_closed_form,
                "summary": info.summary,
            }
        )
        pieces = ", ".join(
            f"{n}={d:g} in ({r[0]:g}, {r[1]:g})"
            for n, (d, r) in info.parameters.items()
        )
        lines.append(
            f"{info.example_id:24s} {info.triangle_count:>3s} triangles"
            + (f"  [{pieces}]" if pieces else "")
        )
    _emit(args, {"examples": payload}, lines)
    return EXIT_OK


def _resolve_params(example_id, args):
    values, mode = _parse_params(args.param)
    return values, mode


def cmd_generate(args) -> int:
    values, mode = _resolve_params(args.example, args)
    surface, generators, _problem = catalog.instantiate(
        args.example, values or None, mode=mode
    )
    used, tag = (
        catalog.closed_form(args.example, values or None)
        if args.example != catalog.CATENOID_ID
        else (dict(values), "analytic")
    )
    lines = [
        f"{args.example}: {surface.vertex_count} vertices, "
        f"{surface.triangle_count} triangles ({tag} parameters)",
    ]
    payload = {
        "example_id": args.example,
        "vertices": surface.vertex_count,
        "triangles": surface.triangle_count,
        "parameters": used,
        "provenance": tag,
    }
    if args.out:
        fmt = args.out.rsplit(".", 1)[-1]
        io.export_mesh(surface, fmt, args.out)
        lines.append(f"wrote {args.out}")
        payload["out"] = args.out
    _emit(args, payload, lines)
    return EXIT_OK


def _problem_from_spec_file(path: str, fixed: dict) -> SolveProblem:
    from .energy import gradient_field
    from .solver import VertexConstraint

    with open(path, "r", encoding="utf-8") as fh:
        spec = io.parse_domain_spec(fh.read())
    free = [p.name for p in spec.parameters if p.name not in fixed]

    def residual_fn(values: dict) -> np.ndarray:
        surface, _ = io.realize_domain_spec(spec, values)
        grads = gradient_field(surface)
        rows = []
        for v in surface.interior_vertices():
            rows.extend(grads[v])
        return np.array(rows)

    params = {name: spec.parameter_defaults()[name] for name in free}
    surface, _ = io.realize_domain_spec(spec, {**spec.parameter_defaults(), **fixed})
    constraints = {
        spec.vertex_names.index(v): VertexConstraint(kind)
        for v, kind in spec.constraints.items()
    }
    return SolveProblem(
        parameters=params,
        residual_fn=lambda values: residual_fn({**fixed, **values}),
        bounds={name: spec.parameter_ranges()[name] for name in free},
        surface=surface,
        constraints=constraints,
        description=spec.name,
    )


def cmd_solve(args) -> int:
    values, _mode = _parse_params(args.param)
    if args.example in catalog.entry_ids():
        if args.example == catalog.CATENOID_ID:
            raise _UsageError(
                "the catenoid family is fully determined; nothing to solve"
            )
        problem = catalog.solve_problem(args.example, values or None)
        if problem is None:
            free: dict = {}
            report = None
            lines = [f"{args.example}: no free parameters (already determined)"]
            payload = {"example_id": args.example, "converged": True}
            _emit(args, payload, lines)
            return EXIT_OK
    else:
        problem = _problem_from_spec_file(args.example, values)
    report = solve(
        problem,
        method=args.method,
        tol=args.tol,
        max_iter=args.max_iter,
    )
    payload = {
        "target": args.example,
        "converged": report.converged,
        "iterations": report.iterations,
        "parameters": report.final_parameters,
        "residual_norm": report.residual_norm,
        "per_vertex_gradient_norms": report.per_vertex_gradient_norms,
        "jacobian_condition": report.jacobian_condition,
        "message": report.message,
    }
    lines = [
        f"{'converged' if report.converged else 'did not converge'} "
        f"in {report.iterations} iterations",
        f"residual norm {report.residual_norm:.3e}"
        + (f"  (condition {report.jacobian_condition:.2e})"
           if np.isfinite(report.jacobian_condition) else ""),
    ]
    for name, value in report.final_parameters.items():
        lines.append(f"  {name} = {value:.10g}")
    if report.message:
        lines.append(report.message)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True, default=_jsonify)
        lines.append(f"wrote {args.report}")
    _emit(args, payload, lines)
    return EXIT_OK if report.converged else EXIT_VERIFICATION_FAILED


def cmd_tile(args) -> int:
    values, mode = _parse_params(args.param)
    surface, generators, _ = catalog.instantiate(
        args.example, values or None, mode=mode
    )
    window = (
        _parse_window(args.window)
        if args.window
        else catalog.window_covering_periods(
            args.example, values or None, n_periods=2, mode=mode
        )
    )
    extension = extend(
        surface, generators.motions, window, max_copies=args.depth
    )
    candidates = catalog.periods(args.example, values or None, mode=mode)
    confirmed = detect_periods(extension, candidates, window=window, margin=0.0)
    lines = [
        f"{args.example}: extended to {extension.vertex_count} vertices, "
        f"{extension.triangle_count} triangles",
        "confirmed periods: "
        + (
            "; ".join(
                "(" + ", ".join(f"{x:.9g}" for x in p) + ")" for p in confirmed
            )
            if confirmed
            else "none"
        ),
    ]
    payload = {
        "example_id": args.example,
        "vertices": extension.vertex_count,
        "triangles": extension.triangle_count,
        "window": {"lo": window.lo, "hi": window.hi},
        "confirmed_periods": [list(map(float, p)) for p in confirmed],
    }
    core = window.inset(
        min(extension.longest_edge(), 0.33 * float((window.hi - window.lo).min()))
    )
    check = [
        v
        for v in extension.interior_vertices()
        if core.contains(extension.positions[v])
    ]
    rep = minimality_residual(extension, tol=args.tol, vertices=check)
    lines.append(
        f"minimality: {'pass' if rep.passed else 'FAIL'} "
        f"(worst gradient {rep.worst:.3e} over {len(check)} interior vertices)"
    )
    payload["minimality"] = {
        "passed": rep.passed,
        "worst": rep.worst,
        "vertices_checked": len(check),
    }
    if args.out:
        fmt = args.out.rsplit(".", 1)[-1]
        io.export_mesh(extension, fmt, args.out)
        lines.append(f"wrote {args.out}")
        payload["out"] = args.out
    _emit(args, payload, lines)
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = args.tol
    if args.mesh:
        surface = io.import_mesh(args.mesh)
        rep = minimality_residual(surface, tol=tol if tol else 1e-8)
        inter = verify.self_intersection_check(surface)
        ok = rep.passed and inter.clean
        lines = [
            f"mesh {args.mesh}: {surface.vertex_count} vertices, "
            f"{surface.triangle_count} triangles",
            f"minimality: {'pass' if rep.passed else 'FAIL'} "
            f"(worst {rep.worst:.3e} over {len(rep.norms)} interior vertices)",
            f"self-intersections: {'none' if inter.clean else len(inter.intersecting_pairs)}",
        ]
        payload = {
            "mesh": args.mesh,
            "minimality": {"passed": rep.passed, "worst": rep.worst},
            "intersections": len(inter.intersecting_pairs),
        }
        _emit(args, payload, lines)
        return EXIT_OK if ok else EXIT_VERIFICATION_FAILED

    values, mode = _parse_params(args.param)
    example = args.example
    if example is None:
        raise _UsageError("verify needs an example id or --mesh")
    solved, tag = (
        catalog.closed_form(example, values or None)
        if example != catalog.CATENOID_ID
        else (dict(values), "analytic")
    )
    if tol is None:
        tol = 1e-10 if tag == "analytic" else 1e-8
    surface, generators, _ = catalog.instantiate(example, values or None, mode=mode)
    window = (
        _parse_window(args.window)
        if args.window
        else catalog.window_covering_periods(example, values or None, n_periods=2, mode=mode)
    )
    extension = extend(surface, generators.motions, window)
    core = window.inset(
        min(extension.longest_edge(), 0.33 * float((window.hi - window.lo).min()))
    )
    check = [
        v
        for v in extension.interior_vertices()
        if core.contains(extension.positions[v])
    ]
    rep = minimality_residual(extension, tol=tol, vertices=check)
    inter = verify.self_intersection_check(extension)
    printed = verify.printed_equation_residuals(example, values or None)
    ok = rep.passed and inter.clean
    lines = [
        f"{example} at {tag} parameters "
        + ", ".join(f"{k}={v:.10g}" for k, v in sorted(solved.items())),
        f"window extension: {extension.triangle_count} triangles",
        f"minimality (tol {tol:g}): {'pass' if rep.passed else 'FAIL'} "
        f"(worst {rep.worst:.3e} over {len(check)} vertices)",
        f"self-intersections: {'none' if inter.clean else len(inter.intersecting_pairs)}",
    ]
    payload = {
        "example_id": example,
        "parameters": solved,
        "provenance": tag,
        "minimality": {
            "passed": rep.passed,
            "worst": rep.worst,
            "tolerance": tol,
            "vertices_checked": len(check),
        },
        "intersections": len(inter.intersecting_pairs),
        "scope": "checked on a finite window covering two periods per direction",
    }
    if printed is not None:
        worst_eq = max(abs(r) for _, r in printed)
        ok = ok and worst_eq <= 1e-8
        lines.append(
            "explicit equations: "
            + ", ".join(f"{name}={value:.3e}" for name, value in printed)
        )
        payload["printed_equations"] = {name: value for name, value in printed}
    _emit(args, payload, lines)
    return EXIT_OK if ok else EXIT_VERIFICATION_FAILED


# --------------------------------------------------------------------- #


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="minsurf",
        description=(
            "Construct, solve, verify and periodically tile discrete "
            "piecewise-linear minimal surfaces."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list", help="list catalog examples")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_list)

    p = sub.add_parser("generate", help="realize a fundamental piece")
    p.add_argument("example")
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("-o", "--out")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", help="solve for free parameters")
    p.add_argument("example", help="catalog id or domain-spec file")
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument(
        "--method",
        choices=("newton_fd_jacobian", "damped_gradient_descent"),
        default="newton_fd_jacobian",
    )
    p.add_argument("--report", help="write a JSON report file")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("tile", help="extend a piece across a window")
    p.add_argument("example")
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("--window", metavar="LO:HI[,LO:HI,LO:HI]")
    p.add_argument("--depth", type=int, default=10000, help="copy budget")
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("-o", "--out")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("verify", help="check minimality and embeddedness")
    p.add_argument("example", nargs="?")
    p.add_argument("--mesh", help="verify a mesh file instead of an example")
    p.add_argument("--param", action="append", metavar="NAME=VALUE")
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--window", metavar="LO:HI[,LO:HI,LO:HI]")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_verify)

    return parser


def _join_window_flag(argv) -> list[str]:
    """Rewrite ``--window -1:2`` as ``--window=-1:2`` so argparse accepts
    windows with negative bounds."""
    out = []
    skip = False
    for i, arg in enumerate(argv):
        if skip:
            skip = False
            continue
        if arg == "--window" and i + 1 < len(argv):
            out.append(f"--window={argv[i + 1]}")
            skip = True
        else:
            out.append(arg)
    return out


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        args = parser.parse_args(_join_window_flag(list(argv)))
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (_UsageError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except InvalidMeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
