"""Command-line front end.

Exit codes: 0 on success, 2 on usage errors (argparse), 1 on domain errors
(empty sets, dimension mismatches, parse failures), with a machine-readable
``{"error": ...}`` object on stderr for the latter.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .algebra import SElem
from .exprs import eval_expr
from .metrics import MetricId, SVector, parse_metric_id
from .oracle import GridSpec, grid_connected, grid_project, grid_segment_sm
from .projection import (
    is_chebyshev,
    project_box,
    project_box_max,
    project_ray,
)
from .raysets import (
    BoxSet,
    RaySet,
    is_box_semimodule_convex,
    is_connected,
    is_geometrically_convex,
    is_semimodule_convex,
    is_traditionally_convex,
)
from .segments import geometric_segment, semimodule_segment, traditional_segment
from .svg import render_projection_svg, render_segment_svg


def _load_json(path: str):
    if path == "-":
        return json.load(sys.stdin)
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _load_vector(path: str) -> SVector:
    data = _load_json(path)
    if "coords" in data:
        return SVector.from_json(data)
    return SVector((SElem.from_json(data),))


def _load_set(path: str):
    data = _load_json(path)
    if "factors" in data:
        return BoxSet.from_json(data)
    return RaySet.from_json(data)


def _emit(args, payload, svg: Optional[str] = None) -> str:
    if args.out == "svg":
        if svg is None:
            raise ValueError("svg output is not available for this command")
        return svg
    if args.out == "text":
        return json.dumps(payload, indent=2, sort_keys=True)
    return json.dumps(payload, sort_keys=True)


def _grid_from_args(args) -> GridSpec:
    return GridSpec(
        resolution=args.resolution, max_magnitude=args.max_magnitude, seed=args.seed
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smaxplus",
        description="Signed max-plus arithmetic, segments, convexity checks and projections.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--out", choices=("json", "svg", "text"), default="json")
        p.add_argument("--resolution", type=float, default=1e-3)
        p.add_argument("--max-magnitude", dest="max_magnitude", type=float, default=20.085536923187668)
        p.add_argument("--seed", type=int, default=42)

    p_eval = sub.add_parser("eval", help="evaluate a max-plus expression")
    p_eval.add_argument("expression", help="expression text, or '-' to read stdin")
    p_eval.add_argument("--mode", choices=("mpa", "smpa"), default="smpa")
    add_common(p_eval)

    p_seg = sub.add_parser("segment", help="compute a segment between two vectors")
    p_seg.add_argument("--kind", choices=("geometric", "semimodule", "traditional"), default="geometric")
    p_seg.add_argument("a", help="path to the first endpoint JSON")
    p_seg.add_argument("b", help="path to the second endpoint JSON")
    add_common(p_seg)

    p_proj = sub.add_parser("project", help="nearest points of a query in a set")
    p_proj.add_argument("x", help="path to the query JSON (element or vector)")
    p_proj.add_argument("set", help="path to the set JSON (ray set or box)")
    p_proj.add_argument("--metric", default=None, help="rho<k><j>, D1 or D2 (boxes)")
    p_proj.add_argument("--base", choices=("d1", "d2"), default="d2")
    add_common(p_proj)

    p_check = sub.add_parser("check", help="connectedness / convexity / Chebyshev decisions")
    p_check.add_argument("set", help="path to the set JSON")
    p_check.add_argument("--chebyshev", action="store_true")
    p_check.add_argument("--connected", action="store_true")
    p_check.add_argument(
        "--convex",
        choices=("traditional", "geometric", "semimodule", "box"),
        default=None,
    )
    add_common(p_check)

    p_oracle = sub.add_parser("oracle", help=argparse.SUPPRESS)
    p_oracle.add_argument("routine", choices=("project", "segment-sm", "connected"))
    p_oracle.add_argument("inputs", nargs="+", help="input JSON paths")
    p_oracle.add_argument("--metric", default="rho12")
    add_common(p_oracle)

    return parser


def _cmd_eval(args) -> str:
    source = sys.stdin.read() if args.expression == "-" else args.expression
    value = eval_expr(source, args.mode)
    return _emit(args, value.to_json())


def _cmd_segment(args) -> str:
    a = _load_vector(args.a)
    b = _load_vector(args.b)
    if args.kind == "geometric":
        line = geometric_segment(a, b)
        return _emit(args, line.to_json(), svg=render_segment_svg(line) if len(a) <= 2 else None)
    if args.kind == "semimodule":
        seg = semimodule_segment(a, b)
        return _emit(args, seg.to_json(), svg=render_segment_svg(seg) if len(a) <= 2 else None)
    seg = traditional_segment(a, b)
    if seg is None:
        return _emit(args, {"representable": False})
    payload = seg.to_json()
    payload["representable"] = True
    return _emit(args, payload, svg=render_segment_svg(seg) if len(a) <= 2 else None)


def _cmd_project(args) -> str:
    x = _load_vector(args.x)
    target = _load_set(args.set)
    base = 1 if args.base == "d1" else 2
    if isinstance(target, RaySet):
        if len(x) != 1:
            raise ValueError("a ray set expects a one-coordinate query")
        result = project_ray(x[0], target, base)
        points = [SVector((p,)) for p in result.points]
        box = BoxSet((target,))
    else:
        mid = parse_metric_id(args.metric) if args.metric else MetricId("euclid", base)
        if mid.combine == "max":
            result = project_box_max(x, target, mid.base, args.resolution, args.max_magnitude)
        else:
            result = project_box(x, target, mid)
        points = list(result.points)
        box = target
    svg = render_projection_svg(x, points, box) if len(x) <= 2 else None
    return _emit(args, result.to_json(), svg=svg)


def _cmd_check(args) -> str:
    target = _load_set(args.set)
    out = {}
    if isinstance(target, BoxSet):
        asked = args.chebyshev or args.connected or args.convex is not None
        if args.convex is not None and args.convex != "box":
            raise ValueError("box sets support --convex box only")
        if args.convex == "box" or not asked:
            out["box_semimodule_convex"] = is_box_semimodule_convex(target)
        if args.chebyshev or args.connected or not asked:
            connected = all(is_connected(f) for f in target.factors)
            out["connected"] = connected
            if args.chebyshev or not asked:
                out["chebyshev"] = connected
        return _emit(args, out)
    if args.chebyshev:
        out["chebyshev"] = is_chebyshev(target)
        out["connected"] = is_connected(target)
    elif args.connected:
        out["connected"] = is_connected(target)
    if args.convex == "traditional":
        out["traditionally_convex"] = is_traditionally_convex(target)
    elif args.convex == "geometric":
        out["geometrically_convex"] = is_geometrically_convex(target)
    elif args.convex == "semimodule":
        out["semimodule_convex"] = is_semimodule_convex(target)
    if not out:
        out = {
            "connected": is_connected(target),
            "chebyshev": is_chebyshev(target),
            "traditionally_convex": is_traditionally_convex(target),
            "geometrically_convex": is_geometrically_convex(target),
            "semimodule_convex": is_semimodule_convex(target),
        }
    return _emit(args, out)


def _cmd_oracle(args) -> str:
    g = _grid_from_args(args)
    if args.routine == "project":
        x = _load_vector(args.inputs[0])
        target = _load_set(args.inputs[1])
        if isinstance(target, RaySet):
            target = BoxSet((target,))
        result = grid_project(x, target, parse_metric_id(args.metric), g)
        return _emit(args, result.to_json())
    if args.routine == "segment-sm":
        a = _load_vector(args.inputs[0])
        b = _load_vector(args.inputs[1])
        cloud = grid_segment_sm(a, b, g)
        return _emit(args, {"points": [v.to_json() for v in cloud]})
    target = _load_set(args.inputs[0])
    return _emit(args, {"connected": grid_connected(target, g)})


_DISPATCH = {
    "eval": _cmd_eval,
    "segment": _cmd_segment,
    "project": _cmd_project,
    "check": _cmd_check,
    "oracle": _cmd_oracle,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        output = _DISPATCH[args.command](args)
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        json.dump({"error": str(exc)}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    sys.stdout.write(output)
    if not output.endswith("\n"):
        sys.stdout.write("\n")
    return 0


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
