"""Command dispatcher for the ``tropex`` executable."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .. import charts, geometry_ops, strata_calculus, troppoly
from ..errors import InvalidInput, TropexError
from ..lattice_affine import AffinePolytope, IntMatrix, PolyhedralComplex, normal_fan
from ..semiring import as_fraction
from .parser import (
    format_polynomial, format_smooth, format_value, parse_point, parse_polynomial, parse_smooth,
    parse_vector,
)
from .serialize import complex_payload, dumps, polyhedron_payload, polytope_from_payload, \
    weighted_payload
from .svg import render_svg

COMMANDS = (
    "eval", "tropicalize", "hypersurface", "balance", "basis", "relations", "explode-ncd",
    "explode-toric", "refine", "fiber-product", "degenerate", "fiber", "pants", "strata-op",
    "seminorm",
)
GRID_ENV = "TROPEX_GRID"


@dataclass
class CommandResult:
    """Outcome of one command.

    Attributes:
        status: 0 on success, otherwise the error's exit code.
        payload: the JSON document.
        svg: an SVG drawing, when one was produced.
    """

    status: int
    payload: dict
    svg: str | None = None
    floats: bool = field(default=False, repr=False)

    @property
    def json(self) -> str:
        return dumps(self.payload, self.floats)


class _ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        raise InvalidInput(message)


def _load_json(text: str, stdin: str):
    if text == "-":
        text = stdin
    elif text.startswith("@"):
        try:
            with open(text[1:], encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise InvalidInput(f"cannot read {text[1:]}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"invalid JSON: {exc.msg} at line {exc.lineno}, column {exc.colno}") from exc


def _text(value: str, stdin: str) -> str:
    return stdin if value == "-" else value


def _polytope(args, stdin: str, required: bool = True) -> AffinePolytope | None:
    if args.polytope is None:
        if required:
            raise InvalidInput("--polytope is required")
        return None
    return AffinePolytope.from_json(_load_json(args.polytope, stdin))


def _grid(args) -> int:
    if args.grid is not None:
        return args.grid
    env = os.environ.get(GRID_ENV)
    if env:
        try:
            return int(env)
        except ValueError as exc:
            raise InvalidInput(f"{GRID_ENV} must be an integer, got {env!r}") from exc
    return strata_calculus.DEFAULT_GRID


def _viewport(args):
    if args.viewport is None:
        return None
    v = parse_vector(args.viewport)
    if len(v) != 4 or v[0] >= v[2] or v[1] >= v[3]:
        raise InvalidInput("--viewport needs xmin,ymin,xmax,ymax with xmin<xmax and ymin<ymax")
    return v


def _family(args, stdin: str) -> geometry_ops.DegenerationFamily:
    if args.family is not None:
        data = _load_json(args.family, stdin)
        try:
            return geometry_ops.make_family(data["S"], data.get("coeffs"), data.get("v"))
        except (KeyError, TypeError) as exc:
            raise InvalidInput(f"malformed family: {exc}") from exc
    if args.simplex is None:
        raise InvalidInput("give --family or --simplex")
    S = geometry_ops.simplex_points(args.simplex, args.n)
    lift = geometry_ops.standard_lift(S) if args.lift == "standard" else [0] * len(S)
    return geometry_ops.make_family(S, None, lift)


def _strata(args, chart: charts.Chart) -> list:
    out = []
    for text in args.stratum or []:
        x = parse_vector(text)
        if len(x) != chart.m or not chart.P.contains(x):
            raise InvalidInput(f"stratum point {text!r} is not in the polytope")
        out.append(chart.P.stratum_of(x))
    return out


def _stratum_payload(S) -> dict:
    return {"tight": sorted(S.tight), "dimension": S.dimension, "point": list(S.point)}


# Commands ----------------------------------------------------------------------------------

def cmd_eval(args, stdin):
    f = parse_polynomial(_text(args.poly, stdin), args.dim)
    p = parse_point(args.at, f.m)
    v = troppoly.evaluate(f, p)
    return {"coeff": v.coeff, "exp": v.exponent, "inZeroLocus": v.coeff.is_zero,
            "value": format_value(v), "polynomial": format_polynomial(f)}


def cmd_tropicalize(args, stdin):
    f = parse_polynomial(_text(args.poly, stdin), args.dim)
    F = troppoly.tropicalize(f)
    out = {"polynomial": format_polynomial(f),
           "pieces": [{"a": a, "alpha": list(alpha)} for a, alpha in F.pieces]}
    if f.terms:
        out["newtonPolytope"] = polyhedron_payload(troppoly.newton_polytope(f).closure)
        if f.m <= troppoly.MAX_DIM:
            out["subdivision"] = [polyhedron_payload(p.closure) for p in troppoly.regular_subdivision(f)]
    if args.at is not None:
        x = parse_vector(args.at)
        if len(x) != f.m:
            raise InvalidInput(f"--at needs {f.m} coordinates")
        out["value"] = F(x)
        out["argmin"] = sorted(list(F.pieces[i][1]) for i in F.argmin(x))
    return out


def _locus(args, stdin):
    f = parse_polynomial(_text(args.poly, stdin), args.dim)
    P = _polytope(args, stdin, required=False)
    return f, troppoly.corner_locus(f, P)


def cmd_hypersurface(args, stdin):
    f, W = _locus(args, stdin)
    out = {"polynomial": format_polynomial(f), "complex": weighted_payload(W)}
    svg = render_svg(W, _viewport(args)) if args.svg else None
    return out, svg


def cmd_balance(args, stdin):
    f, W = _locus(args, stdin)
    report = troppoly.is_balanced(W)
    return {"balanced": report.ok,
            "point": list(report.point) if report.point is not None else None,
            "residual": list(report.residual) if report.residual is not None else None}


def _basis_payload(chart):
    return [m.to_json() for m in chart.basis]


def _relations_payload(chart):
    return [dict(r.to_json(), text=r.describe()) for r in chart.relations]


def cmd_basis(args, stdin):
    chart = charts.Chart(_polytope(args, stdin))
    return {"basis": _basis_payload(chart), "relations": _relations_payload(chart)}


def cmd_relations(args, stdin):
    chart = charts.Chart(_polytope(args, stdin))
    return {"relations": _relations_payload(chart)}


def cmd_explode_ncd(args, stdin):
    cfg = geometry_ops.NCConfiguration.from_json(_load_json(args.config, stdin))
    return {"complex": complex_payload(geometry_ops.explode_ncd(cfg))}


def cmd_explode_toric(args, stdin):
    P = _polytope(args, stdin, required=False)
    if args.fan is None:
        if P is None:
            raise InvalidInput("explode-toric needs --fan or --polytope")
        fan = geometry_ops.explode_toric(normal_fan(P))
    else:
        data = _load_json(args.fan, stdin)
        try:
            rays = [tuple(int(x) for x in r) for r in data["rays"]]
            cones = [tuple(int(i) for i in c) for c in data["cones"]]
            dim = int(data.get("dim", len(rays[0])))
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed fan: {exc}") from exc
        if any(not 0 <= i < len(rays) for c in cones for i in c):
            raise InvalidInput("cone refers to a missing ray")
        fan = geometry_ops.explode_toric(geometry_ops.fan_from_cones(rays, cones, dim), P)
    payload = complex_payload(fan)
    payload["rays"] = sorted(list(r) for c in fan.cells if c.dimension == 1 for r in c.rays)
    return {"fan": payload}


def cmd_refine(args, stdin):
    data = _load_json(args.complex, stdin)
    subs = _load_json(args.subdivisions, stdin)
    try:
        cells = [polytope_from_payload(c) for c in data["cells"]]
        pieces = {int(k): [polytope_from_payload(c) for c in v] for k, v in subs.items()}
    except (KeyError, TypeError, ValueError, AttributeError) as exc:
        raise InvalidInput(f"malformed complex or subdivision: {exc}") from exc
    cx = PolyhedralComplex.from_maximal(cells)
    # Indices in the input refer to the listed cells, which are maximal.
    order = {c.key(): i for i, c in enumerate(cx.cells)}
    remapped = {order[cells[k].key()]: v for k, v in pieces.items() if 0 <= k < len(cells)}
    if len(remapped) != len(pieces):
        raise InvalidInput("subdivision refers to a missing cell")
    return {"complex": complex_payload(geometry_ops.refine(cx, remapped))}


def _affine_map(data, label: str) -> geometry_ops.AffineMap:
    try:
        matrix = data["matrix"]
        source = int(data.get("sourceDim", len(matrix[0]) if matrix else 0))
        offset = data.get("offset", [0] * len(matrix))
        domain = AffinePolytope.from_json(data["domain"]) if data.get("domain") else None
        return geometry_ops.AffineMap(IntMatrix(matrix, ncols=source), tuple(offset), domain)
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed map {label}: {exc}") from exc


def cmd_fiber_product(args, stdin):
    f = _affine_map(_load_json(args.f, stdin), "f")
    g = _affine_map(_load_json(args.g, stdin), "g")
    fp = geometry_ops.tropical_fiber_product(f, g)
    return {"polytope": polyhedron_payload(fp.polytope), "multiplicity": fp.multiplicity,
            "zTransverse": fp.z_transverse, "dimension": fp.dimension}


def cmd_degenerate(args, stdin):
    fam = _family(args, stdin)
    return {"S": [list(a) for a in fam.S], "v": list(fam.v), "coeffs": list(fam.coeffs),
            "cells": [[list(p) for p in c] for c in fam.cells]}


def cmd_fiber(args, stdin):
    fam = _family(args, stdin)
    W = geometry_ops.family_fiber(fam, as_fraction(args.w))
    out = {"w": as_fraction(args.w), "complex": weighted_payload(W)}
    if fam.n <= troppoly.MAX_DIM and W.ambient_dim - W.top_dim == 1:
        out["balanced"] = troppoly.is_balanced(W).ok
    svg = render_svg(W, _viewport(args)) if args.svg else None
    return out, svg


def cmd_pants(args, stdin):
    fam = _family(args, stdin)
    c = geometry_ops.pants_census(fam, as_fraction(args.w))
    return {"vertices": c.vertices, "edges": c.edges, "rays": c.rays, "pants": c.pants}


def cmd_strata_op(args, stdin):
    chart = charts.Chart(_polytope(args, stdin))
    I = _strata(args, chart)
    out = {"strata": [_stratum_payload(S) for S in I]}
    if args.op == "weight":
        out["weight"] = strata_calculus.weight_w_I(I, chart).describe()
        return out
    if args.func is None:
        raise InvalidInput(f"strata-op {args.op} needs a function")
    f = parse_smooth(_text(args.func, stdin), len(chart.basis))
    if args.op == "e":
        if len(I) != 1:
            raise InvalidInput("strata-op e takes exactly one --stratum")
        out["result"] = format_smooth(strata_calculus.e_S(f, I[0], chart))
    elif args.op == "delta":
        out["result"] = format_smooth(strata_calculus.delta_I(f, I, chart))
    else:
        region = strata_calculus.Region((as_fraction(args.radius),) * len(chart.basis))
        b = strata_calculus.verify_delta_bound(f, I, chart, region, _grid(args))
        out.update({"supRatio": b.sup_ratio, "stable": b.stable, "finite": b.finite})
    return out


def cmd_seminorm(args, stdin):
    chart = charts.Chart(_polytope(args, stdin))
    f = parse_smooth(_text(args.func, stdin), len(chart.basis))
    region = strata_calculus.Region((as_fraction(args.radius),) * len(chart.basis))
    est = strata_calculus.seminorm_estimate(f, args.k, as_fraction(args.delta), chart, region,
                                            _grid(args))

    def approx(x):
        return Fraction(x).limit_denominator(10 ** 6)

    return {"seminorm": approx(est.value), "perI": {k: approx(v) for k, v in est.per_I.items()},
            "points": est.points}


HANDLERS = {
    "eval": cmd_eval, "tropicalize": cmd_tropicalize, "hypersurface": cmd_hypersurface,
    "balance": cmd_balance, "basis": cmd_basis, "relations": cmd_relations,
    "explode-ncd": cmd_explode_ncd, "explode-toric": cmd_explode_toric, "refine": cmd_refine,
    "fiber-product": cmd_fiber_product, "degenerate": cmd_degenerate, "fiber": cmd_fiber,
    "pants": cmd_pants, "strata-op": cmd_strata_op, "seminorm": cmd_seminorm,
}


def build_parser() -> argparse.ArgumentParser:
    p = _ArgumentParser(prog="tropex", description="Exact tropical and exploded geometry tools.")
    p.add_argument("--float", action="store_true", help="add decimal approximations")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_ArgumentParser)

    def poly_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("poly", help="polynomial, or - for stdin")
        s.add_argument("--dim", type=int, help="number of variables")
        return s

    s = poly_cmd("eval", "evaluate in the exploded semiring")
    s.add_argument("--at", required=True, help="point such as z1=1t^0,z2=-2t^1/2")
    s = poly_cmd("tropicalize", "tropical part, Newton polytope and subdivision")
    s.add_argument("--at", help="tropical point x1,x2,...")
    for name in ("hypersurface", "balance"):
        s = poly_cmd(name, "corner locus" if name == "hypersurface" else "balancing check")
        s.add_argument("--polytope", help="restrict to a polytope (JSON or @file)")
        if name == "hypersurface":
            s.add_argument("--svg", help="write a drawing to this file")
            s.add_argument("--viewport", help="xmin,ymin,xmax,ymax")
    for name in ("basis", "relations"):
        s = sub.add_parser(name, help=f"smooth monomial {name}")
        s.add_argument("--polytope", required=True)
    s = sub.add_parser("explode-ncd", help="dual intersection complex")
    s.add_argument("--config", required=True)
    s = sub.add_parser("explode-toric", help="tropical part of a toric variety")
    s.add_argument("--fan", help='{"rays": [...], "cones": [[i, j], ...]}')
    s.add_argument("--polytope", help="moment polytope: its normal fan, or a cross-check of --fan")
    s = sub.add_parser("refine", help="refine a complex by cell subdivisions")
    s.add_argument("--complex", required=True)
    s.add_argument("--subdivisions", required=True)
    s = sub.add_parser("fiber-product", help="tropical fiber product of two affine maps")
    s.add_argument("--f", required=True)
    s.add_argument("--g", required=True)
    for name in ("degenerate", "fiber", "pants"):
        s = sub.add_parser(name, help=f"degeneration family: {name}")
        s.add_argument("--family", help='{"S": [...], "coeffs": [...], "v": [...]}')
        s.add_argument("--simplex", type=int, help="use the lattice points of d times the simplex")
        s.add_argument("--n", type=int, default=2, help="simplex dimension")
        s.add_argument("--lift", choices=("standard", "zero"), default="standard")
        if name != "degenerate":
            s.add_argument("--w", default="1")
        if name == "fiber":
            s.add_argument("--svg")
            s.add_argument("--viewport")
    s = sub.add_parser("strata-op", help="stratum operators on a test function")
    s.add_argument("op", choices=("e", "delta", "weight", "bound"))
    s.add_argument("func", nargs="?", help="polynomial in z_i and zbar_i, or -")
    s.add_argument("--polytope", required=True)
    s.add_argument("--stratum", action="append", help="a point of the stratum, x1,x2,...")
    s.add_argument("--radius", default="1")
    s.add_argument("--grid", type=int)
    s = sub.add_parser("seminorm", help="estimate the C^{k,delta} seminorm")
    s.add_argument("func")
    s.add_argument("--polytope", required=True)
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--delta", default="1/2")
    s.add_argument("--radius", default="1")
    s.add_argument("--grid", type=int)
    return p


def _error_payload(exc: TropexError) -> dict:
    return {"error": {"type": type(exc).__name__, "message": str(exc), "exitCode": exc.exit_code}}


def run(command: str, args: list, stdin: str = "", floats: bool = False) -> CommandResult:
    """Run one command and capture its JSON payload and optional SVG.

    Errors are reported in the payload with the error class's exit code.
    """
    try:
        ns = build_parser().parse_args([command] + [a for a in args if a != "--float"])
        floats = floats or "--float" in args
        result = HANDLERS[ns.command](ns, stdin)
        payload, svg = result if isinstance(result, tuple) else (result, None)
        if svg is not None and getattr(ns, "svg", None):
            with open(ns.svg, "w", encoding="utf-8") as fh:
                fh.write(svg)
        return CommandResult(0, payload, svg, floats)
    except TropexError as exc:
        return CommandResult(exc.exit_code, _error_payload(exc), None, floats)


def main(argv: list | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    floats = "--float" in argv
    argv = [a for a in argv if a != "--float"]
    if not argv or argv[0] in ("-h", "--help") or argv[0] not in COMMANDS:
        try:
            build_parser().parse_args(argv)
        except InvalidInput as exc:
            sys.stdout.write(dumps(_error_payload(exc)))
            return exc.exit_code
        return 0
    needs_stdin = "-" in argv[1:]
    stdin = sys.stdin.read() if needs_stdin else ""
    result = run(argv[0], argv[1:], stdin, floats)
    sys.stdout.write(result.json)
    return result.status


if __name__ == "__main__":
    sys.exit(main())
