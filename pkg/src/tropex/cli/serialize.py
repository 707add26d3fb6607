"""Canonical JSON encoding.

Payloads are built from plain containers holding ``Fraction`` and
:class:`GaussianRational` values; :func:`encode` renders those as exact
strings (``"p/q"``, ``"a+bi"``) and optionally adds a ``<key>Float`` sibling
with decimal approximations. Keys are sorted on output, so equal inputs give
byte-identical documents.
"""

from __future__ import annotations

import json
from fractions import Fraction

from ..errors import InvalidInput
from ..lattice_affine import AffinePolytope, PolyhedralComplex, Polyhedron
from ..semiring import GaussianRational, as_fraction, format_rational
from ..troppoly import WeightedComplex


def _exact(value):
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, GaussianRational):
        return str(value)
    return value


def _approx(value):
    if isinstance(value, Fraction):
        return float(value)
    if isinstance(value, GaussianRational):
        return float(value.re) if value.is_real else [float(value.re), float(value.im)]
    if isinstance(value, (list, tuple)):
        return [_approx(v) for v in value]
    return value


def _has_exact(value) -> bool:
    """Whether ``value`` is an exact number or a (nested) list of plain values containing one."""
    if isinstance(value, (Fraction, GaussianRational)):
        return True
    if isinstance(value, (list, tuple)):
        return all(not isinstance(v, dict) for v in value) and any(_has_exact(v) for v in value)
    return False


def encode(payload, floats: bool = False):
    """Render exact numbers as strings, adding ``<key>Float`` siblings when ``floats``."""
    if isinstance(payload, dict):
        out = {}
        for k, v in payload.items():
            out[k] = encode(v, floats)
            if floats and _has_exact(v):
                out[f"{k}Float"] = _approx(v)
        return out
    if isinstance(payload, (list, tuple)):
        return [encode(x, floats) for x in payload]
    return _exact(payload)


def dumps(payload, floats: bool = False) -> str:
    return json.dumps(encode(payload, floats), sort_keys=True, indent=2) + "\n"


def polyhedron_payload(p: Polyhedron) -> dict:
    return {
        "dimension": p.dimension,
        "vertices": [list(v) for v in p.vertices],
        "rays": [list(r) for r in p.rays],
        "lineality": [list(l) for l in p.lineality],
    }


def polytope_from_payload(data, dim: int | None = None) -> Polyhedron:
    """A closed polyhedron from ``{"dim", "constraints"}`` or ``{"vertices", "rays", "lineality"}``."""
    if not isinstance(data, dict):
        raise InvalidInput("a cell must be a JSON object")
    if "constraints" in data:
        return AffinePolytope.from_json(data, require_interior=False).closure
    try:
        verts = [tuple(as_fraction(x) for x in v) for v in data["vertices"]]
        rays = [tuple(as_fraction(x) for x in r) for r in data.get("rays", [])]
        lin = [tuple(as_fraction(x) for x in l) for l in data.get("lineality", [])]
        d = int(data.get("dim", dim if dim is not None else len(verts[0])))
    except (KeyError, IndexError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise InvalidInput(f"malformed cell: {exc}") from exc
    return Polyhedron.from_vrep(d, verts, rays, lin)


def complex_payload(cx: PolyhedralComplex) -> dict:
    cells = []
    for p, label in zip(cx.cells, cx.labels):
        entry = polyhedron_payload(p)
        if label is not None:
            entry["label"] = label
        cells.append(entry)
    return {
        "dimension": cx.dimension,
        "cells": cells,
        "incidences": sorted([inc.face, inc.cell] for inc in cx.incidences),
    }


def weighted_payload(W: WeightedComplex) -> dict:
    cells = []
    for c in W.cells:
        entry = polyhedron_payload(c.poly)
        if c.weight is not None:
            entry["weight"] = c.weight
        cells.append(entry)
    rays = sorted({tuple(r) for c in W.cells_of_dim(1) for r in c.poly.rays
                   if not c.poly.lineality})
    return {
        "ambientDim": W.ambient_dim,
        "topDim": W.top_dim,
        "cells": cells,
        "counts": {str(d): len(W.cells_of_dim(d)) for d in range(W.ambient_dim + 1)
                   if W.cells_of_dim(d)},
        "rays": [list(r) for r in rays],
    }
