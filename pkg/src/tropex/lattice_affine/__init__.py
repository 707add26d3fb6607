"""Integer lattices and exact rational polyhedral geometry."""

from .complex import Incidence, PolyhedralComplex
from .cones import Cone, fan_rays, hilbert_basis, normal_fan
from .lattice import (
    IntMatrix, hermite_rows, integer_kernel, invariant_factors, is_saturated, lattice_index,
    saturated_basis, smith_normal_form,
)
from .polyhedron import Face, Polyhedron, is_face_of
from .polytope import (
    AffinePolytope, Constraint, HullResult, Stratum, SubdivisionReport, convex_hull,
    lattice_length, lattice_points, validate_subdivision,
)


def face_of(P: AffinePolytope, alpha) -> Face:
    """The face of ``P`` on which ``x.alpha`` is minimal."""
    return P.face_of(alpha)


def strata_of(P: AffinePolytope) -> list:
    """Strata of ``P``, one per face not lying on a strict constraint."""
    return P.strata


def is_complete(P: AffinePolytope) -> bool:
    """Whether ``P`` equals its closure."""
    return P.is_complete()


__all__ = [
    "AffinePolytope", "Cone", "Constraint", "Face", "HullResult", "Incidence", "IntMatrix",
    "PolyhedralComplex", "Polyhedron", "Stratum", "SubdivisionReport", "convex_hull", "face_of",
    "fan_rays", "hermite_rows", "hilbert_basis", "integer_kernel", "invariant_factors",
    "is_complete", "is_face_of", "is_saturated", "lattice_index", "lattice_length",
    "lattice_points", "normal_fan", "saturated_basis", "smith_normal_form", "strata_of",
    "validate_subdivision",
]
