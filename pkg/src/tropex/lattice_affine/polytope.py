"""Integral affine polytopes with strict constraints, faces and strata."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from math import ceil, floor, gcd
from typing import Iterable, Sequence

from ..errors import DimTooLarge, EmptyInterior, InvalidInput, Unbounded
from ..semiring import as_fraction, format_rational
from .linalg import dot, primitive
from .polyhedron import Face, Polyhedron, is_face_of


@dataclass(frozen=True)
class Constraint:
    """The condition ``a + x.alpha >= 0`` (``> 0`` when strict)."""

    a: Fraction
    alpha: tuple
    strict: bool = False

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        alpha = tuple(self.alpha)
        if any(isinstance(x, bool) or int(x) != x for x in alpha):
            raise InvalidInput(f"constraint normal {alpha} is not integral")
        object.__setattr__(self, "alpha", tuple(int(x) for x in alpha))

    def value(self, x) -> Fraction:
        return self.a + dot(self.alpha, x)

    def holds(self, x) -> bool:
        v = self.value(x)
        return v > 0 if self.strict else v >= 0


def normalize_constraint(b, n) -> tuple:
    """Scale ``b + n.x >= 0`` so that the normal is a primitive integer vector."""
    n = tuple(Fraction(x) for x in n)
    if not any(n):
        return Fraction(b), n
    p = primitive(n)
    # p = n * s for a positive rational s
    i = next(k for k, x in enumerate(n) if x != 0)
    s = Fraction(p[i]) / n[i]
    return Fraction(b) * s, p


class AffinePolytope:
    """A rational polytope ``{x : a_i + x.alpha_i >= 0 (or > 0)}`` with integer normals.

    Args:
        dim: ambient dimension ``m``.
        constraints: :class:`Constraint` values or ``(a, alpha[, strict])``
            tuples.
        require_interior: check that the polytope has nonempty interior.
            Disabled for auxiliary lower-dimensional polytopes such as
            Newton polytopes of degenerate supports.

    Raises:
        EmptyInterior: ``require_interior`` is set and the interior is empty.
    """

    def __init__(self, dim: int, constraints: Iterable = (), require_interior: bool = True):
        cs = []
        for c in constraints:
            if not isinstance(c, Constraint):
                c = Constraint(*c)
            if len(c.alpha) != dim:
                raise InvalidInput(f"constraint normal {c.alpha} does not have length {dim}")
            cs.append(c)
        self.dim = dim
        self.constraints = tuple(cs)
        if require_interior and not self.has_interior():
            raise EmptyInterior("polytope has empty interior")

    def has_interior(self) -> bool:
        if self.closure.is_empty or self.closure.dimension < self.dim:
            return False
        return all(any(c.alpha) or c.a > 0 for c in self.constraints if c.strict)

    @cached_property
    def closure(self) -> Polyhedron:
        return Polyhedron(self.dim, [(c.a, c.alpha) for c in self.constraints])

    @classmethod
    def from_polyhedron(cls, poly: Polyhedron, require_interior: bool = True) -> "AffinePolytope":
        cs = [Constraint(*normalize_constraint(b, n)) for b, n in poly.ineqs]
        for b, n in poly.eqs:
            b1, n1 = normalize_constraint(b, n)
            cs.append(Constraint(b1, n1))
            cs.append(Constraint(-b1, tuple(-x for x in n1)))
        return cls(poly.dim, cs, require_interior=require_interior)

    @classmethod
    def whole_space(cls, dim: int) -> "AffinePolytope":
        return cls(dim, [])

    @classmethod
    def quadrant(cls, dim: int) -> "AffinePolytope":
        """``[0, inf)^dim``."""
        return cls(dim, [(0, tuple(int(i == j) for j in range(dim))) for i in range(dim)])

    @classmethod
    def box(cls, lows: Sequence, highs: Sequence) -> "AffinePolytope":
        dim = len(lows)
        cs = []
        for i, (lo, hi) in enumerate(zip(lows, highs)):
            e = tuple(int(i == j) for j in range(dim))
            cs.append((-as_fraction(lo), e))
            cs.append((as_fraction(hi), tuple(-x for x in e)))
        return cls(dim, cs)

    def contains(self, x) -> bool:
        return all(c.holds(x) for c in self.constraints)

    @property
    def strict_indices(self) -> frozenset:
        return frozenset(i for i, c in enumerate(self.constraints) if c.strict)

    @property
    def vertices(self) -> list:
        return self.closure.vertices

    @property
    def rays(self) -> list:
        return self.closure.rays

    @property
    def lineality(self) -> list:
        return self.closure.lineality

    @property
    def is_bounded(self) -> bool:
        return self.closure.is_bounded

    def is_complete(self) -> bool:
        """Whether the polytope equals its closure."""
        for c in self.constraints:
            if not c.strict:
                continue
            try:
                value, _ = self.closure.minimize(c.alpha)
            except Unbounded:
                return False
            if c.a + value <= 0:
                return False
        return True

    def face_of(self, alpha) -> Face:
        """The face of the closure on which ``x.alpha`` is minimal.

        Raises:
            Unbounded: ``x.alpha`` is unbounded below.
        """
        if len(alpha) != self.dim:
            raise InvalidInput(f"functional {alpha} does not have length {self.dim}")
        return self.closure.minimize(alpha)[1]

    def faces(self) -> list:
        return self.closure.faces()

    @cached_property
    def strata(self) -> list:
        """Relative interiors of faces not lying on a strict constraint."""
        strict = self.strict_indices
        out = []
        for f in self.closure.faces():
            if f.tight & strict:
                continue
            out.append(Stratum(self, f.tight, f.dimension, f.relint_point(), f))
        out.sort(key=lambda s: (s.dimension, sorted(s.tight)))
        return out

    def stratum_of(self, x) -> "Stratum":
        if not self.contains(x):
            raise ValueError(f"{x} is not in the polytope")
        t = self.closure.tight_at(x)
        for s in self.strata:
            if s.tight == t:
                return s
        raise AssertionError("point has no stratum")

    def join(self, s1: "Stratum", s2: "Stratum") -> "Stratum":
        """The smallest stratum whose closure contains both strata."""
        f = self.closure.face(s1.tight & s2.tight)
        for s in self.strata:
            if s.tight == f.tight:
                return s
        raise AssertionError("join is not a stratum")

    @cached_property
    def facets(self) -> list:
        """Irredundant constraints of the closure as ``(a, alpha)`` pairs."""
        canon = self.closure.canonical
        out = [normalize_constraint(b, n) for b, n in canon.ineqs]
        for b, n in canon.eqs:
            b1, n1 = normalize_constraint(b, n)
            out.append((b1, n1))
            out.append((-b1, tuple(-x for x in n1)))
        return [(Fraction(a), tuple(int(x) for x in n)) for a, n in out]

    def key(self) -> tuple:
        return (self.closure.key(),
                tuple(sorted((c.a, c.alpha) for c in self.constraints if c.strict)))

    def __eq__(self, other):
        if not isinstance(other, AffinePolytope):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "constraints": [
                {"a": format_rational(c.a), "alpha": list(c.alpha), "strict": c.strict}
                for c in self.constraints
            ],
        }

    @classmethod
    def from_json(cls, data: dict, require_interior: bool = True) -> "AffinePolytope":
        try:
            dim = int(data["dim"])
            cs = [Constraint(as_fraction(c["a"]), tuple(c["alpha"]), bool(c.get("strict", False)))
                  for c in data.get("constraints", [])]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise InvalidInput(f"malformed polytope: {exc}") from exc
        return cls(dim, cs, require_interior=require_interior)

    def __repr__(self):
        parts = []
        for c in self.constraints:
            parts.append(f"{format_rational(c.a)} + x.{c.alpha} {'>' if c.strict else '>='} 0")
        return f"AffinePolytope(dim={self.dim}, [{'; '.join(parts)}])"


@dataclass(frozen=True)
class Stratum:
    """The relative interior of a face of a polytope.

    Attributes:
        tight: indices of the polytope constraints that vanish on the stratum.
        dimension: dimension of the stratum.
        point: a rational point of the stratum.
    """

    polytope: AffinePolytope = field(repr=False, compare=False)
    tight: frozenset
    dimension: int
    point: tuple = field(compare=False)
    face: Face = field(repr=False, compare=False)

    def contains(self, x) -> bool:
        return self.polytope.contains(x) and self.polytope.closure.tight_at(x) == self.tight

    @property
    def label(self) -> str:
        return "{" + ",".join(str(i) for i in sorted(self.tight)) + "}"


@dataclass(frozen=True)
class HullResult:
    """A convex hull: the polytope, its facet constraints and vertices."""

    polytope: AffinePolytope
    facets: list
    vertices: list


def convex_hull(points: Sequence, dim: int | None = None) -> HullResult:
    """Exact convex hull of rational points in dimension at most 3.

    The polytope may be lower dimensional, in which case its equalities are
    encoded as pairs of opposite inequalities.

    Raises:
        DimTooLarge: ambient dimension above 3.
    """
    pts = [tuple(as_fraction(x) for x in p) for p in points]
    if not pts:
        raise InvalidInput("convex hull of no points")
    dim = len(pts[0]) if dim is None else dim
    if dim > 3:
        raise DimTooLarge(f"convex hulls are limited to dimension 3, got {dim}")
    poly = Polyhedron.from_vrep(dim, pts)
    ap = AffinePolytope.from_polyhedron(poly, require_interior=False)
    return HullResult(ap, ap.facets, poly.vertices)


@dataclass(frozen=True)
class SubdivisionReport:
    """Outcome of a subdivision check; ``message`` names the first violation."""

    ok: bool
    message: str = ""
    pieces: tuple = ()

    def __bool__(self):
        return self.ok


def validate_subdivision(P: AffinePolytope, pieces: Sequence[AffinePolytope]) -> SubdivisionReport:
    """Check that closed pieces cover ``P`` and meet along common faces."""
    if not pieces:
        return SubdivisionReport(False, "no pieces given")
    target = P.closure
    for i, A in enumerate(pieces):
        if A.strict_indices:
            return SubdivisionReport(False, f"piece {i} is not closed", (i,))
        if A.closure.is_empty or A.closure.dimension != P.dim:
            return SubdivisionReport(False, f"piece {i} is not full dimensional", (i,))
        if not target.contains_polyhedron(A.closure):
            return SubdivisionReport(False, f"piece {i} is not contained in the polytope", (i,))
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            A, B = pieces[i].closure, pieces[j].closure
            Q = A.intersection(B)
            if Q.is_empty:
                continue
            if not is_face_of(Q, A) or not is_face_of(Q, B):
                return SubdivisionReport(
                    False, f"pieces {i} and {j} intersect in a set that is not a face of both",
                    (i, j))
    for i, A in enumerate(pieces):
        for f in A.closure.faces():
            if f.dimension != P.dim - 1:
                continue
            q = f.relint_point()
            if target.tight_at(q):
                continue
            if not any(B.closure.contains(q) for j, B in enumerate(pieces) if j != i):
                return SubdivisionReport(
                    False, f"a facet of piece {i} through {[format_rational(x) for x in q]} "
                           "is interior to the polytope but borders no other piece", (i,))
    return SubdivisionReport(True)


def lattice_points(poly: Polyhedron) -> list:
    """Integer points of a bounded polyhedron, by scanning its bounding box."""
    if poly.is_empty:
        return []
    if not poly.is_bounded:
        raise Unbounded("lattice points of an unbounded polyhedron")
    vs = poly.vertices
    ranges = [range(ceil(min(v[i] for v in vs)), floor(max(v[i] for v in vs)) + 1)
              for i in range(poly.dim)]
    return [p for p in product(*ranges) if poly.contains(p)]


def lattice_length(u) -> int:
    """Number of lattice steps along an integer vector."""
    g = 0
    for x in u:
        g = gcd(g, int(x))
    return g
