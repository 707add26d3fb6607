"""Combinatorial constructions on tropical parts.

* dual intersection complexes of normal crossing data and toric fans,
* refinements by subdivision,
* fiber products of integral affine maps with their lattice multiplicity,
* degeneration families of hypersurfaces given by a convex unimodular lift
  of a Newton polytope, and the pair-of-pants census of their fibers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Mapping, Sequence

from .errors import (
    IncompatibleOnSharedFace, InvalidConfiguration, InvalidInput, InvalidSubdivision,
    MissingLatticePoint, NotAFan, NotConvexLift, NotTransverse, NotUnimodular,
)
from .lattice_affine import (
    AffinePolytope, IntMatrix, PolyhedralComplex, Polyhedron, convex_hull, is_face_of,
    is_saturated, lattice_index, lattice_points, normal_fan, validate_subdivision,
)
from .lattice_affine.complex import Incidence
from .lattice_affine.lattice import int_rank
from .lattice_affine.linalg import det, sub
from .semiring import GaussianRational, as_fraction
from .troppoly import ExplodedPolynomial, WeightedComplex, _domain_faces, corner_locus


# Normal crossing data ---------------------------------------------------------------------

@dataclass(frozen=True)
class NCStratum:
    """Connected components of an intersection of divisors inside one component."""

    divisors: frozenset
    component: str
    count: int = 1


@dataclass(frozen=True)
class NCConfiguration:
    """Combinatorial shadow of a manifold with normal crossing divisors.

    Attributes:
        components: names of the connected components.
        divisors: names of the divisors.
        strata: every nonempty intersection pattern with its number of
            connected components; the empty pattern stands for the
            component itself.
    """

    components: tuple
    divisors: tuple
    strata: tuple

    @classmethod
    def from_json(cls, data: Mapping) -> "NCConfiguration":
        try:
            strata = tuple(NCStratum(frozenset(s["divisors"]), s["component"], int(s.get("count", 1)))
                           for s in data["strata"])
            return cls(tuple(data["components"]), tuple(data["divisors"]), strata)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidInput(f"malformed configuration: {exc}") from exc


def validate_configuration(cfg: NCConfiguration) -> None:
    """Check subset closure of the stratum list.

    Raises:
        InvalidConfiguration: naming the first violation.
    """
    comps, divs = set(cfg.components), set(cfg.divisors)
    listed = {}
    for s in cfg.strata:
        if s.component not in comps:
            raise InvalidConfiguration(f"unknown component {s.component!r}")
        if not s.divisors <= divs:
            raise InvalidConfiguration(f"unknown divisors {sorted(s.divisors - divs)}")
        if s.count < 1:
            raise InvalidConfiguration(f"stratum {sorted(s.divisors)} has count {s.count}")
        key = (s.divisors, s.component)
        if key in listed:
            raise InvalidConfiguration(f"stratum {sorted(s.divisors)} of {s.component!r} listed twice")
        listed[key] = s
    for c in cfg.components:
        empty = listed.get((frozenset(), c))
        if empty is None or empty.count != 1:
            raise InvalidConfiguration(f"component {c!r} needs exactly one empty stratum")
    for (ds, c) in sorted(listed, key=lambda k: (len(k[0]), sorted(k[0]), k[1])):
        for k in range(1, len(ds)):
            for sub_ in combinations(sorted(ds), k):
                if (frozenset(sub_), c) not in listed:
                    raise InvalidConfiguration(
                        f"subset {list(sub_)} of {sorted(ds)} in {c!r} is not listed")


def _quadrant(k: int) -> Polyhedron:
    return Polyhedron(k, [(0, tuple(int(i == j) for j in range(k))) for i in range(k)])


def explode_ncd(cfg: NCConfiguration) -> PolyhedralComplex:
    """Dual intersection complex: a quadrant ``[0, inf)^k`` per component of a k-fold intersection.

    Coordinates of each quadrant are indexed by the sorted divisor names; a
    smaller intersection pattern embeds as a coordinate plane.

    Raises:
        InvalidConfiguration: subset closure fails.
    """
    validate_configuration(cfg)
    entries = sorted(cfg.strata, key=lambda s: (s.component, len(s.divisors), sorted(s.divisors)))
    cells, labels, ids = [], [], []
    for s in entries:
        for copy in range(s.count):
            cells.append(_quadrant(len(s.divisors)))
            labels.append({"divisors": sorted(s.divisors), "component": s.component, "copy": copy})
            ids.append(s)
    incidences = []
    for i, a in enumerate(ids):
        for j, b in enumerate(ids):
            if a.component == b.component and a.divisors < b.divisors:
                da, db = sorted(a.divisors), sorted(b.divisors)
                matrix = tuple(tuple(int(db[r] == da[c]) for c in range(len(da)))
                               for r in range(len(db)))
                incidences.append(Incidence(i, j, matrix, (0,) * len(db)))
    return PolyhedralComplex(cells, incidences, labels)


# Toric fans ------------------------------------------------------------------------------

def fan_from_cones(rays: Sequence, cones: Sequence, dim: int) -> PolyhedralComplex:
    """Fan generated by the listed cones (each a list of ray indices) and their faces."""
    cells = []
    for cone in cones:
        gens = [rays[i] for i in cone]
        cells.append(Polyhedron.from_vrep(dim, [(0,) * dim], gens))
    return PolyhedralComplex.from_maximal(cells)


def validate_fan(fan: PolyhedralComplex) -> None:
    """Check that cells are cones, closed under faces, meeting in common faces.

    Raises:
        NotAFan: naming the first violation.
    """
    keys = {c.key() for c in fan.cells}
    for i, c in enumerate(fan.cells):
        if c.is_empty or any(b != 0 for b, _ in c.ineqs + c.eqs):
            raise NotAFan(f"cell {i} is not a cone with apex at the origin")
        if c.lineality:
            raise NotAFan(f"cell {i} is not pointed")
        for f in c.faces():
            if f.polyhedron.key() not in keys:
                raise NotAFan(f"a face of cell {i} is missing from the fan")
    for i, a in enumerate(fan.cells):
        for j in range(i + 1, len(fan.cells)):
            b = fan.cells[j]
            q = a.intersection(b)
            if not is_face_of(q, a) or not is_face_of(q, b):
                raise NotAFan(f"cells {i} and {j} overlap in a set that is not a face of both")


def explode_toric(fan: PolyhedralComplex, polytope: AffinePolytope | None = None) -> PolyhedralComplex:
    """The tropical part of a toric manifold: its fan, validated.

    Args:
        fan: the fan, as a complex of cones.
        polytope: optional moment polytope whose normal fan must equal ``fan``.

    Raises:
        NotAFan: the input is not a fan or does not match the polytope.
    """
    validate_fan(fan)
    if polytope is not None:
        expected = normal_fan(polytope)
        if {c.key() for c in expected.cells} != {c.key() for c in fan.cells}:
            raise NotAFan("the fan is not the normal fan of the given polytope")
    return fan


# Refinement --------------------------------------------------------------------------------

def _as_poly(p) -> Polyhedron:
    return p.closure if isinstance(p, AffinePolytope) else p


def _induced(face: Polyhedron, pieces: Sequence[Polyhedron]) -> frozenset:
    d = face.dimension
    out = set()
    for p in pieces:
        q = p.intersection(face)
        if not q.is_empty and q.dimension == d:
            out.add(q.key())
    return frozenset(out)


def refine(complex_: PolyhedralComplex, subdivisions: Mapping[int, Sequence]) -> PolyhedralComplex:
    """Replace maximal cells by subdivisions and return the resulting complex.

    Args:
        complex_: an embedded complex.
        subdivisions: maps indices of full-dimensional maximal cells to their
            pieces (:class:`Polyhedron` or :class:`AffinePolytope`).

    Raises:
        InvalidSubdivision: some piece list does not subdivide its cell.
        IncompatibleOnSharedFace: two cells restrict differently to a shared face.
    """
    covered = {inc.face for inc in complex_.incidences}
    maximal_ids = [i for i in range(len(complex_.cells)) if i not in covered]
    pieces_of = {}
    for i, plist in subdivisions.items():
        if i not in maximal_ids:
            raise InvalidSubdivision(f"cell {i} is not a maximal cell")
        cell = complex_.cells[i]
        if cell.dimension != cell.dim:
            raise InvalidSubdivision(f"cell {i} is not full dimensional")
        plist = [_as_poly(p) for p in plist]
        report = validate_subdivision(AffinePolytope.from_polyhedron(cell),
                                      [AffinePolytope.from_polyhedron(p) for p in plist])
        if not report:
            raise InvalidSubdivision(f"cell {i}: {report.message}")
        pieces_of[i] = plist
    for a, b in combinations(maximal_ids, 2):
        if a not in pieces_of and b not in pieces_of:
            continue
        A, B = complex_.cells[a], complex_.cells[b]
        shared = A.intersection(B)
        if shared.is_empty or shared.dimension <= 0:
            continue
        ia = _induced(shared, pieces_of.get(a, [A]))
        ib = _induced(shared, pieces_of.get(b, [B]))
        if ia != ib:
            raise IncompatibleOnSharedFace(f"cells {a} and {b} are subdivided differently "
                                           "along their common face")
    maximal = []
    for i in maximal_ids:
        maximal.extend(pieces_of.get(i, [complex_.cells[i]]))
    return PolyhedralComplex.from_maximal(maximal)


# Fiber products ----------------------------------------------------------------------------

@dataclass(frozen=True)
class AffineMap:
    """An integral affine map ``x -> matrix @ x + offset`` on a polytope.

    Attributes:
        matrix: the ``k x p`` integer linear part.
        offset: a rational vector of length ``k``.
        domain: the domain polytope in ``R^p``; ``None`` means all of ``R^p``.
    """

    matrix: IntMatrix
    offset: tuple
    domain: AffinePolytope | None = None

    def __post_init__(self):
        object.__setattr__(self, "offset", tuple(as_fraction(x) for x in self.offset))

    @classmethod
    def linear(cls, rows, source_dim: int, domain=None) -> "AffineMap":
        M = IntMatrix(rows, ncols=source_dim)
        return cls(M, (0,) * M.nrows, domain)

    @property
    def source_dim(self) -> int:
        return self.matrix.ncols

    @property
    def target_dim(self) -> int:
        return len(self.offset)

    def __call__(self, x) -> tuple:
        return tuple(sum(a * Fraction(b) for a, b in zip(row, x)) + o
                     for row, o in zip(self.matrix, self.offset))


@dataclass(frozen=True)
class FiberProduct:
    """Tropical fiber product ``{(p, q) : f(p) = g(q)}`` with its lattice data.

    Attributes:
        polytope: the fiber product inside ``R^(p+q)``.
        multiplicity: number of components lying over each point, the index
            of the joint image lattice.
        z_transverse: whether the joint image lattice is saturated.
        dimension: ``dim P + dim Q - k``.
    """

    polytope: Polyhedron
    multiplicity: int
    z_transverse: bool
    dimension: int


def tropical_fiber_product(f: AffineMap, g: AffineMap, f_lattice: IntMatrix | None = None,
                           g_lattice: IntMatrix | None = None) -> FiberProduct:
    """Fiber product of two integral affine maps into ``R^k``.

    Args:
        f, g: the maps.
        f_lattice, g_lattice: integral tangent maps; default to the linear
            parts of ``f`` and ``g``.

    Raises:
        NotTransverse: the images of the linear parts do not span ``R^k``.
    """
    k = f.target_dim
    if g.target_dim != k:
        raise InvalidInput("maps have different targets")
    Lf = f_lattice if f_lattice is not None else f.matrix
    Lg = g_lattice if g_lattice is not None else g.matrix
    p, q = f.source_dim, g.source_dim
    joint = IntMatrix([tuple(Lf[i]) + tuple(-x for x in Lg[i]) for i in range(k)], ncols=p + q)
    if k and int_rank(joint) < k:
        raise NotTransverse("linear parts do not span the target")
    ineqs = []
    if f.domain is not None:
        ineqs += [(c.a, tuple(c.alpha) + (0,) * q) for c in f.domain.constraints]
    if g.domain is not None:
        ineqs += [(c.a, (0,) * p + tuple(c.alpha)) for c in g.domain.constraints]
    eqs = [(f.offset[i] - g.offset[i], tuple(f.matrix[i]) + tuple(-x for x in g.matrix[i]))
           for i in range(k)]
    poly = Polyhedron(p + q, ineqs, eqs)
    if k:
        multiplicity = lattice_index(joint.transpose())
        saturated = is_saturated(joint)
    else:
        multiplicity, saturated = 1, True
    return FiberProduct(poly, multiplicity, saturated, poly.dimension)


# Degeneration families ---------------------------------------------------------------------

@dataclass(frozen=True)
class DegenerationFamily:
    """A hypersurface family ``sum c_alpha t^(w v(alpha)) z^alpha`` over ``w >= 0``.

    Attributes:
        S: exponent vectors.
        coeffs: nonzero Gaussian rational coefficients, one per exponent.
        v: integer lift, one value per exponent.
        cells: maximal cells of the lower-hull triangulation, as tuples of
            exponent vectors.
    """

    S: tuple
    coeffs: tuple
    v: tuple
    cells: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.S[0])

    def polynomial(self, w=0) -> ExplodedPolynomial:
        w = as_fraction(w)
        return ExplodedPolynomial(self.n, [(c, w * vi, a) for a, c, vi in zip(self.S, self.coeffs, self.v)])


def simplex_points(d: int, n: int = 2) -> list:
    """Lattice points of the dilated standard simplex ``d * Delta_n``."""
    return [p for p in product(range(d + 1), repeat=n) if sum(p) <= d]


def standard_lift(points: Sequence) -> list:
    """The convex lift ``v(alpha) = sum alpha_i^2 + sum_{i<j} alpha_i alpha_j``.

    In one and two variables its lower hull on ``d * Delta_n`` is the
    unimodular triangulation cut out by the lines ``alpha_i = const`` and
    ``alpha_1 + alpha_2 = const``.
    """
    out = []
    for p in points:
        s = sum(x * x for x in p)
        s += sum(p[i] * p[j] for i in range(len(p)) for j in range(i + 1, len(p)))
        out.append(s)
    return out


def make_family(S: Sequence, coeffs: Sequence | None = None, v: Sequence | None = None) -> DegenerationFamily:
    """Validate a degeneration family.

    Raises:
        MissingLatticePoint: ``S`` omits a lattice point of its hull.
        NotConvexLift: some ``(alpha, v(alpha))`` lies above the lower hull.
        NotUnimodular: some lower face is not a unimodular simplex.
    """
    S = [tuple(int(x) for x in a) for a in S]
    if not S:
        raise InvalidInput("empty exponent set")
    if len(set(S)) != len(S):
        raise InvalidInput("repeated exponent vector")
    n = len(S[0])
    coeffs = [GaussianRational(1)] * len(S) if coeffs is None else [GaussianRational.coerce(c) for c in coeffs]
    v = [0] * len(S) if v is None else [int(x) for x in v]
    if len(coeffs) != len(S) or len(v) != len(S):
        raise InvalidInput("S, coeffs and v must have equal lengths")
    if any(c.is_zero for c in coeffs):
        raise InvalidInput("coefficients must be nonzero")
    hull = convex_hull(S, n)
    present = set(S)
    for p in sorted(lattice_points(hull.polytope.closure)):
        if p not in present:
            raise MissingLatticePoint(f"lattice point {list(p)} of the hull is missing")
    if hull.polytope.closure.dimension != n:
        raise InvalidInput("exponent set is not full dimensional")
    pieces = [(Fraction(vi), a) for a, vi in zip(S, v)]
    labels = _domain_faces(pieces, Polyhedron.whole_space(n))
    used = set().union(*labels) if labels else set()
    for i, a in enumerate(S):
        if i not in used:
            raise NotConvexLift(f"lift value {v[i]} at {list(a)} lies above the lower hull")
    cells = []
    for label in labels:
        pts = [S[i] for i in sorted(label)]
        if convex_hull(pts, n).polytope.closure.dimension != n:
            continue
        if len(pts) != n + 1 or abs(det([sub(p, pts[0]) for p in pts[1:]])) != 1:
            raise NotUnimodular(f"lower face over {[list(p) for p in pts]} is not a unimodular simplex")
        cells.append(tuple(pts))
    return DegenerationFamily(tuple(S), tuple(coeffs), tuple(v), tuple(sorted(cells)))


def family_fiber(fam: DegenerationFamily, w) -> WeightedComplex:
    """Corner locus of ``min(w v(alpha) + x.alpha)`` over the exponents."""
    w = as_fraction(w)
    if w < 0:
        raise InvalidInput("w must be nonnegative")
    return corner_locus(fam.polynomial(w))


@dataclass(frozen=True)
class PantsCensus:
    """Cell counts of a positive-time fiber.

    Attributes:
        vertices: 0-cells, one per maximal simplex of the triangulation.
        edges: bounded 1-cells.
        rays: unbounded 1-cells.
        pants: number of maximal simplices of the triangulation.
    """

    vertices: int
    edges: int
    rays: int
    pants: int


def pants_census(fam: DegenerationFamily, w=1) -> PantsCensus:
    """Count the cells of the fiber at ``w > 0``."""
    w = as_fraction(w)
    if w <= 0:
        raise InvalidInput("the census needs w > 0")
    fiber = family_fiber(fam, w)
    ones = fiber.cells_of_dim(1)
    bounded = sum(1 for c in ones if c.poly.is_bounded)
    return PantsCensus(len(fiber.cells_of_dim(0)), bounded, len(ones) - bounded, len(fam.cells))
