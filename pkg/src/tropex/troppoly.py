"""Exploded polynomials, their tropicalizations and corner loci.

An exploded polynomial ``sum c t^a z^alpha`` evaluates in the exploded
semiring. Its tropicalization is the convex piecewise-linear function
``x -> min(a + x.alpha)``, and the corner locus (the tropical hypersurface)
is where that minimum is attained at least twice. The corner locus is found
exactly by enumerating the faces of the domains of linearity

    R_i = {x : a_i + x.alpha_i <= a_j + x.alpha_j for all j},

labelling each face by the set of terms attaining the minimum on it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .charts import eval_monomial
from .errors import DimTooLarge, DuplicateExponentConflict, InvalidInput, UnsupportedDimension
from .lattice_affine import AffinePolytope, Polyhedron, convex_hull, saturated_basis
from .lattice_affine.lattice import ext_gcd_solution, integer_kernel
from .lattice_affine.linalg import dot, primitive, rank, solve, sub
from .lattice_affine.polytope import lattice_length
from .lattice_affine.complex import PolyhedralComplex
from .semiring import ExplodedValue, GaussianRational, as_fraction, exp_add, format_rational

MAX_DIM = 3


@dataclass(frozen=True)
class Term:
    """The monomial ``c t^a z^alpha``."""

    c: GaussianRational
    a: Fraction
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "c", GaussianRational.coerce(self.c))
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "alpha", tuple(int(x) for x in self.alpha))


class ExplodedPolynomial:
    """A finite sum of exploded monomials in ``m`` variables.

    Terms sharing an exponent vector are merged by adding coefficients when
    their ``t``-exponents agree; a merged coefficient of zero removes the term.

    Raises:
        DuplicateExponentConflict: two terms share ``alpha`` with different ``a``.
    """

    def __init__(self, m: int, terms: Iterable = ()):
        self.m = m
        merged: dict = {}
        for t in terms:
            if not isinstance(t, Term):
                t = Term(*t)
            if len(t.alpha) != m:
                raise InvalidInput(f"term exponent {t.alpha} does not have length {m}")
            if t.alpha in merged:
                prev = merged[t.alpha]
                if prev.a != t.a:
                    raise DuplicateExponentConflict(
                        f"exponent {t.alpha} appears with t-powers {format_rational(prev.a)} "
                        f"and {format_rational(t.a)}")
                merged[t.alpha] = Term(prev.c + t.c, t.a, t.alpha)
            else:
                merged[t.alpha] = t
        self.terms = tuple(sorted((t for t in merged.values() if not t.c.is_zero),
                                  key=lambda t: t.alpha))

    def __eq__(self, other):
        if not isinstance(other, ExplodedPolynomial):
            return NotImplemented
        return self.m == other.m and self.terms == other.terms

    def __hash__(self):
        return hash((self.m, self.terms))

    def __repr__(self):
        return f"ExplodedPolynomial(m={self.m}, terms={list(self.terms)})"

    def __len__(self):
        return len(self.terms)


def evaluate(f: ExplodedPolynomial, p) -> ExplodedValue:
    """Semiring sum of the terms of ``f`` evaluated at ``p``."""
    if not f.terms:
        raise InvalidInput("the empty polynomial has no value in the exploded semiring")
    return reduce(exp_add, (eval_monomial(p, (t.c, t.a, t.alpha)) for t in f.terms))


def in_zero_locus(f: ExplodedPolynomial, p) -> bool:
    """Whether ``f(p)`` has zero coefficient."""
    return evaluate(f, p).coeff.is_zero


@dataclass(frozen=True)
class TropicalPLFunction:
    """``x -> min over pieces of (a + x.alpha)``."""

    pieces: tuple

    def __call__(self, x) -> Fraction:
        return min(a + dot(alpha, x) for a, alpha in self.pieces)

    def argmin(self, x) -> frozenset:
        vals = [a + dot(alpha, x) for a, alpha in self.pieces]
        lo = min(vals)
        return frozenset(i for i, v in enumerate(vals) if v == lo)


def tropicalize(f: ExplodedPolynomial) -> TropicalPLFunction:
    return TropicalPLFunction(tuple((t.a, t.alpha) for t in f.terms))


def newton_polytope(f: ExplodedPolynomial) -> AffinePolytope:
    """Convex hull of the exponent vectors (possibly lower dimensional)."""
    if f.m > MAX_DIM:
        raise DimTooLarge(f"Newton polytopes are limited to dimension {MAX_DIM}, got {f.m}")
    if not f.terms:
        raise InvalidInput("the empty polynomial has no Newton polytope")
    return convex_hull([t.alpha for t in f.terms], f.m).polytope


@dataclass(frozen=True)
class WeightedCell:
    """A cell of a weighted complex.

    Attributes:
        poly: the cell as a closed polyhedron.
        weight: positive integer on top-dimensional cells, ``None`` otherwise.
        terms: exponent vectors of the terms attaining the minimum on the cell
            (empty when the complex did not come from a polynomial).
    """

    poly: Polyhedron
    weight: int | None = None
    terms: frozenset = frozenset()

    @property
    def dimension(self) -> int:
        return self.poly.dimension

    def key(self) -> tuple:
        return (self.poly.key(), self.weight)


@dataclass
class WeightedComplex:
    """A polyhedral complex in ``R^m`` with weights on its top cells.

    Attributes:
        ambient_dim: ``m``.
        cells: all cells, including lower-dimensional faces.
        top_dim: dimension of the weighted cells.
        ambient: the polytope the complex was computed in, or ``None`` for
            all of ``R^m``.
    """

    ambient_dim: int
    cells: list
    top_dim: int
    ambient: AffinePolytope | None = None

    @property
    def top_cells(self) -> list:
        return [c for c in self.cells if c.dimension == self.top_dim]

    @property
    def is_empty(self) -> bool:
        return not self.cells

    def cells_of_dim(self, d: int) -> list:
        return [c for c in self.cells if c.dimension == d]

    def key(self) -> frozenset:
        return frozenset(c.key() for c in self.cells)

    def same_as(self, other: "WeightedComplex") -> bool:
        """Equality of cell sets and weights, ignoring order and term labels."""
        return self.ambient_dim == other.ambient_dim and self.key() == other.key()

    @cached_property
    def polyhedral_complex(self) -> PolyhedralComplex:
        return PolyhedralComplex([c.poly for c in self.cells],
                                 labels=[c.weight for c in self.cells])

    @classmethod
    def from_top_cells(cls, ambient_dim: int, top: Sequence, ambient=None) -> "WeightedComplex":
        """Build from weighted top cells, adding all their faces."""
        top = list(top)
        if not top:
            return cls(ambient_dim, [], ambient_dim - 1, ambient)
        top_dim = max(c.dimension for c in top)
        seen = {}
        for c in top:
            for f in c.poly.faces():
                p = f.polyhedron
                if f.dimension == c.dimension:
                    seen[p.key()] = c
                else:
                    seen.setdefault(p.key(), WeightedCell(p))
        return cls(ambient_dim, sorted(seen.values(), key=cell_sort_key), top_dim, ambient)


def cell_sort_key(c: WeightedCell) -> tuple:
    """Lexicographic order on canonical vertex, ray and lineality lists."""
    p = c.poly
    return (p.dimension, [tuple(v) for v in p.vertices], p.rays, p.lineality,
            c.weight if c.weight is not None else 0)


def _domain_faces(pieces: Sequence, P: Polyhedron) -> dict:
    """Map each argmin label (a frozenset of piece indices) to its cell."""
    m = P.dim
    k = len(pieces)
    base = len(P.ineqs)
    cells = {}
    for i, (ai, alphai) in enumerate(pieces):
        others = [j for j in range(k) if j != i]
        ineqs = list(P.ineqs) + [
            (pieces[j][0] - ai, tuple(Fraction(x - y) for x, y in zip(pieces[j][1], alphai)))
            for j in others]
        R = Polyhedron(m, ineqs, P.eqs)
        if R.is_empty:
            continue
        for f in R.faces(allowed=range(base, base + len(others))):
            label = frozenset([i] + [others[t - base] for t in f.tight if t >= base])
            if label not in cells:
                cells[label] = f.polyhedron
    return cells


def _segment_length(points: Sequence) -> int:
    best = 0
    for p in points:
        for q in points:
            best = max(best, lattice_length(sub(p, q)))
    return best


def corner_locus(f: ExplodedPolynomial, P: AffinePolytope | None = None) -> WeightedComplex:
    """Where the minimum of the tropicalization is attained at least twice.

    Each codimension-one cell is weighted by the lattice length of its dual
    edge ``conv{alpha_t}`` over the terms ``t`` attaining the minimum there.

    Raises:
        DimTooLarge: more than 3 variables.
    """
    m = f.m
    if m > MAX_DIM:
        raise DimTooLarge(f"corner loci are limited to dimension {MAX_DIM}, got {m}")
    ambient = P.closure if P is not None else Polyhedron.whole_space(m)
    pieces = [(t.a, t.alpha) for t in f.terms]
    if len(pieces) < 2:
        return WeightedComplex(m, [], m - 1, P)
    cells = []
    for label, poly in _domain_faces(pieces, ambient).items():
        if len(label) < 2:
            continue
        alphas = [pieces[i][1] for i in label]
        weight = _segment_length(alphas) if poly.dimension == m - 1 else None
        cells.append(WeightedCell(poly, weight, frozenset(alphas)))
    cells.sort(key=cell_sort_key)
    return WeightedComplex(m, cells, m - 1, P)


def regular_subdivision(f: ExplodedPolynomial) -> list:
    """Subdivision of the Newton polytope induced by the lift ``alpha -> a``.

    Its cells are the sets ``conv{alpha_t}`` over the terms attaining the
    minimum on a cell of the domain decomposition; the maximal ones are the
    projections of the lower faces of ``conv{(alpha, a)}``.

    Raises:
        DimTooLarge: more than 3 variables.
    """
    m = f.m
    if m > MAX_DIM:
        raise DimTooLarge(f"regular subdivisions are limited to dimension {MAX_DIM}, got {m}")
    pieces = [(t.a, t.alpha) for t in f.terms]
    if not pieces:
        raise InvalidInput("the empty polynomial has no Newton polytope")
    top = newton_polytope(f).closure.dimension
    seen = {}
    for label in _domain_faces(pieces, Polyhedron.whole_space(m)):
        hull = convex_hull([pieces[i][1] for i in sorted(label)], m)
        if hull.polytope.closure.dimension == top:
            seen[hull.polytope.closure.key()] = hull.polytope
    return [seen[k] for k in sorted(seen, key=lambda k: (k[1], k[2]))]


@dataclass(frozen=True)
class BalanceReport:
    """Outcome of a balancing check.

    Attributes:
        ok: whether every interior ridge is balanced.
        point: a point on the first unbalanced ridge.
        residual: the weighted sum of primitive directions there.
    """

    ok: bool
    point: tuple | None = None
    residual: tuple | None = None

    def __bool__(self):
        return self.ok


def _directions(p: Polyhedron) -> list:
    vs = p.vertices
    dirs = [sub(v, vs[0]) for v in vs[1:]] + [tuple(Fraction(x) for x in r) for r in p.rays]
    dirs += [tuple(Fraction(x) for x in l) for l in p.lineality]
    return [primitive(d) for d in dirs if any(d)]


def primitive_outward(E: Polyhedron, F: Polyhedron) -> tuple:
    """Primitive integer vector generating ``lattice(F)/lattice(E)``, pointing into ``F``.

    ``E`` must be a facet of ``F``.
    """
    m = F.dim
    BF = saturated_basis(_directions(F), m)
    BE = saturated_basis(_directions(E), m) if _directions(E) else []
    cols = [tuple(Fraction(x) for x in b) for b in BF]
    A = [tuple(c[i] for c in cols) for i in range(m)]

    def coords(v):
        res = solve(A, [Fraction(x) for x in v], len(BF))
        if res is None:
            raise AssertionError("vector not in the span of the cell")
        return res[0]

    Y = [tuple(int(x) for x in coords(e)) for e in BE]
    s1 = len(BF)
    if Y:
        ker = integer_kernel(Y)
        phi = primitive(ker[0])
    else:
        phi = (1,)
    y = ext_gcd_solution(phi)
    u = tuple(sum(y[j] * BF[j][i] for j in range(s1)) for i in range(m))
    d = coords(sub(F.relint_point(), E.relint_point()))
    if dot(phi, d) < 0:
        u = tuple(-x for x in u)
    return u


def is_balanced(W: WeightedComplex) -> BalanceReport:
    """Check the balancing condition around every interior ridge.

    For curves, at every vertex the weighted primitive outgoing edge
    directions sum to zero. For hypersurfaces in dimension at most 3, around
    every codimension-two cell the weighted primitive normal vectors of the
    adjacent top cells sum into the span of that cell.

    Raises:
        UnsupportedDimension: the top cells are neither curves nor
            hypersurfaces of an ambient space of dimension at most 3.
    """
    m, top = W.ambient_dim, W.top_dim
    if W.is_empty:
        return BalanceReport(True)
    if not (top == 1 or (top == m - 1 and m <= 3)):
        raise UnsupportedDimension(f"cannot check balancing for {top}-cells in dimension {m}")
    ridges: dict = {}
    for c in W.top_cells:
        if c.weight is None:
            continue
        for f in c.poly.faces():
            if f.dimension == top - 1:
                e = f.polyhedron
                ridges.setdefault(e.key(), (e, []))[1].append(c)
    boundary = W.ambient.closure if W.ambient is not None else None
    for key in sorted(ridges, key=str):
        E, incident = ridges[key]
        q = E.relint_point()
        if boundary is not None and boundary.tight_at(q):
            continue
        total = [Fraction(0)] * m
        for c in incident:
            u = primitive_outward(E, c.poly)
            total = [t + c.weight * x for t, x in zip(total, u)]
        span = [tuple(Fraction(x) for x in d) for d in _directions(E)]
        if rank(span + [tuple(total)], m) != rank(span, m):
            return BalanceReport(False, q, tuple(total))
    return BalanceReport(True)
