"""Rational polyhedral cones, Hilbert bases and normal fans."""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Sequence

from ..errors import DimTooLarge, NotPointed
from .complex import PolyhedralComplex
from .lattice import IntMatrix, saturated_basis, smith_normal_form
from .linalg import inverse, solve_unique, transpose
from .polyhedron import Polyhedron
from .polytope import AffinePolytope

HILBERT_MAX_DIM = 4


class Cone:
    """A rational polyhedral cone, keeping generators and facet normals.

    Args:
        poly: a polyhedron whose only minimal face contains the origin.
    """

    def __init__(self, poly: Polyhedron):
        if poly.is_empty or any(b != 0 for b, _ in poly.ineqs + poly.eqs):
            raise ValueError("a cone must be cut out by homogeneous constraints")
        self.poly = poly

    @classmethod
    def from_generators(cls, generators: Sequence, dim: int, lineality: Sequence = ()) -> "Cone":
        return cls(Polyhedron.from_vrep(dim, [(0,) * dim], generators, lineality))

    @classmethod
    def from_inequalities(cls, normals: Sequence, dim: int, equalities: Sequence = ()) -> "Cone":
        """The cone ``{x : n.x >= 0 for each normal, e.x = 0 for each equality}``."""
        return cls(Polyhedron(dim, [(0, n) for n in normals], [(0, e) for e in equalities]))

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def generators(self) -> list:
        """Primitive extreme ray generators."""
        return self.poly.rays

    @property
    def lineality(self) -> list:
        return self.poly.lineality

    @cached_property
    def normals(self) -> list:
        """Inner facet normals of the irredundant description."""
        canon = self.poly.canonical
        return [n for _, n in canon.ineqs]

    @property
    def pointed(self) -> bool:
        return not self.poly.lineality

    def contains(self, x) -> bool:
        return self.poly.contains(x)


def _parallelepiped_points(gens: Sequence) -> list:
    """Nonzero lattice points of the half-open parallelepiped spanned by ``gens``."""
    r = len(gens)
    G = IntMatrix.from_columns(gens, r)
    U, D, _ = smith_normal_form(G)
    Uinv = inverse([tuple(Fraction(x) for x in row) for row in U])
    Ginv = inverse([tuple(Fraction(x) for x in row) for row in G])
    ds = [D[i][i] for i in range(r)]
    out = []
    for c in product(*[range(d) for d in ds]):
        x = [sum(Uinv[i][j] * c[j] for j in range(r)) for i in range(r)]
        lam = [sum(Ginv[i][j] * x[j] for j in range(r)) for i in range(r)]
        frac = [l - (l.numerator // l.denominator) for l in lam]
        p = tuple(int(sum(G[i][j] * frac[j] for j in range(r))) for i in range(r))
        if any(p):
            out.append(p)
    return out


def _pulling_triangulation(poly: Polyhedron) -> list:
    """Simplicial cones (as ray index tuples) triangulating a pointed cone."""
    faces = poly.faces()
    rays = poly.rays
    tight_r = [frozenset(i for i, (_, n) in enumerate(poly.ineqs)
                         if sum(a * b for a, b in zip(n, r)) == 0) for r in rays]

    def face_rays(f):
        return sorted(i for i, t in enumerate(tight_r) if f.tight <= t)

    def tri(f):
        ids = face_rays(f)
        if len(ids) == f.dimension:
            return [tuple(ids)]
        r0 = ids[0]
        out = []
        for g in faces:
            if g.dimension == f.dimension - 1 and f.tight < g.tight and not g.tight <= tight_r[r0]:
                out.extend((r0,) + s for s in tri(g))
        return out

    return tri(poly.top_face)


def hilbert_basis(C: Cone, max_dim: int = HILBERT_MAX_DIM) -> list:
    """The minimal generating set of the monoid ``C ∩ Z^d``.

    The cone is triangulated by pulling, the lattice points of each simplicial
    cone's fundamental parallelepiped are enumerated through a Smith normal
    form, and the union with the rays is reduced to its irreducible elements.

    Raises:
        NotPointed: the cone contains a line.
        DimTooLarge: the ambient dimension exceeds ``max_dim``.
    """
    if C.dim > max_dim:
        raise DimTooLarge(f"Hilbert bases are limited to dimension {max_dim}, got {C.dim}")
    if not C.pointed:
        raise NotPointed("the cone contains a line")
    rays = C.generators
    if not rays:
        return []
    basis = saturated_basis(rays, C.dim)
    r = len(basis)
    bt = transpose([tuple(Fraction(x) for x in b) for b in basis])

    def coords(v):
        return tuple(int(x) for x in solve_unique(bt, [Fraction(x) for x in v], r))

    local_rays = [coords(v) for v in rays]
    K = Polyhedron.from_vrep(r, [(0,) * r], local_rays)
    kr = K.rays
    candidates = set(kr)
    for simplex in _pulling_triangulation(K):
        candidates.update(_parallelepiped_points([kr[i] for i in simplex]))
    irreducible = []
    for c in candidates:
        if not any(h != c and K.contains(tuple(a - b for a, b in zip(c, h))) for h in candidates):
            irreducible.append(c)
    out = [tuple(sum(y[i] * basis[i][k] for i in range(r)) for k in range(C.dim)) for y in irreducible]
    return sorted(out)


def normal_fan(P: AffinePolytope) -> PolyhedralComplex:
    """The fan of outer normal cones of the faces of ``P``.

    The cone of a face is spanned by the outer normals of the facets
    containing it; vertices give the maximal cones. For unbounded ``P`` the
    cones cover only the directions along which ``x.u`` is bounded above.

    Raises:
        DimTooLarge: dimension above 3.
    """
    if P.dim > 3:
        raise DimTooLarge(f"normal fans are limited to dimension 3, got {P.dim}")
    canon = P.closure.canonical
    ineqs = canon.ineqs
    lin = [n for _, n in canon.eqs]
    cones = []
    for f in canon.faces():
        gens = [tuple(-x for x in ineqs[i][1]) for i in sorted(f.tight)]
        cones.append(Cone.from_generators(gens, P.dim, lineality=lin).poly)
    return PolyhedralComplex.from_maximal(cones)


def fan_rays(fan: PolyhedralComplex) -> list:
    """Primitive generators of the one-dimensional cones of a fan."""
    rays = set()
    for c in fan.cells:
        rays.update(c.rays)
    return sorted(rays)
