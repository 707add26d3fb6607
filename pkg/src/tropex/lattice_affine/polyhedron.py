"""Exact rational polyhedra in low dimension.

A :class:`Polyhedron` is the closed set ``{x : b + n.x >= 0, b' + n'.x = 0}``.
Its vertex/ray/lineality description is computed exactly by brute force:
vertices are the feasible solutions of full-rank subsystems of tight
constraints, rays are the one-dimensional solutions of corank-one
subsystems. The reverse conversion dualizes the homogenized cone. This is
exponential in the number of constraints but trivial at the sizes used here,
and it needs no linear programming.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from ..errors import Unbounded
from .linalg import dot, nullspace, primitive, rank, rref, solve, sub


def _constraint(b, n) -> tuple:
    return (Fraction(b), tuple(Fraction(x) for x in n))


def hrep_to_vrep(dim: int, ineqs: Sequence, eqs: Sequence = ()) -> tuple | None:
    """Vertices, extreme rays and a lineality basis of an H-described polyhedron.

    Args:
        dim: ambient dimension.
        ineqs: pairs ``(b, n)`` meaning ``b + n.x >= 0``.
        eqs: pairs ``(b, n)`` meaning ``b + n.x = 0``.

    Returns:
        ``(vertices, rays, lineality)`` with vertices in the orthogonal
        complement of the lineality space and rays primitive integer
        vectors, or ``None`` when the polyhedron is empty.
    """
    normals = [n for _, n in ineqs] + [n for _, n in eqs]
    lineality = nullspace(normals, dim) if normals else nullspace([], dim)
    lineality = [primitive(v) for v in lineality]
    base_rows = [n for _, n in eqs] + [tuple(Fraction(x) for x in v) for v in lineality]
    base_rhs = [-b for b, _ in eqs] + [Fraction(0)] * len(lineality)
    if solve(base_rows, base_rhs, dim) is None:
        return None
    r0 = rank(base_rows, dim)
    need = dim - r0

    def feasible(x):
        return all(b + dot(n, x) >= 0 for b, n in ineqs)

    vertices = set()
    for combo in combinations(range(len(ineqs)), need):
        rows = base_rows + [ineqs[i][1] for i in combo]
        rhs = base_rhs + [-ineqs[i][0] for i in combo]
        res = solve(rows, rhs, dim)
        if res is None or res[1]:
            continue
        x = res[0]
        if feasible(x):
            vertices.add(x)
    if not vertices:
        return None
    rays = set()
    if need > 0:
        for combo in combinations(range(len(ineqs)), need - 1):
            rows = base_rows + [ineqs[i][1] for i in combo]
            ns = nullspace(rows, dim)
            if len(ns) != 1:
                continue
            d = ns[0]
            vals = [dot(n, d) for _, n in ineqs]
            if all(v >= 0 for v in vals):
                rays.add(primitive(d))
            elif all(v <= 0 for v in vals):
                rays.add(primitive(tuple(-x for x in d)))
    return sorted(vertices), sorted(rays), lineality


def vrep_to_hrep(dim: int, vertices: Sequence, rays: Sequence = (), lineality: Sequence = ()):
    """Irredundant inequalities and equalities of a V-described polyhedron.

    Returns:
        ``(ineqs, eqs)`` as lists of ``(b, n)`` pairs with primitive integer
        ``(b*q, n*q)`` scaling, or ``None`` when there are no vertices.
    """
    if not vertices:
        return None
    gens = [(Fraction(1),) + tuple(Fraction(x) for x in v) for v in vertices]
    gens += [(Fraction(0),) + tuple(Fraction(x) for x in r) for r in rays]
    for l in lineality:
        gens.append((Fraction(0),) + tuple(Fraction(x) for x in l))
        gens.append((Fraction(0),) + tuple(-Fraction(x) for x in l))
    dual = hrep_to_vrep(dim + 1, [(Fraction(0), g) for g in gens])
    _, drays, dlin = dual
    ineqs = []
    for y in drays:
        if any(y[1:]):
            ineqs.append(_constraint(y[0], y[1:]))
    eqs = [_constraint(y[0], y[1:]) for y in _canonical_lineality(dlin)]
    return sorted(ineqs), eqs


def _canonical_lineality(basis) -> list:
    if not basis:
        return []
    red, _ = rref([tuple(Fraction(x) for x in v) for v in basis])
    return [primitive(r) for r in red]


@dataclass(frozen=True)
class Face:
    """A nonempty face of a polyhedron, identified by its closed tight set.

    Attributes:
        parent: the polyhedron the face lives in.
        tight: indices of the parent's inequalities that hold with equality
            on the whole face.
        vertices: parent vertices lying in the face.
        rays: parent extreme rays in the face's recession cone.
    """

    parent: "Polyhedron" = field(repr=False, compare=False)
    tight: frozenset
    vertices: tuple
    rays: tuple

    @property
    def lineality(self) -> list:
        return self.parent.lineality

    @cached_property
    def dimension(self) -> int:
        v0 = self.vertices[0]
        dirs = [sub(v, v0) for v in self.vertices[1:]]
        dirs += [tuple(Fraction(x) for x in r) for r in self.rays]
        dirs += [tuple(Fraction(x) for x in l) for l in self.lineality]
        return rank(dirs, self.parent.dim) if dirs else 0

    @cached_property
    def polyhedron(self) -> "Polyhedron":
        p = self.parent
        ineqs = [c for i, c in enumerate(p.ineqs) if i not in self.tight]
        eqs = list(p.eqs) + [p.ineqs[i] for i in sorted(self.tight)]
        return Polyhedron(p.dim, ineqs, eqs,
                          _vrep=(list(self.vertices), list(self.rays), list(self.lineality)))

    def relint_point(self) -> tuple:
        """A point in the relative interior: vertex barycenter plus all rays."""
        k = len(self.vertices)
        x = [sum((v[i] for v in self.vertices), Fraction(0)) / k for i in range(self.parent.dim)]
        for r in self.rays:
            x = [a + b for a, b in zip(x, r)]
        return tuple(x)


class Polyhedron:
    """A closed rational polyhedron given by inequalities and equalities.

    Args:
        dim: ambient dimension.
        ineqs: pairs ``(b, n)`` meaning ``b + n.x >= 0``.
        eqs: pairs ``(b, n)`` meaning ``b + n.x = 0``.
    """

    def __init__(self, dim: int, ineqs: Iterable = (), eqs: Iterable = (), *, _vrep=None):
        self.dim = dim
        self.ineqs = tuple(_constraint(b, n) for b, n in ineqs)
        self.eqs = tuple(_constraint(b, n) for b, n in eqs)
        for _, n in self.ineqs + self.eqs:
            if len(n) != dim:
                raise ValueError(f"constraint normal {n} does not have length {dim}")
        if _vrep is not None:
            self.__dict__["_vrep"] = _vrep

    @classmethod
    def from_vrep(cls, dim: int, vertices, rays=(), lineality=()) -> "Polyhedron":
        """Build from generators; the H-description is irredundant."""
        vertices = [tuple(Fraction(x) for x in v) for v in vertices]
        rays = [tuple(Fraction(x) for x in r) for r in rays if any(r)]
        lineality = [tuple(Fraction(x) for x in l) for l in lineality if any(l)]
        h = vrep_to_hrep(dim, vertices, rays, lineality)
        if h is None:
            return cls.empty(dim)
        return cls(dim, h[0], h[1])

    @classmethod
    def empty(cls, dim: int) -> "Polyhedron":
        return cls(dim, [(Fraction(-1), (Fraction(0),) * dim)])

    @classmethod
    def whole_space(cls, dim: int) -> "Polyhedron":
        return cls(dim)

    @cached_property
    def _vrep(self):
        return hrep_to_vrep(self.dim, self.ineqs, self.eqs)

    @property
    def is_empty(self) -> bool:
        return self._vrep is None

    @property
    def vertices(self) -> list:
        return [] if self._vrep is None else list(self._vrep[0])

    @property
    def rays(self) -> list:
        return [] if self._vrep is None else list(self._vrep[1])

    @property
    def lineality(self) -> list:
        return [] if self._vrep is None else list(self._vrep[2])

    @property
    def is_bounded(self) -> bool:
        return not self.rays and not self.lineality

    @cached_property
    def dimension(self) -> int:
        """Affine dimension, ``-1`` when empty."""
        if self.is_empty:
            return -1
        return self.top_face.dimension

    def contains(self, x) -> bool:
        return (all(b + dot(n, x) >= 0 for b, n in self.ineqs)
                and all(b + dot(n, x) == 0 for b, n in self.eqs))

    def tight_at(self, x) -> frozenset:
        return frozenset(i for i, (b, n) in enumerate(self.ineqs) if b + dot(n, x) == 0)

    def recession_contains(self, d) -> bool:
        return (all(dot(n, d) >= 0 for _, n in self.ineqs)
                and all(dot(n, d) == 0 for _, n in self.eqs))

    @cached_property
    def _tight_sets(self):
        vt = [self.tight_at(v) for v in self.vertices]
        rt = [frozenset(i for i, (_, n) in enumerate(self.ineqs) if dot(n, r) == 0)
              for r in self.rays]
        return vt, rt

    def _face_from(self, required: frozenset) -> Face | None:
        vt, rt = self._tight_sets
        vs = [i for i, t in enumerate(vt) if required <= t]
        if not vs:
            return None
        rs = [i for i, t in enumerate(rt) if required <= t]
        tight = frozenset(range(len(self.ineqs)))
        for i in vs:
            tight &= vt[i]
        for i in rs:
            tight &= rt[i]
        return Face(self, tight, tuple(self.vertices[i] for i in vs),
                    tuple(self.rays[i] for i in rs))

    @cached_property
    def top_face(self) -> Face:
        if self.is_empty:
            raise ValueError("empty polyhedron has no faces")
        return self._face_from(frozenset())

    def face(self, tight: Iterable[int]) -> Face | None:
        """The face cut out by making the given inequalities tight, if nonempty."""
        return self._face_from(frozenset(tight))

    def faces(self, allowed: Iterable[int] | None = None) -> list:
        """All nonempty faces, optionally cut out only by ``allowed`` constraints.

        With ``allowed`` given, the result is the set of nonempty sets
        ``P ∩ {constraints in T tight}`` for ``T`` a subset of ``allowed``.
        """
        if self.is_empty:
            return []
        allowed = range(len(self.ineqs)) if allowed is None else sorted(set(allowed))
        top = self.top_face
        seen = {top.tight: top}
        frontier = [top]
        while frontier:
            nxt = []
            for f in frontier:
                for i in allowed:
                    if i in f.tight:
                        continue
                    g = self._face_from(f.tight | {i})
                    if g is not None and g.tight not in seen:
                        seen[g.tight] = g
                        nxt.append(g)
            frontier = nxt
        return sorted(seen.values(), key=lambda f: (-f.dimension, sorted(f.tight)))

    def minimize(self, alpha) -> tuple:
        """Minimum of ``x.alpha`` and the face where it is attained.

        Raises:
            Unbounded: the functional is unbounded below.
        """
        if self.is_empty:
            raise ValueError("empty polyhedron")
        alpha = tuple(Fraction(x) for x in alpha)
        if any(dot(alpha, r) < 0 for r in self.rays) or any(dot(alpha, l) != 0 for l in self.lineality):
            raise Unbounded(f"functional {alpha} is unbounded below")
        value = min(dot(alpha, v) for v in self.vertices)
        vt, rt = self._tight_sets
        tight = frozenset(range(len(self.ineqs)))
        for i, v in enumerate(self.vertices):
            if dot(alpha, v) == value:
                tight &= vt[i]
        for i, r in enumerate(self.rays):
            if dot(alpha, r) == 0:
                tight &= rt[i]
        return value, self._face_from(tight)

    def intersection(self, other: "Polyhedron") -> "Polyhedron":
        return Polyhedron(self.dim, self.ineqs + other.ineqs, self.eqs + other.eqs)

    def contains_polyhedron(self, other: "Polyhedron") -> bool:
        if other.is_empty:
            return True
        return (all(self.contains(v) for v in other.vertices)
                and all(self.recession_contains(r) for r in other.rays)
                and all(self.recession_contains(l) and self.recession_contains(tuple(-x for x in l))
                        for l in other.lineality))

    @cached_property
    def canonical(self) -> "Polyhedron":
        """An equal polyhedron with irredundant, canonically ordered constraints."""
        if self.is_empty:
            return Polyhedron.empty(self.dim)
        return Polyhedron.from_vrep(self.dim, self.vertices, self.rays, self.lineality)

    def key(self) -> tuple:
        """Hashable canonical description; equal polyhedra have equal keys."""
        if self.is_empty:
            return (self.dim, None)
        # Vertices depend on the lineality complement chosen, which is canonical
        # because it is the orthogonal complement of the lineality space.
        return (self.dim, tuple(self.vertices), tuple(self.rays),
                tuple(_canonical_lineality(self.lineality)))

    def __eq__(self, other):
        if not isinstance(other, Polyhedron):
            return NotImplemented
        return self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def relint_point(self) -> tuple:
        return self.top_face.relint_point()

    def __repr__(self):
        if self.is_empty:
            return f"Polyhedron(dim={self.dim}, empty)"
        return (f"Polyhedron(dim={self.dim}, vertices={self.vertices}, rays={self.rays}, "
                f"lineality={self.lineality})")


def affine_dimension(points: Sequence, dim: int) -> int:
    if not points:
        return -1
    p0 = points[0]
    return rank([sub(p, p0) for p in points[1:]], dim) if len(points) > 1 else 0


def is_face_of(face: Polyhedron, poly: Polyhedron) -> bool:
    """Whether ``face`` (assumed contained in ``poly``) is a face of ``poly``."""
    if face.is_empty:
        return True
    vt = set(range(len(poly.ineqs)))
    for v in face.vertices:
        vt &= poly.tight_at(v)
    for r in face.rays:
        vt &= {i for i, (_, n) in enumerate(poly.ineqs) if dot(n, r) == 0}
    for l in face.lineality:
        vt &= {i for i, (_, n) in enumerate(poly.ineqs) if dot(n, l) == 0}
    f = poly.face(vt)
    return f is not None and f.polyhedron == face


__all__ = ["Polyhedron", "Face", "hrep_to_vrep", "vrep_to_hrep", "affine_dimension", "is_face_of"]
