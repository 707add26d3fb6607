"""Coordinate charts ``R^n x T^m_P`` and their smooth monomials.

A monomial ``t^a z^alpha`` is admissible on the chart when ``a + x.alpha >= 0``
for every ``x`` in ``P``; its smooth part is then a well defined function.
Admissible pairs ``(a, alpha)`` form the lattice points of a rational cone
in ``Q x Z^m``. A minimal generating set, taken modulo extra powers of
``t``, gives the smooth coordinates of the chart.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .errors import DimTooLarge, InvalidInput, PointOutsidePolytope
from .lattice_affine import AffinePolytope, Cone, Stratum, hermite_rows, hilbert_basis
from .lattice_affine.lattice import integer_kernel
from .semiring import ExplodedValue, GaussianRational, as_fraction, exp_mul, format_rational, \
    smooth_part

MAX_CHART_DIM = 3


@dataclass(frozen=True, order=True)
class SmoothMonomial:
    """The smooth monomial ``ceil(t^a z^alpha)``."""

    a: Fraction
    alpha: tuple

    def __post_init__(self):
        object.__setattr__(self, "a", as_fraction(self.a))
        object.__setattr__(self, "alpha", tuple(int(x) for x in self.alpha))

    def value_at(self, x) -> Fraction:
        """Exponent ``a + x.alpha`` of the monomial over the tropical point ``x``."""
        return self.a + sum((ai * Fraction(xi) for ai, xi in zip(self.alpha, x)), Fraction(0))

    def to_json(self) -> dict:
        return {"a": format_rational(self.a), "alpha": list(self.alpha)}


@dataclass(frozen=True)
class Relation:
    """``prod zeta^lhs = ceil(t^constant) * prod zeta^rhs`` among basis monomials.

    Attributes:
        exponents: the integer vector ``r = lhs - rhs``.
        constant: the exponent ``a`` with ``sum r_i (a_i, alpha_i) = (a, 0)``.
    """

    exponents: tuple
    constant: Fraction

    @property
    def lhs(self) -> tuple:
        return tuple(max(r, 0) for r in self.exponents)

    @property
    def rhs(self) -> tuple:
        return tuple(max(-r, 0) for r in self.exponents)

    @property
    def constant_value(self) -> ExplodedValue:
        return ExplodedValue(GaussianRational(1), self.constant)

    def to_json(self) -> dict:
        return {"lhs": list(self.lhs), "rhs": list(self.rhs),
                "constant": f"t^{format_rational(self.constant)}"}

    def describe(self) -> str:
        def side(exps):
            parts = []
            for i, e in enumerate(exps):
                if e == 1:
                    parts.append(f"zeta{i + 1}")
                elif e > 1:
                    parts.append(f"zeta{i + 1}^{e}")
            return "*".join(parts) or "1"

        if self.constant > 0:
            return f"{side(self.lhs)} = 0"
        return f"{side(self.lhs)} = {side(self.rhs)}"


def _monomial_order(m: SmoothMonomial):
    return (m.a, sum(abs(x) for x in m.alpha), tuple(-x for x in m.alpha))


def smooth_monomial_basis(P: AffinePolytope) -> list:
    """Minimal generators of the admissible monomials on ``T^m_P``.

    Admissible ``(a, alpha)`` satisfy ``a + v.alpha >= 0`` at each vertex
    ``v``, ``r.alpha >= 0`` for each ray and ``l.alpha = 0`` for each
    lineality direction. With ``D`` the common denominator of the vertex
    coordinates, minimal admissible exponents lie in ``(1/D)Z``, so the
    Hilbert basis is computed in the lattice ``(1/D)Z x Z^m``. Generators with
    ``alpha = 0`` (pure powers of ``t``) are dropped.

    Raises:
        DimTooLarge: ``P`` has dimension above 3.
    """
    m = P.dim
    if m > MAX_CHART_DIM:
        raise DimTooLarge(f"charts are limited to dimension {MAX_CHART_DIM}, got {m}")
    closure = P.closure
    D = 1
    for v in closure.vertices:
        for x in v:
            D = lcm(D, x.denominator)
    normals = []
    for v in closure.vertices:
        normals.append((1,) + tuple(int(D * x) for x in v))
    for r in closure.rays:
        normals.append((0,) + tuple(r))
    equalities = [(0,) + tuple(l) for l in closure.lineality]
    cone = Cone.from_inequalities(normals, m + 1, equalities)
    out = []
    for h in hilbert_basis(cone):
        if any(h[1:]):
            out.append(SmoothMonomial(Fraction(h[0], D), h[1:]))
    return sorted(out, key=_monomial_order)


def monomial_relations(basis: Sequence[SmoothMonomial]) -> list:
    """A lattice basis of the integer relations among the basis exponents.

    Each relation ``r`` satisfies ``sum r_i alpha_i = 0``; its constant is
    ``sum r_i a_i``. Signs are chosen so the constant is nonnegative, and on
    a zero constant so that the first nonzero entry is positive. The lattice
    basis is put in Hermite normal form to make the output canonical.
    """
    n = len(basis)
    if n == 0:
        return []
    m = len(basis[0].alpha)
    if m == 0:
        kernel = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        A = [[basis[j].alpha[i] for j in range(n)] for i in range(m)]
        kernel = integer_kernel(A)
    out = []
    for r in hermite_rows(kernel):
        const = sum((ri * b.a for ri, b in zip(r, basis)), Fraction(0))
        first = next(x for x in r if x != 0)
        if const < 0 or (const == 0 and first < 0):
            r = tuple(-x for x in r)
            const = -const
        out.append(Relation(tuple(r), const))
    return out


@dataclass(frozen=True)
class ChartPoint:
    """A point of ``R^n x T^m``.

    Attributes:
        real_coords: rational coordinates of the ``R^n`` factor.
        exp_coords: exploded coordinates ``c_i t^{x_i}`` with ``c_i != 0``.
    """

    real_coords: tuple
    exp_coords: tuple

    def __post_init__(self):
        object.__setattr__(self, "real_coords", tuple(as_fraction(x) for x in self.real_coords))
        coords = []
        for v in self.exp_coords:
            if not isinstance(v, ExplodedValue):
                v = ExplodedValue(*v)
            if v.coeff.is_zero:
                raise InvalidInput("chart point coordinates need nonzero coefficients")
            coords.append(v)
        object.__setattr__(self, "exp_coords", tuple(coords))

    @classmethod
    def of(cls, *coords) -> "ChartPoint":
        return cls((), coords)

    @property
    def tropical(self) -> tuple:
        return tuple(v.exponent for v in self.exp_coords)


def eval_monomial(p, mono) -> ExplodedValue:
    """Value of ``c t^a z^alpha`` at a point.

    Args:
        p: a :class:`ChartPoint` or a sequence of exploded values.
        mono: ``(c, a, alpha)``.
    """
    c, a, alpha = mono
    coords = p.exp_coords if isinstance(p, ChartPoint) else tuple(p)
    if len(alpha) != len(coords):
        raise InvalidInput(f"monomial has {len(alpha)} exponents but the point has {len(coords)}")
    result = ExplodedValue(GaussianRational.coerce(c), as_fraction(a))
    for v, k in zip(coords, alpha):
        result = exp_mul(result, ExplodedValue(v.coeff ** int(k), v.exponent * int(k)))
    return result


class Chart:
    """The chart ``R^n x T^m_P`` with its smooth coordinates.

    Args:
        P: the polytope; ``m`` is its dimension.
        n: number of real coordinates (metadata).
    """

    def __init__(self, P: AffinePolytope, n: int = 0):
        self.P = P
        self.n = n
        self.basis = smooth_monomial_basis(P)
        self.relations = monomial_relations(self.basis)
        self._vanishing = {}

    @property
    def m(self) -> int:
        return self.P.dim

    @property
    def real_dimension(self) -> int:
        return self.n + 2 * self.m

    @property
    def strata(self) -> list:
        return self.P.strata

    def contains(self, p: ChartPoint) -> bool:
        return len(p.exp_coords) == self.m and len(p.real_coords) in (0, self.n) \
            and self.P.contains(p.tropical)

    def vanishes(self, index: int, stratum: Stratum) -> bool:
        """Whether the smooth part of basis element ``index`` is zero on ``stratum``."""
        return index in self.vanishing(stratum)

    def vanishing(self, stratum: Stratum) -> frozenset:
        """Indices of the basis elements whose smooth part is zero on ``stratum``."""
        key = stratum.tight
        if key not in self._vanishing:
            self._vanishing[key] = frozenset(
                i for i, b in enumerate(self.basis) if b.value_at(stratum.point) > 0)
        return self._vanishing[key]

    def to_json(self) -> dict:
        return {"n": self.n, "polytope": self.P.to_json()}


def smooth_part_coords(p: ChartPoint, chart: Chart) -> tuple:
    """Smooth parts of the basis monomials at ``p``.

    Raises:
        PointOutsidePolytope: the tropical part of ``p`` is not in the polytope.
    """
    if not chart.contains(p):
        raise PointOutsidePolytope(f"{[format_rational(x) for x in p.tropical]} is not in the chart")
    return tuple(smooth_part(eval_monomial(p, (1, b.a, b.alpha))) for b in chart.basis)


def stratum_of_point(p: ChartPoint, chart: Chart) -> Stratum:
    """The stratum of the chart polytope containing the tropical part of ``p``.

    Raises:
        PointOutsidePolytope: the tropical part of ``p`` is not in the polytope.
    """
    if not chart.contains(p):
        raise PointOutsidePolytope(f"{[format_rational(x) for x in p.tropical]} is not in the chart")
    return chart.P.stratum_of(p.tropical)
