"""Stratum operators on functions over a chart and the ``C^{k,delta}`` seminorm.

Functions live on the smooth-part coordinates ``zeta_1..zeta_N`` of a chart
(its basis monomials). For a stratum ``S``, ``e_S`` restricts a function to
the smooth part of ``S`` and extends it back: each ``zeta_i`` that vanishes
on ``S`` is replaced by zero. ``Delta_I`` is the inclusion-exclusion product
``prod_{S in I} (id - e_S)``. The weight ``w_I`` is the sum of moduli of the
monomials that vanish on every stratum of ``I``.

Polynomial test functions (in ``zeta`` and ``conj(zeta)``) support exact
operator algebra; black-box callables are handled by substitution and
sampling only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import combinations, product
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np
from scipy.optimize import minimize

from .charts import Chart
from .errors import BadDelta, EmptyRegion, InvalidInput, NotAStratum
from .lattice_affine import Stratum
from .semiring import GaussianRational, as_fraction

DEFAULT_GRID = 2
ANGULAR_FACTOR = 4
STABILITY_TOLERANCE = 0.05
REFINE_STARTS = 6
# Generic phase shift keeps grid angles off the symmetric critical points of
# real polynomials, where local refinement would stall.
ANGLE_OFFSET = 0.381966


# Polynomials in zeta and conj(zeta) --------------------------------------------------------

class SmoothPolynomial:
    """A polynomial in ``zeta_1..zeta_N`` and their conjugates.

    Terms are stored as ``{(e, f): c}`` for the monomial
    ``c * prod zeta_i^e_i * prod conj(zeta_i)^f_i``.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Mapping | Iterable = ()):
        self.nvars = nvars
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc = {}
        for (e, f), c in items:
            e = tuple(int(x) for x in e)
            f = tuple(int(x) for x in f)
            if len(e) != nvars or len(f) != nvars or min(e + f, default=0) < 0:
                raise InvalidInput(f"bad exponent pair {e}, {f} for {nvars} variables")
            acc[(e, f)] = acc.get((e, f), GaussianRational(0)) + GaussianRational.coerce(c)
        self.terms = {k: v for k, v in sorted(acc.items()) if not v.is_zero}

    @classmethod
    def constant(cls, nvars: int, c=1) -> "SmoothPolynomial":
        zero = (0,) * nvars
        return cls(nvars, {(zero, zero): c})

    @classmethod
    def variable(cls, nvars: int, i: int, conjugate: bool = False) -> "SmoothPolynomial":
        e = tuple(int(j == i) for j in range(nvars))
        zero = (0,) * nvars
        return cls(nvars, {(zero, e) if conjugate else (e, zero): 1})

    def _check(self, other):
        if not isinstance(other, SmoothPolynomial):
            other = SmoothPolynomial.constant(self.nvars, other)
        if other.nvars != self.nvars:
            raise InvalidInput("polynomials in different numbers of variables")
        return other

    @classmethod
    def _collect(cls, nvars: int, items: Iterable) -> "SmoothPolynomial":
        # Trusted path for already validated keys: merge, drop zeros, sort.
        acc = {}
        for k, c in items:
            acc[k] = acc[k] + c if k in acc else c
        out = cls.__new__(cls)
        out.nvars = nvars
        out.terms = {k: v for k, v in sorted(acc.items()) if not v.is_zero}
        return out

    def __add__(self, other):
        other = self._check(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        return self._collect(self.nvars, [*self.terms.items(), *other.terms.items()])

    __radd__ = __add__

    def __neg__(self):
        out = SmoothPolynomial.__new__(SmoothPolynomial)
        out.nvars = self.nvars
        out.terms = {k: -v for k, v in self.terms.items()}
        return out

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def __mul__(self, other):
        other = self._check(other)
        out = []
        for (e1, f1), c1 in self.terms.items():
            for (e2, f2), c2 in other.terms.items():
                out.append(((tuple(a + b for a, b in zip(e1, e2)),
                             tuple(a + b for a, b in zip(f1, f2))), c1 * c2))
        return self._collect(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = SmoothPolynomial.constant(self.nvars)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, SmoothPolynomial):
            return NotImplemented
        return self.nvars == other.nvars and self.terms == other.terms

    def __hash__(self):
        return hash((self.nvars, tuple(self.terms.items())))

    def __repr__(self):
        return f"SmoothPolynomial({self.nvars}, {self.terms!r})"

    def _subsum(self, keep: Callable) -> "SmoothPolynomial":
        out = SmoothPolynomial.__new__(SmoothPolynomial)
        out.nvars = self.nvars
        out.terms = {k: c for k, c in self.terms.items() if keep(k)}
        return out

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(e) + sum(f) for e, f in self.terms), default=0)

    def __call__(self, Z: np.ndarray) -> np.ndarray:
        """Evaluate at the rows of a complex array of shape ``(K, nvars)``."""
        Z = np.asarray(Z, dtype=complex).reshape(-1, self.nvars)
        return _evaluate_terms(self.terms, Z, _PowerCache(Z))


class _PowerCache:
    """Memoized powers of the columns of ``Z`` and their conjugates."""

    def __init__(self, Z: np.ndarray):
        self.Z = Z
        self._cache = {}

    def power(self, i: int, k: int, conj: bool) -> np.ndarray:
        key = (i, k, conj)
        if key not in self._cache:
            if k == 1:
                col = self.Z[:, i]
                self._cache[key] = np.conj(col) if conj else col
            else:
                self._cache[key] = self.power(i, k - 1, conj) * self.power(i, 1, conj)
        return self._cache[key]


def _evaluate_terms(terms: Mapping, Z: np.ndarray, cache: _PowerCache) -> np.ndarray:
    out = np.zeros(Z.shape[0], dtype=complex)
    for (e, f), c in terms.items():
        val = np.full(Z.shape[0], complex(c))
        for i, k in enumerate(e):
            if k:
                val = val * cache.power(i, k, False)
        for i, k in enumerate(f):
            if k:
                val = val * cache.power(i, k, True)
        out += val
    return out


@dataclass(frozen=True)
class BlackBox:
    """A numeric test function of the smooth-part coordinates.

    Attributes:
        func: maps a complex array of shape ``(K, N)`` to shape ``(K,)``.
        nvars: number of smooth-part coordinates ``N``.
    """

    func: Callable
    nvars: int

    def __call__(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex).reshape(-1, self.nvars)
        return np.asarray(self.func(Z), dtype=complex).reshape(-1)

    def __sub__(self, other: "BlackBox") -> "BlackBox":
        a, b = self.func, other.func
        return BlackBox(lambda Z: np.asarray(a(Z)) - np.asarray(b(Z)), self.nvars)


TestFunction = SmoothPolynomial | BlackBox


# Stratum operators -------------------------------------------------------------------------

def _resolve(S, chart: Chart) -> Stratum:
    if isinstance(S, int):
        if not 0 <= S < len(chart.strata):
            raise NotAStratum(f"no stratum with index {S}")
        return chart.strata[S]
    if isinstance(S, Stratum) and S.polytope is chart.P:
        return S
    if not isinstance(S, Stratum) or S.polytope.key() != chart.P.key() or S not in chart.strata:
        raise NotAStratum(f"{S!r} is not a stratum of the chart polytope")
    return S


def vanishing_set(S, chart: Chart) -> frozenset:
    """Indices of basis monomials whose smooth part is zero on ``S``."""
    return chart.vanishing(_resolve(S, chart))


def _check_nvars(f, chart: Chart):
    if f.nvars != len(chart.basis):
        raise InvalidInput(f"function has {f.nvars} variables but the chart has {len(chart.basis)}")


@lru_cache(maxsize=None)
def _support(key: tuple) -> frozenset:
    e, g = key
    return frozenset(i for i, (a, b) in enumerate(zip(e, g)) if a or b)


def _touches(key: tuple, zero: frozenset) -> bool:
    return not _support(key).isdisjoint(zero)


def _restrict(f, zero: frozenset):
    if isinstance(f, SmoothPolynomial):
        return f._subsum(lambda k: not _touches(k, zero))
    idx = sorted(zero)
    inner = f.func

    def restricted(Z):
        Z = np.array(Z, dtype=complex)
        Z[:, idx] = 0
        return inner(Z)

    return BlackBox(restricted, f.nvars)


def e_S(f: TestFunction, S, chart: Chart) -> TestFunction:
    """Substitute zero for every basis monomial vanishing on ``S``.

    Raises:
        NotAStratum: ``S`` is not a stratum of ``chart.P``.
    """
    _check_nvars(f, chart)
    return _restrict(f, vanishing_set(S, chart))


def e_I(f: TestFunction, I: Sequence, chart: Chart) -> TestFunction:
    """Composite ``prod_{S in I} e_S``; the identity for empty ``I``."""
    _check_nvars(f, chart)
    zero = frozenset().union(*(vanishing_set(S, chart) for S in I)) if I else frozenset()
    return _restrict(f, zero)


def delta_I(f: TestFunction, I: Sequence, chart: Chart) -> TestFunction:
    """Apply ``prod_{S in I} (id - e_S)``; the identity for empty ``I``.

    Raises:
        NotAStratum: some member of ``I`` is not a stratum of ``chart.P``.
    """
    _check_nvars(f, chart)
    zeros = [vanishing_set(S, chart) for S in I]
    if isinstance(f, SmoothPolynomial):
        # (id - e_S) keeps exactly the terms involving a coordinate that vanishes on S.
        return f._subsum(lambda k: all(_touches(k, z) for z in zeros))
    g = f
    for zero in zeros:
        g = g - _restrict(g, zero)
    return g


# Weights -----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Weight:
    """The weight ``w_I = sum_g |zeta^g|`` over generator exponent vectors ``g``."""

    generators: tuple

    @property
    def is_zero(self) -> bool:
        return not self.generators

    def __call__(self, Z: np.ndarray) -> np.ndarray:
        Z = np.asarray(Z, dtype=complex)
        A = np.abs(Z)
        out = np.zeros(Z.shape[0])
        for g in self.generators:
            term = np.ones(Z.shape[0])
            for i, k in enumerate(g):
                if k:
                    term = term * A[:, i] ** k
            out += term
        return out

    def describe(self) -> str:
        if not self.generators:
            return "0"
        parts = []
        for g in self.generators:
            mono = "".join(f"z{i + 1}" + (f"^{k}" if k > 1 else "") for i, k in enumerate(g) if k)
            parts.append(f"|{mono or '1'}|")
        return "+".join(parts)


def _admissible(a: Fraction, alpha: Sequence, chart: Chart) -> bool:
    closure = chart.P.closure
    if any(sum(x * y for x, y in zip(alpha, l)) != 0 for l in closure.lineality):
        return False
    if any(sum(x * y for x, y in zip(alpha, r)) < 0 for r in closure.rays):
        return False
    return all(a + sum(x * y for x, y in zip(alpha, v)) >= 0 for v in closure.vertices)


def weight_w_I(I: Sequence, chart: Chart) -> Weight:
    """Generators of the smooth monomials vanishing on every stratum of ``I``.

    Candidates pick one vanishing basis monomial per stratum. A candidate is
    dropped when it equals another or is divisible by another in the monoid
    of smooth monomials, that is when the quotient is itself admissible.
    For empty ``I`` the weight is the constant ``1``.
    """
    N = len(chart.basis)
    if not I:
        return Weight(((0,) * N,))
    choices = [sorted(vanishing_set(S, chart)) for S in I]
    if any(not c for c in choices):
        return Weight(())
    cands = {}
    for pick in product(*choices):
        g = [0] * N
        for i in set(pick):
            g[i] = 1
        g = tuple(g)
        a = sum((k * b.a for k, b in zip(g, chart.basis)), Fraction(0))
        alpha = tuple(sum(k * b.alpha[j] for k, b in zip(g, chart.basis)) for j in range(chart.m))
        cands.setdefault((a, alpha), g)
    keys = sorted(cands, key=lambda k: (sum(cands[k]), cands[k]))
    kept = []
    for k in keys:
        if any(_admissible(k[0] - q[0], [x - y for x, y in zip(k[1], q[1])], chart) for q in kept):
            continue
        kept.append(k)
    return Weight(tuple(sorted((cands[k] for k in kept), reverse=True)))


# Vector fields -----------------------------------------------------------------------------

def _field_weights(chart: Chart) -> list:
    """Per coordinate ``i``, the rates ``alpha_ji`` of each basis monomial."""
    return [[b.alpha[i] for b in chart.basis] for i in range(chart.m)]


def standard_fields(chart: Chart) -> list:
    """Labels ``(i, part)`` of the standard vector fields, ``part`` in ``{"re", "im"}``."""
    return [(i, part) for i in range(chart.m) for part in ("re", "im")]


def apply_field(f: TestFunction, field: tuple, chart: Chart, step: float = 1e-4) -> TestFunction:
    """Apply ``Re`` or ``Im`` of ``z_i d/dz_i``.

    The real part scales ``zeta_j`` at rate ``alpha_ji``; the imaginary part
    rotates it at that rate. On polynomials this is exact: a monomial
    ``zeta^e conj(zeta)^f`` is multiplied by ``sum_j alpha_ji (e_j + f_j)``,
    respectively ``i * sum_j alpha_ji (e_j - f_j)``. Black boxes use a central
    difference of width ``step`` along the flow.
    """
    i, part = field
    rates = _field_weights(chart)[i]
    if isinstance(f, SmoothPolynomial):
        out = {}
        for (e, g), c in f.terms.items():
            if part == "re":
                factor = GaussianRational(sum(r * (x + y) for r, x, y in zip(rates, e, g)))
            else:
                factor = GaussianRational(0, sum(r * (x - y) for r, x, y in zip(rates, e, g)))
            out[(e, g)] = c * factor
        return SmoothPolynomial(f.nvars, out)
    rates_arr = np.array(rates, dtype=float)
    inner = f.func

    def derivative(Z):
        Z = np.asarray(Z, dtype=complex)
        unit = rates_arr if part == "re" else 1j * rates_arr
        plus = Z * np.exp(step * unit)
        minus = Z * np.exp(-step * unit)
        return (np.asarray(inner(plus)) - np.asarray(inner(minus))) / (2 * step)

    return BlackBox(derivative, f.nvars)


# Sampling ----------------------------------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """The box ``|zeta_j| <= radii[j]`` in smooth-part coordinates."""

    radii: tuple

    def __post_init__(self):
        object.__setattr__(self, "radii", tuple(as_fraction(r) for r in self.radii))

    @classmethod
    def polydisc(cls, n: int, radius=1) -> "Region":
        return cls((radius,) * n)


@dataclass(frozen=True)
class SampleBlock:
    """Grid points of one stratum.

    Attributes:
        live: basis indices that do not vanish on the stratum.
        coords: chart coordinates the live monomials depend on.
        logs: ``log c`` for those coordinates, one row per point.
        Z: smooth-part coordinates of the points.
    """

    live: tuple
    coords: tuple
    logs: np.ndarray
    Z: np.ndarray


def _alpha_matrix(chart: Chart) -> np.ndarray:
    N = len(chart.basis)
    return np.array([b.alpha for b in chart.basis], dtype=float).reshape(N, chart.m)


def sample_blocks(chart: Chart, region: Region, resolution: int) -> list:
    """Grid of smooth-part points ``zeta(c t^x)`` inside ``region``, per stratum.

    For each stratum, ``x`` is fixed in the stratum and each coordinate
    coefficient ``c_i = r e^(i theta)`` ranges over ``resolution`` radii and
    ``ANGULAR_FACTOR * resolution`` angles, shifted by ``ANGLE_OFFSET`` of a
    step. Doubling ``resolution`` keeps every radius and halves the angular
    step.

    Raises:
        EmptyRegion: no radius is positive or no grid point lies in the region.
    """
    N = len(chart.basis)
    if len(region.radii) != N:
        raise InvalidInput(f"region has {len(region.radii)} radii but the chart has {N} coordinates")
    if resolution < 1:
        raise InvalidInput("grid resolution must be positive")
    if any(r <= 0 for r in region.radii):
        raise EmptyRegion("region radii must be positive")
    radii = np.array([float(r) for r in region.radii])
    rho = max(float(max(region.radii, default=1)), 1.0 / float(min(region.radii, default=1)), 1.0)
    rs = rho * np.arange(1, resolution + 1) / resolution
    steps = ANGULAR_FACTOR * resolution
    thetas = 2 * np.pi * (np.arange(steps) + ANGLE_OFFSET) / steps
    circle = (rs[:, None] * np.exp(1j * thetas[None, :])).reshape(-1)
    alphas = _alpha_matrix(chart)
    blocks = []
    for S in chart.strata:
        live = tuple(j for j in range(N) if not chart.vanishes(j, S))
        coords = tuple(sorted({i for j in live for i in range(chart.m) if alphas[j, i] != 0}))
        if coords:
            grids = np.meshgrid(*([np.log(circle)] * len(coords)), indexing="ij")
            logs = np.stack([g.reshape(-1) for g in grids], axis=1)
        else:
            logs = np.zeros((1, 0), dtype=complex)
        Z = np.zeros((logs.shape[0], N), dtype=complex)
        for j in live:
            Z[:, j] = np.exp(logs @ alphas[j, list(coords)]) if coords else 1
        inside = np.all(np.abs(Z) <= radii * (1 + 1e-12), axis=1)
        if inside.any():
            blocks.append(SampleBlock(live, coords, logs[inside], Z[inside]))
    if not blocks:
        raise EmptyRegion("no grid point lies in the region")
    return blocks


def sample_points(chart: Chart, region: Region, resolution: int) -> np.ndarray:
    """All points of :func:`sample_blocks` as one ``(K, N)`` array."""
    return np.concatenate([b.Z for b in sample_blocks(chart, region, resolution)])


# Estimates ---------------------------------------------------------------------------------

def _evaluate(f: TestFunction, Z: np.ndarray, cache: _PowerCache | None) -> np.ndarray:
    if isinstance(f, SmoothPolynomial):
        return _evaluate_terms(f.terms, Z, cache or _PowerCache(Z))
    return f(Z)


def _collections(chart: Chart, k: int) -> list:
    live = [S for S in chart.strata if vanishing_set(S, chart)]
    out = []
    for size in range(0, k + 1):
        out.extend(combinations(live, size))
    return out


def _label(I: Sequence) -> str:
    return "[" + ",".join(S.label for S in I) + "]"


@dataclass(frozen=True)
class SeminormEstimate:
    """Grid estimate of ``|f|_{k,delta}``.

    Attributes:
        value: the estimate.
        per_I: top-level ``sup |w_I^(-delta) Delta_I f|`` per collection label.
        points: number of grid points used.
    """

    value: float
    per_I: dict
    points: int


def seminorm_estimate(f: TestFunction, k: int, delta, chart: Chart, region: Region,
                      resolution: int = DEFAULT_GRID) -> SeminormEstimate:
    """Estimate ``|f|_{k,delta} = sum_X |X f|_{k-1,delta} + sup sum_{|I|<=k} w_I^(-delta) |Delta_I f|``.

    ``X`` runs over the standard vector fields; the second term includes
    ``I`` empty, with ``w = 1`` and ``Delta = id``.

    Raises:
        BadDelta: ``delta`` is not in ``(0, 1)``.
        EmptyRegion: the region contains no grid point.
    """
    try:
        delta = Fraction(str(delta)) if isinstance(delta, float) else as_fraction(delta)
    except (TypeError, ValueError) as exc:
        raise BadDelta(f"delta {delta!r} is not a number") from exc
    if not 0 < delta < 1:
        raise BadDelta(f"delta must lie strictly between 0 and 1, got {delta}")
    if k < 0:
        raise InvalidInput("k must be nonnegative")
    _check_nvars(f, chart)
    Z = sample_points(chart, region, resolution)
    cache = _PowerCache(Z)
    d = float(delta)
    weights = {}
    step = 1e-2 / resolution

    def weight_values(I):
        key = tuple(S.tight for S in I)
        if key not in weights:
            weights[key] = weight_w_I(I, chart)(Z) if I else np.ones(len(Z))
        return weights[key]

    def sup_term(g, kk, record=None):
        total = np.zeros(len(Z))
        for I in _collections(chart, kk):
            w = weight_values(I)
            vals = np.abs(_evaluate(delta_I(g, I, chart), Z, cache))
            with np.errstate(divide="ignore", invalid="ignore"):
                term = np.where(w > 0, vals * np.power(np.where(w > 0, w, 1.0), -d), 0.0)
            total += term
            if record is not None:
                record[_label(I)] = float(term.max())
        return float(total.max())

    def norm(g, kk, record=None):
        value = sup_term(g, kk, record)
        if kk > 0:
            for field in standard_fields(chart):
                value += norm(apply_field(g, field, chart, step), kk - 1)
        return value

    per_I = {}
    value = norm(f, k, per_I)
    return SeminormEstimate(value, per_I, len(Z))


@dataclass(frozen=True)
class DeltaBound:
    """Grid estimates of ``sup |Delta_I f| / w_I`` at two resolutions.

    Attributes:
        sup_ratio: the estimate on the finer grid, as a rational.
        coarse: the estimate on the base grid.
        fine: the estimate on the doubled grid.
        stable: whether the two agree within ``STABILITY_TOLERANCE``.
    """

    sup_ratio: Fraction
    coarse: float
    fine: float
    stable: bool

    @property
    def finite(self) -> bool:
        return math.isfinite(self.fine)


class DeltaGrid:
    """A sampled grid with cached weights, reused across test functions.

    A supremum estimate takes the grid maximum and then refines the best
    ``REFINE_STARTS`` grid points by bounded local optimization over the
    chart coefficients ``log c`` of their stratum, keeping refined points
    that stay inside the region.

    Args:
        chart: the chart.
        region: the sampled box.
        resolution: grid resolution passed to :func:`sample_blocks`.
    """

    def __init__(self, chart: Chart, region: Region, resolution: int):
        self.chart = chart
        self.blocks = sample_blocks(chart, region, resolution)
        self.Z = np.concatenate([b.Z for b in self.blocks])
        self.block_of = np.concatenate([np.full(len(b.Z), i) for i, b in enumerate(self.blocks)])
        self.offsets = np.cumsum([0] + [len(b.Z) for b in self.blocks])
        self.log_radii = np.log([float(r) for r in region.radii])
        self.log_rho = np.log(max(float(max(region.radii)), 1.0 / float(min(region.radii)), 1.0))
        self.alphas = _alpha_matrix(chart)
        self._weights = {}

    def weight(self, I: Sequence) -> np.ndarray:
        key = tuple(_resolve(S, self.chart).tight for S in I)
        if key not in self._weights:
            self._weights[key] = weight_w_I(I, self.chart)(self.Z) if I else np.ones(len(self.Z))
        return self._weights[key]

    def _refine(self, index: int, num: Callable, weight: Weight) -> float:
        block = self.blocks[self.block_of[index]]
        if not block.coords:
            return 0.0
        start = block.logs[index - self.offsets[self.block_of[index]]]
        k = len(block.coords)
        A = self.alphas[np.ix_(block.live, block.coords)]
        live = list(block.live)
        bounds_r = self.log_radii[live]
        N = len(self.chart.basis)

        def point(x):
            z = np.zeros((1, N), dtype=complex)
            z[0, live] = np.exp(A @ (x[:k] + 1j * x[k:]))
            return z, A @ x[:k]

        def objective(x):
            z, logmod = point(x)
            w = weight(z)[0]
            excess = np.maximum(logmod - bounds_r, 0.0)
            if w <= 0:
                return 1e3 * float(excess @ excess)
            return -float(abs(num(z)[0]) / w) + 1e3 * float(excess @ excess)

        x0 = np.concatenate([start.real, start.imag])
        bounds = [(-30.0, self.log_rho)] * k + [(None, None)] * k
        res = minimize(objective, x0, method="L-BFGS-B", bounds=bounds)
        z, logmod = point(res.x)
        w = weight(z)[0]
        if w <= 0 or np.any(logmod > bounds_r + 1e-9):
            return 0.0
        return float(abs(num(z)[0]) / w)

    def sup_ratios(self, f: TestFunction, collections: Sequence) -> list:
        """``sup |Delta_I f| / w_I`` over points with ``w_I > 0``, per collection.

        ``Delta_I`` keeps a sub-sum of the terms of a polynomial, so each
        monomial is evaluated once and the survivors are summed per ``I``.
        Collections sharing both ``Delta_I f`` and ``w_I`` share one estimate.
        """
        Z = self.Z
        poly = isinstance(f, SmoothPolynomial)
        if poly:
            keys = list(f.terms)
            cache = _PowerCache(Z)
            columns = [_evaluate_terms({k: f.terms[k]}, Z, cache) for k in keys]
            M = np.stack(columns, axis=1) if columns else np.zeros((len(Z), 0), dtype=complex)
            index = {k: i for i, k in enumerate(keys)}
        memo = {}
        out = []
        for I in collections:
            W = weight_w_I(I, self.chart) if I else Weight(((0,) * len(self.chart.basis),))
            d = delta_I(f, I, self.chart)
            key = (d, W.generators) if poly else None
            if key is not None and key in memo:
                out.append(memo[key])
                continue
            w = self.weight(I)
            mask = w > 0
            if not mask.any() or (poly and d.is_zero):
                best = 0.0
            else:
                if poly:
                    sel = np.zeros(len(keys), dtype=complex)
                    for k in d.terms:
                        sel[index[k]] = 1
                    vals = np.abs(M[mask] @ sel)
                else:
                    vals = np.abs(d(Z[mask]))
                ratios = vals / w[mask]
                best = float(ratios.max())
                rows = np.nonzero(mask)[0]
                for t in np.argsort(-ratios)[:REFINE_STARTS]:
                    best = max(best, self._refine(rows[t], d, W))
            if key is not None:
                memo[key] = best
            out.append(best)
        return out


def verify_delta_bound(f: TestFunction, I: Sequence, chart: Chart, region: Region,
                       resolution: int = DEFAULT_GRID) -> DeltaBound:
    """Estimate ``sup |Delta_I f| / w_I`` and test stability under one grid doubling.

    Points where ``w_I = 0`` are excluded from the supremum.
    """
    return delta_bounds(f, [I], chart, region, resolution)[0]


def delta_bounds(f: TestFunction, collections: Sequence, chart: Chart, region: Region,
                 resolution: int = DEFAULT_GRID, grids: tuple | None = None) -> list:
    """:func:`verify_delta_bound` for several collections sharing two sampled grids.

    Args:
        grids: optional prebuilt ``(coarse, fine)`` :class:`DeltaGrid` pair.
    """
    _check_nvars(f, chart)
    if grids is None:
        grids = (DeltaGrid(chart, region, resolution), DeltaGrid(chart, region, 2 * resolution))
    coarse_all = grids[0].sup_ratios(f, collections)
    fine_all = grids[1].sup_ratios(f, collections)
    out = []
    for coarse, fine in zip(coarse_all, fine_all):
        finite = math.isfinite(fine)
        stable = finite and (fine == coarse or abs(fine - coarse) <= STABILITY_TOLERANCE * abs(fine))
        out.append(DeltaBound(Fraction(fine).limit_denominator(10 ** 9) if finite else Fraction(0),
                              coarse, fine, stable))
    return out
