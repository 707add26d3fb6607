from fractions import Fraction
from itertools import chain, combinations

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropex.charts import Chart
from tropex.errors import BadDelta, EmptyRegion, InvalidInput, NotAStratum
from tropex.lattice_affine import AffinePolytope
from tropex.semiring import GaussianRational
from tropex.strata_calculus import (
    BlackBox, DeltaGrid, Region, SmoothPolynomial, Weight, apply_field, delta_bounds, delta_I,
    e_I, e_S, sample_points, seminorm_estimate, standard_fields, vanishing_set,
    verify_delta_bound, weight_w_I,
)

PLANE = Chart(AffinePolytope.quadrant(2))
SPACE = Chart(AffinePolytope.quadrant(3))
STRATA = {s.label: s for s in PLANE.strata}
# Origin, {x1 = 0 < x2}, {x2 = 0 < x1} and the interior.
ORIGIN, ON_X2_AXIS, ON_X1_AXIS, INTERIOR = (STRATA[k] for k in ("{0,1}", "{0}", "{1}", "{}"))
Z1, Z2 = SmoothPolynomial.variable(2, 0), SmoothPolynomial.variable(2, 1)
RNG = np.random.default_rng(7)


def random_points(n, count=12):
    return RNG.normal(size=(count, n)) + 1j * RNG.normal(size=(count, n))


def polynomial_values_agree(f, g, n):
    Z = random_points(n)
    return np.allclose(f(Z), g(Z))


def subsets(I):
    return chain.from_iterable(combinations(I, k) for k in range(len(I) + 1))


def test_basis_order_of_the_plane():
    assert [b.alpha for b in PLANE.basis] == [(1, 0), (0, 1)]
    assert vanishing_set(ON_X1_AXIS, PLANE) == {0}
    assert vanishing_set(INTERIOR, PLANE) == {0, 1}
    assert vanishing_set(ORIGIN, PLANE) == frozenset()


def test_restrictions():
    f = 1 + 2 * Z1 + 3 * Z2 + Z1 * Z2
    assert e_S(f, ON_X1_AXIS, PLANE) == 1 + 3 * Z2
    assert e_S(f, INTERIOR, PLANE) == SmoothPolynomial.constant(2, 1)
    assert e_S(f, ORIGIN, PLANE) == f
    assert e_S(f, 2, PLANE) == 1 + 3 * Z2
    interval = Chart(AffinePolytope.box([0], [2]))
    left = next(s for s in interval.strata if s.point == (0,))
    z, w = SmoothPolynomial.variable(2, 0), SmoothPolynomial.variable(2, 1)
    assert e_S(1 + z + w + z * w, left, interval) == 1 + z


def test_unknown_strata_are_rejected():
    with pytest.raises(NotAStratum):
        e_S(Z1, 9, PLANE)
    with pytest.raises(NotAStratum):
        e_S(Z1, SPACE.strata[1], PLANE)
    with pytest.raises(InvalidInput):
        e_S(SmoothPolynomial.variable(3, 0), 1, PLANE)


def test_differences():
    f = 1 + 2 * Z1 + 3 * Z2 + 5 * Z1 * Z2 + Z1 ** 2
    I = [ON_X1_AXIS, ON_X2_AXIS]
    expected = f - e_S(f, ON_X2_AXIS, PLANE) - e_S(f, ON_X1_AXIS, PLANE) + e_S(f, INTERIOR, PLANE)
    assert delta_I(f, I, PLANE) == expected == 5 * Z1 * Z2
    assert delta_I(Z1 * Z2, I, PLANE) == Z1 * Z2
    assert delta_I(SmoothPolynomial.constant(2, 4), [INTERIOR], PLANE).is_zero
    assert delta_I(f, [], PLANE) == f


def test_weights():
    assert weight_w_I([ON_X1_AXIS], PLANE).describe() == "|z1|"
    assert weight_w_I([ON_X1_AXIS, ON_X2_AXIS], PLANE).describe() == "|z1z2|"
    assert weight_w_I([INTERIOR], PLANE).describe() == "|z1|+|z2|"
    assert weight_w_I([ORIGIN], PLANE).is_zero
    assert weight_w_I([], PLANE).generators == ((0, 0),)
    Z = np.array([[3 + 4j, 1j]])
    assert weight_w_I([INTERIOR], PLANE)(Z)[0] == pytest.approx(6)


def test_weight_on_a_wedge():
    wedge = Chart(AffinePolytope(2, [(0, (1, 0)), (0, (1, 2))]))
    inner = next(s for s in wedge.strata if s.dimension == 2)
    # Every basis monomial vanishes on the interior; each is a generator.
    assert weight_w_I([inner], wedge) == Weight(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def test_vector_fields():
    f = 2 * Z1 ** 2 * Z2 + SmoothPolynomial.variable(2, 0, conjugate=True)
    assert standard_fields(PLANE) == [(0, "re"), (0, "im"), (1, "re"), (1, "im")]
    assert apply_field(f, (0, "re"), PLANE) == 4 * Z1 ** 2 * Z2 + \
        SmoothPolynomial.variable(2, 0, conjugate=True)
    i = SmoothPolynomial.constant(2, GaussianRational(0, 1))
    assert apply_field(f, (0, "im"), PLANE) == i * (4 * Z1 ** 2 * Z2) - \
        i * SmoothPolynomial.variable(2, 0, conjugate=True)


def test_field_derivatives_match_black_box():
    f = 3 * Z1 ** 2 * Z2 + Z2 * SmoothPolynomial.variable(2, 0, conjugate=True) + Z1
    box = BlackBox(f, 2)
    Z = random_points(2)
    for field in standard_fields(PLANE):
        exact = apply_field(f, field, PLANE)(Z)
        approx = apply_field(box, field, PLANE, step=1e-5)(Z)
        assert np.allclose(exact, approx, atol=1e-6)


def test_black_box_operators_match_polynomials():
    f = 1 + 2 * Z1 - Z2 + 7 * Z1 * Z2 ** 2
    box = BlackBox(f, 2)
    Z = random_points(2)
    for I in ([ON_X1_AXIS], [ON_X1_AXIS, ON_X2_AXIS], [INTERIOR, ON_X2_AXIS]):
        assert np.allclose(delta_I(box, I, PLANE)(Z), delta_I(f, I, PLANE)(Z))
        assert np.allclose(e_I(box, I, PLANE)(Z), e_I(f, I, PLANE)(Z))


def test_sampling():
    pts = sample_points(PLANE, Region.polydisc(2), 2)
    assert np.all(np.abs(pts) <= 1 + 1e-12)
    assert np.any(np.all(pts == 0, axis=1))
    with pytest.raises(EmptyRegion):
        sample_points(PLANE, Region((0, 1)), 2)
    with pytest.raises(InvalidInput):
        sample_points(PLANE, Region.polydisc(3), 2)


def test_seminorm_examples():
    line = Chart(AffinePolytope.quadrant(1))
    z = SmoothPolynomial.variable(1, 0)
    assert seminorm_estimate(z, 0, Fraction(1, 2), line, Region.polydisc(1)).value == \
        pytest.approx(1)
    est = seminorm_estimate(Z1 * Z2, 2, Fraction(1, 2), PLANE, Region.polydisc(2))
    assert np.isfinite(est.value)
    # |z1 z2| / |z1 z2|^(1/2) peaks at 1; over (|z1| + |z2|)^(1/2) it peaks at 2^(-1/2).
    assert est.per_I["[{0},{1}]"] == pytest.approx(1)
    assert est.per_I["[{}]"] == pytest.approx(2 ** -0.5)
    const = SmoothPolynomial.constant(2, 3)
    for k in (0, 1, 2):
        assert seminorm_estimate(const, k, 0.25, PLANE, Region.polydisc(2)).value == \
            pytest.approx(3)


def test_seminorm_of_black_box_matches_polynomial():
    f = Z1 ** 2 + 2 * Z1 * Z2
    a = seminorm_estimate(f, 1, Fraction(1, 3), PLANE, Region.polydisc(2)).value
    b = seminorm_estimate(BlackBox(f, 2), 1, Fraction(1, 3), PLANE, Region.polydisc(2)).value
    assert a == pytest.approx(b, rel=1e-4)


def test_bad_delta():
    for d in (0, 1, Fraction(3, 2), "x"):
        with pytest.raises(BadDelta):
            seminorm_estimate(Z1, 1, d, PLANE, Region.polydisc(2))


def test_delta_bounds():
    region = Region.polydisc(2)
    b = verify_delta_bound(Z1 ** 2, [ON_X1_AXIS], PLANE, region)
    assert b.finite and b.stable and 0.99 <= b.fine <= 1 + 1e-9
    assert verify_delta_bound(Z2, [ON_X1_AXIS], PLANE, region).fine == 0
    pair = verify_delta_bound(Z1 * Z2, [ON_X1_AXIS, ON_X2_AXIS], PLANE, region)
    assert pair.fine == pytest.approx(1) and pair.stable
    grids = (DeltaGrid(PLANE, region, 2), DeltaGrid(PLANE, region, 4))
    shared = delta_bounds(Z1 ** 2, [[ON_X1_AXIS], [INTERIOR]], PLANE, region, grids=grids)
    assert shared[0] == b


coeffs = st.integers(-4, 4)


@st.composite
def cubic_polynomials(draw, n):
    exps = draw(st.lists(st.lists(st.integers(0, 3), min_size=n, max_size=n)
                         .filter(lambda e: sum(e) <= 3), min_size=1, max_size=5))
    cs = draw(st.lists(coeffs, min_size=len(exps), max_size=len(exps)))
    return SmoothPolynomial(n, [((tuple(e), (0,) * n), c) for e, c in zip(exps, cs)])


def _collection_strategy(chart):
    return st.lists(st.sampled_from(range(len(chart.strata))), max_size=3, unique=True)


@given(cubic_polynomials(3), cubic_polynomials(3), _collection_strategy(SPACE),
       st.sampled_from(range(8)), st.sampled_from(range(8)))
def test_operator_identities(f, g, idx, i, j):
    chart = SPACE
    I = [chart.strata[k] for k in idx]
    Si, Sj = chart.strata[i], chart.strata[j]
    assert e_S(e_S(f, Si, chart), Si, chart) == e_S(f, Si, chart)
    assert e_S(e_S(f, Si, chart), Sj, chart) == e_S(f, chart.P.join(Si, Sj), chart)
    for S in I:
        assert e_S(delta_I(f, I, chart), S, chart).is_zero
    lhs = delta_I(f * g, I, chart)
    rhs = SmoothPolynomial(3)
    for sub in subsets(I):
        rest = [S for S in I if S not in sub]
        rhs = rhs + e_I(delta_I(f, rest, chart), list(sub), chart) * delta_I(g, list(sub), chart)
    assert lhs == rhs
    alternating = SmoothPolynomial(3)
    for sub in subsets(I):
        alternating = alternating + (-1) ** len(sub) * e_I(f, list(sub), chart)
    assert delta_I(f, I, chart) == alternating


@given(_collection_strategy(SPACE))
def test_weight_generators_vanish_on_each_stratum(idx):
    I = [SPACE.strata[k] for k in idx]
    W = weight_w_I(I, SPACE)
    for g in W.generators:
        for S in I:
            assert any(g[t] for t in vanishing_set(S, SPACE))
    if I and all(vanishing_set(S, SPACE) for S in I):
        assert not W.is_zero
