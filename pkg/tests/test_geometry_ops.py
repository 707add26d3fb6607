from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from tropex.errors import (
    IncompatibleOnSharedFace, InvalidConfiguration, InvalidInput, InvalidSubdivision,
    MissingLatticePoint, NotAFan, NotConvexLift, NotTransverse, NotUnimodular,
)
from tropex.geometry_ops import (
    AffineMap, NCConfiguration, explode_ncd, explode_toric, family_fiber, fan_from_cones,
    make_family, pants_census, refine, simplex_points, standard_lift, tropical_fiber_product,
    validate_fan,
)
from tropex.lattice_affine import (
    AffinePolytope, IntMatrix, PolyhedralComplex, Polyhedron, fan_rays,
)
from tropex.troppoly import corner_locus, is_balanced

F = Fraction
CP2_RAYS = [(1, 0), (0, 1), (-1, -1)]
CP2_CONES = [(0, 1), (1, 2), (0, 2)]


def nc(divisors, strata, components=("X",)):
    return NCConfiguration.from_json({
        "components": list(components), "divisors": list(divisors),
        "strata": [{"divisors": s, "component": "X"} for s in strata]})


def test_explode_single_divisor():
    cx = explode_ncd(nc(["D"], [[], ["D"]]))
    assert [c.dimension for c in cx.cells] == [0, 1]
    assert cx.cells[1].rays == [(1,)]


def test_explode_two_divisors():
    cx = explode_ncd(nc(["D", "E"], [[], ["D"], ["E"], ["D", "E"]]))
    assert sorted(c.dimension for c in cx.cells) == [0, 1, 1, 2]
    assert cx.cells[-1] == AffinePolytope.quadrant(2).closure
    assert len(cx.incidences) == 5 and cx.is_consistent()


def test_explode_triple_point():
    strata = [[], ["A"], ["B"], ["C"], ["A", "B"], ["A", "C"], ["B", "C"], ["A", "B", "C"]]
    cx = explode_ncd(nc(["A", "B", "C"], strata))
    assert len(cx.cells) == 8 and cx.dimension == 3 and len(cx.incidences) == 19
    assert cx.is_consistent()


def test_counted_intersections():
    data = {"components": ["X"], "divisors": ["D", "E"], "strata": [
        {"divisors": [], "component": "X"}, {"divisors": ["D"], "component": "X"},
        {"divisors": ["E"], "component": "X"},
        {"divisors": ["D", "E"], "component": "X", "count": 2}]}
    cx = explode_ncd(NCConfiguration.from_json(data))
    assert len(cx.cells_of_dim(2)) == 2


def test_invalid_configurations():
    with pytest.raises(InvalidConfiguration):
        explode_ncd(nc(["D", "E"], [[], ["D"], ["D", "E"]]))
    with pytest.raises(InvalidConfiguration):
        explode_ncd(nc(["D"], [["D"]]))
    with pytest.raises(InvalidInput):
        NCConfiguration.from_json({"components": []})


def test_toric_fans():
    fan = fan_from_cones(CP2_RAYS, CP2_CONES, 2)
    assert fan_rays(explode_toric(fan)) == sorted(CP2_RAYS)
    triangle = AffinePolytope(2, [(0, (-1, 0)), (0, (0, -1)), (1, (1, 1))])
    assert len(explode_toric(fan, triangle).cells) == len(fan.cells)
    with pytest.raises(NotAFan):
        explode_toric(fan, AffinePolytope.box([0, 0], [1, 1]))
    square = fan_from_cones([(1, 0), (0, 1), (-1, 0), (0, -1)],
                            [(0, 1), (1, 2), (2, 3), (3, 0)], 2)
    assert fan_rays(explode_toric(square)) == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_overlapping_cones_are_not_a_fan():
    with pytest.raises(NotAFan):
        validate_fan(fan_from_cones([(1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2)], 2))


def test_refine_plane_into_fan():
    plane = PolyhedralComplex([Polyhedron.whole_space(2)])
    cones = [Polyhedron.from_vrep(2, [(0, 0)], [CP2_RAYS[i] for i in c]) for c in CP2_CONES]
    refined = refine(plane, {0: cones})
    assert len(refined.cells) == 7
    assert sorted(c.dimension for c in refined.cells) == [0, 1, 1, 1, 2, 2, 2]


def test_refine_interval():
    seg = PolyhedralComplex.from_maximal([AffinePolytope.box([0], [2]).closure])
    assert refine(seg, {}).key() == seg.key()
    halves = [AffinePolytope.box([0], [1]), AffinePolytope.box([1], [2])]
    top = next(i for i, c in enumerate(seg.cells) if c.dimension == 1)
    assert len(refine(seg, {top: halves}).cells) == 5
    vertex = next(i for i, c in enumerate(seg.cells) if c.dimension == 0)
    with pytest.raises(InvalidSubdivision):
        refine(seg, {vertex: halves})
    with pytest.raises(InvalidSubdivision):
        refine(seg, {top: [AffinePolytope.box([0], [F(3, 2)]), AffinePolytope.box([1], [2])]})


def test_refine_incompatible_on_shared_face():
    square = lambda x0: AffinePolytope.box([x0, 0], [x0 + 1, 1]).closure  # noqa: E731
    cx = PolyhedralComplex.from_maximal([square(0), square(1)])
    idx = {c.key(): i for i, c in enumerate(cx.cells)}
    left = [AffinePolytope.box([0, 0], [1, F(1, 2)]), AffinePolytope.box([0, F(1, 2)], [1, 1])]
    with pytest.raises(IncompatibleOnSharedFace):
        refine(cx, {idx[square(0).key()]: left})
    right = [AffinePolytope.box([1, 0], [2, F(1, 2)]), AffinePolytope.box([1, F(1, 2)], [2, 1])]
    both = refine(cx, {idx[square(0).key()]: left, idx[square(1).key()]: right})
    assert len(both.cells_of_dim(2)) == 4


def test_fiber_products():
    double = AffineMap.linear([[2]], 1)
    point = AffineMap(IntMatrix([[]], ncols=0), (0,))
    fp = tropical_fiber_product(double, point)
    assert (fp.multiplicity, fp.z_transverse, fp.dimension) == (2, False, 0)
    assert fp.polytope.vertices == [(0,)]
    ident = AffineMap.linear([[1]], 1)
    fp = tropical_fiber_product(ident, ident)
    assert (fp.multiplicity, fp.z_transverse, fp.dimension) == (1, True, 1)
    assert fp.polytope.lineality in ([(1, 1)], [(-1, -1)])
    fp = tropical_fiber_product(AffineMap.linear([[1, 1]], 2), point)
    assert (fp.multiplicity, fp.z_transverse) == (1, True)
    assert fp.polytope.lineality in ([(1, -1)], [(-1, 1)])
    with pytest.raises(NotTransverse):
        tropical_fiber_product(AffineMap.linear([[0]], 1), point)


def test_fiber_product_with_domains_and_offsets():
    f = AffineMap(IntMatrix([[1]]), (F(1, 2),), AffinePolytope.quadrant(1))
    g = AffineMap(IntMatrix([[3]]), (0,), AffinePolytope.quadrant(1))
    fp = tropical_fiber_product(f, g)
    assert fp.multiplicity == 1 and fp.polytope.rays == [(3, 1)]
    assert fp.polytope.contains((F(5, 2), 1)) and not fp.polytope.contains((0, 0))


def test_family_validation():
    make_family(simplex_points(1))
    fam = make_family(simplex_points(2), v=standard_lift(simplex_points(2)))
    assert len(fam.cells) == 4
    with pytest.raises(MissingLatticePoint):
        make_family([(0, 0), (2, 0)])
    with pytest.raises(InvalidInput):
        make_family([(0, 0), (1, 0)])
    with pytest.raises(NotUnimodular):
        make_family(simplex_points(2))
    with pytest.raises(NotConvexLift):
        make_family(simplex_points(2), v=[0, 1, 4, 10, 3, 4])


def test_fibers_of_families():
    line = make_family(simplex_points(1))
    for w in (0, 1, 5):
        assert len(family_fiber(line, w).top_cells) == 3
    fam = make_family(simplex_points(2), v=standard_lift(simplex_points(2)))
    flat = family_fiber(fam, 0)
    assert flat.same_as(corner_locus(fam.polynomial(0)))
    assert [c.weight for c in flat.top_cells] == [2, 2, 2]
    assert pants_census(fam) == pants_census(fam, F(1, 3))
    with pytest.raises(InvalidInput):
        pants_census(fam, 0)


@pytest.mark.parametrize("d,expected", [(1, (1, 0, 3, 1)), (2, (4, 3, 6, 4)), (3, (9, 9, 9, 9))])
def test_pants_census(d, expected):
    pts = simplex_points(d)
    census = pants_census(make_family(pts, v=standard_lift(pts)))
    assert (census.vertices, census.edges, census.rays, census.pants) == expected


@given(st.integers(1, 3), st.integers(1, 4), st.lists(st.integers(-3, 3).filter(bool),
                                                       min_size=10, max_size=10))
def test_positive_fibers_are_balanced(d, w, coeffs):
    pts = simplex_points(d)
    fam = make_family(pts, coeffs[:len(pts)], standard_lift(pts))
    fiber = family_fiber(fam, w)
    assert is_balanced(fiber)
    assert len(fiber.cells_of_dim(0)) == d * d


@given(st.lists(st.integers(-4, 4), min_size=2, max_size=2),
       st.lists(st.integers(-4, 4), min_size=2, max_size=2))
def test_fiber_product_multiplicity_counts_cosets(a, b):
    # f(x) = a.x and g(y) = b.y into R: multiplicity is gcd of all entries.
    if not any(a + b):
        with pytest.raises(NotTransverse):
            tropical_fiber_product(AffineMap.linear([a], 2), AffineMap.linear([b], 2))
        return
    fp = tropical_fiber_product(AffineMap.linear([a], 2), AffineMap.linear([b], 2))
    g = 0
    for x in a + b:
        g = gcd(g, x)
    assert fp.multiplicity == g and fp.z_transverse == (g == 1)
    assert fp.dimension == 3
