from fractions import Fraction
from itertools import combinations, product
from math import factorial

import pytest
import sympy
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull, QhullError

from toricmirror import fan as fans
from toricmirror import polytope
from toricmirror.errors import DimensionMismatch, NotFullDimensional, NotReflexive, OriginNotInterior, Unbounded
from toricmirror.fan import Fan
from toricmirror.polytope import LatticePolytope

REFLEXIVE_TRIANGLE = LatticePolytope.hull([(-1, -1), (2, -1), (-1, 2)])
UNIT_TRIANGLE = LatticePolytope.hull([(0, 0), (1, 0), (0, 1)])


def exact_volume(points):
    """Euclidean volume: qhull supplies a triangulation of the boundary, determinants are exact."""
    pts = sorted(set(tuple(Fraction(x) for x in p) for p in points))
    dim = len(pts[0])
    base = pts[0]
    if sympy.Matrix([[x - y for x, y in zip(p, base)] for p in pts[1:]] or [[0] * dim]).rank() < dim:
        return Fraction(0)
    if dim == 1:
        return max(p[0] for p in pts) - min(p[0] for p in pts)
    hull = ConvexHull([[float(x) for x in p] for p in pts])
    centre = [sum(p[i] for p in pts) / len(pts) for i in range(dim)]
    total = Fraction(0)
    for simplex in hull.simplices:
        rows = [[pts[k][i] - centre[i] for i in range(dim)] for k in simplex]
        total += abs(Fraction(str(sympy.Matrix(rows).det())))
    return total / factorial(dim)


def minkowski(a, b):
    return [tuple(x + y for x, y in zip(p, q)) for p in a for q in b]


def mixed_volume_oracle(sets):
    n = len(sets)
    total = Fraction(0)
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            pts = sets[subset[0]]
            for i in subset[1:]:
                pts = minkowski(pts, sets[i])
            total += (-1) ** (n - k) * exact_volume(pts)
    return total


def points(dim, size=4, bound=3):
    return st.lists(st.tuples(*[st.integers(-bound, bound)] * dim), min_size=1, max_size=size)


def polytopes_with_interior_origin():
    def build(args):
        dim, extra = args
        base = []
        for i in range(dim):
            e = [0] * dim
            e[i] = 1
            base.append(tuple(e))
        base.append(tuple(-1 for _ in range(dim)))
        return LatticePolytope.hull(base + extra)

    return st.integers(2, 4).flatmap(
        lambda d: st.tuples(st.just(d), st.lists(st.tuples(*[st.integers(-2, 2)] * d), max_size=3))).map(build)


# facets and lattice points ---------------------------------------------------

def test_facets_unit_triangle():
    got = {(f.normal, f.offset) for f in polytope.facets(UNIT_TRIANGLE)}
    assert got == {((1, 0), 0), ((0, 1), 0), ((-1, -1), 1)}


def test_facets_reflexive_triangle():
    got = {(f.normal, f.offset) for f in polytope.facets(REFLEXIVE_TRIANGLE)}
    assert got == {((0, 1), 1), ((-1, -1), 1), ((1, 0), 1)}


def test_facets_segment_and_errors():
    got = {(f.normal, f.offset) for f in polytope.facets(LatticePolytope.hull([(0,), (1,)]))}
    assert got == {((1,), 0), ((-1,), 1)}
    with pytest.raises(NotFullDimensional):
        polytope.facets(LatticePolytope.hull([(0, 0), (1, 1)]))


def test_lattice_points():
    assert len(polytope.lattice_points(UNIT_TRIANGLE)) == 3
    assert len(polytope.lattice_points(REFLEXIVE_TRIANGLE)) == 10
    assert polytope.interior_lattice_points(REFLEXIVE_TRIANGLE) == [(0, 0)]


def quintic_polytopes():
    delta = polytope.divisor_polytope(fans.projective_space(4), [1] * 5)
    return delta, polytope.polar_dual(delta)


def test_quintic_dual_points():
    delta, dual = quintic_polytopes()
    expected = {(0, 0, 0, 0), (-1, -1, -1, -1), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)}
    assert set(polytope.lattice_points(dual)) == expected
    assert sorted(dual.vertices) == sorted(fans.projective_space(4).rays)
    assert len(polytope.lattice_points(delta)) == 126


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 3).flatmap(lambda d: points(d, size=6)))
def test_lattice_points_agree_with_facets(pts):
    p = LatticePolytope.hull(pts)
    assume(p.is_full_dimensional)
    ineqs = polytope.facets(p)
    dim = p.dim
    lo = [min(v[i] for v in pts) for i in range(dim)]
    hi = [max(v[i] for v in pts) for i in range(dim)]
    brute = [pt for pt in product(*[range(a, b + 1) for a, b in zip(lo, hi)])
             if all(sum(n * x for n, x in zip(f.normal, pt)) >= -f.offset for f in ineqs)]
    assert polytope.lattice_points(p) == brute
    for f in ineqs:
        on = [v for v in p.vertices if sum(n * x for n, x in zip(f.normal, v)) == -f.offset]
        assert sympy.Matrix([[a - b for a, b in zip(v, on[0])] for v in on]).rank() == dim - 1


# duality and reflexivity -----------------------------------------------------

def test_polar_dual_examples():
    assert polytope.same_polytope(polytope.polar_dual(REFLEXIVE_TRIANGLE),
                                  LatticePolytope.hull([(1, 0), (0, 1), (-1, -1)]))
    seg = LatticePolytope.hull([(-1,), (1,)])
    assert polytope.same_polytope(polytope.polar_dual(seg), seg)
    with pytest.raises(OriginNotInterior):
        polytope.polar_dual(UNIT_TRIANGLE)


def test_reflexivity_examples():
    assert polytope.is_reflexive(REFLEXIVE_TRIANGLE)
    assert not polytope.is_reflexive(UNIT_TRIANGLE)
    assert not polytope.is_reflexive(LatticePolytope.hull([(-1, -1), (3, -1), (-1, 3)]))


@settings(max_examples=50, deadline=None)
@given(polytopes_with_interior_origin())
def test_polar_duality_is_an_involution(p):
    dual = polytope.polar_dual(p)
    assert polytope.same_polytope(polytope.polar_dual(dual), p)
    assert polytope.is_reflexive(p) == (dual.is_lattice and polytope.is_reflexive(dual))
    if polytope.is_reflexive(p):
        assert polytope.interior_lattice_points(p) == [tuple([0] * p.dim)]


# normal fans and divisor polytopes -------------------------------------------

def test_normal_fan_unit_triangle_is_p2():
    assert fans.fans_equal_up_to_reordering(polytope.normal_fan(UNIT_TRIANGLE), fans.projective_space(2))


def test_normal_fan_cut_corner():
    p = LatticePolytope.hull([(0, 0), (4, 0), (2, 2), (0, 2)])
    got = polytope.normal_fan(p)
    assert fans.fans_equal_up_to_reordering(got, fans.hirzebruch(1))
    assert not fans.fans_equal_up_to_reordering(got, fans.hirzebruch(2))


def test_normal_fan_diamond():
    p = LatticePolytope.hull([(1, 0), (-1, 0), (0, 1), (0, -1)])
    assert set(polytope.normal_fan(p).rays) == {(1, 1), (1, -1), (-1, 1), (-1, -1)}


@pytest.mark.parametrize("d, vertices", [
    ((1, 0, 0), [(-1, 0), (0, 0), (-1, 1)]),
    ((1, 1, 1), [(-1, -1), (2, -1), (-1, 2)]),
    ((0, 0, 1), [(0, 0), (1, 0), (0, 1)]),
    ((0, 1, 0), [(0, 0), (0, -1), (1, -1)]),
])
def test_divisor_polytopes_p2(d, vertices):
    got = polytope.divisor_polytope(fans.projective_space(2), d)
    assert polytope.same_polytope(got, LatticePolytope.hull(vertices))


def test_divisor_polytope_shift_of_simplex():
    # the three P^2 divisors D_rho give translates of the unit simplex (linear equivalence)
    f = fans.projective_space(2)
    for d in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        got = polytope.divisor_polytope(f, d)
        assert polytope.normalized_volume(got) == 1


def test_divisor_polytope_unbounded():
    with pytest.raises(Unbounded):
        polytope.divisor_polytope(fans.affine_space(2), (1, 1))


@pytest.mark.parametrize("f, d", [
    (fans.projective_space(2), (1, 1, 1)),
    (fans.projective_space(3), (1, 2, 1, 1)),
    (fans.hirzebruch(1), (1, 1, 1, 1)),
    (fans.hirzebruch(2), (1, 3, 1, 1)),
])
def test_normal_fan_of_ample_divisor_polytope(f, d):
    assert fans.fans_equal_up_to_reordering(polytope.normal_fan(polytope.divisor_polytope(f, d)), f)


# Gorenstein weighted projective spaces ---------------------------------------

@pytest.mark.parametrize("weights, expected", [
    ((1, 1, 1, 1, 1), {"gorenstein": True, "degree": 5, "fermat_exponents": [5, 5, 5, 5, 5]}),
    ((1, 2, 2), {"gorenstein": False, "degree": 5}),
    ((1, 1, 2), {"gorenstein": True, "degree": 4, "fermat_exponents": [4, 4, 2]}),
])
def test_gorenstein(weights, expected):
    assert polytope.wps_gorenstein(weights) == expected


# Batyrev data ----------------------------------------------------------------

def test_batyrev_reflexive_triangle():
    data = polytope.batyrev_mirror_data(REFLEXIVE_TRIANGLE)
    assert data["monomial_count"] == 9 and data["dual_ray_count"] == 9
    dual_verts = set(data["dual"].vertices)
    for c in data["correspondence"]:
        # exponents are the values <m, v> + 1 over the vertices of the dual polygon
        assert sorted(c["monomial"]) == sorted(sum(a * b for a, b in zip(c["point"], v)) + 1 for v in dual_verts)


def test_batyrev_quintic_dual_and_segment():
    _, dual = quintic_polytopes()
    data = polytope.batyrev_mirror_data(dual)
    assert (data["monomial_count"], data["dual_ray_count"]) == (5, 5)
    assert {tuple(c["ray"]) for c in data["correspondence"]} == set(fans.projective_space(4).rays)
    seg = polytope.batyrev_mirror_data(LatticePolytope.hull([(-1,), (1,)]))
    assert (seg["monomial_count"], seg["dual_ray_count"]) == (2, 2)
    with pytest.raises(NotReflexive):
        polytope.batyrev_mirror_data(UNIT_TRIANGLE)


# mixed volumes ---------------------------------------------------------------

def test_mixed_volume_examples():
    simplex = [(0, 0), (1, 0), (0, 1)]
    assert polytope.mixed_volume([simplex, simplex]) == 1
    assert polytope.mixed_volume([[(1, 0), (-1, -1)], [(0, 1), (-1, -1)]]) == 3
    assert polytope.mixed_volume([[(0, 0), (1, 0), (0, 1), (1, 1)], simplex]) == 2
    with pytest.raises(DimensionMismatch):
        polytope.mixed_volume([simplex])


def test_mixed_volume_of_identical_polytopes_is_normalized_volume():
    p = [(0, 0, 0), (2, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 1)]
    assert polytope.mixed_volume([p, p, p]) == 6 * exact_volume(p)


mixed_instances = st.integers(1, 3).flatmap(lambda d: st.lists(points(d, size=4, bound=2), min_size=d, max_size=d))


@settings(max_examples=100, deadline=None)
@given(mixed_instances)
def test_mixed_volume_matches_oracle(sets):
    try:
        expected = mixed_volume_oracle(sets)
    except QhullError:
        assume(False)
    assert polytope.mixed_volume(sets) == expected


@settings(max_examples=100, deadline=None)
@given(mixed_instances, st.randoms(use_true_random=False))
def test_mixed_volume_symmetric(sets, rng):
    shuffled = list(sets)
    rng.shuffle(shuffled)
    assert polytope.mixed_volume(shuffled) == polytope.mixed_volume(sets)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3).flatmap(lambda d: st.tuples(st.lists(points(d, size=3, bound=2), min_size=d + 1,
                                                              max_size=d + 1))))
def test_mixed_volume_multilinear(args):
    (sets,) = args
    first, second, rest = sets[0], sets[1], sets[2:]
    total = polytope.mixed_volume([minkowski(first, second)] + rest)
    assert total == polytope.mixed_volume([first] + rest) + polytope.mixed_volume([second] + rest)


def test_lattice_equivalence():
    a = LatticePolytope.hull([(0, 0), (1, 0), (0, 1)])
    b = LatticePolytope.hull([(0, 0), (1, 0), (1, 1)])
    c = LatticePolytope.hull([(0, 0), (2, 0), (0, 1)])
    assert polytope.lattice_equivalent(a, b)
    assert not polytope.lattice_equivalent(a, c)


def test_json_round_trip():
    obj = {"dim": 2, "vertices": [[-1, -1], [2, -1], [-1, 2]]}
    p = LatticePolytope.from_json(obj)
    assert LatticePolytope.from_json(p.to_json()) == p
    with pytest.raises(DimensionMismatch):
        LatticePolytope.from_json({"dim": 3, "vertices": [[0, 0], [1, 0]]})


def test_wps_fans_are_normal_fans():
    f = fans.weighted_projective_space((1, 1, 2))
    assert fans.classify_fan(f)["complete"]
    got = polytope.normal_fan(polytope.divisor_polytope(f, (1, 1, 2)))
    assert fans.fans_equal_up_to_reordering(got, f)


def test_fan_with_rational_rays_rejected():
    with pytest.raises(Exception):
        Fan(2, [("1/2", 0)], [(0,)])
