"""Lattice polytopes: facets, lattice points, polar duality and mixed volumes."""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, permutations, product

from . import linalg
from .errors import DimensionMismatch, NotFullDimensional, NotReflexive, OriginNotInterior
from .fan import Fan
from .polyhedra import Hull, affine_rank, euclidean_volume, in_cone, minkowski_sum, prune, vertices_from_inequalities


def _clean(x):
    x = linalg.as_fraction(x)
    return int(x) if x.denominator == 1 else x


def _json_number(x):
    x = linalg.as_fraction(x)
    return int(x) if x.denominator == 1 else linalg.format_rational(x)


@dataclass(frozen=True)
class LatticePolytope:
    """Convex hull of finitely many points; ``vertices`` is irredundant and lex sorted."""

    dim: int
    vertices: tuple

    @classmethod
    def hull(cls, points):
        pts = [tuple(linalg.as_fraction(x) for x in p) for p in points]
        if not pts:
            raise ValueError("empty polytope")
        dim = len(pts[0])
        verts = prune(pts)
        return cls(dim, tuple(tuple(_clean(x) for x in v) for v in verts))

    @classmethod
    def from_json(cls, obj):
        pts = obj["vertices"]
        poly = cls.hull(pts)
        if "dim" in obj and int(obj["dim"]) != poly.dim:
            raise DimensionMismatch("declared dim does not match vertex length")
        return poly

    def to_json(self):
        return {"dim": self.dim, "vertices": [[_json_number(x) for x in v] for v in self.vertices]}

    @property
    def is_full_dimensional(self):
        return affine_rank(self.vertices) == self.dim

    @property
    def is_lattice(self):
        return all(isinstance(x, int) for v in self.vertices for x in v)


@dataclass(frozen=True)
class FacetInequality:
    """normal . m >= -offset, with primitive inward normal."""

    normal: tuple
    offset: object

    def to_json(self):
        return {"normal": list(self.normal), "offset": _json_number(self.offset)}


@lru_cache(maxsize=512)
def _hull(vertices):
    return Hull(vertices)


def hull_of(p):
    if not p.is_full_dimensional:
        raise NotFullDimensional("polytope is not full-dimensional")
    return _hull(p.vertices)


def facets(p):
    h = hull_of(p)
    return [FacetInequality(n, _clean(a)) for n, a in h.facets]


def contains(p, point):
    if p.is_full_dimensional:
        return hull_of(p).contains(point)
    return in_cone(tuple(point) + (1,), [tuple(v) + (1,) for v in p.vertices])


def lattice_points(p):
    lo = [min(v[i] for v in p.vertices) for i in range(p.dim)]
    hi = [max(v[i] for v in p.vertices) for i in range(p.dim)]
    ranges = [range(_ceil(a), _floor(b) + 1) for a, b in zip(lo, hi)]
    return [pt for pt in product(*ranges) if contains(p, pt)]


def _ceil(x):
    x = linalg.as_fraction(x)
    return -((-x.numerator) // x.denominator)


def _floor(x):
    x = linalg.as_fraction(x)
    return x.numerator // x.denominator


def interior_lattice_points(p):
    h = hull_of(p)
    return [pt for pt in lattice_points(p) if h.interior_contains(pt)]


def polar_dual(p):
    h = hull_of(p)
    if any(a <= 0 for _, a in h.facets):
        raise OriginNotInterior("the origin is not an interior point")
    # facet n.m >= -a gives the dual vertex n/a
    return LatticePolytope.hull([tuple(Fraction(x) / a for x in n) for n, a in h.facets])


def is_reflexive(p):
    if not p.is_full_dimensional or not p.is_lattice:
        return False
    h = hull_of(p)
    return all(a == 1 for _, a in h.facets)


def normal_fan(p):
    h = hull_of(p)
    rays = [n for n, _ in h.facets]
    cones = []
    for v in range(len(h.vertices)):
        cones.append(tuple(f for f, inc in enumerate(h.incidence) if v in inc))
    return Fan(p.dim, rays, cones)


def divisor_polytope(f, d):
    """{m : <m, v_rho> >= -a_rho for every ray}."""
    if len(d) != len(f.rays):
        raise ValueError("divisor length must equal the number of rays")
    verts = vertices_from_inequalities(f.rays, [linalg.as_fraction(a) for a in d])
    if verts is None:
        raise ValueError("divisor polytope is empty")
    return LatticePolytope.hull(verts)


def wps_gorenstein(weights):
    c = [int(x) for x in weights]
    if any(x <= 0 for x in c) or linalg.vector_gcd(c) != 1:
        raise ValueError("weights must be positive with gcd 1")
    total = sum(c)
    ok = all(total % x == 0 for x in c)
    out = {"gorenstein": ok, "degree": total}
    if ok:
        out["fermat_exponents"] = [total // x for x in c]
    return out


def point_monomial(p, point):
    """Exponents <point, n_F> + a_F over the facets of p (coordinates of the dual side)."""
    h = hull_of(p)
    return tuple(_clean(linalg.dot(n, point) + a) for n, a in h.facets)


def batyrev_mirror_data(delta):
    if not is_reflexive(delta):
        raise NotReflexive("polytope is not reflexive")
    h = hull_of(delta)
    dual = polar_dual(delta)
    pts = [pt for pt in lattice_points(delta) if any(pt)]
    corr = []
    for pt in pts:
        on = [f for f, (n, a) in enumerate(h.facets) if linalg.dot(n, pt) == -a]
        face = frozenset(range(len(h.vertices)))
        for f in on:
            face &= h.incidence[f]
        corr.append({
            "point": list(pt),
            "ray": list(linalg.primitive(pt)),
            "face": sorted(face),
            "face_dim": h.face_dim(face),
            "is_vertex": tuple(Fraction(x) for x in pt) in h.vertices,
            "monomial": list(point_monomial(delta, pt)),
        })
    rays = {tuple(c["ray"]) for c in corr}
    return {"dual": dual, "monomial_count": len(pts), "dual_ray_count": len(rays),
            "correspondence": corr}


# ---------------------------------------------------------------------------
# volumes

def normalized_volume(p):
    """dim! times the Euclidean volume (0 for lower-dimensional polytopes)."""
    if not p.is_full_dimensional:
        return 0
    return _clean(hull_of(p).normalized_volume())


def _point_set(poly):
    if isinstance(poly, LatticePolytope):
        return [tuple(linalg.as_fraction(x) for x in v) for v in poly.vertices]
    return [tuple(linalg.as_fraction(x) for x in v) for v in poly]


def mixed_volume(polytopes):
    """Normalized mixed volume with MV(P, ..., P) = n! vol(P).

    Segments-only input is evaluated as |det| of the edge vectors in any
    dimension; otherwise inclusion-exclusion over Minkowski sums (n <= 4).
    """
    sets = [prune(_point_set(p)) for p in polytopes]
    n = len(sets)
    if n == 0:
        return 1
    if any(len(s[0]) != n for s in sets):
        raise DimensionMismatch("need exactly n polytopes in R^n")
    if any(len(s) == 1 for s in sets):
        return 0
    if all(len(s) == 2 for s in sets):
        return abs(_clean(linalg.determinant([[x - y for x, y in zip(s[1], s[0])] for s in sets])))
    if n > 4:
        raise DimensionMismatch("inclusion-exclusion mixed volume is limited to n <= 4")
    return mixed_volume_inclusion_exclusion(sets)


def mixed_volume_inclusion_exclusion(sets):
    n = len(sets)
    sums = {(): None}
    total = Fraction(0)
    for k in range(1, n + 1):
        for subset in combinations(range(n), k):
            prev = sums.get(subset[:-1])
            last = sets[subset[-1]]
            pts = last if prev is None else minkowski_sum([prev, last])
            sums[subset] = pts
            total += (-1) ** (n - k) * euclidean_volume(pts)
    return _clean(total)


# ---------------------------------------------------------------------------
# comparisons

def sorted_vertices(p):
    return sorted(tuple(linalg.as_fraction(x) for x in v) for v in p.vertices)


def same_polytope(p, q):
    return p.dim == q.dim and sorted_vertices(p) == sorted_vertices(q)


def lattice_equivalent(p, q):
    """Is there g in GL(dim, Z) with g(p) = q (vertex sets)?"""
    a, b = sorted_vertices(p), sorted_vertices(q)
    if p.dim != q.dim or len(a) != len(b):
        return False
    basis_idx = []
    for i, v in enumerate(a):
        if linalg.rank([a[j] for j in basis_idx] + [v]) > len(basis_idx):
            basis_idx.append(i)
    if len(basis_idx) < p.dim:
        return False
    base = [a[i] for i in basis_idx]
    target = set(b)
    det_a = abs(linalg.determinant([list(v) for v in base]))
    for images in permutations(range(len(b)), p.dim):
        img = [b[i] for i in images]
        if abs(linalg.determinant([list(v) for v in img])) != det_a:
            continue
        g = linalg.mat_mul(linalg.rational_inverse(base), img)
        if any(linalg.as_fraction(x).denominator != 1 for row in g for x in row):
            continue
        if {tuple(linalg.vec_mat(list(v), g)) for v in a} == target:
            return True
    return False
