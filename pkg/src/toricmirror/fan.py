"""Fans and the toric data read off from them.

A fan is stored by its maximal cones, each a tuple of indices into the ray
list. Faces are generated on demand.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import linalg
from .errors import InfiniteIndex, InvalidFan, NotFullDimensional, NotSimplicial, RaysDoNotSpan
from .polyhedra import Hull, fm_feasible, in_cone


@dataclass(frozen=True)
class Fan:
    rank: int
    rays: tuple
    cones: tuple

    def __post_init__(self):
        object.__setattr__(self, "rays", tuple(tuple(int(x) for x in r) for r in self.rays))
        object.__setattr__(self, "cones", tuple(tuple(sorted(int(i) for i in c)) for c in self.cones))

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(int(obj["rank"]), obj["rays"], obj["max_cones"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidFan(f"malformed fan description: {exc}") from exc

    def to_json(self):
        return {"rank": self.rank, "rays": [list(r) for r in self.rays],
                "max_cones": [list(c) for c in self.cones]}

    def cone_rays(self, cone):
        return [self.rays[i] for i in cone]

    @property
    def n_rays(self):
        return len(self.rays)


@dataclass
class ValidationReport:
    primitivity_failures: list = field(default_factory=list)
    convexity_failures: list = field(default_factory=list)
    intersection_failures: list = field(default_factory=list)
    structural_failures: list = field(default_factory=list)

    @property
    def ok(self):
        return not (self.primitivity_failures or self.convexity_failures
                    or self.intersection_failures or self.structural_failures)

    def to_json(self):
        return {
            "valid": self.ok,
            "primitivity_failures": self.primitivity_failures,
            "convexity_failures": [list(c) for c in self.convexity_failures],
            "intersection_failures": [[list(a), list(b)] for a, b in self.intersection_failures],
            "structural_failures": self.structural_failures,
        }


# ---------------------------------------------------------------------------
# standard fans

def projective_space(n):
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = list(combinations(range(n + 1), n))
    return Fan(n, rays, cones)


def hirzebruch(n):
    """F_n with rays (1,0), (-1,-n), (0,1), (0,-1), so v1 + v2 - n v4 = 0 and v3 + v4 = 0."""
    rays = [(1, 0), (-1, -n), (0, 1), (0, -1)]
    cones = [(0, 2), (1, 2), (1, 3), (0, 3)]
    return Fan(2, rays, cones)


def weighted_projective_space(weights):
    """Fan of P(c_0, ..., c_n): images of the basis vectors in Z^{n+1}/Z.c."""
    c = [int(x) for x in weights]
    if linalg.vector_gcd(c) != 1 or any(x <= 0 for x in c):
        raise ValueError("weights must be positive with gcd 1")
    n = len(c) - 1
    # unimodular u with u.c = e_1: rows 2.. of u give coordinates on Z^{n+1}/Zc
    h, u = linalg.hermite_normal_form([[x] for x in c])
    rays = [tuple(u[k][i] for k in range(1, n + 1)) for i in range(n + 1)]
    cones = list(combinations(range(n + 1), n))
    return Fan(n, rays, cones)


def line_bundle_total_space(n, d):
    """Fan of the total space of O(-d) over P^n."""
    base = projective_space(n)
    heights = [d - n] + [1] * n
    rays = [tuple(r) + (a,) for r, a in zip(base.rays, heights)]
    rays.append(tuple([0] * n + [1]))
    cones = [tuple(c) + (n + 1,) for c in base.cones]
    return Fan(n + 1, rays, cones)


def affine_space(n):
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan(n, rays, [tuple(range(n))])


# ---------------------------------------------------------------------------
# cone geometry

def is_strongly_convex(rays):
    """No line in cone(rays): some w has w.r >= 1 on every generator."""
    if not rays:
        return True
    dim = len(rays[0])
    return fm_feasible([(list(r), 1) for r in rays], (), dim)


def cone_faces(fan, cone):
    """Ray-index subsets of ``cone`` that are exactly the rays of one of its faces."""
    idx = list(cone)
    rays = fan.cone_rays(idx)
    if linalg.rank(rays) == len(rays):
        return {frozenset(s) for k in range(len(idx) + 1) for s in combinations(idx, k)}
    dim = fan.rank
    out = {frozenset(), frozenset(idx)}
    for k in range(1, len(idx)):
        for sub in combinations(range(len(idx)), k):
            eqs = [(list(rays[i]), 0) for i in sub]
            ineqs = [(list(rays[i]), 1) for i in range(len(idx)) if i not in sub]
            if fm_feasible(ineqs, eqs, dim):
                out.add(frozenset(idx[i] for i in sub))
    return out


def _common_face(fan, a, b):
    """Is the intersection of two cones a face of each (separation criterion)?"""
    sa, sb = set(a), set(b)
    common = sa & sb
    eqs = [(list(fan.rays[i]), 0) for i in common]
    ineqs = [(list(fan.rays[i]), 1) for i in sa - common]
    ineqs += [([-x for x in fan.rays[i]], 1) for i in sb - common]
    return fm_feasible(ineqs, eqs, fan.rank)


def validate_fan(f):
    report = ValidationReport()
    n = len(f.rays)
    for i, r in enumerate(f.rays):
        if len(r) != f.rank:
            report.structural_failures.append(f"ray {i} has length {len(r)}, expected {f.rank}")
        elif not any(r):
            report.structural_failures.append(f"ray {i} is zero")
        elif not linalg.is_primitive(r):
            report.primitivity_failures.append(i)
    if len(set(f.rays)) != n:
        report.structural_failures.append("duplicate ray vectors")
    for c in f.cones:
        if any(i < 0 or i >= n for i in c):
            report.structural_failures.append(f"cone {list(c)} references a missing ray")
        elif len(set(c)) != len(c):
            report.structural_failures.append(f"cone {list(c)} repeats a ray")
    if report.structural_failures:
        return report
    for c in f.cones:
        if not is_strongly_convex(f.cone_rays(c)):
            report.convexity_failures.append(c)
    good = [c for c in f.cones if c not in report.convexity_failures]
    for a, b in combinations(good, 2):
        if not _common_face(f, a, b):
            report.intersection_failures.append((a, b))
    return report


def _is_smooth_cone(rays):
    k = len(rays)
    if linalg.rank(rays) != k:
        return False
    # rays extend to a Z-basis iff all invariant factors equal 1
    return linalg.smith_diagonal(rays) == [1] * k


def _facets_of_cone(fan, cone):
    target = fan.rank - 1
    return {s for s in cone_faces(fan, cone)
            if linalg.rank(fan.cone_rays(sorted(s))) == target}


def classify_fan(f):
    simplicial = all(linalg.rank(f.cone_rays(c)) == len(c) for c in f.cones)
    smooth = simplicial and all(_is_smooth_cone(f.cone_rays(c)) for c in f.cones)
    return {"simplicial": simplicial, "smooth": smooth, "complete": _is_complete(f)}


def _is_complete(f):
    if not f.cones:
        return f.rank == 0
    if any(linalg.rank(f.cone_rays(c)) != f.rank for c in f.cones):
        return False
    owners = {}
    for k, c in enumerate(f.cones):
        for facet in _facets_of_cone(f, c):
            owners.setdefault(facet, []).append(k)
    if any(len(v) != 2 for v in owners.values()):
        return False
    # the adjacency graph across shared facets must be connected
    seen, stack = {0}, [0]
    while stack:
        k = stack.pop()
        for v in owners.values():
            if k in v:
                for other in v:
                    if other not in seen:
                        seen.add(other)
                        stack.append(other)
    return len(seen) == len(f.cones)


# ---------------------------------------------------------------------------
# relations, divisors, class groups

def charge_matrix(f):
    """n x s integer matrix whose columns are the canonical basis of ray relations."""
    kernel = linalg.integer_kernel([list(r) for r in f.rays])
    return linalg.transpose(kernel, cols=len(f.rays)) if kernel else [[] for _ in f.rays]


def divisor_class_group(f):
    """Invariants of Z^{rays} / image of M; raises RaysDoNotSpan (with the invariants attached)."""
    ray_matrix = [list(r) for r in f.rays]
    inv = linalg.cokernel_invariants(ray_matrix, rows=len(f.rays))
    if linalg.rank(ray_matrix) < f.rank:
        raise RaysDoNotSpan("rays span a proper subspace; M does not inject", inv)
    return inv


def principal_divisor(f, m):
    if len(m) != f.rank:
        raise ValueError("m must have length equal to the fan rank")
    return [linalg.dot(m, r) for r in f.rays]


def discriminant_components(f):
    """Minimal ray subsets that are not the ray set of any cone of the fan."""
    faces = set()
    for c in f.cones:
        faces |= cone_faces(f, c)
    out = []
    for k in range(1, len(f.rays) + 1):
        for s in combinations(range(len(f.rays)), k):
            fs = frozenset(s)
            if fs in faces:
                continue
            if any(fs > o for o in out):
                continue
            if all(frozenset(t) in faces for t in combinations(s, k - 1)):
                out.append(fs)
    return sorted(tuple(sorted(s)) for s in out)


def is_subdivision(fine, coarse):
    if fine.rank != coarse.rank:
        raise ValueError("fans of different rank")
    if not set(coarse.rays) <= set(fine.rays):
        return False
    for c in fine.cones:
        gens = fine.cone_rays(c)
        if not any(all(in_cone(g, coarse.cone_rays(d)) for g in gens) for d in coarse.cones):
            return False
    return True


def local_stabilizer(f, cone):
    rays = f.cone_rays(cone)
    if linalg.rank(rays) != len(rays):
        raise NotSimplicial(f"cone {list(cone)} is not simplicial")
    if len(rays) != f.rank:
        raise NotFullDimensional(f"cone {list(cone)} is not full-dimensional")
    return linalg.cokernel_invariants(linalg.transpose(rays))


def refine_lattice(f, generators):
    """Re-express the fan in the overlattice N' = Z^r + sum Z.g (Hermite basis of N')."""
    gens = []
    for g in generators:
        try:
            vec = [linalg.as_fraction(x) for x in g]
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise InfiniteIndex(f"generator {g!r} is not a rational vector") from exc
        if len(vec) != f.rank:
            raise InfiniteIndex("generator length differs from fan rank")
        gens.append(vec)
    if not gens:
        return Fan(f.rank, f.rays, f.cones)
    den = linalg.common_denominator([x for g in gens for x in g])
    scaled = [[den * int(i == j) for j in range(f.rank)] for i in range(f.rank)]
    scaled += [[int(x * den) for x in g] for g in gens]
    basis = linalg.lattice_basis(scaled)
    new_basis = [[Fraction(x, den) for x in row] for row in basis]
    inv = linalg.rational_inverse(new_basis)
    rays = [linalg.primitive(linalg.vec_mat(list(r), inv)) for r in f.rays]
    return Fan(f.rank, rays, f.cones)


def resolve_cone_2d(rays):
    """Rays to add so that cone(v1, v2) in rank 2 is subdivided into unimodular cones."""
    v1, v2 = (tuple(int(x) for x in r) for r in rays)
    det = v1[0] * v2[1] - v1[1] * v2[0]
    if len(v1) != 2 or det == 0:
        raise NotFullDimensional("need two independent rays in rank 2")
    if abs(det) == 1:
        return []
    inv = linalg.rational_inverse([list(v1), list(v2)])
    corners = [(0, 0), v1, v2, (v1[0] + v2[0], v1[1] + v2[1])]
    xs = [p[0] for p in corners]
    ys = [p[1] for p in corners]
    cand = []
    for x in range(min(xs), max(xs) + 1):
        for y in range(min(ys), max(ys) + 1):
            if (x, y) == (0, 0):
                continue
            a, b = linalg.vec_mat([x, y], inv)
            if 0 <= a <= 1 and 0 <= b <= 1:
                cand.append(((x, y), a, b))
    hull = Hull([p for p, _, _ in cand])
    out = []
    for normal, offset in hull.facets:
        # compact boundary faces see the origin and have normals positive on both rays
        if offset < 0 and linalg.dot(normal, v1) > 0 and linalg.dot(normal, v2) > 0:
            for p, a, b in cand:
                if linalg.dot(normal, p) == -offset and p not in (v1, v2):
                    out.append((Fraction(b, 1) / (a + b), p))
    return [p for _, p in sorted(set(out))]


def subdivide_2d(rays):
    """Ordered ray chain v1, added..., v2 for a 2D cone; consecutive pairs give the new cones."""
    v1, v2 = (tuple(r) for r in rays)
    return [v1] + resolve_cone_2d(rays) + [v2]


def fans_equal_up_to_reordering(a, b):
    if a.rank != b.rank or set(a.rays) != set(b.rays):
        return False
    ca = {frozenset(a.rays[i] for i in c) for c in a.cones}
    cb = {frozenset(b.rays[i] for i in c) for c in b.cones}
    return ca == cb
