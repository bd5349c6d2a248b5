"""Exact polyhedral primitives shared by the fan and polytope layers.

* double description (extreme rays of {x : A x >= 0}) for V->H and H->V
  conversions,
* Fourier-Motzkin feasibility for small rational systems,
* face lattices from facet incidences and lexicographic pulling
  triangulations for exact volumes.
"""

from fractions import Fraction
from math import factorial, gcd

from .errors import NotFullDimensional, Unbounded
from .linalg import as_fraction, common_denominator, determinant, rank, rational_inverse, row_echelon


def _integral_row(row):
    den = common_denominator(row)
    ints = [int(as_fraction(x) * den) for x in row]
    g = 0
    for x in ints:
        g = gcd(g, x)
    return tuple(x // g for x in ints) if g else tuple(ints)


def _primitive(v):
    g = 0
    for x in v:
        g = gcd(g, x)
    return tuple(x // g for x in v) if g > 1 else tuple(v)


def extreme_rays(constraints, dim):
    """Extreme rays of the pointed cone {x in Q^dim : a.x >= 0 for a in constraints}.

    Returns a list of ``(ray, zero_mask)`` where ``ray`` is a primitive integer
    tuple and bit ``i`` of ``zero_mask`` is set when constraint ``i`` is tight.
    Raises ValueError when the constraints do not span Q^dim (cone not pointed).
    """
    rows = [_integral_row(a) for a in constraints]
    basis, chosen = [], []
    for i, row in enumerate(rows):
        if any(row) and rank(basis + [list(row)]) > len(basis):
            basis.append(list(row))
            chosen.append(i)
            if len(basis) == dim:
                break
    if len(basis) < dim:
        raise ValueError("constraints do not span; cone has a lineality space")
    inv = rational_inverse(basis)
    rays = []
    for k in range(dim):
        col = [inv[i][k] for i in range(dim)]
        ray = _integral_row(col)
        mask = 0
        for pos, i in enumerate(chosen):
            if pos != k:
                mask |= 1 << i
        rays.append((ray, mask))
    done = set(chosen)
    need = dim - 2
    for j, a in enumerate(rows):
        if j in done:
            continue
        bit = 1 << j
        pos, neg, zero = [], [], []
        for ray, mask in rays:
            s = sum(x * y for x, y in zip(a, ray))
            if s > 0:
                pos.append((ray, mask, s))
            elif s < 0:
                neg.append((ray, mask, s))
            else:
                zero.append((ray, mask | bit))
        new = [(r, m) for r, m, _ in pos] + zero
        if neg and pos:
            all_masks = [m for _, m in rays]
            for rp, mp, sp in pos:
                for rn, mn, sn in neg:
                    common = mp & mn
                    if common.bit_count() < need:
                        continue
                    if any((m & common) == common for m in all_masks if m != mp and m != mn):
                        continue
                    ray = _primitive(tuple(sp * y - sn * x for x, y in zip(rp, rn)))
                    new.append((ray, common | bit))
        rays = new
        done.add(j)
    return rays


# ---------------------------------------------------------------------------
# Fourier-Motzkin

def fm_feasible(ineqs, eqs=(), nvars=None):
    """Feasibility over Q of {x : a.x >= b for (a, b) in ineqs, a.x = b for (a, b) in eqs}."""
    ineqs = [([as_fraction(x) for x in a], as_fraction(b)) for a, b in ineqs]
    eqs = [([as_fraction(x) for x in a], as_fraction(b)) for a, b in eqs]
    if nvars is None:
        nvars = len((ineqs or eqs)[0][0]) if (ineqs or eqs) else 0
    # substitute equalities away
    while eqs:
        a, b = eqs.pop()
        j = next((k for k, x in enumerate(a) if x), None)
        if j is None:
            if b:
                return False
            continue

        def subst(row, rhs, a=a, b=b, j=j):
            f = row[j] / a[j]
            if not f:
                return row, rhs
            return [x - f * y for x, y in zip(row, a)], rhs - f * b

        eqs = [subst(r, c) for r, c in eqs]
        ineqs = [subst(r, c) for r, c in ineqs]
    live = set(range(nvars))
    while True:
        if any(not any(a) and b > 0 for a, b in ineqs):
            return False
        ineqs = [(a, b) for a, b in ineqs if any(a)]
        live = {j for j in live if any(a[j] for a, _ in ineqs)}
        if not live:
            return True

        def cost(j):
            p = sum(1 for a, _ in ineqs if a[j] > 0)
            n = sum(1 for a, _ in ineqs if a[j] < 0)
            return p * n - p - n

        j = min(sorted(live), key=cost)
        pos = [(a, b) for a, b in ineqs if a[j] > 0]
        neg = [(a, b) for a, b in ineqs if a[j] < 0]
        rest = [(a, b) for a, b in ineqs if a[j] == 0]
        seen = set()
        for ap, bp in pos:
            for an, bn in neg:
                fp, fn = 1 / ap[j], -1 / an[j]
                row = [fp * x + fn * y for x, y in zip(ap, an)]
                rhs = fp * bp + fn * bn
                lead = next((x for x in row if x), None)
                if lead is not None:
                    scale = abs(lead)
                    key = (tuple(x / scale for x in row), rhs / scale)
                    if key in seen:
                        continue
                    seen.add(key)
                rest.append((row, rhs))
        ineqs = rest
        live.discard(j)


def in_cone(v, generators):
    """Rational test: is v a nonnegative combination of the generators?"""
    k = len(generators)
    if k == 0:
        return not any(v)
    dim = len(v)
    eqs = [([g[i] for g in generators], v[i]) for i in range(dim)]
    ineqs = [([1 if t == s else 0 for t in range(k)], 0) for s in range(k)]
    return fm_feasible(ineqs, eqs, k)


# ---------------------------------------------------------------------------
# convex hulls

def affine_rank(points):
    pts = [[as_fraction(x) for x in p] for p in points]
    if not pts:
        return -1
    base = pts[0]
    return rank([[x - y for x, y in zip(p, base)] for p in pts[1:]]) if len(pts) > 1 else 0


class Hull:
    """Facet description of conv(points) for a full-dimensional point set.

    ``facets`` holds ``(normal, offset)`` with primitive integer inward normals
    and rational offsets, meaning normal.m >= -offset. ``vertices`` are the
    extreme points, sorted lexicographically; ``incidence[f]`` is the frozenset
    of vertex indices on facet ``f``.
    """

    def __init__(self, points):
        pts = sorted({tuple(as_fraction(x) for x in p) for p in points})
        if not pts:
            raise NotFullDimensional("empty point set")
        dim = len(pts[0])
        if affine_rank(pts) < dim:
            raise NotFullDimensional("points do not span the ambient space")
        self.dim = dim
        if dim == 0:
            self.vertices, self.facets, self.incidence = [pts[0]], [], []
            return
        constraints = [list(p) + [1] for p in pts]
        rays = extreme_rays(constraints, dim + 1)
        facets = []
        for ray, mask in rays:
            normal = ray[:dim]
            g = 0
            for x in normal:
                g = gcd(g, x)
            normal = tuple(x // g for x in normal)
            offset = Fraction(ray[dim], g)
            tight = frozenset(i for i in range(len(pts)) if mask >> i & 1)
            facets.append((normal, offset, tight))
        # vertices: points whose tight normals have full rank
        vert_ids = []
        for i in range(len(pts)):
            normals = [list(n) for n, _, t in facets if i in t]
            if len(normals) >= dim and rank(normals) == dim:
                vert_ids.append(i)
        remap = {old: new for new, old in enumerate(vert_ids)}
        self.vertices = [pts[i] for i in vert_ids]
        order = sorted(range(len(facets)), key=lambda f: (facets[f][0], facets[f][1]))
        self.facets = [(facets[f][0], facets[f][1]) for f in order]
        self.incidence = [frozenset(remap[i] for i in facets[f][2] if i in remap) for f in order]

    # ----- faces -----------------------------------------------------------
    def face_dim(self, vertex_ids):
        return affine_rank([self.vertices[i] for i in vertex_ids])

    def faces(self):
        """All nonempty faces as frozensets of vertex indices (polytope itself included)."""
        top = frozenset(range(len(self.vertices)))
        found = {top}
        frontier = set(self.incidence)
        while frontier:
            found |= frontier
            nxt = set()
            for face in frontier:
                for fac in self.incidence:
                    inter = face & fac
                    if inter and inter not in found:
                        nxt.add(inter)
            frontier = nxt
        return found

    def facets_of_face(self, face):
        """Facets (codimension one subfaces) of a face given by vertex indices."""
        d = self.face_dim(face)
        out = set()
        for fac in self.incidence:
            inter = face & fac
            if inter and inter != face and self.face_dim(inter) == d - 1:
                out.add(inter)
        return out

    def triangulation(self):
        """Pulling triangulation from the lexicographically smallest vertex, recursively."""
        memo = {}

        def tri(face):
            if face in memo:
                return memo[face]
            d = self.face_dim(face)
            if d == 0:
                res = [tuple(face)]
            else:
                v0 = min(face)
                res = []
                for sub in sorted(self.facets_of_face(face), key=sorted):
                    if v0 in sub:
                        continue
                    res.extend((v0,) + s for s in tri(sub))
            memo[face] = res
            return res

        return tri(frozenset(range(len(self.vertices))))

    def normalized_volume(self):
        """d! times the Euclidean volume (an integer for lattice polytopes)."""
        total = Fraction(0)
        for simplex in self.triangulation():
            base = self.vertices[simplex[0]]
            rows = [[x - y for x, y in zip(self.vertices[i], base)] for i in simplex[1:]]
            total += abs(determinant(rows))
        return total

    def volume(self):
        return self.normalized_volume() / factorial(self.dim)

    def contains(self, point):
        p = [as_fraction(x) for x in point]
        return all(sum(a * x for a, x in zip(n, p)) >= -off for n, off in self.facets)

    def interior_contains(self, point):
        p = [as_fraction(x) for x in point]
        return all(sum(a * x for a, x in zip(n, p)) > -off for n, off in self.facets)


def euclidean_volume(points):
    """Exact Euclidean volume of conv(points); zero for lower-dimensional sets."""
    pts = list(points)
    if not pts:
        return Fraction(0)
    dim = len(pts[0])
    if affine_rank(pts) < dim:
        return Fraction(0)
    return Hull(pts).volume()


def vertices_from_inequalities(normals, offsets):
    """Vertices of {m : normal.m >= -offset}; raises Unbounded for unbounded regions.

    Returns None when the region is empty.
    """
    dim = len(normals[0])
    cons = [list(n) + [as_fraction(a)] for n, a in zip(normals, offsets)]
    cons.append([0] * dim + [1])
    try:
        rays = extreme_rays(cons, dim + 1)
    except ValueError as exc:
        raise Unbounded("region contains a line") from exc
    verts = []
    for ray, _ in rays:
        s = ray[dim]
        if s == 0:
            raise Unbounded("region has a recession direction")
        verts.append(tuple(Fraction(x, s) for x in ray[:dim]))
    if not verts:
        return None
    return sorted(set(verts))


def minkowski_sum(point_sets):
    """Vertex set of the Minkowski sum of finitely many point sets."""
    acc = [tuple(Fraction(0) for _ in point_sets[0][0])]
    for pts in point_sets:
        raw = {tuple(a + as_fraction(b) for a, b in zip(p, q)) for p in acc for q in pts}
        acc = prune(raw)
    return acc


def prune(points):
    """Extreme points of a finite set (any dimension, handled via an affine chart)."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return pts
    base = pts[0]
    diffs = [[x - y for x, y in zip(p, base)] for p in pts]
    # choose coordinates of the affine span
    red, piv = row_echelon(diffs)
    k = len(piv)
    if k == 0:
        return [pts[0]]
    coords = [tuple(d[c] for c in piv) for d in diffs]
    # the projection onto pivot coordinates is injective on the affine span
    hull = Hull(coords)
    keep = {v for v in hull.vertices}
    return [p for p, c in zip(pts, coords) if c in keep]
