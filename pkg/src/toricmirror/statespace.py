"""Bigraded Landau-Ginzburg state spaces of (W, G) and the BHK mirror map.

A basis element is a sector g of G together with a Jacobian basis monomial
of W restricted to the fixed coordinates of g, times the volume form on those
coordinates. Narrow sectors (no fixed coordinates) carry a single generator.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd

from . import linalg
from .errors import (DegenerateRestriction, InfiniteDimensional, MirrorMismatch, NotASymmetry,
                     NotNondegenerate, ToricMirrorError)
from .groups import DiagonalGroup, age, element_J, fixed_indices, inverse, transpose_group
from .lg import InvertiblePolynomial, JacobianRing, nondegeneracy_check, raw_charges, restrict_to_fixed, transpose

FORM_PULLBACK = "form-pullback"
DET_TWIST = "det-twist"
CONVENTIONS = (FORM_PULLBACK, DET_TWIST)


@dataclass(frozen=True)
class SectorBasisElement:
    sector: tuple
    fixed: tuple
    monomial: tuple  # exponents over ``fixed``
    bidegree_B: tuple
    bidegree_A: tuple

    @property
    def exponents(self):
        """Exponent vector over all coordinates (zero off the fixed locus)."""
        out = [0] * len(self.sector)
        for i, r in zip(self.fixed, self.monomial):
            out[i] = r
        return tuple(out)

    @property
    def is_narrow(self):
        return not self.fixed

    def to_json(self):
        return {"sector": [linalg.format_rational(x) for x in self.sector],
                "fixed": list(self.fixed),
                "monomial": list(self.monomial),
                "degB": [linalg.format_rational(x) for x in self.bidegree_B],
                "degA": [linalg.format_rational(x) for x in self.bidegree_A]}


def _poincare(elements, attr):
    out = {}
    for e in elements:
        key = getattr(e, attr)
        out[key] = out.get(key, 0) + 1
    return dict(sorted(out.items()))


@dataclass
class GradedStateSpace:
    polynomial: InvertiblePolynomial
    group: DiagonalGroup
    convention: str
    elements: list
    rings: dict = field(default_factory=dict, repr=False)

    @property
    def total_dim(self):
        return len(self.elements)

    @property
    def central_charge(self):
        return sum(1 - 2 * q for q in raw_charges(self.polynomial))

    @property
    def poincare_B(self):
        return _poincare(self.elements, "bidegree_B")

    @property
    def poincare_A(self):
        return _poincare(self.elements, "bidegree_A")

    def sector(self, g):
        return [e for e in self.elements if e.sector == g]

    def nontwisted(self):
        zero = tuple(Fraction(0) for _ in range(self.polynomial.n))
        return self.sector(zero)

    def narrow(self):
        return [e for e in self.elements if e.is_narrow]

    def to_json(self):
        def poincare(m):
            return [{"bidegree": [linalg.format_rational(x) for x in k], "dim": v} for k, v in m.items()]

        return {"polynomial": self.polynomial.text(), "group_order": self.group.order,
                "convention": self.convention, "total_dim": self.total_dim,
                "central_charge": linalg.format_rational(self.central_charge),
                "elements": [e.to_json() for e in self.elements],
                "poincare_B": poincare(self.poincare_B), "poincare_A": poincare(self.poincare_A)}


def _require_nondegenerate(w):
    report = nondegeneracy_check(w)
    if not report["ok"]:
        raise NotNondegenerate("; ".join(report["reasons"]))


def _sector_ring(w, fixed, g):
    if not fixed:
        return None
    try:
        wg = InvertiblePolynomial.from_polynomial(restrict_to_fixed(w, fixed))
        ring = JacobianRing(wg)
        if not ring.ok:
            raise InfiniteDimensional("restricted Jacobian ring is not finite")
        ring.basis
    except ToricMirrorError as exc:
        phases = [linalg.format_rational(x) for x in g]
        raise DegenerateRestriction(f"restriction of W to Fix({phases}) is degenerate: {exc}") from exc
    return ring


def _phase(h, fixed, monomial, convention):
    if convention == FORM_PULLBACK:
        return sum((r + 1) * h[i] for i, r in zip(fixed, monomial))
    return sum(h) + sum(r * h[i] for i, r in zip(fixed, monomial))


def b_model_state_space(w, g_group, convention=FORM_PULLBACK):
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    _require_nondegenerate(w)
    for g in g_group.elements:
        if any(linalg.dot(row, g).denominator != 1 for row in w.exponent_matrix):
            raise NotASymmetry("group element does not preserve W")
    q = raw_charges(w)
    total_q = sum(q)
    c_w = sum(1 - 2 * x for x in q)
    gens = g_group.generators
    rings = {}
    elements = []
    for g in g_group.elements:
        fixed = fixed_indices(g)
        if fixed not in rings:
            rings[fixed] = _sector_ring(w, fixed, g)
        ring = rings[fixed]
        monomials = ring.basis.monomials if ring is not None else [()]
        iota, iota_inv = age(g), age(inverse(g))
        for mono in monomials:
            if any(_phase(h, fixed, mono, convention).denominator != 1 for h in gens):
                continue
            p = sum((r + 1) * q[i] for i, r in zip(fixed, mono))
            deg_b = (p + iota_inv - total_q, p + iota - total_q)
            deg_a = (c_w - deg_b[0], deg_b[1])
            elements.append(SectorBasisElement(g, fixed, tuple(mono), deg_b, deg_a))
    return GradedStateSpace(w, g_group, convention, elements, rings)


def a_model_state_space(w, g_group, convention=FORM_PULLBACK):
    """Same elements as the B-model space; the A-bigrading is read from ``bidegree_A``."""
    return b_model_state_space(w, g_group, convention)


# ---------------------------------------------------------------------------
# mirror map

@dataclass(frozen=True)
class MirrorRow:
    source: SectorBasisElement
    image: SectorBasisElement

    def to_json(self):
        return {"source": self.source.to_json(), "image": self.image.to_json()}


@dataclass
class MirrorTable:
    source: GradedStateSpace
    target: GradedStateSpace
    rows: list

    def to_json(self):
        return {"source_dim": self.source.total_dim, "target_dim": self.target.total_dim,
                "rows": [r.to_json() for r in self.rows]}


def _image_sector(wt, element):
    """sum over fixed i of (r_i + 1) times the i-th generator of G_max(W^T)."""
    k = [0] * wt.n
    for i, r in zip(element.fixed, element.monomial):
        k[i] = r + 1
    inv = wt.inverse_exponent_matrix
    return tuple(x % 1 for x in linalg.mat_vec(inv, k))


def _word_matches(w, target, g):
    """Does the word (s_j + 1 on Fix(h), 0 elsewhere) of the target name g in G_max(W)?"""
    k = [0] * w.n
    for j, s in zip(target.fixed, target.monomial):
        k[j] = s + 1
    return tuple(x % 1 for x in linalg.mat_vec(w.inverse_exponent_matrix, k)) == g


def bhk_mirror_map(w, g_group, convention=FORM_PULLBACK):
    """Bijection from the basis of (W, G) to the basis of (W^T, G^T).

    Each source element x^r | g> is sent to the target sector
    h = prod rho_i^{r_i + 1}; inside that sector the image monomial y^s must
    satisfy prod rho_j^{s_j + 1} = g and carry A-bidegree equal to the source
    B-bidegree. When several basis monomials qualify, the lexicographically
    first perfect matching is used.
    """
    if element_J(w) not in g_group:
        raise MirrorMismatch("G must contain J")
    wt = transpose(w)
    gt = transpose_group(g_group, w)
    source = b_model_state_space(w, g_group, convention)
    target = b_model_state_space(wt, gt, convention)
    by_sector = {}
    for t in target.elements:
        by_sector.setdefault(t.sector, []).append(t)
    candidates = []
    for s in source.elements:
        h = _image_sector(wt, s)
        opts = [t for t in by_sector.get(h, [])
                if _word_matches(w, t, s.sector) and t.bidegree_A == s.bidegree_B]
        if not opts:
            raise MirrorMismatch(f"no image for {s.to_json()}")
        opts.sort(key=lambda t: (sum(t.monomial), t.monomial))
        candidates.append(opts)
    if len(source.elements) != len(target.elements):
        raise MirrorMismatch(f"dimensions differ: {len(source.elements)} vs {len(target.elements)}")
    chosen = _perfect_matching(candidates)
    if chosen is None:
        raise MirrorMismatch("no bijection between the bases respects sectors and bidegrees")
    rows = [MirrorRow(s, t) for s, t in zip(source.elements, chosen)]
    return MirrorTable(source, target, rows)


def _perfect_matching(candidates):
    used = set()
    out = [None] * len(candidates)
    order = sorted(range(len(candidates)), key=lambda i: len(candidates[i]))

    def rec(pos):
        if pos == len(order):
            return True
        i = order[pos]
        for t in candidates[i]:
            if t in used:
                continue
            used.add(t)
            out[i] = t
            if rec(pos + 1):
                return True
            used.discard(t)
        return False

    return out if rec(0) else None


def report_bhk(w, g_group, convention=FORM_PULLBACK):
    return bhk_mirror_map(w, g_group, convention).to_json()


# ---------------------------------------------------------------------------
# pairing degrees

def pairing_degree_report(space):
    """Check deg + deg = c_W on both sides for every pair reaching the top class."""
    c_w = space.central_charge
    by_sector = {}
    for e in space.elements:
        by_sector.setdefault(e.sector, []).append(e)
    checked, violations = 0, []
    for g, elems in by_sector.items():
        partners = by_sector.get(inverse(g), [])
        if not partners:
            continue
        ring = space.rings.get(fixed_indices(g))
        for a in elems:
            for b in partners:
                if ring is None:
                    reaches = True
                else:
                    prod = tuple(x + y for x, y in zip(a.monomial, b.monomial))
                    reaches = ring.top_coefficient(prod) != 0
                if not reaches:
                    continue
                checked += 1
                lo = a.bidegree_B[0] + b.bidegree_B[0]
                hi = a.bidegree_B[1] + b.bidegree_B[1]
                if lo != c_w or hi != c_w:
                    violations.append({"left": a.to_json(), "right": b.to_json(),
                                       "sum": [linalg.format_rational(lo), linalg.format_rational(hi)]})
    return {"ok": not violations, "pairs_checked": checked,
            "central_charge": linalg.format_rational(c_w), "violations": violations}


# ---------------------------------------------------------------------------
# Chen-Ruan sector data

@dataclass(frozen=True)
class ChenRuanSector:
    element: tuple
    fixed_dim: int
    age: Fraction
    bidegrees: tuple

    def to_json(self):
        return {"element": [linalg.format_rational(x) for x in self.element],
                "fixed_dim": self.fixed_dim, "age": linalg.format_rational(self.age),
                "bidegrees": [[linalg.format_rational(x) for x in b] for b in self.bidegrees]}


def chen_ruan_affine_quotient(n, group_elements):
    """Sectors of [C^n / G] for a diagonal G; each fixed locus is contractible."""
    out = []
    for g in sorted({tuple(linalg.as_fraction(x) % 1 for x in e) for e in group_elements}):
        if len(g) != n:
            raise ValueError("element length differs from the dimension")
        a = age(g)
        out.append(ChenRuanSector(g, len(fixed_indices(g)), a, ((a, a),)))
    return out


def chen_ruan_pairing_check(n, sectors):
    """age(g) + age(g^-1) + dim Fix(g) = n for each sector."""
    return all(s.age + age(inverse(s.element)) + s.fixed_dim == n for s in sectors)


@lru_cache(maxsize=None)
def _reduced_fractions(level):
    return tuple(Fraction(k, level) for k in range(level) if gcd(k, level) == 1)


def chen_ruan_wps_dimension(weights):
    c = [int(x) for x in weights]
    if not c or any(x <= 0 for x in c):
        raise ValueError("weights must be positive")
    # lambda = k/l in lowest terms fixes exactly the weights divisible by l
    sectors = []
    for level in range(1, max(c) + 1):
        fixed = [x for x in c if x % level == 0]
        if fixed:
            sectors.extend((lam, fixed) for lam in _reduced_fractions(level))
    sectors.sort(key=lambda s: s[0])
    return {"total_dim": sum(len(f) for _, f in sectors), "sectors": sectors}


def narrow_count_duality(w, g_group, convention=FORM_PULLBACK):
    """(#narrow sectors of (W, G), #invariant nontwisted monomials of (W^T, G^T))."""
    wt = transpose(w)
    gt = transpose_group(g_group, w)
    src = b_model_state_space(w, g_group, convention)
    tgt = b_model_state_space(wt, gt, convention)
    narrow = len({e.sector for e in src.narrow()})
    return narrow, len(tgt.nontwisted())

