"""Finite diagonal symmetry groups of invertible polynomials.

Elements are canonical phase vectors in [0, 1)^N, where the entry t stands for
multiplication of a coordinate by exp(2 pi i t). A word k = (k_1, ..., k_N)
names the element E^{-1} k mod 1, a product of the generators of G_max given
by the columns of E^{-1}.

Besides explicit groups, subgroups of G_max are handled as word lattices L
with E Z^N inside L inside Z^N. This makes duality checks over every subgroup
of large groups (the Fermat quintic has 42176) cheap.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product

from . import linalg
from .errors import GroupTooLarge, NotASymmetry
from .lg import raw_charges, transpose

DEFAULT_ORDER_BOUND = 10 ** 4


def reduce_phases(phases):
    return tuple(linalg.as_fraction(x) % 1 for x in phases)


def add(a, b):
    return tuple((x + y) % 1 for x, y in zip(a, b))


def inverse(g):
    return tuple((-x) % 1 for x in g)


def identity_element(n):
    return tuple(Fraction(0) for _ in range(n))


def fixed_indices(g):
    return tuple(i for i, x in enumerate(g) if x == 0)


def age(g):
    return sum(g, Fraction(0))


def preserves(exponent_rows, g):
    """Does the diagonal element g fix every monomial with these exponent rows?"""
    return all(linalg.dot(row, g).denominator == 1 for row in exponent_rows)


def closure(generators, n, bound=DEFAULT_ORDER_BOUND):
    """Sorted elements of the group generated by the phase vectors."""
    gens = [reduce_phases(g) for g in generators]
    gens = [g for g in gens if any(g)]
    seen = {identity_element(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = add(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > bound:
                        raise GroupTooLarge(f"group order exceeds {bound}")
        frontier = nxt
    return tuple(sorted(seen))


def minimal_generators(elements, n):
    """A small generating set, greedily chosen in sorted order."""
    gens, span = [], {identity_element(n)}
    for g in sorted(elements):
        if g not in span:
            gens.append(g)
            span = set(closure(gens, n, bound=len(elements)))
    return gens


@dataclass(frozen=True)
class DiagonalGroup:
    """Explicit finite diagonal group acting on N coordinates."""

    n: int
    elements: tuple
    polynomial: object = None

    @property
    def order(self):
        return len(self.elements)

    def __contains__(self, g):
        return reduce_phases(g) in self._set

    @cached_property
    def _set(self):
        return frozenset(self.elements)

    @cached_property
    def generators(self):
        return tuple(minimal_generators(self.elements, self.n))

    def is_subgroup_of(self, other):
        return self._set <= other._set

    def to_json(self):
        return {"order": self.order,
                "elements": [[linalg.format_rational(x) for x in g] for g in self.elements]}

    def __eq__(self, other):
        return isinstance(other, DiagonalGroup) and self.n == other.n and self.elements == other.elements

    def __hash__(self):
        return hash((self.n, self.elements))


def group_from_generators(generators, n, polynomial=None, bound=DEFAULT_ORDER_BOUND):
    return DiagonalGroup(n, closure(generators, n, bound), polynomial)


def trivial_group(w):
    return DiagonalGroup(w.n, (identity_element(w.n),), w)


def generator_columns(w):
    """Columns of E_W^{-1}: the generators rho_1, ..., rho_N of G_max."""
    inv = w.inverse_exponent_matrix
    return [reduce_phases(col) for col in linalg.transpose(inv)]


def max_symmetry_group(w, bound=DEFAULT_ORDER_BOUND):
    return group_from_generators(generator_columns(w), w.n, w, bound)


def element_J(w):
    return reduce_phases(raw_charges(w))


def sl_subgroup(g):
    return DiagonalGroup(g.n, tuple(e for e in g.elements if age(e).denominator == 1), g.polynomial)


def subgroup_generated(gens, g_max):
    w = g_max.polynomial
    for g in gens:
        if len(g) != g_max.n:
            raise NotASymmetry("generator has the wrong length")
        if w is not None and not preserves(w.exponent_matrix, reduce_phases(g)):
            raise NotASymmetry(f"{[linalg.format_rational(x) for x in g]} does not preserve W")
    return group_from_generators(gens, g_max.n, w, bound=max(g_max.order, 1))


def element_of_word(w, word):
    return reduce_phases(linalg.mat_vec(w.inverse_exponent_matrix, word))


def word_of_element(w, g):
    """The canonical integer word E_W g of an element of G_max."""
    k = linalg.mat_vec(w.exponent_matrix, g)
    if any(linalg.as_fraction(x).denominator != 1 for x in k):
        raise NotASymmetry("element does not preserve W")
    return tuple(int(x) for x in k)


def pairing(rho, h, w):
    """Word pairing r . E_W^{-1} . k mod 1 of a W^T-word r with a W-word k.

    ``rho`` is the word for an element of G_max(W) and ``h`` the word for an
    element of G_max(W^T).
    """
    inv = w.inverse_exponent_matrix
    return linalg.dot(h, linalg.mat_vec(inv, rho)) % 1


def phase_pairing(g, h, w):
    """The same pairing on phase vectors: h . E_W . g mod 1."""
    return linalg.dot(h, linalg.mat_vec(w.exponent_matrix, g)) % 1


def transpose_group(g, w):
    """G^T: elements of G_max(W^T) pairing to zero with every element of G."""
    wt = transpose(w)
    full = max_symmetry_group(wt)
    gens = g.generators
    keep = tuple(h for h in full.elements if all(phase_pairing(x, h, w) == 0 for x in gens))
    return DiagonalGroup(w.n, keep, wt)


def check_cy_condition(g, w):
    j = element_J(w)
    return j in g and all(age(e).denominator == 1 for e in g.elements)


def all_subgroups_explicit(g_max):
    """Every subgroup of a small group, as DiagonalGroups (brute force over generators)."""
    n = g_max.n
    found = {DiagonalGroup(n, (identity_element(n),), g_max.polynomial)}
    frontier = list(found)
    while frontier:
        nxt = []
        for sub in frontier:
            for e in g_max.elements:
                if e in sub:
                    continue
                bigger = DiagonalGroup(n, closure(list(sub.generators) + [e], n, g_max.order), g_max.polynomial)
                if bigger not in found:
                    found.add(bigger)
                    nxt.append(bigger)
        frontier = nxt
    return sorted(found, key=lambda s: (s.order, s.elements))


# ---------------------------------------------------------------------------
# word lattices

def _hnf_rows(rows, n):
    h = linalg.hermite_rows([list(r) for r in rows])
    return tuple(tuple(r) for r in h if any(r))[:n]


@dataclass(frozen=True)
class WordLattice:
    """A subgroup of G_max(W) given by its lattice of words (HNF row basis)."""

    exponent_matrix: tuple
    basis: tuple

    @property
    def n(self):
        return len(self.basis)

    @property
    def index(self):
        out = 1
        for i, row in enumerate(self.basis):
            out *= row[i]
        return out

    @property
    def order(self):
        return abs(linalg.determinant(self.exponent_matrix)) // self.index

    def contains_word(self, k):
        # the basis is square upper triangular, so reduce the word pivot by pivot
        v = list(k)
        for i, row in enumerate(self.basis):
            if v[i] % row[i]:
                return False
            m = v[i] // row[i]
            if m:
                v = [a - m * b for a, b in zip(v, row)]
        return True

    def contains_lattice(self, other):
        return all(self.contains_word(r) for r in other.basis)

    def elements(self, w):
        gens = [element_of_word(w, r) for r in self.basis]
        return DiagonalGroup(w.n, closure(gens, w.n), w)


def lattice_of_group(g, w):
    """Word lattice of an explicit subgroup of G_max(W)."""
    e = w.exponent_matrix
    rows = [word_of_element(w, x) for x in g.generators] + linalg.transpose(e)
    return WordLattice(tuple(map(tuple, e)), _hnf_rows(rows, w.n))


def _exponent_columns(e):
    """Row basis of E Z^N (the words of the identity)."""
    return [list(r) for r in linalg.transpose(e)]


def _scaled_inverse(b):
    """(X, det) with b X = det I for an upper triangular integer matrix b."""
    n = len(b)
    det = 1
    for i in range(n):
        det *= b[i][i]
    x = [[0] * n for _ in range(n)]
    for j in range(n):
        for i in range(n - 1, -1, -1):
            acc = det if i == j else 0
            acc -= sum(b[i][k] * x[k][j] for k in range(i + 1, n))
            x[i][j] = acc // b[i][i]
    return x, det


def transpose_lattice(lat):
    """Word lattice of G^T inside G_max(W^T): rows of B^{-T} E."""
    e = lat.exponent_matrix
    n = len(e)
    x, det = _scaled_inverse(lat.basis)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            v = sum(x[k][i] * e[k][j] for k in range(n))
            if v % det:
                raise ValueError("transpose lattice is not integral")
            row.append(v // det)
        rows.append(row)
    et = tuple(zip(*e))
    return WordLattice(et, _hnf_rows(rows, n))


def sl_lattice(w):
    """Words of SL(W): k with (sum of phases of E^{-1} k) integral."""
    n = w.n
    inv = w.inverse_exponent_matrix
    weights = [sum(inv[i][j] for i in range(n)) for j in range(n)]
    den = linalg.common_denominator(weights)
    ints = [int(x * den) for x in weights]
    # k . ints = 0 mod den: kernel of Z^N -> Z/den
    rows = linalg.integer_kernel([[x] for x in ints + [den]])
    basis = [r[:n] for r in rows]
    e = w.exponent_matrix
    return WordLattice(tuple(map(tuple, e)), _hnf_rows(basis + _exponent_columns(e), n))


def j_lattice(w):
    e = w.exponent_matrix
    return WordLattice(tuple(map(tuple, e)), _hnf_rows([[1] * w.n] + _exponent_columns(e), w.n))


def full_lattice(w):
    return WordLattice(tuple(map(tuple, w.exponent_matrix)), tuple(tuple(r) for r in linalg.identity(w.n)))


def trivial_lattice(w):
    e = w.exponent_matrix
    return WordLattice(tuple(map(tuple, e)), _hnf_rows(_exponent_columns(e), w.n))


def _lattices_over_diagonal(d):
    """HNF row bases of all lattices M with diag(d) Z^n inside M inside Z^n."""
    n = len(d)
    results = []

    def member(rows, v, start):
        # rows: dict index -> HNF row (upper triangular, positions >= index)
        v = list(v)
        for i in range(start, n):
            if v[i] == 0:
                continue
            if i not in rows:
                return False
            h = rows[i]
            if v[i] % h[i]:
                return False
            q = v[i] // h[i]
            v = [a - q * b for a, b in zip(v, h)]
        return True

    def rec(i, rows):
        if i < 0:
            results.append(tuple(tuple(rows[k]) for k in range(n)))
            return
        for hii in [x for x in range(1, d[i] + 1) if d[i] % x == 0]:
            m = d[i] // hii
            tails = [range(rows[j][j]) for j in range(i + 1, n)]
            for tail in product(*tails):
                t = [0] * (i + 1) + list(tail)
                if not member(rows, [m * x for x in t], i + 1):
                    continue
                row = [0] * n
                row[i] = hii
                for j in range(i + 1, n):
                    row[j] = t[j]
                rows2 = dict(rows)
                rows2[i] = row
                rec(i - 1, rows2)

    rec(n - 1, {})
    return results


def all_subgroup_lattices(w):
    """Every subgroup of G_max(W) as a WordLattice, via the Smith form of E."""
    e = w.exponent_matrix
    d, u, v = linalg.smith_normal_form(e)
    diag = [abs(d[i][i]) for i in range(w.n)]
    # u E v = D gives E^T = v^{-T} D u^{-T}, so the rows of E^T span the rows of D u^{-T}.
    # Word lattices L over them correspond to lattices M over D Z^n through L = M u^{-T}.
    uinv_t = linalg.transpose(linalg.rational_inverse(u))
    uinv_t = [[int(x) for x in row] for row in uinv_t]
    et = tuple(map(tuple, e))
    out = []
    for m in _lattices_over_diagonal(diag):
        rows = linalg.mat_mul([list(r) for r in m], uinv_t)
        out.append(WordLattice(et, _hnf_rows(rows, w.n)))
    return out
