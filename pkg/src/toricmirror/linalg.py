"""Exact integer and rational linear algebra.

Matrices are plain lists of rows holding ``int`` or ``fractions.Fraction``.
Nothing here ever touches floating point. Row-style conventions are used
throughout: a matrix with rows v_1..v_n is treated as the list of vectors v_i.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .errors import NotSquare, SingularMatrix


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Z^free_rank plus a torsion part Z/d_1 + ... with d_1 | d_2 | ..."""

    free_rank: int
    torsion: tuple = field(default_factory=tuple)

    @property
    def order(self):
        """Group order, or None when the group is infinite."""
        if self.free_rank:
            return None
        out = 1
        for d in self.torsion:
            out *= d
        return out

    @property
    def is_trivial(self):
        return self.free_rank == 0 and not self.torsion

    def to_json(self):
        return {"free_rank": self.free_rank, "torsion": list(self.torsion)}

    def __str__(self):
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts.extend(f"Z/{d}" for d in self.torsion)
        return " + ".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# basic helpers

def shape(m):
    rows = len(m)
    cols = len(m[0]) if rows else 0
    return rows, cols


def identity(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def transpose(m, cols=None):
    """Transpose; ``cols`` is needed only for matrices with zero rows."""
    if not m:
        return [[] for _ in range(cols or 0)]
    return [list(col) for col in zip(*m)]


def mat_mul(a, b):
    if not a:
        return []
    inner = len(b)
    cols = len(b[0]) if b else 0
    if inner == 0:
        return [[0] * cols for _ in a]
    bt = transpose(b)
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def mat_vec(m, v):
    return [sum(x * y for x, y in zip(row, v)) for row in m]


def vec_mat(v, m):
    if not m:
        return []
    return [sum(v[i] * m[i][j] for i in range(len(m))) for j in range(len(m[0]))]


def dot(u, v):
    return sum(x * y for x, y in zip(u, v))


def as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def vector_gcd(v):
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive(v):
    """Scale an integer or rational vector to the primitive integer vector on its ray."""
    fr = [as_fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = vector_gcd(ints)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


def is_primitive(v):
    return vector_gcd(v) == 1


def common_denominator(values):
    den = 1
    for x in values:
        x = as_fraction(x)
        den = den * x.denominator // gcd(den, x.denominator)
    return den


# ---------------------------------------------------------------------------
# normal forms

def hermite_normal_form(m):
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u·m = h``. Pivots of ``h``
    are positive, entries above a pivot lie in ``[0, pivot)``, zero rows come
    last.
    """
    return _hermite(m, track=True)


def hermite_rows(m):
    """The Hermite normal form alone, skipping the transform."""
    return _hermite(m, track=False)[0]


def _hermite(m, track):
    a = [[int(x) for x in row] for row in m]
    n, c = shape(a)
    u = identity(n) if track else None

    def sub(i, r, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[r])]
        if track:
            u[i] = [x - q * y for x, y in zip(u[i], u[r])]

    r = 0
    for col in range(c):
        if r == n:
            break
        while True:
            live = [i for i in range(r, n) if a[i][col] != 0]
            if not live:
                break
            piv = min(live, key=lambda i: abs(a[i][col]))
            a[r], a[piv] = a[piv], a[r]
            if track:
                u[r], u[piv] = u[piv], u[r]
            clean = True
            for i in range(r + 1, n):
                if a[i][col]:
                    sub(i, r, a[i][col] // a[r][col])
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if a[r][col] == 0:
            continue
        if a[r][col] < 0:
            a[r] = [-x for x in a[r]]
            if track:
                u[r] = [-x for x in u[r]]
        for i in range(r):
            q = a[i][col] // a[r][col]
            if q:
                sub(i, r, q)
        r += 1
    return a, u


def smith_normal_form(m):
    """Smith normal form ``(d, u, v)`` with ``u·m·v = d`` and d_1 | d_2 | ...."""
    a = [[int(x) for x in row] for row in m]
    n, c = shape(a)
    u = identity(n)
    v = identity(c)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):  # row_dst += k * row_src
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):  # col_dst += k * col_src
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    t = 0
    while t < min(n, c):
        entries = [(abs(a[i][j]), i, j) for i in range(t, n) for j in range(t, c) if a[i][j]]
        if not entries:
            break
        _, i, j = min(entries)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            changed = False
            for i in range(t + 1, n):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // a[t][t]))
                    if a[i][t]:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, c):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // a[t][t]))
                    if a[t][j]:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            # pivot now isolated; enforce divisibility on the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, c)
                        if a[i][j] % a[t][t]), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def smith_diagonal(m):
    """Nonzero invariant factors of an integer matrix."""
    d, _, _ = smith_normal_form(m)
    n, c = shape(d)
    return [d[i][i] for i in range(min(n, c)) if d[i][i]]


# ---------------------------------------------------------------------------
# kernels, cokernels, lattices

def lattice_basis(generators, dim=None):
    """Hermite-canonical basis (nonzero HNF rows) of the lattice spanned by ``generators``."""
    gens = [list(g) for g in generators]
    if not gens:
        return []
    h, _ = hermite_normal_form(gens)
    return [row for row in h if any(row)]


def integer_kernel(m, cols=None):
    """Saturated basis of the left kernel ``{a : a·m = 0}``.

    The rows of ``m`` are the vectors v_i; the answer lists integer relations
    Σ a_i v_i = 0. The basis is canonical: Hermite form, rows sorted
    lexicographically.
    """
    n, c = shape(m)
    if n == 0:
        return []
    if c == 0:
        return identity(n)
    aug = [list(map(int, m[i])) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    h, _ = hermite_normal_form(aug)
    kernel = [row[c:] for row in h if not any(row[:c])]
    return sorted(lattice_basis(kernel))


def cokernel_invariants(m, rows=None):
    """Invariants of Z^rows / (column span of m)."""
    n, c = shape(m)
    if rows is not None:
        n = rows
    if c == 0 or n == 0:
        return AbelianGroupInvariants(n, ())
    diag = smith_diagonal(m)
    return AbelianGroupInvariants(n - len(diag), tuple(d for d in diag if d > 1))


def lattice_contains(basis, v):
    """Membership of an integer (or rational) vector in the lattice with the given HNF basis."""
    rest = [as_fraction(x) for x in v]
    for row in basis:
        col = next(j for j, x in enumerate(row) if x)
        q = rest[col] / row[col]
        if q.denominator != 1:
            return False
        rest = [x - q * y for x, y in zip(rest, row)]
    return not any(rest)


def same_lattice(gens_a, gens_b):
    return lattice_basis(gens_a) == lattice_basis(gens_b)


# ---------------------------------------------------------------------------
# rational linear algebra

def determinant(m):
    """Exact determinant (Bareiss for integers, Gaussian elimination otherwise)."""
    n = len(m)
    if n == 0:
        return 1
    if all(isinstance(x, int) for row in m for x in row):
        a = [list(row) for row in m]
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k]), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1]
    a = [[as_fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return Fraction(0)
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det
        det *= a[k][k]
        for i in range(k + 1, n):
            f = a[i][k] / a[k][k]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return det


def row_echelon(m):
    """Reduced row echelon form over Q; returns (rref rows, pivot columns)."""
    a = [[as_fraction(x) for x in row] for row in m]
    n, c = shape(a)
    pivots = []
    r = 0
    for col in range(c):
        piv = next((i for i in range(r, n) if a[i][col]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][col]
        a[r] = [x / p for x in a[r]]
        for i in range(n):
            if i != r and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == n:
            break
    return a[:r], pivots


def rank(m):
    if not m:
        return 0
    return len(row_echelon(m)[1])


def rational_inverse(m):
    """Exact inverse over Q; raises SingularMatrix."""
    n = len(m)
    if any(len(row) != n for row in m):
        raise NotSquare("rational_inverse needs a square matrix")
    aug = [[as_fraction(x) for x in m[i]] + [Fraction(int(i == j)) for j in range(n)]
           for i in range(n)]
    red, piv = row_echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrix("matrix is singular")
    return [row[n:] for row in red]


def rational_nullspace(m, cols=None):
    """Basis of {x : m·x = 0} over Q (column-vector convention)."""
    n, c = shape(m)
    if cols is not None:
        c = cols
    if n == 0:
        return [[Fraction(int(i == j)) for j in range(c)] for i in range(c)]
    red, piv = row_echelon(m)
    free = [j for j in range(c) if j not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * c
        x[f] = Fraction(1)
        for row, p in zip(red, piv):
            x[p] = -row[f]
        basis.append(x)
    return basis


def solve_rational(m, b):
    """One solution of m·x = b over Q, or None when inconsistent."""
    n, c = shape(m)
    aug = [[as_fraction(x) for x in m[i]] + [as_fraction(b[i])] for i in range(n)]
    red, piv = row_echelon(aug)
    if c in piv:
        return None
    x = [Fraction(0)] * c
    for row, p in zip(red, piv):
        x[p] = row[c]
    return x


def unimodular_change(a_rows, b_rows):
    """Integer matrix U with det ±1 and a_i·U = b_i for all i, or None.

    Rows of ``a_rows`` must span Q^r. Used to compare ray configurations up to
    a change of lattice basis with a fixed correspondence of rays.
    """
    r = len(a_rows[0])
    sub, chosen = [], []
    for i, row in enumerate(a_rows):
        if rank(sub + [row]) > len(sub):
            sub.append(row)
            chosen.append(i)
        if len(sub) == r:
            break
    if len(sub) < r:
        return None
    inv = rational_inverse(sub)
    u = mat_mul(inv, [b_rows[i] for i in chosen])
    if any(as_fraction(x).denominator != 1 for row in u for x in row):
        return None
    u = [[int(x) for x in row] for row in u]
    if abs(determinant(u)) != 1:
        return None
    if mat_mul([list(a) for a in a_rows], u) != [list(b) for b in b_rows]:
        return None
    return u


# ---------------------------------------------------------------------------
# serialization

def format_rational(x):
    x = as_fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def matrix_to_json(m):
    rows, cols = shape(m)
    return {"rows": rows, "cols": cols,
            "entries": [[format_rational(x) for x in row] for row in m]}


def matrix_from_json(obj, integral=False):
    entries = obj["entries"]
    out = [[as_fraction(x) for x in row] for row in entries]
    if len(out) != obj.get("rows", len(out)):
        raise ValueError("row count does not match entries")
    if integral:
        if any(x.denominator != 1 for row in out for x in row):
            raise ValueError("integer matrix expected")
        out = [[int(x) for x in row] for row in out]
    return out
