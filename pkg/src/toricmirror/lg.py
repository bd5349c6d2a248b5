"""Invertible quasihomogeneous polynomials and their Jacobian rings.

Polynomials are sums of monomials with exact rational coefficients. The
invertible ones (as many monomials as variables, nonsingular exponent matrix)
carry unique charges, a Kreuzer-Skarke decomposition into Fermat, loop and
chain pieces, and a graded Jacobian ring computed degree by degree.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from . import linalg
from .errors import (ChargeOutOfRange, InfiniteDimensional, NonIntegralMilnor, NotDecomposable,
                     NotSquare, ParseError, RepeatedMonomial, SingularExponentMatrix)


@dataclass(frozen=True)
class Polynomial:
    variables: tuple
    terms: tuple  # ((coeff, exps), ...)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "terms", tuple(
            (linalg.as_fraction(c), tuple(int(e) for e in exps)) for c, exps in self.terms))
        seen = set()
        for c, exps in self.terms:
            if len(exps) != len(self.variables):
                raise ParseError("exponent vector length differs from variable count")
            if any(e < 0 for e in exps):
                raise ParseError("negative exponent in a polynomial")
            if c == 0:
                raise ParseError("zero coefficient")
            if exps in seen:
                raise RepeatedMonomial(f"monomial {format_monomial(self.variables, exps)} repeated")
            seen.add(exps)

    @property
    def exponent_matrix(self):
        return [list(e) for _, e in self.terms]

    @property
    def coefficients(self):
        return [c for c, _ in self.terms]

    @property
    def is_zero(self):
        return not self.terms

    def to_json(self):
        return {"vars": list(self.variables),
                "terms": [{"coeff": linalg.format_rational(c), "exps": list(e)} for c, e in self.terms]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(tuple(obj["vars"]), tuple((t["coeff"], t["exps"]) for t in obj["terms"]))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed polynomial JSON: {exc}") from exc

    def text(self):
        if not self.terms:
            return "0"
        out = []
        for i, (c, e) in enumerate(self.terms):
            mono = format_monomial(self.variables, e)
            sign = "-" if c < 0 else "+"
            mag = abs(c)
            if mono == "1":
                body = linalg.format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{linalg.format_rational(mag)}*{mono}"
            out.append((("-" if sign == "-" else "") if i == 0 else f" {sign} ") + body)
        return "".join(out)

    def __str__(self):
        return self.text()


class InvertiblePolynomial(Polynomial):
    """Square, nonsingular exponent matrix; every variable occurs."""

    def __post_init__(self):
        super().__post_init__()
        n = len(self.variables)
        if len(self.terms) != n:
            raise NotSquare(f"{len(self.terms)} monomials in {n} variables")
        if n and any(all(e[j] == 0 for _, e in self.terms) for j in range(n)):
            raise NotSquare("some variable does not occur")
        if n and linalg.determinant(self.exponent_matrix) == 0:
            raise SingularExponentMatrix("exponent matrix is singular")

    @classmethod
    def from_polynomial(cls, p):
        return cls(p.variables, p.terms)

    @classmethod
    def from_json(cls, obj):
        return cls.from_polynomial(Polynomial.from_json(obj))

    @property
    def n(self):
        return len(self.variables)

    @cached_property
    def inverse_exponent_matrix(self):
        return linalg.rational_inverse(self.exponent_matrix)


def format_monomial(variables, exps):
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\*\*|[-+*/^(){}]))")


def _tokenize(text):
    pos, out = 0, []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}")
        num, name, op = m.groups()
        if num is not None:
            out.append(("num", int(num)))
        elif name is not None:
            out.append(("var", name))
        else:
            out.append(("op", "^" if op == "**" else op))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return out


def parse_terms(text, variables=None):
    """Parse a polynomial into ``(variables, [(coeff, {name: exponent})])``."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty expression")
    i = 0
    terms = []
    order = list(variables) if variables else []

    def peek():
        return toks[i] if i < len(toks) else (None, None)

    def number():
        nonlocal i
        kind, val = peek()
        if kind == "num":
            i += 1
            return Fraction(val)
        if (kind, val) == ("op", "(") or (kind, val) == ("op", "{"):
            close = ")" if val == "(" else "}"
            i += 1
            num = number()
            if peek() == ("op", "/"):
                i += 1
                num /= number()
            if peek() != ("op", close):
                raise ParseError("unbalanced bracket in a coefficient")
            i += 1
            return num
        raise ParseError(f"number expected, found {val!r}")

    def exponent():
        nonlocal i
        kind, val = peek()
        if kind == "num":
            i += 1
            return val
        if (kind, val) in (("op", "("), ("op", "{")):
            close = ")" if val == "(" else "}"
            i += 1
            k, v = peek()
            if k != "num":
                raise ParseError("integer exponent expected")
            i += 1
            if peek() != ("op", close):
                raise ParseError("unbalanced bracket in an exponent")
            i += 1
            return v
        raise ParseError("integer exponent expected")

    while i < len(toks):
        sign = 1
        while peek()[0] == "op" and peek()[1] in "+-":
            if peek()[1] == "-":
                sign = -sign
            i += 1
        coeff = Fraction(sign)
        mono = {}
        started = False
        while True:
            kind, val = peek()
            if kind == "num" or (kind == "op" and val in "({"):
                coeff *= number()
            elif kind == "var":
                i += 1
                e = 1
                if peek() == ("op", "^"):
                    i += 1
                    e = exponent()
                if variables and val not in variables:
                    raise ParseError(f"unknown variable {val!r}")
                if val not in order:
                    order.append(val)
                mono[val] = mono.get(val, 0) + e
            else:
                raise ParseError("unexpected end of input" if kind is None else f"unexpected token {val!r}")
            started = True
            kind, val = peek()
            if kind is None or (kind == "op" and val in "+-"):
                break
            if (kind, val) == ("op", "*"):
                i += 1
            elif (kind, val) == ("op", "/"):
                i += 1
                d = number()
                if d == 0:
                    raise ParseError("division by zero")
                coeff /= d
                kind, val = peek()
                if kind is None or (kind == "op" and val in "+-"):
                    break
                if (kind, val) == ("op", "*"):
                    i += 1
        if not started:
            raise ParseError("dangling sign")
        terms.append((coeff, mono))
    return order, terms


def parse_polynomial(text, variables=None, invertible=True):
    """Parse text such as ``"x^3*y + x*y^5"``; repeated monomials are rejected."""
    order, raw = parse_terms(text, variables)
    terms = []
    for coeff, mono in raw:
        exps = tuple(mono.get(v, 0) for v in order)
        if coeff == 0:
            continue
        terms.append((coeff, exps))
    cls = InvertiblePolynomial if invertible else Polynomial
    return cls(tuple(order), tuple(terms))


# ---------------------------------------------------------------------------
# charges, decomposition, invariants

@dataclass(frozen=True)
class ChargeVector:
    q: tuple
    weights: tuple
    degree: int

    def to_json(self):
        return {"q": [linalg.format_rational(x) for x in self.q],
                "weights": list(self.weights), "d": self.degree}


def raw_charges(w):
    """E_W^{-1}.(1,...,1) without the range check."""
    inv = w.inverse_exponent_matrix
    return tuple(sum(row) for row in inv)


def charges(w):
    q = raw_charges(w)
    bad = [linalg.format_rational(x) for x in q if not (0 < x <= Fraction(1, 2))]
    if bad:
        raise ChargeOutOfRange(f"charges {bad} lie outside (0, 1/2]")
    d = linalg.common_denominator(q)
    return ChargeVector(q, tuple(int(x * d) for x in q), d)


@dataclass(frozen=True)
class AtomicPiece:
    kind: str  # "fermat", "loop" or "chain"
    variables: tuple
    exponents: tuple

    def to_json(self):
        return {"type": self.kind, "variable_indices": list(self.variables),
                "exponents": list(self.exponents)}


def ks_decompose(w):
    """Split into Fermat, loop and chain pieces on disjoint variable sets."""
    n = w.n
    owner = {}
    target = {}
    expo = {}
    for row, (_, e) in enumerate(w.terms):
        support = [j for j in range(n) if e[j]]
        if len(support) == 1:
            j = support[0]
            if e[j] < 2:
                raise NotDecomposable(f"linear monomial {format_monomial(w.variables, e)}")
            own, tgt = j, None
        elif len(support) == 2:
            a, b = support
            if e[a] >= 2 and e[b] == 1:
                own, tgt = a, b
            elif e[b] >= 2 and e[a] == 1:
                own, tgt = b, a
            else:
                raise NotDecomposable(f"monomial {format_monomial(w.variables, e)} fits no atomic type")
        else:
            raise NotDecomposable(f"monomial {format_monomial(w.variables, e)} has more than two variables")
        if own in owner:
            raise NotDecomposable(f"variable {w.variables[own]} owns two monomials")
        owner[own] = row
        target[own] = tgt
        expo[own] = e[own]
    incoming = {}
    for src, tgt in target.items():
        if tgt is not None:
            incoming.setdefault(tgt, []).append(src)
    if any(len(v) > 1 for v in incoming.values()):
        raise NotDecomposable("a variable is pointed to by two monomials")
    pieces = []
    used = set()
    # chains and Fermat pieces start at variables nothing points to
    for start in range(n):
        if start in incoming:
            continue
        path = [start]
        while target[path[-1]] is not None:
            path.append(target[path[-1]])
        used.update(path)
        kind = "fermat" if len(path) == 1 else "chain"
        pieces.append(AtomicPiece(kind, tuple(path), tuple(expo[v] for v in path)))
    for start in range(n):
        if start in used:
            continue
        path = [start]
        while target[path[-1]] != start:
            path.append(target[path[-1]])
            if path[-1] is None or len(path) > n:
                raise NotDecomposable("broken cycle")
        used.update(path)
        pieces.append(AtomicPiece("loop", tuple(path), tuple(expo[v] for v in path)))
    pieces.sort(key=lambda p: min(p.variables))
    return pieces


def central_charge(w):
    q = raw_charges(w)
    return sum(1 - 2 * x for x in q)


def is_calabi_yau(w):
    return sum(raw_charges(w)) == 1


def milnor_number(w):
    q = charges(w).q
    mu = Fraction(1)
    for x in q:
        mu *= 1 / x - 1
    if mu.denominator != 1:
        raise NonIntegralMilnor(f"product of (1/q - 1) equals {mu}")
    return int(mu)


def transpose(w):
    e = linalg.transpose(w.exponent_matrix)
    return InvertiblePolynomial(w.variables, tuple((1, tuple(row)) for row in e))


def restrict_to_fixed(w, fixed):
    """Monomials supported inside ``fixed`` as a polynomial in those variables."""
    fixed = sorted(fixed)
    fs = set(fixed)
    terms = []
    for c, e in w.terms:
        if all(e[j] == 0 for j in range(len(e)) if j not in fs):
            terms.append((c, tuple(e[j] for j in fixed)))
    return Polynomial(tuple(w.variables[j] for j in fixed), tuple(terms))


# ---------------------------------------------------------------------------
# Jacobian ring

def poincare_series(weights, degree, upto):
    """Coefficients of prod (1 - t^{d - c_i}) / (1 - t^{c_i}) up to t^upto."""
    coeffs = [0] * (upto + 1)
    coeffs[0] = 1
    for c in weights:
        shift = degree - c
        nxt = coeffs[:]
        for k in range(upto, shift - 1, -1):
            nxt[k] -= coeffs[k - shift]
        for k in range(c, upto + 1):
            nxt[k] += nxt[k - c]
        coeffs = nxt
    return coeffs


def monomials_of_degree(weights, target):
    """Exponent vectors r with sum r_i c_i = target."""
    n = len(weights)
    out = []

    def rec(i, left, acc):
        if i == n - 1:
            if left % weights[i] == 0:
                out.append(tuple(acc + [left // weights[i]]))
            return
        for k in range(left // weights[i] + 1):
            rec(i + 1, left - k * weights[i], acc + [k])

    if n == 0:
        return [()] if target == 0 else []
    if target < 0:
        return []
    rec(0, target, [])
    return out


def _partials(w):
    """Partial derivatives as dicts exps -> coeff."""
    out = []
    for j in range(len(w.variables)):
        d = {}
        for c, e in w.terms:
            if e[j]:
                ee = list(e)
                ee[j] -= 1
                d[tuple(ee)] = d.get(tuple(ee), 0) + c * e[j]
        out.append(d)
    return out


class _GradedPiece:
    """Echelon data for one weighted degree of a Jacobian quotient."""

    def __init__(self, columns, relations):
        self.columns = columns
        self.index = {m: k for k, m in enumerate(columns)}
        self.pivots = {}
        for rel in relations:
            row = {self.index[m]: c for m, c in rel.items() if c}
            self._insert(row)
        self.basis = [columns[k] for k in range(len(columns)) if k not in self.pivots]

    def _insert(self, row):
        while row:
            p = min(row)
            if p in self.pivots:
                prow = self.pivots[p]
                f = row[p] / prow[p]
                for k, v in prow.items():
                    nv = row.get(k, 0) - f * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
            else:
                lead = row[p]
                self.pivots[p] = {k: v / lead for k, v in row.items()}
                return

    def reduce(self, monomial):
        """Coordinates of a monomial in the chosen basis."""
        row = {self.index[monomial]: Fraction(1)}
        while True:
            hit = [k for k in row if k in self.pivots]
            if not hit:
                break
            p = min(hit)
            f = row[p]
            for k, v in self.pivots[p].items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
        return {self.columns[k]: v for k, v in row.items()}


class _JacobianComponent:
    """Jacobian quotient of a variable-connected block of W."""

    def __init__(self, w, block, weights, degree):
        self.block = block
        sub = restrict_to_fixed(w, block)
        self.weights = [weights[j] for j in block]
        self.degree = degree
        self.top = sum(degree - 2 * c for c in self.weights)
        box = [max(e[k] for _, e in sub.terms) for k in range(len(block))]
        partials = _partials(sub)
        expected = poincare_series(self.weights, degree, self.top + degree)
        self.pieces = {}
        self.mismatch = []
        for D in range(self.top + degree + 1):
            mons = monomials_of_degree(self.weights, D)
            if not mons and expected[D] == 0:
                continue
            # least preferred first: outside the box, then larger in lex order
            mons.sort(key=lambda m: (all(m[k] < box[k] for k in range(len(m))), tuple(-x for x in m)))
            rels = []
            for j, part in enumerate(partials):
                for m in monomials_of_degree(self.weights, D - (degree - self.weights[j])):
                    rels.append({tuple(a + b for a, b in zip(m, e)): c for e, c in part.items()})
            piece = _GradedPiece(mons, rels)
            self.pieces[D] = piece
            if len(piece.basis) != expected[D]:
                self.mismatch.append((D, len(piece.basis), expected[D]))

    @property
    def ok(self):
        return not self.mismatch

    def basis(self):
        out = []
        for D in sorted(self.pieces):
            if D <= self.top:
                out.extend((D, m) for m in self.pieces[D].basis)
        return out

    def reduce(self, monomial):
        D = sum(a * c for a, c in zip(monomial, self.weights))
        if D > self.top:
            piece = self.pieces.get(D)
            if piece is None:
                return {}
            red = piece.reduce(monomial)
            if red:
                raise InfiniteDimensional("monomial beyond the top degree survives")
            return {}
        return self.pieces[D].reduce(monomial)


def variable_blocks(w):
    """Connected components of the graph joining variables that share a monomial."""
    n = len(w.variables)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for _, e in w.terms:
        sup = [j for j in range(n) if e[j]]
        for j in sup[1:]:
            parent[find(j)] = find(sup[0])
    blocks = {}
    for j in range(n):
        blocks.setdefault(find(j), []).append(j)
    return sorted(blocks.values())


@dataclass(frozen=True)
class JacobianBasis:
    monomials: tuple
    degrees: tuple

    def to_json(self):
        return {"monomials": [list(m) for m in self.monomials],
                "degrees": [linalg.format_rational(d) for d in self.degrees]}


class JacobianRing:
    """Graded Jacobian ring of an invertible polynomial with a fixed monomial basis."""

    def __init__(self, w):
        self.w = w
        ch = ChargeVector(*_weights(w))
        self.charges = ch
        self.components = [_JacobianComponent(w, b, ch.weights, ch.degree) for b in variable_blocks(w)]

    @property
    def ok(self):
        return all(c.ok for c in self.components)

    @property
    def mismatches(self):
        return [m for c in self.components for m in c.mismatch]

    @cached_property
    def basis(self):
        if not self.ok:
            raise InfiniteDimensional(f"graded dimensions disagree with the Poincare series: {self.mismatches}")
        combos = [((), 0)]
        n = self.w.n
        for comp in self.components:
            nxt = []
            for acc, deg in combos:
                for D, m in comp.basis():
                    nxt.append((acc + tuple(zip(comp.block, m)), deg + D))
            combos = nxt
        mons = []
        for acc, deg in combos:
            e = [0] * n
            for j, x in acc:
                e[j] = x
            mons.append((Fraction(deg, self.charges.degree), tuple(e)))
        mons.sort(key=lambda t: (t[0], tuple(-x for x in t[1])))
        return JacobianBasis(tuple(m for _, m in mons), tuple(d for d, _ in mons))

    def degree(self, monomial):
        return sum(Fraction(a) * q for a, q in zip(monomial, self.charges.q))

    @property
    def top_monomial(self):
        return max(zip(self.basis.degrees, self.basis.monomials))[1]

    def reduce(self, monomial):
        """Coordinates of a monomial in the basis (dict exps -> coefficient)."""
        out = {(): Fraction(1)}
        for comp in self.components:
            part = comp.reduce(tuple(monomial[j] for j in comp.block))
            nxt = {}
            for acc, c in out.items():
                for m, v in part.items():
                    nxt[acc + tuple(zip(comp.block, m))] = c * v
            out = nxt
        res = {}
        for acc, c in out.items():
            e = [0] * self.w.n
            for j, x in acc:
                e[j] = x
            res[tuple(e)] = c
        return res

    def top_coefficient(self, monomial):
        return self.reduce(monomial).get(self.top_monomial, Fraction(0))


def _weights(w):
    q = raw_charges(w)
    if any(x <= 0 for x in q):
        raise ChargeOutOfRange("nonpositive charge")
    d = linalg.common_denominator(q)
    return q, tuple(int(x * d) for x in q), d


def jacobian_basis(w):
    return JacobianRing(w).basis


def nondegeneracy_check(w):
    if not w.terms:
        return {"ok": False, "reasons": ["W is zero"]}
    reasons = []
    for _, e in w.terms:
        sup = [j for j in range(w.n) if e[j]]
        if len(sup) == 2 and all(e[j] == 1 for j in sup):
            reasons.append(f"quadratic monomial {format_monomial(w.variables, e)}")
    try:
        charges(w)
    except ChargeOutOfRange as exc:
        reasons.append(str(exc))
    try:
        ks_decompose(w)
    except NotDecomposable as exc:
        reasons.append(f"not a sum of atomic types: {exc}")
    if all(x > 0 for x in raw_charges(w)):
        ring = JacobianRing(w)
        if not ring.ok:
            reasons.append(f"graded Jacobian dimensions differ from the Poincare series at {ring.mismatches}")
    return {"ok": not reasons, "reasons": reasons}
