from collections import Counter
from fractions import Fraction
from itertools import product

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from toricmirror import lg
from toricmirror.errors import (ChargeOutOfRange, InfiniteDimensional, NotSquare, ParseError, RepeatedMonomial,
                                SingularExponentMatrix)
from toricmirror.lg import InvertiblePolynomial, parse_polynomial

ADE = {
    "A1": "x^2", "A2": "x^3", "A5": "x^6",
    "D4": "x^3 + x*y^2", "D5": "x^4 + x*y^2", "D7": "x^6 + x*y^2",
    "E6": "x^3 + y^3", "E7": "x^3 + x*y^3", "E8": "x^3 + y^5",
}
ELLIPTIC = {"P8": "x^3 + y^3 + z^3", "X9": "x^2 + y^4 + z^4", "J10": "x^2 + y^3 + z^6"}
LOOP_EXAMPLE = "x^3*y + x*y^5"


# independent oracles ---------------------------------------------------------

def sympy_jacobian(w):
    xs = sympy.symbols(w.variables)
    expr = sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([x ** e for x, e in zip(xs, exps)])
               for c, exps in w.terms)
    partials = [sympy.diff(expr, x) for x in xs]
    return xs, sympy.groebner(partials, *xs, order="grevlex")


def groebner_milnor(w):
    """Dimension of the Jacobian algebra: standard monomials of a Groebner basis."""
    xs, g = sympy_jacobian(w)
    leads = [sympy.Poly(p, *xs).monoms(order="grevlex")[0] for p in g.exprs]
    bounds = []
    for i in range(len(xs)):
        pure = [m[i] for m in leads if all(m[j] == 0 for j in range(len(xs)) if j != i)]
        bounds.append(min(pure))
    count = 0
    for m in product(*[range(b) for b in bounds]):
        if not any(all(m[j] >= lead[j] for j in range(len(xs))) for lead in leads):
            count += 1
    return count


def basis_is_independent_mod_ideal(w, monomials):
    xs, g = sympy_jacobian(w)
    rows = []
    for m in monomials:
        _, rem = g.reduce(sympy.prod([x ** e for x, e in zip(xs, m)]))
        rows.append(sympy.Poly(rem, *xs).as_dict() if rem != 0 else {})
    keys = sorted({k for r in rows for k in r})
    mat = sympy.Matrix([[r.get(k, 0) for k in keys] for r in rows]) if keys else sympy.zeros(len(rows), 1)
    return mat.rank() == len(monomials)


def poincare_degrees(w):
    ch = lg.charges(w)
    t = sympy.Symbol("t")
    series = sympy.cancel(sympy.prod([(t ** (ch.degree - c) - 1) / (t ** c - 1) for c in ch.weights]))
    coeffs = sympy.Poly(sympy.expand(series), t).as_dict()
    return Counter({Fraction(k[0], ch.degree): int(v) for k, v in coeffs.items()})


@st.composite
def invertible_polynomials(draw, max_vars=3):
    """Disjoint sums of Fermat, chain and loop pieces with exponents >= 2."""
    n = draw(st.integers(1, max_vars))
    names = [f"x{i}" for i in range(n)]
    rows = []
    i = 0
    while i < n:
        size = draw(st.integers(1, n - i))
        kind = "fermat" if size == 1 else draw(st.sampled_from(["chain", "loop"]))
        exps = [draw(st.integers(2, 4)) for _ in range(size)]
        for k in range(size):
            row = [0] * n
            row[i + k] += exps[k]
            if kind == "chain" and k < size - 1:
                row[i + k + 1] += 1
            if kind == "loop":
                row[i + (k + 1) % size] += 1
            rows.append(tuple(row))
        i += size
    return InvertiblePolynomial(tuple(names), tuple((1, r) for r in rows))


# parsing ---------------------------------------------------------------------

def test_parse_loop_example():
    w = parse_polynomial(LOOP_EXAMPLE)
    assert w.variables == ("x", "y")
    assert w.exponent_matrix == [[3, 1], [1, 5]]


def test_parse_variants():
    assert parse_polynomial("x^3 + y^3 + z^3").exponent_matrix == [[3, 0, 0], [0, 3, 0], [0, 0, 3]]
    a = parse_polynomial("2 x**3 y + 1/2*x y^5")
    assert [c for c, _ in a.terms] == [2, Fraction(1, 2)]
    assert parse_polynomial("x^2 + x*y").exponent_matrix == [[2, 0], [1, 1]]


def test_parse_errors():
    with pytest.raises(RepeatedMonomial):
        parse_polynomial("x^2 + 3*x^2")
    with pytest.raises(NotSquare):
        parse_polynomial("x^2 + y^2 + x*y")
    with pytest.raises(ParseError):
        parse_polynomial("x^ + y")
    with pytest.raises(SingularExponentMatrix):
        parse_polynomial("x^2*y^2 + x*y")


def test_json_round_trip():
    w = parse_polynomial(LOOP_EXAMPLE)
    obj = w.to_json()
    assert obj == {"vars": ["x", "y"], "terms": [{"coeff": "1", "exps": [3, 1]}, {"coeff": "1", "exps": [1, 5]}]}
    assert InvertiblePolynomial.from_polynomial(lg.Polynomial.from_json(obj)) == w


# charges and invariants --------------------------------------------------------

def test_charges_loop_example():
    ch = lg.charges(parse_polynomial(LOOP_EXAMPLE))
    assert ch.q == (Fraction(2, 7), Fraction(1, 7))
    assert ch.weights == (2, 1) and ch.degree == 7


@pytest.mark.parametrize("n", range(1, 8))
def test_charges_a_series(n):
    w = parse_polynomial(f"1/{n + 1}*x^{n + 1}")
    assert lg.charges(w).q == (Fraction(1, n + 1),)
    assert lg.central_charge(w) == 1 - Fraction(2, n + 1)


def test_charge_out_of_range():
    with pytest.raises(ChargeOutOfRange):
        lg.charges(parse_polynomial("x"))


def test_central_charges():
    assert lg.central_charge(parse_polynomial(LOOP_EXAMPLE)) == Fraction(8, 7)
    for text in ADE.values():
        assert lg.central_charge(parse_polynomial(text)) < 1
    for text in ELLIPTIC.values():
        w = parse_polynomial(text)
        assert lg.central_charge(w) == 1 and lg.is_calabi_yau(w)


@pytest.mark.parametrize("text", [*ADE.values(), *ELLIPTIC.values(), LOOP_EXAMPLE])
def test_milnor_matches_groebner_oracle(text):
    w = parse_polynomial(text)
    mu = lg.milnor_number(w)
    basis = lg.jacobian_basis(w)
    assert mu == len(basis.monomials) == groebner_milnor(w)
    assert basis_is_independent_mod_ideal(w, basis.monomials)


def test_milnor_examples():
    assert lg.milnor_number(parse_polynomial("x^3 + y^3")) == 4
    assert lg.milnor_number(parse_polynomial(LOOP_EXAMPLE)) == 15
    assert lg.milnor_number(parse_polynomial("x^2")) == 1


# Jacobian bases --------------------------------------------------------------

@pytest.mark.parametrize("n", range(1, 7))
def test_jacobian_basis_a_series(n):
    basis = lg.jacobian_basis(parse_polynomial(f"x^{n + 1}"))
    assert basis.monomials == tuple((k,) for k in range(n))


def test_jacobian_basis_fermat_cubic_pair():
    assert set(lg.jacobian_basis(parse_polynomial("x^3 + y^3")).monomials) == {(0, 0), (1, 0), (0, 1), (1, 1)}


def test_jacobian_basis_loop_example():
    w = parse_polynomial(LOOP_EXAMPLE)
    ring = lg.JacobianRing(w)
    mons = set(ring.basis.monomials)
    assert {(2, 0), (1, 2), (0, 4)} <= mons and (0, 5) not in mons
    assert mons == {(i, j) for i in range(3) for j in range(5)}
    assert ring.top_monomial == (2, 4)
    assert max(ring.basis.degrees) == lg.central_charge(w)
    assert ring.basis.degrees.count(max(ring.basis.degrees)) == 1
    # y^5 is expressible through lower powers of y
    assert (0, 5) not in ring.reduce((0, 5))


def test_infinite_dimensional_detected():
    # x^3 + x^2 y^2 is critical along the whole line x = 0
    ring = lg.JacobianRing(InvertiblePolynomial(("x", "y"), ((1, (3, 0)), (1, (2, 2)))))
    assert not ring.ok
    with pytest.raises(InfiniteDimensional):
        ring.basis


@settings(max_examples=40, deadline=None)
@given(invertible_polynomials())
def test_jacobian_degrees_follow_poincare_series(w):
    basis = lg.jacobian_basis(w)
    assert Counter(basis.degrees) == poincare_degrees(w)
    assert len(basis.monomials) == lg.milnor_number(w)
    assert max(basis.degrees) == lg.central_charge(w)


@settings(max_examples=25, deadline=None)
@given(invertible_polynomials().filter(lambda w: lg.milnor_number(w) <= 60))
def test_milnor_matches_groebner_on_random_polynomials(w):
    assert lg.milnor_number(w) == groebner_milnor(w)


# decomposition, transpose, restriction ----------------------------------------

def test_decompose_examples():
    loop = lg.ks_decompose(parse_polynomial(LOOP_EXAMPLE))
    assert [(p.kind, p.exponents) for p in loop] == [("loop", (3, 5))]
    e7 = lg.ks_decompose(parse_polynomial("x^3 + x*y^3"))
    assert [(p.kind, p.variables, p.exponents) for p in e7] == [("chain", (1, 0), (3, 3))]
    p8 = lg.ks_decompose(parse_polynomial(ELLIPTIC["P8"]))
    assert [p.kind for p in p8] == ["fermat"] * 3


@settings(max_examples=60, deadline=None)
@given(invertible_polynomials(max_vars=5))
def test_decomposition_reassembles(w):
    pieces = lg.ks_decompose(w)
    used = sorted(v for p in pieces for v in p.variables)
    assert used == list(range(w.n))
    rows = set()
    for p in pieces:
        k = len(p.variables)
        for idx, (v, a) in enumerate(zip(p.variables, p.exponents)):
            row = [0] * w.n
            row[v] += a
            if p.kind == "chain" and idx < k - 1:
                row[p.variables[idx + 1]] += 1
            if p.kind == "loop":
                row[p.variables[(idx + 1) % k]] += 1
            rows.add(tuple(row))
    assert rows == {tuple(r) for r in w.exponent_matrix}


@settings(max_examples=60, deadline=None)
@given(invertible_polynomials(max_vars=4))
def test_transpose_properties(w):
    wt = lg.transpose(w)
    assert lg.transpose(wt).exponent_matrix == w.exponent_matrix
    assert abs(sympy.Matrix(wt.exponent_matrix).det()) == abs(sympy.Matrix(w.exponent_matrix).det())
    if all(p.kind != "chain" for p in lg.ks_decompose(w)):
        assert lg.milnor_number(wt) == lg.milnor_number(w)
    q = lg.charges(w).q
    assert all(sum(a * b for a, b in zip(row, q)) == 1 for row in w.exponent_matrix)
    qt = lg.charges(wt).q
    assert all(sum(a * b for a, b in zip(row, qt)) == 1 for row in wt.exponent_matrix)


def test_transpose_of_chain_changes_milnor_number():
    # D_4 = x^3 + x y^2 has mu = 4, its transpose x^3 y + y^2 has mu = 5
    d4 = parse_polynomial(ADE["D4"])
    assert lg.milnor_number(d4) == groebner_milnor(d4) == 4
    d4t = lg.transpose(d4)
    assert lg.milnor_number(d4t) == groebner_milnor(d4t) == 5


def test_transpose_examples():
    w = parse_polynomial(LOOP_EXAMPLE)
    assert lg.transpose(w).exponent_matrix == w.exponent_matrix
    chain = parse_polynomial("x^3*y + y^4")
    assert lg.transpose(chain).exponent_matrix == [[3, 0], [1, 4]]
    fermat = parse_polynomial("x^3 + y^4")
    assert lg.transpose(fermat).exponent_matrix == fermat.exponent_matrix


def test_restrict_to_fixed():
    assert lg.restrict_to_fixed(parse_polynomial(LOOP_EXAMPLE), []).is_zero
    r = lg.restrict_to_fixed(parse_polynomial("x^3 + y^3"), [0])
    assert r.variables == ("x",) and r.terms == ((1, (3,)),)
    r = lg.restrict_to_fixed(parse_polynomial("x^3*y + y^4"), [1])
    assert r.variables == ("y",) and r.terms == ((1, (4,)),)


# nondegeneracy ---------------------------------------------------------------

def test_nondegeneracy_examples():
    assert lg.nondegeneracy_check(parse_polynomial(LOOP_EXAMPLE))["ok"]
    bad = lg.nondegeneracy_check(InvertiblePolynomial(("x", "y"), ((1, (1, 1)), (1, (0, 2)))))
    assert not bad["ok"] and any("quadratic" in r for r in bad["reasons"])
    # the loop x^2 y + x y^2 has no quadratic monomial and an isolated critical point
    loop22 = InvertiblePolynomial(("x", "y"), ((1, (2, 1)), (1, (1, 2))))
    assert lg.nondegeneracy_check(loop22)["ok"]
    assert lg.milnor_number(loop22) == groebner_milnor(loop22) == 4
    line = lg.nondegeneracy_check(InvertiblePolynomial(("x", "y"), ((1, (3, 0)), (1, (2, 2)))))
    assert not line["ok"]
    for text in (*ADE.values(), *ELLIPTIC.values()):
        assert lg.nondegeneracy_check(parse_polynomial(text))["ok"], text
