"""Hori-Vafa mirrors: GLSM phases, toric mirrors, pre-mirrors of invertible
hypersurfaces and complete intersections, symmetry groups, and critical
point counts via the Bernstein-Kushnirenko mixed volume.

Coefficients are exact rationals times exp(sum a_j t_j) for named parameters
t_j with rational exponents a_j. Logarithmic terms -(sum c_k lambda_k) log x_i
carry linear combinations of named equivariant parameters.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations, product
from math import lcm

from . import linalg
from .errors import (DegenerateDegreeMatrix, GroupTooLarge, InconsistentConstraints, LogTermsPresent,
                     NotCalabiYau, NotInvertible, NotInvertibleCI, NotQuasihomogeneous, ParseError,
                     RepeatedMonomial, TooManyVariables)
from .fan import projective_space
from .groups import DEFAULT_ORDER_BOUND, DiagonalGroup, age
from .lg import format_monomial
from .polyhedra import Hull, affine_rank, minkowski_sum
from .polytope import divisor_polytope, lattice_points, mixed_volume, point_monomial, polar_dual


def _params(mapping):
    """Canonical parameter tuple: sorted (name, nonzero Fraction)."""
    items = mapping.items() if isinstance(mapping, dict) else mapping
    out = {}
    for k, v in items:
        out[k] = out.get(k, Fraction(0)) + linalg.as_fraction(v)
    return tuple(sorted((k, v) for k, v in out.items() if v))


def _format_params(params, exponential=True):
    if not params:
        return ""
    parts = []
    for name, a in params:
        if a == 1:
            parts.append(name)
        elif a == -1:
            parts.append(f"-{name}")
        else:
            parts.append(f"{linalg.format_rational(a)}*{name}")
    body = " + ".join(parts).replace("+ -", "- ")
    return f"exp({body})" if exponential else f"({body})"


@dataclass(frozen=True)
class Term:
    coeff: Fraction
    params: tuple
    exps: tuple

    def to_json(self):
        return {"coeff": linalg.format_rational(self.coeff),
                "coeff_params": {k: linalg.format_rational(v) for k, v in self.params},
                "exps": list(self.exps)}


@dataclass(frozen=True)
class LogTerm:
    """-(sum of coefficient * parameter) * log(x_var)."""

    var: int
    params: tuple

    def to_json(self):
        if len(self.params) == 1 and self.params[0][1] == 1:
            return {"var": self.var, "param": self.params[0][0]}
        return {"var": self.var, "params": {k: linalg.format_rational(v) for k, v in self.params}}


@dataclass(frozen=True)
class LaurentSuperpotential:
    variables: tuple
    terms: tuple
    log_terms: tuple = ()

    def __post_init__(self):
        seen = set()
        for t in self.terms:
            if len(t.exps) != len(self.variables):
                raise ParseError("exponent vector length differs from variable count")
            if t.exps in seen:
                raise RepeatedMonomial(f"exponent vector {list(t.exps)} repeated")
            seen.add(t.exps)

    @property
    def n(self):
        return len(self.variables)

    @property
    def exponent_rows(self):
        return [t.exps for t in self.terms]

    def term_set(self):
        return {(t.exps, t.params, t.coeff) for t in self.terms}

    def to_json(self):
        return {"vars": list(self.variables), "terms": [t.to_json() for t in self.terms],
                "log_terms": [lt.to_json() for lt in self.log_terms]}

    @classmethod
    def from_json(cls, obj):
        try:
            variables = tuple(obj["vars"])
            terms = tuple(Term(linalg.as_fraction(t.get("coeff", 1)), _params(t.get("coeff_params", {})),
                               tuple(int(e) for e in t["exps"])) for t in obj["terms"])
            logs = []
            for lt in obj.get("log_terms", []):
                params = lt["params"] if "params" in lt else {lt["param"]: 1}
                logs.append(LogTerm(int(lt["var"]), _params(params)))
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed superpotential JSON: {exc}") from exc
        return cls(variables, terms, tuple(logs))

    def text(self):
        parts = []
        for t in self.terms:
            pieces = []
            if t.coeff != 1 or (not t.params and not any(t.exps)):
                pieces.append(linalg.format_rational(t.coeff))
            if t.params:
                pieces.append(_format_params(t.params))
            mono = _laurent_monomial(self.variables, t.exps)
            if mono != "1" or not pieces:
                pieces.append(mono)
            parts.append("*".join(pieces))
        for lt in self.log_terms:
            parts.append(f"-{_format_params(lt.params, exponential=False)}*log({self.variables[lt.var]})")
        return " + ".join(parts).replace("+ -", "- ") if parts else "0"

    def __str__(self):
        return self.text()


def _laurent_monomial(variables, exps):
    parts = []
    for v, e in zip(variables, exps):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}" if e > 0 else f"{v}^({e})")
    return "*".join(parts) if parts else "1"


def superpotential(variables, terms, log_terms=()):
    """Build from ``[(coeff, params_dict, exps)]`` and ``[(var, params_dict)]``."""
    return LaurentSuperpotential(
        tuple(variables),
        tuple(Term(linalg.as_fraction(c), _params(p), tuple(int(x) for x in e)) for c, p, e in terms),
        tuple(LogTerm(int(v), _params(p)) for v, p in log_terms))


@dataclass(frozen=True)
class MirrorConstraintSystem:
    """Constraints prod x_i^{e_i} = exp(sum a_j t_j) on the ambient variables."""

    variables: tuple
    constraints: tuple  # ((exps, params), ...)

    def to_json(self):
        return {"vars": list(self.variables),
                "constraints": [{"exps": list(e), "params": {k: linalg.format_rational(v) for k, v in p}}
                                for e, p in self.constraints]}

    @classmethod
    def from_json(cls, obj):
        try:
            return cls(tuple(obj["vars"]), tuple((tuple(int(x) for x in c["exps"]), _params(c["params"]))
                                                 for c in obj["constraints"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed constraint JSON: {exc}") from exc


# ---------------------------------------------------------------------------
# GLSM phases

def glsm_rank1_phases(charges):
    """Both phases of a rank-one GLSM with charges (c_1, ..., c_N, -d)."""
    *c, last = [int(x) for x in charges]
    d = -last
    if not c or any(x <= 0 for x in c) or d <= 0:
        raise ValueError("expected charges (c_1, ..., c_N, -d) with all c_i > 0 and d > 0")
    n = len(c)
    base = f"P({','.join(map(str, c))})" if n > 1 or c[0] != 1 else "P^0"
    generator = [linalg.format_rational(Fraction(x, d) % 1) for x in c]
    return {
        "charges": c + [-d],
        "positive_phase": {
            "moment_sign": "s>0",
            "discriminant": "x_1 = ... = x_N = 0",
            "unstable_coordinates": list(range(n)),
            "quotient": f"O_{base}(-{d})",
            "description": f"total space of O(-{d}) over {base}",
            "base_weights": c,
            "fiber_degree": d,
        },
        "negative_phase": {
            "moment_sign": "s<0",
            "discriminant": "p = 0",
            "unstable_coordinates": [n],
            "quotient": f"[C^{n}/Z_{d}]" if d > 1 else f"C^{n}",
            "group_order": d,
            "generator": generator,
        },
    }


# ---------------------------------------------------------------------------
# toric mirrors

def _param_names(r, names=None):
    if names is not None:
        if len(names) != r:
            raise ValueError("one parameter name per constraint is required")
        return list(names)
    return ["t"] if r == 1 else [f"t{j + 1}" for j in range(r)]


def hv_mirror_toric(q, params=None, variables=None, n=None):
    """Constraint system and W = x_1 + ... + x_n for an n x r charge matrix."""
    q = [[int(x) for x in row] for row in q]
    n = len(q) if n is None else n
    r = len(q[0]) if q else 0
    names = _param_names(r, params)
    variables = tuple(variables) if variables else tuple(f"x{i + 1}" for i in range(n))
    constraints = tuple((tuple(q[i][j] for i in range(n)), _params({names[j]: 1})) for j in range(r))
    w = superpotential(variables, [(1, {}, tuple(int(i == k) for k in range(n))) for i in range(n)])
    return MirrorConstraintSystem(variables, constraints), w


def equivariant_hv_mirror(q, subset=None, params=None, lambdas=None, variables=None, n=None):
    """Toric mirror with -lambda_i log x_i added for the chosen variables."""
    system, w = hv_mirror_toric(q, params, variables, n)
    subset = range(w.n) if subset is None else sorted(subset)
    names = lambdas or {i: f"lambda{i + 1}" for i in range(w.n)}
    logs = tuple(LogTerm(i, _params({names[i]: 1})) for i in subset)
    return system, LaurentSuperpotential(w.variables, w.terms, logs)


@dataclass(frozen=True)
class Substitution:
    """x_i = exp(params_i) * prod u_k^{exps_i[k]} over the free variables."""

    free_variables: tuple
    params: tuple
    exps: tuple
    method: str


def _choose_section(c, n, dependent):
    r = len(c)
    if dependent is not None:
        sub = [[c[j][i] for i in dependent] for j in range(r)]
        if len(dependent) != r or linalg.determinant(sub) == 0:
            raise InconsistentConstraints("chosen dependent variables do not solve the constraints")
        return list(dependent), "chosen"
    best_unimodular = None
    for subset in combinations(range(n), r):
        sub = [[c[j][i] for i in subset] for j in range(r)]
        flat = [x for row in sub for x in row]
        if all(x in (0, 1) for x in flat) and all(sum(row) == 1 for row in sub) \
                and all(sum(sub[j][k] for j in range(r)) == 1 for k in range(r)):
            return list(subset), "permutation"
        if best_unimodular is None and abs(linalg.determinant(sub)) == 1:
            best_unimodular = list(subset)
    if best_unimodular is not None:
        return best_unimodular, "unimodular"
    return None, "hermite"


def constraint_substitution(system, dependent=None):
    """Parametrize the constraint torus by free variables."""
    c = [list(e) for e, _ in system.constraints]
    n = len(system.variables)
    r = len(c)
    if r and linalg.rank(c) < r:
        raise InconsistentConstraints("constraint exponent vectors are linearly dependent")
    params = [dict(p) for _, p in system.constraints]
    subset, method = _choose_section(c, n, dependent)
    if method != "hermite":
        free = [i for i in range(n) if i not in subset]
        sub_inv = linalg.rational_inverse([[c[j][i] for i in subset] for j in range(r)])
        out_params = [None] * n
        out_exps = [None] * n
        for pos, i in enumerate(free):
            out_params[i] = ()
            out_exps[i] = tuple(int(k == pos) for k in range(len(free)))
        for a, i in enumerate(subset):
            # log x_S = C_S^{-1} (t - C_F log x_F)
            prm = {}
            for j in range(r):
                for name, v in params[j].items():
                    prm[name] = prm.get(name, 0) + sub_inv[a][j] * v
            exps = []
            for k in free:
                exps.append(-sum(sub_inv[a][j] * c[j][k] for j in range(r)))
            out_params[i] = _params(prm)
            out_exps[i] = tuple(_as_int(x) for x in exps)
        names = tuple(system.variables[i] for i in free)
        return Substitution(names, tuple(out_params), tuple(out_exps), method)
    # Hermite section: C V = [L | 0] with V unimodular
    ct = linalg.transpose(c)  # n x r
    h, u = linalg.hermite_normal_form(ct)  # u C^T = h, so C u^T = h^T
    v = linalg.transpose(u)
    lower = [[h[i][j] for i in range(r)] for j in range(r)]  # L = first r columns of C V
    linv = linalg.rational_inverse(lower)
    m = n - r
    out_params, out_exps = [], []
    for i in range(n):
        prm = {}
        for a in range(r):
            coef = sum(v[i][b] * linv[b][a] for b in range(r))
            for name, val in params[a].items():
                prm[name] = prm.get(name, 0) + coef * val
        out_params.append(_params(prm))
        out_exps.append(tuple(v[i][r + k] for k in range(m)))
    names = tuple(f"u{k + 1}" for k in range(m))
    return Substitution(names, tuple(out_params), tuple(out_exps), method)


def _as_int(x):
    x = linalg.as_fraction(x)
    if x.denominator != 1:
        raise InconsistentConstraints("section has non-integral exponents")
    return int(x)


def apply_substitution(w, sub):
    """Rewrite W on the free torus; constant parts of log terms are dropped."""
    terms = {}
    for t in w.terms:
        prm = dict(t.params)
        exps = [0] * len(sub.free_variables)
        for i, e in enumerate(t.exps):
            if not e:
                continue
            for name, v in sub.params[i]:
                prm[name] = prm.get(name, 0) + e * v
            for k, x in enumerate(sub.exps[i]):
                exps[k] += e * x
        key = tuple(exps)
        prm = _params(prm)
        if key in terms:
            coeff, old = terms[key]
            if old != prm:
                raise RepeatedMonomial(f"two terms collapse to the exponent vector {list(key)}")
            terms[key] = (coeff + t.coeff, prm)
        else:
            terms[key] = (t.coeff, prm)
    new_terms = tuple(Term(cf, prm, e) for e, (cf, prm) in terms.items() if cf)
    logs = {}
    for lt in w.log_terms:
        for k, x in enumerate(sub.exps[lt.var]):
            if x:
                acc = logs.setdefault(k, {})
                for name, v in lt.params:
                    acc[name] = acc.get(name, 0) + x * v
    new_logs = tuple(LogTerm(k, _params(p)) for k, p in sorted(logs.items()) if _params(p))
    return LaurentSuperpotential(sub.free_variables, new_terms, new_logs)


def solve_constraints(system, w, dependent=None):
    if not system.constraints:
        return w
    return apply_substitution(w, constraint_substitution(system, dependent))


def toric_mirror(q, params=None, dependent=None, n=None):
    """Solved-form mirror superpotential of a toric variety with charge matrix q."""
    system, w = hv_mirror_toric(q, params, n=n)
    return solve_constraints(system, w, dependent)


# ---------------------------------------------------------------------------
# critical points

@dataclass(frozen=True)
class CriticalCount:
    count: int
    generic: bool
    assignment: tuple

    def to_json(self):
        return {"count": self.count, "generic": self.generic,
                "assignment": {k: linalg.format_rational(v) for k, v in self.assignment}}


_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47)


def _exact_root(v, num, den):
    """v^(num/den) when it is rational, else None."""
    v = linalg.as_fraction(v)
    if v <= 0:
        return None
    a, b = _iroot(v.numerator, den), _iroot(v.denominator, den)
    if a is None or b is None:
        return None
    return Fraction(a, b) ** num


def _iroot(x, k):
    r = round(x ** (1.0 / k))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand ** k == x:
            return cand
    return None


def _parameter_assignment(w, values=None):
    """Numeric values for exp(t) parameters and log coefficients."""
    values = {k: linalg.as_fraction(v) for k, v in (values or {}).items()}
    exp_names = sorted({name for t in w.terms for name, _ in t.params})
    log_names = sorted({name for lt in w.log_terms for name, _ in lt.params})
    primes = iter(_PRIMES)
    exp_values = {}
    for name in exp_names:
        den = 1
        for t in w.terms:
            for k, a in t.params:
                if k == name:
                    den = lcm(den, a.denominator)
        base = values.get(name, Fraction(next(primes)) ** den)
        exp_values[name] = base
    log_values = {}
    for name in log_names:
        log_values[name] = values.get(name, Fraction(2 * next(primes) + 1, 2))
    return exp_values, log_values


def _numeric_system(w, exp_values, log_values):
    """x_i dW/dx_i as dicts exps -> rational coefficient."""
    system = []
    for i in range(w.n):
        poly = {}
        for t in w.terms:
            if not t.exps[i]:
                continue
            c = t.coeff * t.exps[i]
            for name, a in t.params:
                val = _exact_root(exp_values[name], a.numerator, a.denominator)
                if val is None:
                    raise ParseError(f"exp({linalg.format_rational(a)}*{name}) is not rational at the given value")
                c *= val
            poly[t.exps] = poly.get(t.exps, 0) + c
        for lt in w.log_terms:
            if lt.var == i:
                lam = sum((v * log_values[name] for name, v in lt.params), Fraction(0))
                zero = tuple(0 for _ in range(w.n))
                poly[zero] = poly.get(zero, 0) - lam
        system.append({e: c for e, c in poly.items() if c})
    return system


def critical_count(w, params=None, max_variables=4):
    """BKK count of torus critical points of W (x_i dW/dx_i = 0 for all i)."""
    n = w.n
    exp_values, log_values = _parameter_assignment(w, params)
    system = _numeric_system(w, exp_values, log_values)
    assignment = tuple(sorted({**exp_values, **log_values}.items()))
    if n == 0:
        return CriticalCount(1, True, assignment)
    supports = [sorted(p) for p in system]
    if any(not s for s in supports):
        # W does not depend on some x_i, so no critical point is isolated
        return CriticalCount(0, False, assignment)
    if all(len(s) <= 2 for s in supports):
        count = mixed_volume([[tuple(Fraction(x) for x in e) for e in s] for s in supports])
        return CriticalCount(int(count), True, assignment)
    if n > max_variables:
        raise TooManyVariables(f"{n} torus variables exceed the limit of {max_variables}")
    count = int(mixed_volume([[tuple(Fraction(x) for x in e) for e in s] for s in supports]))
    generic = True if count == 0 else _is_generic(system, n)
    return CriticalCount(count, generic, assignment)


def _is_generic(system, n):
    """No initial system of a proper face of the Minkowski sum has a torus root."""
    pts = minkowski_sum([[tuple(Fraction(x) for x in e) for e in p] for p in system])
    if affine_rank(pts) < n:
        return False
    hull = Hull(pts)
    top = frozenset(range(len(hull.vertices)))
    for face in hull.faces():
        if face == top:
            continue
        weight = [0] * n
        for (normal, _), inc in zip(hull.facets, hull.incidence):
            if face <= inc:
                weight = [a + b for a, b in zip(weight, normal)]
        initial = []
        for p in system:
            low = min(linalg.dot(weight, e) for e in p)
            initial.append({e: c for e, c in p.items() if linalg.dot(weight, e) == low})
        if any(len(f) == 1 for f in initial):
            continue
        if _has_torus_root(initial, n):
            return False
    return True


def _has_torus_root(polys, n):
    import sympy

    xs = sympy.symbols(f"x1:{n + 1}")
    z = sympy.Symbol("z")
    eqs = []
    for p in polys:
        shift = [min(e[i] for e in p) for i in range(n)]
        expr = 0
        for e, c in p.items():
            mono = 1
            for i in range(n):
                mono *= xs[i] ** (e[i] - shift[i])
            expr += sympy.Rational(c.numerator, c.denominator) * mono
        eqs.append(sympy.expand(expr))
    prod_x = 1
    for x in xs:
        prod_x *= x
    eqs.append(1 - z * prod_x)
    basis = sympy.groebner(eqs, *xs, z, order="grevlex")
    return not (len(basis.exprs) == 1 and basis.exprs[0] == 1)


# ---------------------------------------------------------------------------
# pre-mirrors of hypersurfaces and complete intersections

def _merge(variables, raw_terms):
    merged = {}
    for coeff, params, exps in raw_terms:
        key = tuple(exps)
        params = _params(params)
        if key in merged:
            c0, p0 = merged[key]
            if p0 != params:
                raise RepeatedMonomial(f"two terms share the exponent vector {list(key)}")
            merged[key] = (c0 + coeff, p0)
        else:
            merged[key] = (linalg.as_fraction(coeff), params)
    return LaurentSuperpotential(tuple(variables),
                                 tuple(Term(c, p, e) for e, (c, p) in merged.items() if c))


def pre_hv_mirror_hypersurface(a, weights, degree, param="t"):
    """A^T(u) + exp(-t/d) u_1 ... u_N for an invertible A of degree d in weights c."""
    c = [int(x) for x in weights]
    e = a.exponent_matrix
    if len(e) != len(a.variables):
        raise NotInvertible("exponent matrix of A is not square")
    if len(c) != len(a.variables):
        raise NotQuasihomogeneous("one weight per variable is required")
    if any(linalg.dot(row, c) != degree for row in e):
        raise NotQuasihomogeneous(f"E_A . c differs from {degree}")
    return pre_hv_mirror_general(a, [[x] for x in c], [degree], [param])


def pre_hv_mirror_general(a, q, degrees, params=None):
    """Pre-mirror of an invertible hypersurface {A = 0} in the toric variety with charge matrix q.

    A is a polynomial in the first M of the N coordinates; q is N x r with
    r = N - M + 1 and ``degrees`` the r degrees of A.
    """
    e = a.exponent_matrix
    m = len(a.variables)
    q = [[int(x) for x in row] for row in q]
    n = len(q)
    r = len(degrees)
    if len(e) != m:
        raise NotInvertible("exponent matrix of A is not square")
    if n - m + 1 != r or any(len(row) != r for row in q):
        raise NotInvertible(f"need N - M + 1 = r, got N={n}, M={m}, r={r}")
    dmat = [q[i] for i in range(m, n)] + [[-int(x) for x in degrees]]
    if linalg.determinant(dmat) == 0:
        raise NotInvertible("matrix of the extra charge rows and -degrees is singular")
    _check_homogeneous(e, q, degrees, m, n)
    names = _param_names(r, params)
    dinv = linalg.rational_inverse(dmat)
    variables = tuple(f"u{k + 1}" for k in range(m))
    raw = []
    for i in range(m):
        raw.append((1, {}, tuple(e[k][i] for k in range(m))))
    for b in range(r):
        prm = {names[j]: dinv[j][b] for j in range(r)}
        exps = []
        for k in range(m):
            x = -sum(e[k][i] * q[i][j] * dinv[j][b] for i in range(m) for j in range(r))
            if x.denominator != 1:
                raise NotInvertible("change of variables has a non-integral exponent")
            exps.append(int(x))
        raw.append((1, prm, tuple(exps)))
    return _merge(variables, raw)


def _check_homogeneous(e, q, degrees, m, n):
    """Each monomial of A, completed by powers of the extra coordinates, has the given degrees."""
    extra = [q[i] for i in range(m, n)]
    for row in e:
        base = [sum(row[i] * q[i][j] for i in range(m)) for j in range(len(degrees))]
        gap = [int(d) - b for d, b in zip(degrees, base)]
        if not extra:
            if any(gap):
                raise NotQuasihomogeneous(f"monomial {list(row)} has degrees {base}, expected {list(degrees)}")
            continue
        sol = linalg.solve_rational(linalg.transpose(extra), gap)
        if sol is None or any(linalg.as_fraction(x).denominator != 1 or x < 0 for x in sol):
            raise NotQuasihomogeneous(f"monomial {list(row)} cannot be completed to degrees {list(degrees)}")


def pre_hv_mirror_complete_intersection(polys, q, degrees, params=None):
    """Pre-mirror of {A_1 = ... = A_k = 0} when the number of monomials equals N.

    ``degrees[b][a]`` is the degree of A_b under the a-th action.
    """
    if not polys:
        raise NotInvertibleCI("no defining polynomials")
    variables = polys[0].variables
    if any(p.variables != variables for p in polys):
        raise NotInvertibleCI("polynomials must share one variable list")
    n = len(variables)
    k = len(polys)
    q = [[int(x) for x in row] for row in q]
    dmat = [[int(x) for x in row] for row in degrees]
    if len(q) != n or any(len(row) != k for row in q):
        raise NotInvertibleCI(f"charge matrix must be {n} x {k}")
    if len(dmat) != k or any(len(row) != k for row in dmat):
        raise NotInvertibleCI(f"degree matrix must be {k} x {k}")
    rows, owner = [], []
    for b, p in enumerate(polys):
        for _, exps in p.terms:
            rows.append(list(exps))
            owner.append(b)
            got = [sum(exps[i] * q[i][a] for i in range(n)) for a in range(k)]
            if got != dmat[b]:
                raise NotInvertibleCI(f"monomial {format_monomial(variables, exps)} of A_{b + 1} has degrees {got}")
    if len(rows) != n:
        raise NotInvertibleCI(f"{len(rows)} monomials for {n} variables")
    if len({tuple(r) for r in rows}) != n:
        raise NotInvertibleCI("a monomial is repeated among the A_b")
    if linalg.determinant(dmat) == 0:
        raise DegenerateDegreeMatrix("degree matrix is singular")
    dinv = linalg.rational_inverse(dmat)
    names = _param_names(k, params)
    uvars = tuple(f"u{j + 1}" for j in range(n))
    raw = []
    for i in range(n):
        raw.append((1, {}, tuple(rows[j][i] for j in range(n))))
    for b in range(k):
        prm = {names[c]: -dinv[c][b] for c in range(k)}
        raw.append((1, prm, tuple(int(owner[j] == b) for j in range(n))))
    return _merge(uvars, raw)


# ---------------------------------------------------------------------------
# symmetries

def superpotential_symmetry_group(w, bound=DEFAULT_ORDER_BOUND):
    """Diagonal phases preserving every monomial of W, and the determinant-one part."""
    if w.log_terms:
        raise LogTermsPresent("logarithmic terms have no finite diagonal symmetry group")
    n = w.n
    rows = [list(t.exps) for t in w.terms]
    if not rows:
        raise GroupTooLarge("W has no terms; every diagonal element preserves it")
    d, _, v = linalg.smith_normal_form(rows)
    diag = [abs(d[i][i]) if i < len(d) else 0 for i in range(n)]
    if any(x == 0 for x in diag):
        raise GroupTooLarge("W has a continuous diagonal symmetry")
    order = 1
    for x in diag:
        order *= x
    if order > bound:
        raise GroupTooLarge(f"group order {order} exceeds {bound}")
    elements = set()
    for h in product(*[range(x) for x in diag]):
        hv = [Fraction(a, x) for a, x in zip(h, diag)]
        g = tuple(sum(v[i][j] * hv[j] for j in range(n)) % 1 for i in range(n))
        elements.add(g)
    full = DiagonalGroup(n, tuple(sorted(elements)), w)
    sl = DiagonalGroup(n, tuple(g for g in full.elements if age(g).denominator == 1), w)
    return {"full": full, "sl": sl}


def compactified_mirror(w):
    """The pre-mirror with the data of the final orbifold step attached."""
    groups = superpotential_symmetry_group(w)
    return {"superpotential": w, "domain": f"[C^{w.n}/Aut(W)]", "group": groups["full"]}


# ---------------------------------------------------------------------------
# Calabi-Yau alternative description

def batyrev_consistency_cy(n, d=None, param="t"):
    """Hypersurface equation of the alternative mirror description and Batyrev's family."""
    d = n if d is None else d
    if d != n:
        raise NotCalabiYau(f"degree {d} differs from N = {n}")
    if n < 2:
        raise ValueError("N must be at least 2")
    # u_i = exp(t/N) z_i^N / (z_1 ... z_N): prod u_i = exp(t)
    u = [(Fraction(1, n), tuple(n * int(i == j) - 1 for j in range(n))) for i in range(n)]
    # sum u_i = -1, multiplied by exp(-t/N) z_1 ... z_N
    raw = [(1, {}, tuple(x + 1 for x in e)) for _, e in u]
    raw.append((1, {param: Fraction(-1, n)}, tuple(1 for _ in range(n))))
    equation = _merge(tuple(f"z{i + 1}" for i in range(n)), raw)
    delta = divisor_polytope(projective_space(n - 1), [1] * n)
    dual = polar_dual(delta)
    batyrev = sorted({tuple(point_monomial(dual, pt)) for pt in lattice_points(dual)})
    mine = sorted(t.exps for t in equation.terms)
    coincide = any(sorted(tuple(m[p] for p in perm) for m in mine) == batyrev
                   for perm in permutations(range(n)))
    return {"equation": equation, "monomials": mine, "batyrev_monomials": batyrev, "coincide": coincide}

