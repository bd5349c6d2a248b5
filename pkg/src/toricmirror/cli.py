"""Command-line front end: JSON or inline text in, JSON report out."""

import argparse
import json
import sys
from fractions import Fraction

from . import fan as fans
from . import groups, horivafa, lg, linalg, polytope, statespace
from .errors import ParseError, ToricMirrorError

COMMANDS = {
    "fan": ("analyze", "charge", "classgroup", "resolve2d", "refine", "subdivides"),
    "polytope": ("facets", "points", "dual", "reflexive", "normalfan", "divisor", "batyrev"),
    "wps": ("gorenstein", "chenruan"),
    "lg": ("charges", "decompose", "milnor", "jacobian", "transpose"),
    "group": ("max", "j", "sl", "generate", "transpose", "cy"),
    "statespace": ("b", "a", "bhk", "check-pairing"),
    "hv": ("mirror", "equivariant", "hypersurface", "ci", "count", "phases", "batyrev-cy"),
}


class UsageError(Exception):
    pass


def _plain(obj):
    """Convert to JSON-ready values: Fractions become "p/q" strings, tuples become lists."""
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else linalg.format_rational(obj)
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(x) for x in obj]
    if hasattr(obj, "to_json"):
        return _plain(obj.to_json())
    return obj


def _parser():
    parser = argparse.ArgumentParser(prog="toricmirror", description=__doc__)
    groups_ = parser.add_subparsers(dest="area", required=True)
    for area, actions in COMMANDS.items():
        sub = groups_.add_parser(area).add_subparsers(dest="action", required=True)
        for action in actions:
            p = sub.add_parser(action)
            p.add_argument("--file", help="JSON input file")
            p.add_argument("--expr", help="inline polynomial or comma-separated integers")
            p.add_argument("--out", help="write the report here instead of stdout")
            p.add_argument("--group", help="JSON list of generator phase vectors")
            p.add_argument("--params", action="append", default=[], help="name=rational")
            p.add_argument("--convention", choices=statespace.CONVENTIONS, default=statespace.FORM_PULLBACK)
    return parser


def _load(args, required=True):
    if args.file is None:
        if required:
            raise UsageError("--file is required")
        return None
    try:
        with open(args.file, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {args.file}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON in {args.file}: {exc.msg}") from exc


def _integers(text):
    try:
        return [int(x) for x in text.replace(" ", "").strip("()[]").split(",") if x]
    except ValueError as exc:
        raise ParseError(f"expected comma-separated integers, got {text!r}") from exc


def _polynomial(args, invertible=True):
    if args.expr is not None:
        return lg.parse_polynomial(args.expr, invertible=invertible)
    data = _load(args)
    if isinstance(data, dict) and "polynomial" in data:
        return lg.parse_polynomial(data["polynomial"], data.get("vars"), invertible=invertible)
    poly = lg.Polynomial.from_json(data)
    return lg.InvertiblePolynomial.from_polynomial(poly) if invertible else poly


def _phase_vectors(text):
    try:
        vectors = json.loads(text)
        return [tuple(linalg.as_fraction(x) for x in v) for v in vectors]
    except (json.JSONDecodeError, TypeError, ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"--group must be a JSON list of phase vectors: {exc}") from exc


def _group(args, w, default_j=False):
    g_max = groups.max_symmetry_group(w)
    if args.group is None:
        if default_j:
            return groups.subgroup_generated([groups.element_J(w)], g_max)
        raise UsageError("--group is required")
    return groups.subgroup_generated(_phase_vectors(args.group), g_max)


def _params(args):
    out = {}
    for item in args.params:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise UsageError(f"--params expects name=rational, got {item!r}")
        try:
            out[name.strip()] = Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad rational {value!r}") from exc
    return out


def _fan(data):
    return fans.Fan.from_json(data)


def _charges(data):
    if "charges" in data:
        return [[int(x) for x in row] for row in data["charges"]]
    return fans.charge_matrix(_fan(data))


# ---------------------------------------------------------------------------
# handlers

def _fan_cmd(action, args):
    if action == "resolve2d":
        data = _load(args)
        rays = data["rays"] if isinstance(data, dict) else data
        added = fans.resolve_cone_2d(rays)
        chain = fans.subdivide_2d(rays)
        return {"added_rays": added, "cones": [[a, b] for a, b in zip(chain, chain[1:])]}
    if action == "subdivides":
        data = _load(args)
        return {"is_subdivision": fans.is_subdivision(_fan(data["fine"]), _fan(data["coarse"]))}
    data = _load(args)
    f = _fan(data)
    if action == "analyze":
        report = fans.validate_fan(f).to_json()
        if report["valid"]:
            report.update(fans.classify_fan(f))
            report["discriminant"] = fans.discriminant_components(f)
        return report
    if action == "charge":
        return {"charge_matrix": fans.charge_matrix(f)}
    if action == "classgroup":
        return fans.divisor_class_group(f)
    gens = data.get("generators", [])
    return fans.refine_lattice(f, gens)


def _polytope_cmd(action, args):
    data = _load(args)
    if action == "divisor":
        return polytope.divisor_polytope(_fan(data["fan"]), data["divisor"])
    p = polytope.LatticePolytope.from_json(data)
    if action == "facets":
        return {"facets": polytope.facets(p)}
    if action == "points":
        return {"points": polytope.lattice_points(p), "interior": polytope.interior_lattice_points(p)}
    if action == "dual":
        return polytope.polar_dual(p)
    if action == "reflexive":
        return {"reflexive": polytope.is_reflexive(p)}
    if action == "normalfan":
        return polytope.normal_fan(p)
    out = polytope.batyrev_mirror_data(p)
    out["dual"] = out["dual"].to_json()
    return out


def _weights(args):
    if args.expr is not None:
        return _integers(args.expr)
    data = _load(args)
    return data["weights"] if isinstance(data, dict) else data


def _wps_cmd(action, args):
    c = _weights(args)
    if action == "gorenstein":
        return polytope.wps_gorenstein(c)
    out = statespace.chen_ruan_wps_dimension(c)
    return {"total_dim": out["total_dim"],
            "sectors": [{"lambda": lam, "fixed_weights": fixed} for lam, fixed in out["sectors"]]}


def _lg_cmd(action, args):
    w = _polynomial(args)
    if action == "charges":
        return lg.charges(w)
    if action == "decompose":
        return {"pieces": lg.ks_decompose(w)}
    if action == "milnor":
        return {"milnor": lg.milnor_number(w), "central_charge": lg.central_charge(w),
                "calabi_yau": lg.is_calabi_yau(w)}
    if action == "jacobian":
        basis = lg.jacobian_basis(w)
        out = basis.to_json()
        out["dimension"] = len(basis.monomials)
        out["text"] = [lg.format_monomial(w.variables, m) for m in basis.monomials]
        return out
    wt = lg.transpose(w)
    return {"transpose": wt.text(), "polynomial": wt}


def _group_cmd(action, args):
    w = _polynomial(args)
    g_max = groups.max_symmetry_group(w)
    if action == "max":
        return g_max
    if action == "j":
        return groups.subgroup_generated([groups.element_J(w)], g_max)
    if action == "sl":
        return groups.sl_subgroup(g_max)
    g = _group(args, w)
    if action == "generate":
        return g
    if action == "transpose":
        gt = groups.transpose_group(g, w)
        return {"transpose_polynomial": lg.transpose(w).text(), "group": gt}
    return {"calabi_yau": groups.check_cy_condition(g, w), "contains_J": groups.element_J(w) in g}


def _statespace_cmd(action, args):
    w = _polynomial(args)
    g = _group(args, w, default_j=True)
    if action == "bhk":
        return statespace.report_bhk(w, g, args.convention)
    space = statespace.b_model_state_space(w, g, args.convention)
    if action == "check-pairing":
        return statespace.pairing_degree_report(space)
    out = space.to_json()
    if action == "a":
        out["elements"] = [{"sector": e["sector"], "fixed": e["fixed"], "monomial": e["monomial"],
                            "degA": e["degA"]} for e in out["elements"]]
        del out["poincare_B"]
    else:
        out["elements"] = [{"sector": e["sector"], "fixed": e["fixed"], "monomial": e["monomial"],
                            "degB": e["degB"]} for e in out["elements"]]
        del out["poincare_A"]
    return out


def _hv_cmd(action, args):
    if action == "phases":
        charges = _integers(args.expr) if args.expr is not None else _load(args)["charges"]
        return horivafa.glsm_rank1_phases(charges)
    if action == "batyrev-cy":
        if args.expr is not None:
            n, d = _integers(args.expr)[0], None
        else:
            data = _load(args)
            n, d = data["N"], data.get("d")
        out = horivafa.batyrev_consistency_cy(n, d)
        return {"equation": out["equation"].text(), "superpotential": out["equation"],
                "monomials": out["monomials"], "batyrev_monomials": out["batyrev_monomials"],
                "coincide": out["coincide"]}
    data = _load(args)
    if action == "count":
        w = horivafa.LaurentSuperpotential.from_json(data)
        return horivafa.critical_count(w, _params(args))
    if action == "mirror":
        system, w = horivafa.hv_mirror_toric(_charges(data), data.get("params"))
        solved = horivafa.solve_constraints(system, w)
        return {"constraints": system, "superpotential": w, "solved": solved, "text": solved.text()}
    if action == "equivariant":
        system, w = horivafa.equivariant_hv_mirror(_charges(data), data.get("subset"), data.get("params"))
        solved = horivafa.solve_constraints(system, w)
        return {"constraints": system, "superpotential": w, "solved": solved, "text": solved.text()}
    if action == "hypersurface":
        a = lg.parse_polynomial(data["polynomial"], data.get("vars"), invertible=False)
        if "charges" in data:
            w = horivafa.pre_hv_mirror_general(a, data["charges"], data["degrees"], data.get("params"))
        else:
            w = horivafa.pre_hv_mirror_hypersurface(a, data["weights"], int(data["degree"]),
                                                    data.get("param", "t"))
        return {"superpotential": w, "text": w.text()}
    variables = data.get("vars")
    polys = [lg.parse_polynomial(text, variables, invertible=False) for text in data["polynomials"]]
    w = horivafa.pre_hv_mirror_complete_intersection(polys, data["charges"], data["degrees"],
                                                      data.get("params"))
    return {"superpotential": w, "text": w.text()}


HANDLERS = {"fan": _fan_cmd, "polytope": _polytope_cmd, "wps": _wps_cmd, "lg": _lg_cmd,
            "group": _group_cmd, "statespace": _statespace_cmd, "hv": _hv_cmd}


def _error(code, detail):
    sys.stderr.write(json.dumps({"error": code, "detail": detail}) + "\n")


def run(argv=None):
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        result = _plain(HANDLERS[args.area](args.action, args))
    except UsageError as exc:
        _error("UsageError", str(exc))
        return 2
    except ToricMirrorError as exc:
        _error(exc.code, str(exc))
        return 1
    except (KeyError, TypeError) as exc:
        _error("ParseError", f"missing or malformed field: {exc}")
        return 1
    except ValueError as exc:
        _error("InvalidInput", str(exc))
        return 1
    text = json.dumps(result, indent=2) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
