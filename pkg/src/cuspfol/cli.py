"""Command-line front end: parse a form, run a computation, print a report.

Every command reads one or two form expressions (see :mod:`cuspfol.parsing`
for the syntax), runs the corresponding exact computation and prints a
structured report: a fixed top-level shape

    {command, order, verdict, data, certificates}

as plain ``key: value`` lines, or as canonical JSON under ``--json`` (sorted
keys, two-space indent, so equal inputs give byte-identical output).

Exit status: 0 for a positive verdict, 1 for a negative one, 2 when the
computation cannot decide at the working order, 3 for invalid input.
"""

from __future__ import annotations

import argparse
import json
import sys

from .coeff import Coeff, format_coeff
from .jets import Jet1, JetError
from .forms import OneForm, ReductionVerdict, form_of_meromorphic, reduce_cusp
from .normalform import normalize
from .transversal import CornerGerm, transversal_structure
from .moduli import (
    NormalPair,
    canonical_alpha,
    homographic_symmetries,
    normal_pair_equivalent,
    schwarzian,
)
from .gluing import (
    build_cocycle,
    coboundary_solve,
    cohomology_dimension,
    ks_generator,
)
from .firstintegral import no_first_integral_witness
from .parsing import MeromorphicPair, ParseError, format_poly, parse_form

EXIT_OK = 0
EXIT_NEGATIVE = 1
EXIT_INCONCLUSIVE = 2
EXIT_INPUT = 3


# ---------------------------------------------------------------------------
# serialization helpers (everything below must be deterministic)

def _ser_coeff(c):
    return None if c is None else format_coeff(c)

def _ser_jet1(j):
    return [[k, format_coeff(c)] for k, c in enumerate(j.coeffs) if not c.is_zero()]

def _ser_jet2(j):
    keys = sorted(j._d, key=lambda k: (k[0] + k[1], k[0], k[1]))
    return [[i, jj, format_coeff(Coeff.from_triple(j._d[(i, jj)]))] for i, jj in keys]


def _ser_matrix(mat):
    if mat is None:
        return None
    return [[_ser_coeff(v) if isinstance(v, Coeff) else v for v in row] for row in mat]


def _ser_rational(r):
    z = "z"
    num = format_poly({(k, 0): c for k, c in enumerate(r.num) if not c.is_zero()}, (z, z))
    den = format_poly({(k, 0): c for k, c in enumerate(r.den) if not c.is_zero()}, (z, z))
    return {"num": num, "den": den}


def _ser_certificate(cert):
    if cert is None:
        return None
    return [[[int(i), int(j)], format_coeff(w)] for (i, j), w in cert]


# ---------------------------------------------------------------------------
# shared pipeline steps

class _CommandError(Exception):
    """An input-level failure with a ready exit code."""

    def __init__(self, message, code=EXIT_INPUT, verdict="InputError"):
        super().__init__(message)
        self.code = code
        self.verdict = verdict


def _as_oneform(text, order) -> OneForm:
    parsed = parse_form(text, order)
    if isinstance(parsed, MeromorphicPair):
        parsed = parse_form(text, order + 1)
        return form_of_meromorphic(parsed.num, parsed.den)
    return parsed


def _reduction_data(rep):
    return {
        "reason": rep.reason,
        "is_valuation_3": rep.is_valuation_3,
        "p2_coefficient": _ser_coeff(rep.p2_coefficient),
        "applied_linear_change": _ser_matrix(rep.applied_linear_change),
        "exceptional_power_1": rep.exceptional_power_1,
        "exceptional_power_2": rep.exceptional_power_2,
        "singular_points_on_D2": [
            [_ser_coeff(t), int(m)] for t, m in rep.singular_points_on_D2
        ],
        "tangency_at_infinity": rep.tangency_at_infinity,
        "corner_regular": rep.corner_regular,
        "transverse_to_D1": rep.transverse_to_D1,
        "transverse_to_D2": rep.transverse_to_D2,
    }


def _require_cusp(rep):
    if rep.verdict is ReductionVerdict.CUSP_TYPE_ABSOLUTELY_DICRITICAL:
        return
    code = (
        EXIT_INCONCLUSIVE
        if rep.verdict is ReductionVerdict.INCONCLUSIVE
        else EXIT_NEGATIVE
    )
    raise _CommandError(
        f"reduction verdict {rep.verdict.value}: {rep.reason}",
        code=code,
        verdict=rep.verdict.value,
    )


def _sigma_of_form(w, order):
    rep = reduce_cusp(w)
    _require_cusp(rep)
    s = transversal_structure(CornerGerm.from_reduction(rep))
    jet = s.jet
    if jet.order > order:
        jet = jet.truncate(order)
    return rep, jet


# ---------------------------------------------------------------------------
# command handlers: each returns (verdict, data, certificates, exit_code)

def _cmd_reduce(args):
    w = _as_oneform(args.form, args.order)
    rep = reduce_cusp(w)
    data = _reduction_data(rep)
    if rep.verdict is ReductionVerdict.CUSP_TYPE_ABSOLUTELY_DICRITICAL:
        code = EXIT_OK
    elif rep.verdict is ReductionVerdict.INCONCLUSIVE:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_NEGATIVE
    return rep.verdict.value, data, [], code


def _cmd_normal_form(args):
    w = _as_oneform(args.form, args.order)
    rep = reduce_cusp(w)
    _require_cusp(rep)
    nf = normalize(w)
    data = {
        "alpha": _ser_coeff(nf.alpha),
        "a": _ser_coeff(nf.a),
        "tail": [
            [int(m), [_ser_coeff(c) for c in t]] for m, t in sorted(nf.tail.items())
        ],
        "trivial_tail": nf.is_trivial_tail(),
        "scale": _ser_coeff(nf.scale),
        "applied_linear_change": _ser_matrix(nf.applied_linear_change),
    }
    return "Normalized", data, [], EXIT_OK


def _cmd_sigma(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    ident = jet == Jet1.variable(jet.order)
    data = {
        "sigma": _ser_jet1(jet),
        "sigma_order": jet.order,
        "is_identity": ident,
        "canonical_alpha": _ser_coeff(canonical_alpha(jet)),
    }
    return ("Identity" if ident else "NonIdentity"), data, [], EXIT_OK


def _cmd_schwarzian(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    f = schwarzian(jet)
    data = {
        "schwarzian": _ser_jet1(f),
        "schwarzian_order": f.order,
        "sigma": _ser_jet1(jet),
    }
    verdict = "Homographic" if f.is_zero() else "NonHomographic"
    return verdict, data, [], EXIT_OK


def _cmd_equiv(args):
    w0 = _as_oneform(args.form, args.order)
    w1 = _as_oneform(args.other, args.order)
    _, s0 = _sigma_of_form(w0, args.order)
    _, s1 = _sigma_of_form(w1, args.order)
    a0 = normalize(w0).alpha
    a1 = normalize(w1).alpha
    n = min(s0.order, s1.order)
    v = normal_pair_equivalent(
        NormalPair(s0.truncate(n), a0), NormalPair(s1.truncate(n), a1)
    )
    data = {
        "alpha_first": _ser_coeff(a0),
        "alpha_second": _ser_coeff(a1),
        "sigma_first": _ser_jet1(s0),
        "sigma_second": _ser_jet1(s1),
        "eps": _ser_coeff(v.cstar.eps),
        "reason": v.cstar.reason,
    }
    certs = list(v.constraints)
    if v.equivalent:
        return "Equivalent", data, certs, EXIT_OK
    return "NotEquivalent", data, certs, EXIT_NEGATIVE


def _cmd_symmetries(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    f = schwarzian(jet)
    rep = homographic_symmetries(f)
    data = {
        "infinite": rep.infinite,
        "lambda_order": rep.lambda_order,
        "candidates": [
            {"lam": _ser_coeff(h.lam), "mu": _ser_coeff(h.mu)} for h in rep.candidates
        ],
        "notes": list(rep.notes),
    }
    verdict = "InfiniteGroup" if rep.infinite else "FiniteCandidates"
    return verdict, data, [], EXIT_OK


def _cmd_first_integral(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    d = args.degree
    if jet.order < 2 * d + 2:
        raise _CommandError(
            f"degree bound {d} needs jet order >= {2 * d + 2}; rerun with a "
            f"larger --order"
        )
    rep = no_first_integral_witness(jet, d, jet.order)
    data = {
        "degree_bound": rep.degree_bound,
        "probes": [[int(k), bool(hit)] for k, hit in rep.probes],
        "note": rep.note,
        "r1": _ser_rational(rep.r1) if rep.r1 is not None else None,
        "r2": _ser_rational(rep.r2) if rep.r2 is not None else None,
    }
    if rep.relation_found:
        return "RelationFound", data, [], EXIT_OK
    return "NoRelationWithinBound", data, [], EXIT_NEGATIVE


def _cmd_cohomology(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    alpha = normalize(w).alpha
    n = jet.order
    cb = coboundary_solve(jet, alpha, ks_generator(n), n)
    dim = cohomology_dimension(jet, alpha, n)
    data = {
        "alpha": _ser_coeff(alpha),
        "target": "y1 (distinguished vertical direction)",
        "feasible": cb.feasible,
        "rows": dim.rows,
        "rank": dim.rank,
        "corank": dim.corank,
        "generator_independent": dim.generator_independent,
    }
    certs = []
    if cb.certificate is not None:
        certs.append(
            {
                "infeasibility_rows": _ser_certificate(cb.certificate),
                "checked": bool(cb.certificate_checked),
            }
        )
    if cb.feasible:
        return "Coboundary", data, certs, EXIT_OK
    verdict = (
        "ObstructedDimensionOne"
        if dim.corank == 1 and dim.generator_independent
        else "Obstructed"
    )
    return verdict, data, certs, EXIT_NEGATIVE


def _cmd_glue(args):
    w = _as_oneform(args.form, args.order)
    _, jet = _sigma_of_form(w, args.order)
    alpha = normalize(w).alpha
    c = build_cocycle(jet, alpha)
    fx, fy = c.as_map()
    names = ("x1", "y1")
    data = {
        "sigma": _ser_jet1(jet),
        "alpha": _ser_coeff(alpha),
        "unit": _ser_jet2(c.A),
        "map_first": format_poly(
            {k: Coeff.from_triple(t) for k, t in fx._d.items()}, names
        ),
        "map_second": format_poly(
            {k: Coeff.from_triple(t) for k, t in fy._d.items()}, names
        ),
    }
    return "CocycleBuilt", data, [], EXIT_OK


_COMMANDS = {
    "reduce": _cmd_reduce,
    "normal-form": _cmd_normal_form,
    "sigma": _cmd_sigma,
    "schwarzian": _cmd_schwarzian,
    "equiv": _cmd_equiv,
    "symmetries": _cmd_symmetries,
    "first-integral": _cmd_first_integral,
    "cohomology": _cmd_cohomology,
    "glue": _cmd_glue,
}


# ---------------------------------------------------------------------------
# report printing

def _print_report(report, as_json, stream):
    if as_json:
        stream.write(json.dumps(report, sort_keys=True, indent=2))
        stream.write("\n")
        return
    stream.write(f"command: {report['command']}\n")
    stream.write(f"order: {report['order']}\n")
    stream.write(f"verdict: {report['verdict']}\n")
    for key in sorted(report["data"]):
        value = report["data"][key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        stream.write(f"{key}: {value}\n")
    for cert in report["certificates"]:
        if isinstance(cert, (dict, list)):
            cert = json.dumps(cert, sort_keys=True)
        stream.write(f"certificate: {cert}\n")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="cuspfol",
        description="Exact reduction, moduli and gluing computations for "
        "cusp-type plane 1-forms.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, two_forms=False):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("form", help="form expression, or mero: quotient")
        if two_forms:
            sp.add_argument("other", help="second form expression")
        sp.add_argument(
            "--order",
            type=int,
            default=16,
            help="jet truncation order for the computation (default 16)",
        )
        sp.add_argument(
            "--json", action="store_true", help="print the report as canonical JSON"
        )
        return sp

    add("reduce", "run the two-blow-up reduction test")
    add("normal-form", "compute the formal normal form data")
    add("sigma", "compute the transversal-structure germ at the corner")
    add("schwarzian", "Schwarzian derivative of the transversal structure")
    add("equiv", "decide equivalence of two forms via their (sigma, alpha) data",
        two_forms=True)
    add("symmetries", "homographic symmetries of the Schwarzian invariant")
    fi = add("first-integral", "bounded search for a rational first-integral relation")
    fi.add_argument(
        "--degree",
        type=int,
        default=4,
        help="degree bound for the rational relation search (default 4)",
    )
    add("cohomology", "dimension of the deformation space of the gluing")
    add("glue", "build the model gluing cocycle from the (sigma, alpha) data")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _COMMANDS[args.command]
    try:
        verdict, data, certs, code = handler(args)
    except ParseError as e:
        verdict, data, certs, code = "InputError", {"error": str(e)}, [], EXIT_INPUT
    except _CommandError as e:
        verdict, data, certs, code = e.verdict, {"error": str(e)}, [], e.code
    except (ValueError, JetError) as e:
        verdict, data, certs, code = "InputError", {"error": str(e)}, [], EXIT_INPUT
    report = {
        "command": args.command,
        "order": args.order,
        "verdict": verdict,
        "data": data,
        "certificates": certs,
    }
    _print_report(report, args.json, sys.stdout)
    return code


if __name__ == "__main__":
    sys.exit(main())
