"""Command-line front end.

Every command prints one JSON report {command, inputs, seed, result, warnings}
(or a plain-text rendering with --format text).  Exit status is 0 on success,
2 when inputs fail validation and 1 when the requested operation fails.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import characters, gsp4, heckedata, laurent, relations
from .errors import SiegelTwistsError
from .exactfield import format_cyc, simplify

TOL_ENV = "SIEGEL_TWISTS_TOL"
DEFAULT_SEED = 0
VALIDATION_CODES = {
    "schema-violation", "parse-error", "file-not-found", "invalid-json",
    "alphabet-mismatch", "invalid-weights", "ramified-prime",
}


class CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def default_tol(fallback: float) -> float:
    raw = os.environ.get(TOL_ENV)
    if raw is None:
        return fallback
    try:
        return float(raw)
    except ValueError:
        raise CliError("schema-violation", f"{TOL_ENV}={raw!r} is not a number") from None


def load_form(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except FileNotFoundError:
        raise CliError("file-not-found", f"no such file: {path}") from None
    except json.JSONDecodeError as exc:
        raise CliError("invalid-json", f"{path}: {exc}") from None
    return heckedata.form_from_json(obj)


def _poly(text: str):
    return laurent.parse_poly(text)


def _x(v):
    return format_cyc(simplify(v))


def _primes_arg(form, args):
    if getattr(args, "prime", None):
        return args.prime
    return form.primes


# -- command handlers: each returns (result, warnings) ------------------------------------------
def cmd_bp(args):
    f = load_form(args.form)
    return {str(p): _x(heckedata.bp(f, p)) for p in _primes_arg(f, args)}, []


def cmd_euler(args):
    f = load_form(args.form)
    return {str(p): [_x(c) for c in heckedata.spin_euler_factor(f, p)] for p in _primes_arg(f, args)}, []


def cmd_satake(args):
    f = load_form(args.form)
    tol = args.tol if args.tol is not None else default_tol(heckedata.DEFAULT_PAIRING_TOL)
    return {str(p): heckedata.satake_numeric(f, p, tol).to_json() for p in _primes_arg(f, args)}, []


def cmd_kappa(args):
    f, g = load_form(args.form), load_form(args.form2)
    if isinstance(f, heckedata.EllipticForm) and isinstance(g, heckedata.EllipticForm):
        kp = characters.kappa_pair_elliptic((f.k, f.eps), (g.k, g.eps))
    elif isinstance(f, heckedata.SiegelForm) and isinstance(g, heckedata.SiegelForm):
        kp = characters.kappa_pair((f.k1, f.k2, f.eps), (g.k1, g.k2, g.eps))
    else:
        raise CliError("schema-violation", "kappa needs two forms of the same type")
    return kp.to_json(), []


def _sample(args, f, g):
    if args.primes:
        # explicit primes are taken as given, so ramified or missing ones raise
        return relations.PrimeSample(tuple(args.primes[: args.limit]))
    return relations.shared_sample(f, g, limit=args.limit)


def cmd_test_relation(args):
    f, g = load_form(args.form), load_form(args.form2)
    P = _poly(args.poly)
    sample = _sample(args, f, g)
    if set(P.variables()) <= {"a", "a'"}:
        rep = relations.test_trace_relation(P, f, g, sample)
    else:
        rep = relations.test_relation(P, f, g, sample)
    return rep.to_json(args.values), rep.warnings


def cmd_test_satake_relation(args):
    f, g = load_form(args.form), load_form(args.form2)
    if args.builtin == "square":
        P = relations.square_eigenvalue_polynomial()
    elif args.builtin == "distinct":
        P = relations.distinctness_factors()
    elif args.poly:
        P = _poly(args.poly)
    else:
        raise CliError("schema-violation", "give --poly or --builtin")
    rep = relations.satake_relation_test(P, f, g, _sample(args, f, g))
    return rep.to_json(args.values), rep.warnings


def cmd_angle_test(args):
    f, g = load_form(args.form), load_form(args.form2)
    tol = args.tol if args.tol is not None else default_tol(1e-6)
    alpha = args.alpha * math.pi if args.alpha_in_pi else args.alpha
    rep = relations.angle_relation_test(args.m, args.n, alpha, f, g, _sample(args, f, g), tol)
    return rep.to_json(args.values), rep.warnings


def cmd_twist_search(args):
    f, g = load_form(args.form), load_form(args.form2)
    certs = relations.twist_search(f, g, args.modulus_bound, args.order_bound, _sample(args, f, g))
    return {"certificates": [c.to_json() for c in certs]}, []


def cmd_mu_norm(args):
    P = _poly(args.poly)
    F, Q = laurent.mu_norm(P, args.var, args.d)
    return {"F": str(F), "Q": str(Q)}, []


def cmd_rewrite_invariant(args):
    R = laurent.rewrite_invariant_pair(_poly(args.poly))
    return {"R": str(R)}, []


def cmd_coprime_check(args):
    factors = laurent.coprimality_vs_binomial(_poly(args.poly), args.kappa, args.kappa2)
    return {"coprime": not factors, "factors": [{"zeta": _x(z), "factor": str(S)} for z, S in factors]}, []


def cmd_witness(args):
    w = gsp4.nonvanishing_witness(_poly(args.poly), args.kappa, args.kappa2, args.j,
                                  args.max_t, args.max_radius)
    return w.to_json(), []


def cmd_component_sample(args):
    res = gsp4.sample_component(_poly(args.poly), args.q, args.kappa, args.kappa2, args.j,
                                args.trials, args.seed)
    warnings = ["sampler is a heuristic product of random transvections, not the uniform measure"]
    return res.to_json(), warnings


COMMANDS = {
    "bp": cmd_bp,
    "euler": cmd_euler,
    "satake": cmd_satake,
    "kappa": cmd_kappa,
    "test-relation": cmd_test_relation,
    "test-satake-relation": cmd_test_satake_relation,
    "angle-test": cmd_angle_test,
    "twist-search": cmd_twist_search,
    "mu-norm": cmd_mu_norm,
    "rewrite-invariant": cmd_rewrite_invariant,
    "coprime-check": cmd_coprime_check,
    "witness": cmd_witness,
    "component-sample": cmd_component_sample,
}
RANDOMIZED = {"component-sample"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="siegel-twists", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", "-o", help="write the report here instead of stdout")
    common.add_argument("--format", choices=["json", "text"], default="json")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="random seed (default 0)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    def form_args(p, two=False):
        p.add_argument("--form", required=True, help="form JSON file")
        if two:
            p.add_argument("--form2", required=True, help="second form JSON file")
            p.add_argument("--primes", type=int, nargs="+", help="restrict to these primes")
            p.add_argument("--limit", type=int, help="use only the first N shared primes")
            p.add_argument("--values", action="store_true", help="include per-prime values")
        else:
            p.add_argument("--prime", type=int, nargs="+", help="primes (default: all in the table)")

    p = add("bp", "standard coefficient b_p")
    form_args(p)
    p = add("euler", "spin Euler factor coefficients")
    form_args(p)
    p = add("satake", "numeric Satake roots")
    form_args(p)
    p.add_argument("--tol", type=float)
    p = add("kappa", "the compatibility pair (kappa, kappa')")
    p.add_argument("--form", required=True)
    p.add_argument("--form2", required=True)
    p = add("test-relation", "vanishing of P(s, s', a, b, a', b') over shared primes")
    form_args(p, two=True)
    p.add_argument("--poly", required=True)
    p = add("test-satake-relation", "vanishing of an invariant P(s, s', x1, x2, x1', x2')")
    form_args(p, two=True)
    p.add_argument("--poly")
    p.add_argument("--builtin", choices=["square", "distinct"])
    p = add("angle-test", "m*theta + n*theta' = alpha")
    form_args(p, two=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--alpha-in-pi", action="store_true", help="read alpha as a multiple of pi")
    p.add_argument("--tol", type=float)
    p = add("twist-search", "characters chi with a_p = chi(p) a'_p")
    form_args(p, two=True)
    p.add_argument("--modulus-bound", type=int, required=True)
    p.add_argument("--order-bound", type=int, default=2)
    p = add("mu-norm", "product of P(zeta*var) over zeta in mu_d")
    p.add_argument("--poly", required=True)
    p.add_argument("--var", required=True)
    p.add_argument("--d", type=int, required=True)
    p = add("rewrite-invariant", "rewrite an invariant in (s, s', a, b, a', b')")
    p.add_argument("--poly", required=True)
    p = add("coprime-check", "factors shared with s^kappa - s'^kappa'")
    p.add_argument("--poly", required=True)
    p.add_argument("--kappa", type=int, required=True)
    p.add_argument("--kappa2", type=int, required=True)
    for name, help_text in (("witness", "companion pair where the invariant is nonzero"),
                            ("component-sample", "vanishing frequency over F_q")):
        p = add(name, help_text)
        p.add_argument("--poly", required=True)
        p.add_argument("--kappa", type=int, required=True)
        p.add_argument("--kappa2", type=int, required=True)
        p.add_argument("--j", type=int, default=0, help="component zeta_d^j")
        if name == "witness":
            p.add_argument("--max-t", type=int, default=8)
            p.add_argument("--max-radius", type=int, default=4)
        else:
            p.add_argument("--q", type=int, required=True)
            p.add_argument("--trials", type=int, default=1000)
    return parser


def _inputs(args) -> dict:
    skip = {"command", "output", "format", "seed"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None}


def render_text(report: dict) -> str:
    lines = [f"command: {report['command']}"]
    if report["seed"] is not None:
        lines.append(f"seed: {report['seed']}")
    lines.append("result:")
    lines.append(json.dumps(report["result"], sort_keys=True, indent=2))
    for w in report["warnings"]:
        lines.append(f"warning: {w}")
    return "\n".join(lines) + "\n"


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def run(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        result, warnings = COMMANDS[args.command](args)
    except (CliError, SiegelTwistsError) as exc:
        code = getattr(exc, "code", "error")
        err = {"command": args.command, "error": {"code": code, "message": str(exc)}}
        sys.stderr.write(json.dumps(err, sort_keys=True) + "\n")
        return 2 if code in VALIDATION_CODES else 1
    report = {
        "command": args.command,
        "inputs": _inputs(args),
        "seed": args.seed if args.command in RANDOMIZED else None,
        "result": result,
        "warnings": list(warnings),
    }
    if args.format == "json":
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    else:
        text = render_text(report)
    _emit(text, args.output)
    return 0


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
