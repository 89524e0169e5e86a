"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success or positive decision, 1 negative decision, 2 usage
error, 3 numerical failure.  Payload arguments accept inline JSON, a path to
a JSON file, or ``-`` for stdin.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import List, Optional, Tuple

import numpy as np

from . import acceptance
from .config import DEFAULT, Tolerances
from .corpus import SEED
from .disk import (MobiusTransform, blaschke_compose, blaschke_sharp, critical_points,
                   decide_orbit, hyperbolic_distance, level_set, zn_equivalence_test)
from .exceptions import InvalidInput, NumericalFailure
from .isomorphism import (certificate_residual, decide_spatial_iso, iso_diagnostics)
from .model_space import (clark_system, conjugate, conjugation_matrix, default_quad_points,
                          kernel, make_space)
from .realize import (realize_2x2, realize_inflation, realize_jordan, realize_normal,
                      realize_rank_one)
from .serialize import (blaschke_from_json, blaschke_to_json, certificate_from_json,
                        certificate_to_json, clark_to_json, complex_from_json,
                        complex_to_json, dumps, functionvec_from_json, jordan_from_json,
                        matrix_from_json, matrix_to_json, mobius_from_json, mobius_to_json,
                        operator_to_json,
                        realization_to_json, symbol_from_json, vector_from_json,
                        vector_to_json)
from .tto import (clark_operator, csym_defect, rank_one_tto, tto_basis, tto_from_symbol,
                  tto_membership)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def load_payload(text: str, stdin=None):
    """Inline JSON, a JSON file path, or ``-`` for stdin."""
    if text == "-":
        raw = (stdin or sys.stdin).read()
    elif os.path.isfile(text):
        with open(text, encoding="utf-8") as fh:
            raw = fh.read()
    else:
        raw = text
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"could not parse JSON payload: {exc.msg}") from None


class Context:
    def __init__(self, args, stdin=None):
        self.args = args
        self.stdin = stdin
        tol = DEFAULT
        if args.tol is not None:
            if not args.tol > 0:
                raise InvalidInput("--tol must be positive")
            tol = tol.with_tol(args.tol)
        self.tol: Tolerances = tol
        self.quad_points: Optional[int] = args.quad_points
        self.used_quad: Optional[int] = None

    def payload(self, name: str):
        value = getattr(self.args, name)
        if value is None:
            raise InvalidInput(f"missing --{name.replace('_', '-')}")
        return load_payload(value, self.stdin)

    def space(self, theta):
        space = make_space(theta, self.quad_points, self.tol)
        self.used_quad = space.quad_points
        return space


def _mobius_opt(ctx: Context, name: str) -> Optional[MobiusTransform]:
    if getattr(ctx.args, name) is None:
        return None
    return mobius_from_json(ctx.payload(name))


# ---------------------------------------------------------------------------
# handlers: each returns (exit_code, document)
# ---------------------------------------------------------------------------

def cmd_blaschke_eval(ctx):
    B = blaschke_from_json(ctx.payload("theta"))
    z = complex_from_json(ctx.payload("z"))
    if abs(z) > 1 + 1e-12:
        raise InvalidInput("|z| must be <= 1")
    doc = {"value": complex_to_json(B(z))}
    if ctx.args.derivative:
        doc["derivative"] = complex_to_json(B.derivative(z))
    return 0, doc


def cmd_blaschke_compose(ctx):
    B = blaschke_from_json(ctx.payload("theta"))
    out = blaschke_compose(B, _mobius_opt(ctx, "pre"), _mobius_opt(ctx, "post"), ctx.tol)
    return 0, {"theta": blaschke_to_json(out)}


def cmd_blaschke_sharp(ctx):
    return 0, {"theta": blaschke_to_json(blaschke_sharp(blaschke_from_json(ctx.payload("theta"))))}


def cmd_level_set(ctx):
    B = blaschke_from_json(ctx.payload("theta"))
    return 0, {"points": vector_to_json(level_set(B, complex_from_json(ctx.payload("w")), ctx.tol))}


def cmd_critical_points(ctx):
    B = blaschke_from_json(ctx.payload("theta"))
    return 0, {"points": vector_to_json(critical_points(B, ctx.tol))}


def cmd_distance(ctx):
    z1, z2 = complex_from_json(ctx.payload("z1")), complex_from_json(ctx.payload("z2"))
    if not (abs(z1) < 1 and abs(z2) < 1):
        raise InvalidInput("points must lie in the open disk")
    return 0, {"distance": hyperbolic_distance(z1, z2)}


def cmd_zn_test(ctx):
    result = zn_equivalence_test(blaschke_from_json(ctx.payload("theta")), ctx.tol)
    return (0 if result else 1), {"equivalent_to_zn": result}


def cmd_orbit(ctx):
    B1 = blaschke_from_json(ctx.payload("theta1"))
    B2 = blaschke_from_json(ctx.payload("theta2"))
    found = decide_orbit(B1, B2, ctx.tol)
    if found is None:
        return 1, {"in_orbit": False}
    return 0, {"in_orbit": True, "post": mobius_to_json(found[0]),
               "pre": mobius_to_json(found[1])}


def cmd_kernel(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    K = kernel(space, complex_from_json(ctx.payload("lambda_")))
    return 0, {"coeffs": vector_to_json(K.coeffs)}


def cmd_conjugate(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    f = functionvec_from_json(ctx.payload("f"))
    return 0, {"coeffs": vector_to_json(conjugate(space, f).coeffs)}


def cmd_conjugation_matrix(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    return 0, {"matrix": matrix_to_json(conjugation_matrix(space))}


def cmd_clark(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    alpha = complex_from_json(ctx.payload("alpha"))
    doc = clark_to_json(clark_system(space, alpha, ctx.tol))
    doc["operator"] = matrix_to_json(clark_operator(space, alpha, ctx.tol).matrix)
    return 0, doc


def cmd_tto_symbol(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    return 0, operator_to_json(tto_from_symbol(space, symbol_from_json(ctx.payload("symbol"))))


def cmd_tto_rank_one(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    op = rank_one_tto(space, ctx.args.kind, complex_from_json(ctx.payload("lambda_")))
    return 0, operator_to_json(op)


def cmd_tto_basis(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    return 0, {"basis": [matrix_to_json(b.matrix) for b in tto_basis(space, ctx.tol)]}


def _space_and_matrix(ctx):
    space = ctx.space(blaschke_from_json(ctx.payload("theta")))
    A = matrix_from_json(ctx.payload("matrix"))
    if A.shape != (space.dim, space.dim):
        raise InvalidInput(f"matrix must be {space.dim}x{space.dim}")
    return space, A


def cmd_tto_membership(ctx):
    space, A = _space_and_matrix(ctx)
    r = tto_membership(space, A, ctx.tol)
    member = r < ctx.tol.membership
    return (0 if member else 1), {"residual": r, "member": member}


def cmd_tto_csym(ctx):
    space, A = _space_and_matrix(ctx)
    return 0, {"defect": csym_defect(space, A)}


def cmd_iso_decide(ctx):
    B1 = blaschke_from_json(ctx.payload("theta1"))
    B2 = blaschke_from_json(ctx.payload("theta2"))
    ctx.used_quad = max(default_quad_points(B1), ctx.quad_points or 0)
    cert = decide_spatial_iso(B1, B2, ctx.tol)
    if cert is None:
        return 1, {"certificate": None, "message": "no certificate found",
                   "diagnostics": iso_diagnostics(B1, B2, ctx.tol)}
    return 0, {"certificate": certificate_to_json(cert)}


def cmd_iso_verify(ctx):
    B1 = blaschke_from_json(ctx.payload("theta1"))
    B2 = blaschke_from_json(ctx.payload("theta2"))
    cert = certificate_from_json(ctx.payload("cert"))
    ctx.used_quad = max(default_quad_points(B1), ctx.quad_points or 0)
    res = certificate_residual(B1, B2, cert, ctx.tol)
    ok = (res["orbit_residual"] < ctx.tol.certificate
          and res.get("transport_residual", math.inf) < ctx.tol.membership)
    return (0 if ok else 1), dict(res, verified=ok)


def _realized(ctx, R):
    ctx.used_quad = R.operator.space.quad_points
    return 0, realization_to_json(R)


def cmd_realize_rank1(ctx):
    u, v = vector_from_json(ctx.payload("u")), vector_from_json(ctx.payload("v"))
    if u.size != v.size:
        raise InvalidInput("u and v must have equal length")
    return _realized(ctx, realize_rank_one(u.size, u, v, ctx.tol))


def cmd_realize_m2(ctx):
    T = matrix_from_json(ctx.payload("t"))
    B = blaschke_from_json(ctx.payload("theta")) if ctx.args.theta is not None else None
    return _realized(ctx, realize_2x2(T, B, ctx.tol))


def cmd_realize_normal(ctx):
    eigs = vector_from_json(ctx.payload("eigs"))
    B = blaschke_from_json(ctx.payload("theta"))
    alpha = complex_from_json(ctx.payload("alpha")) if ctx.args.alpha is not None else 1.0
    return _realized(ctx, realize_normal(eigs, B, alpha, ctx.tol))


def cmd_realize_inflate(ctx):
    psi = symbol_from_json(ctx.payload("symbol"))
    B = blaschke_from_json(ctx.payload("b"))
    return _realized(ctx, realize_inflation(psi, B, ctx.tol))


def cmd_realize_jordan(ctx):
    spec = jordan_from_json(ctx.payload("spec"))
    zeros = list(vector_from_json(ctx.payload("zeros"))) if ctx.args.zeros is not None else None
    return _realized(ctx, realize_jordan(spec, zeros, ctx.tol))


def _plain(value):
    """Report values as JSON-safe plain data."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if math.isfinite(v) else str(v)
    return value


def cmd_selftest(ctx):
    seed = ctx.args.seed if ctx.args.seed is not None else SEED
    results = acceptance.run_all(ctx.args.level, seed, ctx.tol)
    passed = all(c.passed for c in results)
    report = {"level": ctx.args.level, "seed": seed, "passed": passed,
              "criteria": [_plain(c.as_dict()) for c in results]}
    return (0 if passed else 1), report


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _globals(default=None) -> argparse.ArgumentParser:
    # subcommands use SUPPRESS so they do not clobber flags given earlier
    p = _Parser(add_help=False)
    p.add_argument("--tol", type=float, default=default, help="decision tolerance")
    p.add_argument("--quad-points", type=int, default=default, help="quadrature nodes M")
    p.add_argument("--seed", type=int, default=default, help="seed for random test points")
    p.add_argument("--out", default=default, help="also write the JSON document here")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _globals(argparse.SUPPRESS)
    parser = _Parser(prog="tto-workbench", parents=[_globals()],
                     description="Truncated Toeplitz operator workbench.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add(subparsers, name, handler, *opts, **flags):
        p = subparsers.add_parser(name, parents=[common])
        for opt in opts:
            dest = opt.lstrip("-").replace("-", "_")
            if dest == "lambda":
                dest = "lambda_"
            p.add_argument(opt, dest=dest, default=None)
        for flag, kw in flags.items():
            p.add_argument(flag, **kw)
        p.set_defaults(handler=handler)
        return p

    bl = sub.add_parser("blaschke", parents=[common]).add_subparsers(dest="action", parser_class=_Parser)
    add(bl, "eval", cmd_blaschke_eval, "--theta", "--z",
        **{"--derivative": dict(action="store_true")})
    add(bl, "compose", cmd_blaschke_compose, "--theta", "--pre", "--post")
    add(bl, "sharp", cmd_blaschke_sharp, "--theta")
    add(sub, "level-set", cmd_level_set, "--theta", "--w")
    add(sub, "critical-points", cmd_critical_points, "--theta")
    add(sub, "distance", cmd_distance, "--z1", "--z2")
    add(sub, "zn-test", cmd_zn_test, "--theta")
    add(sub, "orbit", cmd_orbit, "--theta1", "--theta2")
    add(sub, "kernel", cmd_kernel, "--theta", "--lambda")
    add(sub, "conjugate", cmd_conjugate, "--theta", "--f")
    add(sub, "conjugation-matrix", cmd_conjugation_matrix, "--theta")
    add(sub, "clark", cmd_clark, "--theta", "--alpha")

    tt = sub.add_parser("tto", parents=[common]).add_subparsers(dest="action", parser_class=_Parser)
    add(tt, "symbol", cmd_tto_symbol, "--theta", "--symbol")
    add(tt, "rank-one", cmd_tto_rank_one, "--theta", "--lambda",
        **{"--kind": dict(choices=["K_CK", "CK_K", "Kb_Kb"], default="K_CK")})
    add(tt, "basis", cmd_tto_basis, "--theta")
    add(tt, "membership", cmd_tto_membership, "--theta", "--matrix")
    add(tt, "csym", cmd_tto_csym, "--theta", "--matrix")

    iso = sub.add_parser("iso", parents=[common]).add_subparsers(dest="action", parser_class=_Parser)
    add(iso, "decide", cmd_iso_decide, "--theta1", "--theta2")
    add(iso, "verify", cmd_iso_verify, "--theta1", "--theta2", "--cert")

    rl = sub.add_parser("realize", parents=[common]).add_subparsers(dest="action", parser_class=_Parser)
    add(rl, "rank1", cmd_realize_rank1, "--u", "--v")
    add(rl, "m2", cmd_realize_m2, "--t", "--theta")
    add(rl, "normal", cmd_realize_normal, "--eigs", "--theta", "--alpha")
    add(rl, "inflate", cmd_realize_inflate, "--symbol", "--b")
    add(rl, "jordan", cmd_realize_jordan, "--spec", "--zeros")

    st = add(sub, "selftest", cmd_selftest)
    st.add_argument("level", nargs="?", choices=["fast", "full"], default="fast")
    return parser


def dispatch(argv: List[str], stdin=None) -> Tuple[int, dict]:
    """Run one command; never raises for usage or numerical problems."""
    args = None
    try:
        args = build_parser().parse_args(argv)
        if getattr(args, "handler", None) is None:
            raise UsageError("missing or unknown subcommand")
        ctx = Context(args, stdin)
        code, doc = args.handler(ctx)
        quad = ctx.used_quad if ctx.used_quad is not None else ctx.quad_points
    except UsageError as exc:
        code, doc, ctx, quad = 2, {"error": "usage", "message": str(exc)}, None, None
    except InvalidInput as exc:
        code, doc, ctx, quad = 2, {"error": "invalid input", "message": str(exc)}, None, None
    except NumericalFailure as exc:
        code, doc, ctx, quad = 3, {"error": "numerical failure", "message": str(exc)}, None, None
    tol = ctx.tol if ctx is not None else DEFAULT
    doc = dict(doc)
    doc["tolerances"] = tol.as_dict()
    doc["quad_points"] = quad
    return code, doc


def _out_path(argv: List[str]) -> Optional[str]:
    for i, tok in enumerate(argv):
        if tok == "--out" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--out="):
            return tok.split("=", 1)[1]
    return None


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    code, doc = dispatch(argv)
    text = dumps(doc)
    print(text)
    path = _out_path(argv)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
