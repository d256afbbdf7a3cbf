"""``conelift`` command line.

Every command reads JSON and produces a JSON payload carrying ``"schema": 1``
and the seed in effect.  The payload goes to ``--out`` when given (and a short
summary to stdout), otherwise to stdout.  ``--json`` forces the payload to
stdout even for commands with a one-line summary.

Exit codes
----------
== =====================================================
0  success / verification passed / audit consistent
1  verification failed
2  audit refuted
3  audit inconclusive, or a search that found nothing
64 usage error
65 malformed or invalid input data
70 numerical failure (no convergence, budget exceeded)
== =====================================================
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import config
from .cones import (chain_length, chain_witness, cone_from_json, cone_to_json, dual_member, face_to_json, member,
                    minimal_face, relint_member, subset_select)
from .errors import (BudgetExceeded, CertificateRejected, ConeliftError, ConvergenceError,
                     DecompositionNotFound, DualOracleUnavailable, HypothesisViolation,
                     NotRealRootedError, SplittingFailed, UnsupportedConeError)
from .hyperbolic import FactorData, factor_lift, hyp_eigenvalues, hyperbolicity_check
from .lifts import (FactorizationData, LiftDesc, check_proper, factorize, sdd_decompose, sdd_lift,
                    sdd_preimage, validate_lift)
from .neighborly import NeighborlinessCertificate, moment_family, pointeval_family, verify_neighborly
from .numerics import MultiPoly, svec
from .obstruction import audit, min_factors_bound, pigeonhole_bundle, ramsey_brute, ramsey_upper

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_REFUTED, EXIT_INCONCLUSIVE = 0, 1, 2, 3
EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 64, 65, 70


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _load(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: JSON parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    except OSError as exc:
        raise ValueError(f"cannot read {path}: {exc}") from exc


def _vector(text):
    try:
        v = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValueError(f"point is not valid JSON: {exc.msg}") from exc
    return np.asarray(v, dtype=float)


def _cone(path):
    obj = _load(path)
    return cone_from_json(obj.get("cone", obj))


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (frozenset, set)):
        return sorted(_jsonable(v) for v in x)
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, np.generic):
        return x.item()
    return x


# ---------------------------------------------------------------------------
# commands: each returns (payload, summary text or None, exit code)
# ---------------------------------------------------------------------------

def cmd_certify(args):
    if args.family not in ("psd-moment", "point-eval"):
        raise UsageError("family must be psd-moment or point-eval")
    if not 1 <= args.N <= 50:
        raise UsageError("N must be between 1 and 50")
    if args.N < args.k:
        raise ValueError(f"need N >= k (|V| >= k), got N={args.N}, k={args.k}")
    build = moment_family if args.family == "psd-moment" else pointeval_family
    try:
        cert = build(args.k, args.N)
    except OverflowError as exc:
        raise ValueError(f"overflow guard: {exc}") from exc
    rep = verify_neighborly(cert, args.tol)
    payload = cert.to_json()
    payload["verification"] = rep.to_json()
    summary = f"{len(cert.certs)} certificates, {'pass' if rep.passed else 'FAIL'}"
    return payload, summary, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_verify(args):
    cert = NeighborlinessCertificate.from_json(_load(args.bundle))
    rep = verify_neighborly(cert, args.tol, allow_partial=args.partial or None)
    summary = f"{'pass' if rep.passed else 'FAIL'}: {rep.checked} pairs, {len(rep.violations)} violations"
    return rep.to_json(), summary, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_chain(args):
    K = _cone(args.cone)
    ell = chain_length(K)
    text = f"{ell.value} (exact)" if ell.exact else f"≤ {ell.value} (bound)"
    payload = {"value": ell.value, "exact": ell.exact, "display": text}
    if args.witness:
        try:
            payload["witness"] = [face_to_json(F) for F in chain_witness(K, ell.value)]
        except UnsupportedConeError as exc:
            payload["witness_error"] = str(exc)
    return payload, text, EXIT_OK


def cmd_member(args):
    K = _cone(args.cone)
    x = _vector(args.x)
    out = {"member": member(K, x, args.tol), "relint": relint_member(K, x, args.tol)}
    try:
        out["dual_member"] = dual_member(K, x, args.tol)
    except DualOracleUnavailable as exc:
        out["dual_member"] = None
        out["dual_error"] = str(exc)
    text = " ".join(f"{k}={v}" for k, v in out.items() if k != "dual_error")
    return out, text, EXIT_OK


def cmd_face(args):
    K = _cone(args.cone)
    F = minimal_face(K, _vector(args.x), args.tol)
    return {"face": face_to_json(F)}, None, EXIT_OK


def cmd_select(args):
    K = _cone(args.cone)
    obj = _load(args.points)
    pts = obj["points"] if isinstance(obj, dict) else obj
    idx = subset_select(K, [np.asarray(p, dtype=float) for p in pts], args.tol)
    return {"indices": idx, "size": len(idx)}, " ".join(map(str, idx)), EXIT_OK


def _poly_input(path):
    obj = _load(path)
    try:
        return MultiPoly.from_json(obj["p"]), np.asarray(obj["e"], dtype=float)
    except KeyError as exc:
        raise ValueError(f"{path}: expected fields 'p' and 'e'") from exc


def cmd_hyp_check(args):
    p, e = _poly_input(args.poly)
    rep = hyperbolicity_check(p, e, args.samples, args.seed, args.tol)
    payload = {"passed": rep.passed, "samples": rep.samples, "seed": rep.seed,
               "note": "probabilistic evidence only"}
    if rep.witness is not None:
        payload["witness"] = rep.witness.tolist()
        payload["message"] = rep.message
    return payload, "pass" if rep.passed else "fail", EXIT_OK if rep.passed else EXIT_FAIL


def cmd_hyp_eig(args):
    p, e = _poly_input(args.poly)
    res = hyp_eigenvalues(p, e, _vector(args.x), args.tol)
    return {"eigenvalues": res.eigenvalues.tolist(), "rank": res.rank}, None, EXIT_OK


def _lift_input(path):
    obj = _load(path)
    if "factors" in obj:
        return factor_lift(FactorData.from_json(obj))
    return LiftDesc.from_json(obj)


def cmd_lift_validate(args):
    lift = _lift_input(args.lift)
    obj = _load(args.samples)
    primal = [(np.asarray(r["x"], dtype=float), np.asarray(r["u"], dtype=float)) for r in obj.get("primal", [])]
    # dual entries may be bare vectors or the labelled records lift-factorize reads
    dual = [np.asarray(y["y"] if isinstance(y, dict) else y, dtype=float) for y in obj.get("dual", [])]
    rep = validate_lift(lift, primal, dual, args.tol, seed=args.seed)
    proper = check_proper(lift, seed=args.seed)
    payload = rep.to_json()
    payload["proper"] = {"found": proper.found, "exact": proper.exact, "message": proper.message}
    return payload, "pass" if rep.passed else "FAIL", EXIT_OK if rep.passed else EXIT_FAIL


def cmd_lift_factorize(args):
    lift = _lift_input(args.lift)
    obj = _load(args.samples)
    primal = [(r["label"], r["x"], r["u"]) for r in obj["primal"]]
    dual = [(r["label"], r["y"]) for r in obj["dual"]]
    fd = factorize(lift, primal, dual, args.tol)
    return fd.to_json(), f"max relative error {fd.max_error:.3e}", EXIT_OK


def cmd_sdd(args):
    if args.lift is not None:
        lift = sdd_lift(args.lift)
        payload = lift.to_json()
        payload["pairs"] = lift.annotations["pairs"]
        return payload, None, EXIT_OK
    X = np.asarray(_load(args.matrix), dtype=float)
    blocks = sdd_decompose(X, args.tol)
    payload = {"blocks": [{"pair": list(p), "M": M.tolist()} for p, M in sorted(blocks.items())],
               "preimage": sdd_preimage(X).tolist(), "svec": svec(X).tolist()}
    return payload, f"{len(blocks)} PSD blocks", EXIT_OK


def cmd_audit(args):
    if args.demo:
        cert, fd, cones = pigeonhole_bundle(5, args.seed)
    else:
        obj = _load(args.bundle)
        obj = obj.get("bundle", obj)
        try:
            cert = NeighborlinessCertificate.from_json(obj["cert"])
            fd = FactorizationData.from_json(obj["factorization"])
            cones = [cone_from_json(c) for c in obj["cones"]]
        except KeyError as exc:
            raise ValueError(f"audit bundle is missing field {exc}") from exc
    verdict = audit(cert, fd, cones, args.tol)
    code = {"consistent": EXIT_OK, "refuted": EXIT_REFUTED}.get(verdict.verdict, EXIT_INCONCLUSIVE)
    payload = verdict.to_json()
    if args.demo:
        payload["bundle"] = {"cert": cert.to_json(), "factorization": fd.to_json(),
                             "cones": [cone_to_json(K) for K in cones]}
    return payload, verdict.verdict, code


def cmd_bound(args):
    m = min_factors_bound(args.k, args.N)
    return {"k": args.k, "N": args.N, "min_factors": m}, str(m), EXIT_OK


def cmd_ramsey(args):
    payload = {"k": args.k, "m": args.m, "n": args.n}
    v = ramsey_upper(args.k, args.m, args.n)
    payload["upper_bound"] = str(v)
    text = str(v)
    if args.brute is not None:
        res = ramsey_brute(args.k, args.m, args.n, args.brute)
        payload["brute"] = {"size": args.brute, "forced": res.forced, "checked": res.colorings_checked,
                            "counterexample": None if res.counterexample is None else
                            [{"subset": list(s), "color": c} for s, c in res.counterexample.items()]}
        text += f"\nsize {args.brute}: {'forced' if res.forced else 'counterexample found'}"
    return payload, text, EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    def flags(sub):
        # subcommand copies must not overwrite values given before the subcommand
        dflt = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
        p = _Parser(add_help=False)
        p.add_argument("--tol", type=float, default=dflt(None), help="absolute tolerance (scaled per check)")
        p.add_argument("--seed", type=int, default=dflt(None), help="random seed for sampling checks")
        p.add_argument("--config", default=dflt(None), help="JSON file overriding configuration fields")
        p.add_argument("--out", default=dflt(None), help="write the JSON payload here")
        p.add_argument("--json", action="store_true", default=dflt(False), help="print the JSON payload to stdout")
        return p

    common = flags(True)
    ap = _Parser(prog="conelift", description="Cone lifts, face lattices and lift-size bounds.",
                 parents=[flags(False)])
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_, parents=[common])
        p.set_defaults(func=fn)
        return p

    p = add("certify", cmd_certify, "generate and verify a neighborliness certificate bundle")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--family", default="psd-moment")
    p.add_argument("--N", type=int, required=True)

    p = add("verify", cmd_verify, "verify a certificate bundle")
    p.add_argument("bundle")
    p.add_argument("--partial", action="store_true", help="allow missing certificates")

    p = add("chain", cmd_chain, "chain length of a cone")
    p.add_argument("cone")
    p.add_argument("--witness", action="store_true")

    for name, fn, help_ in (("member", cmd_member, "membership tests"),
                            ("face", cmd_face, "minimal face of a point")):
        p = add(name, fn, help_)
        p.add_argument("cone")
        p.add_argument("--x", required=True, help="point as a JSON list")

    p = add("select", cmd_select, "subset selection preserving the minimal face")
    p.add_argument("cone")
    p.add_argument("--points", required=True, help="JSON file with a list of points")

    p = add("hyp-check", cmd_hyp_check, "sample-based hyperbolicity check")
    p.add_argument("poly", help='JSON file {"p": <poly>, "e": [...]}')
    p.add_argument("--samples", type=int, default=None)

    p = add("hyp-eig", cmd_hyp_eig, "hyperbolic eigenvalues of a point")
    p.add_argument("poly")
    p.add_argument("--x", required=True)

    p = add("lift-validate", cmd_lift_validate, "sample-based lift validation")
    p.add_argument("lift")
    p.add_argument("--samples", required=True)

    p = add("lift-factorize", cmd_lift_factorize, "factor the pairing through a proper lift")
    p.add_argument("lift")
    p.add_argument("--samples", required=True)

    p = add("sdd", cmd_sdd, "SDD decomposition or the SDD lift")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--matrix", help="JSON file with a symmetric matrix")
    g.add_argument("--lift", type=int, help="emit the lift for this order")

    p = add("audit", cmd_audit, "zero-pattern audit of a certificate and factor tables")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("bundle", nargs="?")
    g.add_argument("--demo", action="store_true", help="audit the built-in pigeonhole bundle")

    p = add("bound", cmd_bound, "lower bound on the number of lift factors")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--N", type=int, required=True)

    p = add("ramsey", cmd_ramsey, "Ramsey upper bound (optionally brute-force a size)")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--brute", type=int, default=None, metavar="SIZE")
    return ap


def _apply_config(args):
    cfg = config.current()
    if args.config:
        obj = _load(args.config)
        try:
            cfg = cfg.replace(**obj)
        except TypeError as exc:
            raise ValueError(f"unknown configuration field: {exc}") from exc
    if args.tol is not None:
        if args.tol <= 0:
            raise UsageError("--tol must be positive")
        cfg = cfg.replace(tol=args.tol)
    if args.seed is not None:
        cfg = cfg.replace(seed=args.seed)
    config.set_config(cfg)
    args.tol = cfg.tol
    args.seed = cfg.seed


def _emit(args, payload, text):
    payload = {"schema": SCHEMA, "command": args.command, "seed": args.seed, **_jsonable(payload)}
    body = json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(body)
    if args.json or (text is None and not args.out):
        sys.stdout.write(body)
    elif text is not None:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    prev = config.current()
    try:
        _apply_config(args)
        payload, text, code = args.func(args)
        _emit(args, payload, text)
        return code
    except UsageError as exc:
        print(f"conelift {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, DecompositionNotFound, BudgetExceeded, SplittingFailed) as exc:
        print(f"conelift {args.command}: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, KeyError, TypeError, CertificateRejected, HypothesisViolation,
            NotRealRootedError, UnsupportedConeError, ConeliftError) as exc:
        print(f"conelift {args.command}: invalid input: {exc}", file=sys.stderr)
        return EXIT_DATA
    finally:
        config.set_config(prev)


if __name__ == "__main__":
    sys.exit(main())
