"""Command-line front end.

Exit codes: 0 when every checked inequality holds, 2 when a check fails
(the report names the failing inputs), 1 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import io
import json
import math
import os
import sys

import numpy as np

from . import arith_fn, op_ineq, refcheck, scalar_cf, suites, sum_refine, symker
from .errors import CfineqError, DegenerateInput
from .sandwich import Tolerance

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_FAILED = 2

ORACLE_RTOL = 1e-12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text: str) -> list[float]:
    try:
        return [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _matrix(text: str) -> np.ndarray:
    try:
        value = np.asarray(json.loads(text), dtype=float)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"expected a JSON array of rows, got {text!r}")
    if value.ndim == 0:
        value = value.reshape(1, 1)
    if value.ndim != 2:
        raise argparse.ArgumentTypeError("matrix must be a JSON array of rows")
    return value


def _variant(text: str) -> str:
    names = {"proof-corrected": arith_fn.PROOF_CORRECTED, "as-printed": arith_fn.AS_PRINTED}
    if text not in names:
        raise argparse.ArgumentTypeError(f"variant must be one of {sorted(names)}")
    return names[text]


def _seed_default() -> int:
    env = os.environ.get("CFINEQ_SEED")
    if env is None:
        return 0
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"CFINEQ_SEED must be an integer, got {env!r}")


def _jsonable(value):
    """Replace non-finite floats (not valid JSON) by strings."""
    if isinstance(value, float):
        return value if math.isfinite(value) else repr(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, np.generic):
        return _jsonable(value.item())
    return value


def _flatten(record: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, (list, tuple)):
            out[name] = json.dumps(_jsonable(value))
        else:
            out[name] = value
    return out


def render(record, fmt: str) -> str:
    """Serialize a record (or list of records) as json, csv or text."""
    if fmt == "json":
        return json.dumps(_jsonable(record), allow_nan=False)
    rows = record if isinstance(record, list) else [record]
    rows = [_flatten(_jsonable(r)) for r in rows]
    if fmt == "csv":
        fields = []
        for r in rows:
            fields.extend(k for k in r if k not in fields)
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        writer.writeheader()
        writer.writerows(rows)
        return buf.getvalue().rstrip("\n")
    if isinstance(record, list):
        return "\n".join(" ".join(f"{k}={v}" for k, v in r.items()) for r in rows)
    return "\n".join(f"{k}: {v}" for k, v in rows[0].items())


def _tolerance(args) -> Tolerance | None:
    return Tolerance(rel_eps=args.tol) if args.tol is not None else None


def _close(fast: float, oracle: float) -> bool:
    if fast == oracle:
        return True
    return abs(fast - oracle) <= ORACLE_RTOL * max(1.0, abs(oracle))


def _with_oracle(record: dict, kind: str, inputs: dict, args) -> bool:
    """Attach a high-precision recomputation; returns whether it agrees."""
    if args.precision_bits is None:
        return True
    hp = refcheck.hp_sandwich(kind, inputs, args.precision_bits).as_floats()
    agree = all(_close(record[k], v) for k, v in zip(("lower", "middle", "upper"), hp))
    record["oracle"] = {"lower": hp[0], "middle": hp[1], "upper": hp[2],
                        "precision_bits": args.precision_bits, "agrees": agree}
    return agree


def _sandwich_result(sandwich, kind, inputs, args, context=None):
    record = sandwich.as_dict()
    if context is not None:
        record["context"] = {"A": context.A, "m": context.m, "M": context.M}
    agree = _with_oracle(record, kind, inputs, args)
    return record, bool(sandwich.ok and agree)


def cmd_young(args):
    s = scalar_cf.cf_sandwich_two(args.a, args.b, args.lam, _tolerance(args))
    return _sandwich_result(s, "cf_two", {"a": args.a, "b": args.b, "lam": args.lam}, args)


def cmd_sandwich(args):
    weights = args.weights or [1.0 / len(args.points)] * len(args.points)
    if len(weights) != len(args.points):
        raise UsageError("--points and --weights must have equal length")
    total = math.fsum(weights)
    if total <= 0:
        raise UsageError("weights must have a positive sum")
    weights = [w / total for w in weights]
    s = scalar_cf.cf_sandwich_n(args.points, weights, _tolerance(args))
    return _sandwich_result(s, "cf_n", {"points": args.points, "weights": weights}, args)


def cmd_bernoulli(args):
    s = scalar_cf.bernoulli_sandwich(args.x, args.lam, _tolerance(args))
    return _sandwich_result(s, "bernoulli", {"x": args.x, "lam": args.lam}, args)


def cmd_tightness(args):
    rep = scalar_cf.tightness_report(args.a, args.b, args.lam)
    record = rep.as_dict()
    strict = args.a != args.b and 0.0 < args.lam < 1.0
    record["cf_below_exp"] = rep.cf_upper < rep.exp_upper if strict else None
    if args.precision_bits is not None:
        ex, lg = refcheck.hp_reverse_young(args.a, args.b, args.lam, args.precision_bits)
        record["oracle"] = {"exp_upper": float(ex), "log_upper": float(lg),
                            "precision_bits": args.precision_bits}
    return record, record["cf_below_exp"] is not False


def cmd_power_mean(args):
    weights = args.weights or [1.0] * len(args.values)
    spec = sum_refine.PowerMeanSpec(args.values, weights, args.r, args.s)
    s, ctx = sum_refine.power_mean_sandwich(spec, _tolerance(args))
    record, ok = _sandwich_result(s, "power_mean", {"values": args.values, "weights": weights,
                                                    "r": args.r, "s": args.s}, args, ctx)
    record["M_r"] = sum_refine.power_mean(args.values, weights, args.r)
    record["M_s"] = sum_refine.power_mean(args.values, weights, args.s)
    return record, ok


def cmd_holder(args):
    spec = sum_refine.HolderSpec(args.a, args.b, args.p, args.q)
    s, ctx = sum_refine.holder_sandwich(spec, _tolerance(args))
    inputs = {"avec": args.a, "bvec": args.b, "p": spec.p, "q": spec.q}
    return _sandwich_result(s, "holder", inputs, args, ctx)


def cmd_cauchy(args):
    s, ctx = sum_refine.cauchy_sandwich(args.a, args.b, _tolerance(args))
    return _sandwich_result(s, "cauchy", {"avec": args.a, "bvec": args.b}, args, ctx)


def cmd_bergstrom(args):
    try:
        s, ctx = sum_refine.bergstrom_sandwich(args.x, args.a, _tolerance(args))
    except DegenerateInput as exc:
        if exc.result is None:
            raise
        s, ctx = exc.result
        record, ok = _sandwich_result(s, "bergstrom", {"xvec": args.x, "avec": args.a}, args)
        record["degenerate"] = str(exc)
        return record, ok
    return _sandwich_result(s, "bergstrom", {"xvec": args.x, "avec": args.a}, args, ctx)


def cmd_arith(args):
    k = int(args.k) if float(args.k).is_integer() else args.k
    rep = arith_fn.divisor_mean_sandwich(args.n, k, args.unitary, args.variant,
                                         tolerance=_tolerance(args))
    record = rep.as_dict()
    ok = rep.sandwich.ok
    if args.precision_bits is not None:
        inputs = {"n": args.n, "k": k, "unitary": args.unitary, "variant": args.variant}
        hp = refcheck.hp_sandwich("divisor_mean", inputs, args.precision_bits).as_floats()
        record["oracle"] = {"lower": hp[0], "middle": hp[1], "upper": hp[2],
                            "precision_bits": args.precision_bits}
    return record, ok


def cmd_arith_scan(args):
    families = {"all": (False,), "unitary": (True,), "both": (False, True)}[args.families]
    checked = failures = 0
    examples = []
    for rep in arith_fn.arith_scan(args.n_max, args.ks, families, args.variant,
                                   n_min=args.n_min, tolerance=_tolerance(args)):
        checked += 1
        if not rep.sandwich.ok:
            failures += 1
            if len(examples) < args.max_examples:
                examples.append({"n": rep.n, "k": rep.k,
                                 "family": "unitary" if rep.unitary else "all",
                                 "lower_ok": rep.sandwich.lower_ok,
                                 "upper_ok": rep.sandwich.upper_ok})
    record = {"n_min": args.n_min, "n_max": args.n_max, "ks": args.ks,
              "families": args.families, "variant": args.variant, "checked": checked,
              "failures": failures, "passed": failures == 0, "examples": examples}
    return record, failures == 0


def _reverdict(X, Y, tol):
    return symker.loewner_cmp(X, Y, tol)


def _operator_record(result, args):
    if args.tol is not None:
        result = op_ineq.OperatorSandwich(
            result.lower, result.middle, result.upper,
            _reverdict(result.lower, result.middle, args.tol),
            _reverdict(result.middle, result.upper, args.tol),
            result.case_tag, result.assignment)
    return result.as_dict(), bool(np.all(result.ok))


def cmd_matrix_t41(args):
    return _operator_record(op_ineq.theorem41_sandwich(args.A, args.B, args.lam), args)


def cmd_matrix_c42(args):
    return _operator_record(op_ineq.corollary42_sandwich(args.A, args.B, args.lam), args)


def cmd_matrix_c43(args):
    res = op_ineq.corollary43_check(args.A, args.B)
    verdict = res.verdict if args.tol is None else _reverdict(
        np.zeros_like(res.expr), res.expr, args.tol)
    record = {"psd": bool(verdict.leq), "min_eig": float(verdict.min_eig_B_minus_A),
              "tol_used": float(verdict.tol_used)}
    record["expr"] = (res.expr.tolist() if res.expr.shape[-1] <= 8
                      else op_ineq.matrix_summary(res.expr))
    return record, record["psd"]


def cmd_matrix_chain(args):
    res = op_ineq.amghm_chain_check(args.A, args.B, args.lam)
    hm_gm, gm_am = res.hm_leq_gm, res.gm_leq_am
    if args.tol is not None:
        hm_gm = _reverdict(res.harmonic, res.geometric, args.tol)
        gm_am = _reverdict(res.geometric, res.arithmetic, args.tol)
    small = res.harmonic.shape[-1] <= 8
    record = {"hm_leq_gm": bool(hm_gm.leq), "gm_leq_am": bool(gm_am.leq),
              "min_eig_gm_minus_hm": float(hm_gm.min_eig_B_minus_A),
              "min_eig_am_minus_gm": float(gm_am.min_eig_B_minus_A)}
    for name in ("harmonic", "geometric", "arithmetic"):
        M = getattr(res, name)
        record[name] = M.tolist() if small else op_ineq.matrix_summary(M)
    return record, record["hm_leq_gm"] and record["gm_leq_am"]


def cmd_verify(args):
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    if any(d < 1 for d in args.dims):
        raise UsageError("all --dims must be at least 1")
    names = suites.SUITES if args.suite == "all" else (args.suite,)
    results = [suites.run_suite(name, args.trials, args.seed, tuple(args.dims),
                                tuple(args.lam)) for name in names]
    passed = all(r.passed for r in results)
    if args.format == "json":
        record = {"seed": args.seed, "trials": args.trials, "passed": passed,
                  "suites": [r.as_dict() for r in results]}
    else:
        record = []
        for r in results:
            for c in r.checks:
                row = c.as_dict()
                del row["examples"]
                row = {"suite": r.suite, **row}
                if c.examples:
                    row["first_failure"] = c.examples[0]
                record.append(row)
    return record, passed


def _add_output(p):
    group = p.add_mutually_exclusive_group()
    group.add_argument("--json", dest="format", action="store_const", const="json")
    group.add_argument("--csv", dest="format", action="store_const", const="csv")
    p.set_defaults(format="text")
    p.add_argument("--tol", type=float, default=None,
                   help="relative tolerance for scalar checks; absolute Loewner tolerance "
                        "for matrix checks")
    p.add_argument("--precision-bits", type=int, default=None,
                   help="also recompute with the high-precision oracle at this precision")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cfineq", description="Refined Cartwright-Field inequality toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.set_defaults(func=fn)
        _add_output(p)
        return p

    p = command("young", cmd_young, "two-point sandwich on the weighted Young gap")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = command("sandwich", cmd_sandwich, "n-point sandwich on the weighted AM-GM gap")
    p.add_argument("--points", type=_floats, required=True)
    p.add_argument("--weights", type=_floats, default=None, help="default: uniform")

    p = command("bernoulli", cmd_bernoulli, "refined Bernoulli inequality")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = command("tightness", cmd_tightness, "compare the upper bounds on the Young gap")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = command("power-mean", cmd_power_mean, "refined power-mean inequality")
    p.add_argument("--values", type=_floats, required=True)
    p.add_argument("--weights", type=_floats, default=None, help="default: all ones")
    p.add_argument("--r", type=float, required=True)
    p.add_argument("--s", type=float, required=True)

    p = command("holder", cmd_holder, "refined Hölder inequality")
    p.add_argument("--a", type=_floats, required=True)
    p.add_argument("--b", type=_floats, required=True)
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, default=None, help="default: conjugate of p")

    p = command("cauchy", cmd_cauchy, "refined Cauchy-Schwarz inequality")
    p.add_argument("--a", type=_floats, required=True)
    p.add_argument("--b", type=_floats, required=True)

    p = command("bergstrom", cmd_bergstrom, "refined Bergström inequality")
    p.add_argument("--x", type=_floats, required=True)
    p.add_argument("--a", type=_floats, required=True)

    p = command("arith", cmd_arith, "divisor-mean sandwich for one n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=float, default=1.0)
    p.add_argument("--unitary", action="store_true")
    p.add_argument("--variant", type=_variant, default="proof-corrected",
                   help="proof-corrected (default) or as-printed")

    p = command("arith-scan", cmd_arith_scan, "divisor-mean sandwich over a range of n")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--ks", type=_floats, default=[0.0, 0.5, 1.0, 2.0, 3.0])
    p.add_argument("--families", choices=("all", "unitary", "both"), default="both")
    p.add_argument("--variant", type=_variant, default="proof-corrected")
    p.add_argument("--max-examples", type=int, default=10)

    for name, fn, text, needs_lam in (
            ("matrix-t41", cmd_matrix_t41, "operator sandwich on the geometric-mean gap", True),
            ("matrix-c42", cmd_matrix_c42, "harmonic-mean bracket by corrected candidates",
             True),
            ("matrix-c43", cmd_matrix_c43, "cubic difference positivity for A <= B", False),
            ("matrix-chain", cmd_matrix_chain, "harmonic <= geometric <= arithmetic", True)):
        p = command(name, fn, text)
        p.add_argument("--A", type=_matrix, required=True, help="JSON array of rows")
        p.add_argument("--B", type=_matrix, required=True, help="JSON array of rows")
        if needs_lam:
            p.add_argument("--lambda", dest="lam", type=float, required=True)

    p = command("verify", cmd_verify, "seeded randomized verification suites")
    p.add_argument("--suite", choices=suites.SUITES + ("all",), default="all")
    p.add_argument("--trials", type=int, default=1000,
                   help="draws per suite (largest n for the arith suite)")
    p.add_argument("--seed", type=int, default=None, help="default: $CFINEQ_SEED or 0")
    p.add_argument("--dims", type=_ints, default=[1, 2, 4, 8])
    p.add_argument("--lambda", dest="lam", type=_floats,
                   default=[i / 10 for i in range(1, 10)], help="lambda grid")
    return parser


def run_command(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        if getattr(args, "seed", 0) is None:
            args.seed = _seed_default()
        record, ok = args.func(args)
    except (UsageError, CfineqError, ValueError, OverflowError) as exc:
        print(f"cfineq {args.command}: error: {exc}", file=stderr)
        return EXIT_USAGE
    print(render(record, args.format), file=stdout)
    return EXIT_OK if ok else EXIT_FAILED


def main(argv=None) -> None:
    sys.exit(run_command(argv))
