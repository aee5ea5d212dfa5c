"""Seeded randomized verification suites.

Each suite returns a :class:`SuiteResult` listing its checks with trial
counts, failure counts, the worst observed slack and the first few failing
inputs. Random streams are derived from ``(seed, suite, sub-stream)`` so
suites are reproducible independently of each other and of run order.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import arith_fn, op_ineq, scalar_cf, sum_refine, symker

SCALAR_REL_SLACK = -1e-12
MATRIX_REL_SLACK = -1e-8
COHERENCE_TOL = 1e-10
KERNEL_RTOL = 1e-12
MAX_EXAMPLES = 5

_SUITE_IDS = {"scalar": 1, "means": 2, "sums": 3, "arith": 4, "matrix": 5, "coherence": 6,
              "kernel": 7}


@dataclass
class CheckResult:
    """Outcome of one named check.

    ``worst`` is the smallest margin seen, in the check's own units (relative
    slack, tolerance multiples or negated error); ``inf`` for pass/fail checks.
    """

    name: str
    trials: int = 0
    failures: int = 0
    worst: float = math.inf
    examples: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, ok: bool, slack: float = math.inf, inputs=None):
        self.trials += 1
        self.worst = min(self.worst, slack)
        if not ok:
            self.failures += 1
            if len(self.examples) < MAX_EXAMPLES:
                self.examples.append(inputs)

    def record_batch(self, ok, slack, inputs=None):
        ok = np.asarray(ok).reshape(-1)
        slack = np.asarray(slack, dtype=float).reshape(-1)
        self.trials += ok.size
        if slack.size:
            self.worst = min(self.worst, float(slack.min()))
        bad = np.flatnonzero(~ok)
        self.failures += bad.size
        for i in bad[: MAX_EXAMPLES - len(self.examples)]:
            self.examples.append(inputs(int(i)) if callable(inputs) else int(i))

    def as_dict(self) -> dict:
        worst = self.worst if math.isfinite(self.worst) else None
        return {"name": self.name, "trials": self.trials, "failures": self.failures,
                "worst": worst, "passed": self.passed, "examples": self.examples}


@dataclass
class SuiteResult:
    suite: str
    checks: list
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def as_dict(self, timing: bool = False) -> dict:
        out = {"suite": self.suite, "passed": self.passed,
               "checks": [c.as_dict() for c in self.checks]}
        if timing:
            out["elapsed"] = self.elapsed
        return out


def rng_for(seed: int, suite: str, *stream: int) -> np.random.Generator:
    return np.random.default_rng([int(seed) % 2 ** 64, _SUITE_IDS[suite], *stream])


def _log_uniform(rng, lo, hi, size=None):
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size))


def _timed(fn):
    def wrapper(*args, **kwargs):
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.elapsed = time.perf_counter() - start
        return result

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@_timed
def scalar_suite(trials: int, seed: int, max_points: int = 64, cross_checks: int = 1000
                 ) -> SuiteResult:
    """Two-point, n-point and Bernoulli sandwiches plus the exp-bound tightness claim.

    Bulk draws use the vectorized evaluators; the first ``cross_checks`` draws
    of each family are also run through the per-call path and compared.
    """
    two = CheckResult("cf_two")
    npt = CheckResult("cf_n")
    bern = CheckResult("bernoulli")
    reduction = CheckResult("reduction_n2")
    tight = CheckResult("cf_upper_lt_exp_upper")
    agree = CheckResult("batch_matches_scalar")

    def worst_rel(batch):
        lo, up = batch.relative_slacks()
        return np.minimum(lo, up)

    def compare(batch, i, single, inputs):
        ref = batch[i]
        scale = max(1.0, abs(ref.middle) + abs(ref.upper))
        diff = max(abs(ref.lower - single.lower), abs(ref.middle - single.middle),
                   abs(ref.upper - single.upper)) / scale
        agree.record(diff <= 1e-12, -diff, inputs)

    rng = rng_for(seed, "scalar", 0)
    a = _log_uniform(rng, 1e-3, 1e3, trials)
    b = _log_uniform(rng, 1e-3, 1e3, trials)
    lam = rng.uniform(0.0, 1.0, trials)

    def pair_inputs(i):
        return {"a": float(a[i]), "b": float(b[i]), "lam": float(lam[i])}

    s2 = scalar_cf.cf_sandwich_two_batch(a, b, lam)
    w2 = worst_rel(s2)
    two.record_batch(s2.ok & (w2 >= SCALAR_REL_SLACK), w2, pair_inputs)
    strict = (a != b) & (lam > 0.0) & (lam < 1.0)
    cf_up, exp_up, _ = scalar_cf.upper_bounds_batch(a, b, lam)
    idx = np.flatnonzero(strict)
    tight.record_batch((cf_up < exp_up)[idx], np.full(idx.size, math.inf),
                       lambda j: pair_inputs(int(idx[j])))
    sn = scalar_cf.cf_sandwich_n_batch(np.stack([a, b], axis=1),
                                       np.stack([lam, 1.0 - lam], axis=1))
    scale = np.maximum(1.0, np.abs(s2.middle) + np.abs(s2.upper))
    diff = np.max(np.abs(np.stack([sn.lower - s2.lower, sn.middle - s2.middle,
                                   sn.upper - s2.upper])), axis=0) / scale
    reduction.record_batch(diff <= 1e-12, -diff, pair_inputs)
    for i in range(min(cross_checks, trials)):
        compare(s2, i, scalar_cf.cf_sandwich_two(a[i], b[i], lam[i]), pair_inputs(i))

    rng = rng_for(seed, "scalar", 1)
    sizes = rng.integers(1, max_points + 1, trials)
    x = _log_uniform(rng, 1e-3, 1e3, (trials, max_points))
    g = rng.standard_gamma(1.0, (trials, max_points))
    g = np.where(np.arange(max_points) < sizes[:, None], np.maximum(g, 1e-300), 0.0)
    w = g / g.sum(axis=1, keepdims=True)

    def sample_inputs(i):
        n = int(sizes[i])
        return {"points": x[i, :n].tolist(), "weights": w[i, :n].tolist()}

    sb = scalar_cf.cf_sandwich_n_batch(x, w)
    wn = worst_rel(sb)
    npt.record_batch(sb.ok & (wn >= SCALAR_REL_SLACK), wn, sample_inputs)
    for i in range(min(cross_checks, trials)):
        n = int(sizes[i])
        weights = w[i, :n] / math.fsum(w[i, :n])
        compare(sb, i, scalar_cf.cf_sandwich_n(x[i, :n], weights), sample_inputs(i))

    rng = rng_for(seed, "scalar", 2)
    xs = _log_uniform(rng, 1e-3, 1e3, trials) - 1.0
    lb = rng.uniform(0.0, 1.0, trials)

    def bern_inputs(i):
        return {"x": float(xs[i]), "lam": float(lb[i])}

    sbe = scalar_cf.bernoulli_sandwich_batch(xs, lb)
    wb = worst_rel(sbe)
    bern.record_batch(sbe.ok & (wb >= SCALAR_REL_SLACK), wb, bern_inputs)
    for i in range(min(cross_checks, trials)):
        compare(sbe, i, scalar_cf.bernoulli_sandwich(xs[i], lb[i]), bern_inputs(i))
    return SuiteResult("scalar", [two, npt, bern, reduction, tight, agree])


@_timed
def means_suite(trials: int, seed: int, max_points: int = 32, max_exponent: float = 8.0
                ) -> SuiteResult:
    """Power-mean monotonicity and the refined power-mean sandwich."""
    mono = CheckResult("power_mean_monotone")
    sand = CheckResult("power_mean_sandwich")
    rng = rng_for(seed, "means", 0)
    for _ in range(trials):
        n = int(rng.integers(1, max_points + 1))
        a = _log_uniform(rng, 1e-3, 1e3, n)
        p = _log_uniform(rng, 1e-2, 1e2, n)
        r, s = sorted(rng.uniform(0.0, max_exponent, 2))
        r = max(r, 1e-3)
        s = max(s, r)
        inputs = {"values": a.tolist(), "weights": p.tolist(), "r": r, "s": s}
        mr = sum_refine.power_mean(a, p, r)
        ms = sum_refine.power_mean(a, p, s)
        slack = (ms - mr) / ms
        mono.record(slack >= SCALAR_REL_SLACK, slack, inputs)
        sandwich, _ = sum_refine.power_mean_sandwich(sum_refine.PowerMeanSpec(a, p, r, s))
        sand.record(sandwich.ok, _tol_slack(sandwich), inputs)
    return SuiteResult("means", [mono, sand])


def _tol_slack(sandwich) -> float:
    """Worst slack in units of the sandwich's own tolerance (>= -1 passes)."""
    return min(sandwich.slack_lower, sandwich.slack_upper) / max(sandwich.tol, 1e-300)


@_timed
def sums_suite(trials: int, seed: int, max_points: int = 64) -> SuiteResult:
    """Hölder, Cauchy and Bergström sandwiches with their consistency identities."""
    holder = CheckResult("holder")
    cauchy = CheckResult("cauchy")
    berg = CheckResult("bergstrom")
    consistency = CheckResult("cauchy_equals_holder_p2")
    reduction = CheckResult("bergstrom_equals_cauchy")
    rng = rng_for(seed, "sums", 0)
    for _ in range(trials):
        n = int(rng.integers(1, max_points + 1))
        a = _log_uniform(rng, 1e-3, 1e3, n)
        b = _log_uniform(rng, 1e-3, 1e3, n)
        p = float(1.0 + _log_uniform(rng, 1e-2, 1e1))
        inputs = {"avec": a.tolist(), "bvec": b.tolist(), "p": p}
        hs, _ = sum_refine.holder_sandwich(sum_refine.HolderSpec(a, b, p))
        holder.record(hs.ok, _tol_slack(hs), inputs)
        cs, cctx = sum_refine.cauchy_sandwich(a, b)
        cauchy.record(cs.ok, _tol_slack(cs), inputs)
        h2, hctx = sum_refine.holder_sandwich(sum_refine.HolderSpec(a, b, 2.0, 2.0))
        dot = math.fsum((a * b).tolist())
        # (||a|| ||b||)^2 - dot^2 = g^2 + 2 g dot with g the Hölder gap at p = 2
        implied = h2.middle * h2.middle + 2.0 * h2.middle * dot
        err = abs(implied - cs.middle) / max(cs.tol, 1e-300)
        same_ctx = (cctx.A, cctx.m, cctx.M) == (hctx.A, hctx.m, hctx.M)
        consistency.record(err <= 1.0 and same_ctx, -err, inputs)

        x = _log_uniform(rng, 1e-3, 1e3, n) * rng.choice([-1.0, 1.0], n)
        bs, _ = sum_refine.bergstrom_sandwich(x, a)
        berg.record(bs.ok, _tol_slack(bs), {"xvec": x.tolist(), "avec": a.tolist()})
        root = np.sqrt(a)
        cs2, _ = sum_refine.cauchy_sandwich(np.abs(x) / root, root)
        sum_a = math.fsum(a.tolist())
        diffs = [abs(u / sum_a - v) / max(bs.tol, 1e-300)
                 for u, v in ((cs2.lower, bs.lower), (cs2.middle, bs.middle),
                              (cs2.upper, bs.upper))]
        reduction.record(max(diffs) <= 1.0, -max(diffs),
                         {"xvec": x.tolist(), "avec": a.tolist()})
    return SuiteResult("sums", [holder, cauchy, berg, consistency, reduction])


@_timed
def arith_suite(n_max: int, ks=(0, 0.5, 1, 2, 3), identity_ks=(0, 1, 2, 3)) -> SuiteResult:
    """Divisor-mean sandwiches over ``n <= n_max`` and exact divisor identities."""
    corrected = CheckResult("divisor_sandwich_proof_corrected")
    zero_k = CheckResult("k0_exact_zero")
    classical = CheckResult("mean_at_least_root")
    closed = CheckResult("closed_form_matches_enumeration")
    product = CheckResult("divisor_product_identity")
    complement = CheckResult("unitary_closed_under_complement")
    printed = CheckResult("as_printed_fails_n6_k1")

    ks = list(ks)
    for prof in arith_fn.iter_profiles(n_max):
        n = prof.n
        for unitary in (False, True):
            ds = prof.unitary_divisors if unitary else prof.divisors
            for k in ks:
                rep = arith_fn._sandwich_report(n, ds, arith_fn._check_k(k), unitary,
                                                arith_fn.PROOF_CORRECTED, arith_fn.N_TO_K,
                                                None)
                corrected.record(rep.sandwich.ok, min(rep.sandwich.slack_lower,
                                                      rep.sandwich.slack_upper),
                                 {"n": n, "k": k, "unitary": unitary})
                # sigma_k / tau >= n^(k/2) for both divisor families
                classical.record(rep.sandwich.middle >= -rep.sandwich.tol,
                                 rep.sandwich.middle, {"n": n, "k": k, "unitary": unitary})
                if k == 0:
                    s = rep.sandwich
                    zero_k.record(s.lower == s.middle == s.upper == 0.0,
                                  inputs={"n": n, "unitary": unitary})
            for k in identity_ks:
                enum = sum(d ** k for d in ds)
                closed.record(enum == arith_fn.divisor_function_closed_form(n, k, unitary),
                              inputs={"n": n, "k": k, "unitary": unitary})
            prod = math.prod(ds)
            product.record(prod * prod == n ** len(ds), inputs={"n": n, "unitary": unitary})
        comp = set(prof.unitary_divisors)
        complement.record(all(n // d in comp for d in comp), inputs={"n": n})

    if n_max >= 6:
        rep = arith_fn.divisor_mean_sandwich(6, 1, variant=arith_fn.AS_PRINTED)
        from fractions import Fraction
        printed.record(not rep.sandwich.lower_ok and rep.lower_exact == Fraction(41, 48),
                       inputs={"n": 6, "k": 1})
    return SuiteResult("arith", [corrected, zero_k, classical, closed, product, complement, printed])


def random_spd(rng, size: int, dim: int, lo: float = 0.1, hi: float = 10.0) -> np.ndarray:
    """Stack of SPD matrices with Haar eigenvectors and log-uniform spectrum in ``[lo, hi]``."""
    g = rng.standard_normal((size, dim, dim))
    q, r = np.linalg.qr(g)
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    w = _log_uniform(rng, lo, hi, (size, dim))
    return symker.sym((q * w[:, None, :]) @ np.swapaxes(q, 1, 2))


def comparable_pairs(rng, size: int, dim: int):
    """``(A, B)`` with ``B = A + C`` for SPD ``C``; half the pairs are swapped so ``B <= A``."""
    A = random_spd(rng, size, dim)
    C = random_spd(rng, size, dim) * _log_uniform(rng, 1e-2, 1.0, (size, 1, 1))
    B = A + C
    swap = rng.random(size) < 0.5
    A2 = np.where(swap[:, None, None], B, A)
    B2 = np.where(swap[:, None, None], A, B)
    return A2, B2


def _fro(X):
    return np.sqrt(np.einsum("...ij,...ij->...", X, X))


def _verdict_slack(verdict, X, Y):
    """Min eigenvalue of ``Y - X`` relative to ``1 + max(||X||_F, ||Y||_F)``."""
    return np.asarray(verdict.min_eig_B_minus_A) / (1.0 + np.maximum(_fro(X), _fro(Y)))


@_timed
def matrix_suite(trials: int, seed: int, dims=(1, 2, 4, 8),
                 lambdas=tuple(i / 10 for i in range(1, 10))) -> SuiteResult:
    """Operator sandwich, PSD terms, mean chain and cubic-difference checks."""
    t41 = CheckResult("theorem41_slack")
    t41v = CheckResult("theorem41_verdicts")
    psd = CheckResult("remark41_psd_terms")
    chain = CheckResult("amghm_chain")
    c43 = CheckResult("corollary43")
    c42 = CheckResult("corollary42_bracketed")
    c42_swapped = CheckResult("corollary42_assignment_swapped")
    for dim in dims:
        rng = rng_for(seed, "matrix", dim)
        A, B = comparable_pairs(rng, trials, dim)
        X, Y = random_spd(rng, trials, dim), random_spd(rng, trials, dim)

        def pair(i, lam=None, A=A, B=B, dim=dim):
            out = {"dim": dim, "A": A[i].tolist(), "B": B[i].tolist()}
            if lam is not None:
                out["lam"] = lam
            return out

        for lam in lambdas:
            s = op_ineq.theorem41_sandwich(A, B, lam)
            lo = _verdict_slack(s.lower_verdict, s.lower, s.middle)
            up = _verdict_slack(s.upper_verdict, s.middle, s.upper)
            worst = np.minimum(lo, up)
            t41.record_batch(worst >= MATRIX_REL_SLACK, worst, lambda i, lam=lam: pair(i, lam))
            t41v.record_batch(s.ok, worst, lambda i, lam=lam: pair(i, lam))
            c = op_ineq.amghm_chain_check(A, B, lam)
            cw = np.minimum(_verdict_slack(c.hm_leq_gm, c.harmonic, c.geometric),
                            _verdict_slack(c.gm_leq_am, c.geometric, c.arithmetic))
            chain.record_batch(c.ok, cw, lambda i, lam=lam: pair(i, lam))
        terms = op_ineq.remark41_psd_terms(X, Y)
        zero = np.zeros_like(X)
        tw = np.minimum(_verdict_slack(terms.t1_verdict, zero, terms.t1),
                        _verdict_slack(terms.t2_verdict, zero, terms.t2))
        psd.record_batch(terms.both_psd, tw,
                         lambda i: {"dim": dim, "A": X[i].tolist(), "B": Y[i].tolist()})
        # the cubic-difference check needs A <= B; orient every pair
        lo_first = np.asarray(op_ineq.loewner_cmp(A, B).leq)
        P = np.where(lo_first[:, None, None], A, B)
        Q = np.where(lo_first[:, None, None], B, A)
        r43 = op_ineq.corollary43_check(P, Q)
        c43.record_batch(r43.psd, _verdict_slack(r43.verdict, zero, r43.expr),
                         lambda i: {"dim": dim, "A": P[i].tolist(), "B": Q[i].tolist()})
        r42 = op_ineq.corollary42_sandwich(A, B, 0.5)
        w42 = np.minimum(_verdict_slack(r42.lower_verdict, r42.lower, r42.middle),
                         _verdict_slack(r42.upper_verdict, r42.middle, r42.upper))
        c42.record_batch(r42.ok, w42, lambda i: pair(i, 0.5))
        c42_swapped.record_batch(np.isin(r42.assignment, ("swapped", "indistinguishable")), w42,
                                 lambda i: pair(i, 0.5))
    return SuiteResult("matrix", [t41, t41v, psd, chain, c43, c42, c42_swapped])


@_timed
def coherence_suite(trials: int, seed: int) -> SuiteResult:
    """1x1 operator checks against the scalar formulas (with lam <-> 1 - lam)."""
    t41 = CheckResult("theorem41_vs_scalar")
    terms = CheckResult("remark41_vs_scalar")
    chain = CheckResult("chain_vs_scalar")
    c43 = CheckResult("corollary43_vs_cube")
    rng = rng_for(seed, "coherence", 0)
    a = _log_uniform(rng, 1e-3, 1e3, trials)
    b = _log_uniform(rng, 1e-3, 1e3, trials)
    lams = rng.uniform(0.0, 1.0, trials)
    A, B = a[:, None, None], b[:, None, None]

    def rel(x, y):
        return abs(x - y) / max(1.0, abs(y))

    # lambda is rounded to a 0.01 grid so the operator side runs one batch per value
    lams = np.round(lams, 2)
    lam_grid = np.unique(np.round(lams, 2))
    for li in lam_grid.tolist():
        idx = np.flatnonzero(lams == li)
        s = op_ineq.theorem41_sandwich(A[idx], B[idx], li)
        c = op_ineq.amghm_chain_check(A[idx], B[idx], li)
        for j, i in enumerate(idx.tolist()):
            ref = scalar_cf.cf_sandwich_two(b[i], a[i], li)
            err = max(rel(s.lower[j, 0, 0], ref.lower), rel(s.middle[j, 0, 0], ref.middle),
                      rel(s.upper[j, 0, 0], ref.upper))
            t41.record(err <= COHERENCE_TOL, -err, {"a": a[i], "b": b[i], "lam": li})
            hm = 1.0 / ((1.0 - li) / a[i] + li / b[i])
            gm = a[i] ** (1.0 - li) * b[i] ** li
            am = (1.0 - li) * a[i] + li * b[i]
            err = max(rel(c.harmonic[j, 0, 0], hm), rel(c.geometric[j, 0, 0], gm),
                      rel(c.arithmetic[j, 0, 0], am))
            chain.record(err <= COHERENCE_TOL, -err, {"a": a[i], "b": b[i], "lam": li})
    pt = op_ineq.remark41_psd_terms(A, B)
    r43_lo = np.minimum(a, b)[:, None, None]
    r43_hi = np.maximum(a, b)[:, None, None]
    r43 = op_ineq.corollary43_check(r43_lo, r43_hi)
    for i in range(trials):
        t1 = a[i] * a[i] / b[i] - 2.0 * a[i] + b[i]
        t2 = b[i] * b[i] / a[i] - 2.0 * b[i] + a[i]
        err = max(rel(pt.t1[i, 0, 0], t1), rel(pt.t2[i, 0, 0], t2))
        terms.record(err <= COHERENCE_TOL, -err, {"a": a[i], "b": b[i]})
        lo, hi = min(a[i], b[i]), max(a[i], b[i])
        cube = (hi - lo) ** 3 / (lo * hi)
        err = rel(r43.expr[i, 0, 0], cube)
        c43.record(err <= COHERENCE_TOL, -err, {"a": lo, "b": hi})
    return SuiteResult("coherence", [t41, terms, chain, c43])


@_timed
def kernel_suite(trials: int, seed: int, max_dim: int = 32) -> SuiteResult:
    """Jacobi reconstruction and orthogonality residuals on random symmetric matrices."""
    recon = CheckResult("jacobi_reconstruction")
    orth = CheckResult("jacobi_orthogonality")
    rng = rng_for(seed, "kernel", 0)
    dims = rng.integers(1, max_dim + 1, trials)
    for dim in np.unique(dims).tolist():
        count = int(np.sum(dims == dim))
        g = rng.standard_normal((count, dim, dim))
        S = symker.sym(g)
        eig = symker.jacobi_eigh(S)
        norm = _fro(S)
        res = _fro(eig.reconstruct() - S) / np.where(norm > 0, norm, 1.0)
        recon.record_batch(res <= KERNEL_RTOL, -res,
                           lambda i, S=S: {"dim": S.shape[-1], "S": S[i].tolist()})
        ortho = _fro(eig.basis @ np.swapaxes(eig.basis, -1, -2) - np.eye(dim)) / dim
        orth.record_batch(ortho <= KERNEL_RTOL, -ortho,
                          lambda i, S=S: {"dim": S.shape[-1], "S": S[i].tolist()})
    return SuiteResult("kernel", [recon, orth])


SUITES = ("scalar", "means", "sums", "arith", "matrix", "coherence", "kernel")


def run_suite(name: str, trials: int, seed: int, dims=(1, 2, 4, 8),
              lambdas=tuple(i / 10 for i in range(1, 10))) -> SuiteResult:
    """Dispatch by name; ``arith`` interprets ``trials`` as the largest ``n`` scanned."""
    if name == "scalar":
        return scalar_suite(trials, seed)
    if name == "means":
        return means_suite(trials, seed)
    if name == "sums":
        return sums_suite(trials, seed)
    if name == "arith":
        return arith_suite(trials)
    if name == "matrix":
        return matrix_suite(trials, seed, dims, lambdas)
    if name == "coherence":
        return coherence_suite(trials, seed)
    if name == "kernel":
        return kernel_suite(trials, seed)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES} or 'all'")


__all__ = ["CheckResult", "SuiteResult", "SUITES", "run_suite", "random_spd",
           "comparable_pairs"]
