"""Operator versions of the refined Young inequality, checked in Loewner order.

For positive definite ``A`` and ``B`` that are comparable (``A <= B`` or
``B <= A``), the gap ``(1-lam) A + lam B - A #_lam B`` is bracketed by
``lam(1-lam)/2`` times ``A B^-1 A - 2A + B`` and ``B A^-1 B - 2B + A``; the
order of the two bounds depends on which of ``A``, ``B`` is larger.

Every check returns the matrices involved together with :class:`LoewnerVerdict`
evidence. All functions accept stacks ``(..., n, n)``; case tags and verdict
fields are then arrays over the batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateInput,
    DimensionMismatch,
    DomainError,
    NotPositiveDefinite,
    OrderingIndeterminate,
)
from .symker import (
    INCOMPARABLE,
    LoewnerVerdict,
    as_symmetric,
    eigvalsh,
    loewner_cmp,
    pd_floor,
    spd_eig,
    spd_inv,
    sym,
)

A_LEQ_B = "A_leq_B"
B_LEQ_A = "B_leq_A"


@dataclass(frozen=True)
class OperatorSandwich:
    lower: np.ndarray
    middle: np.ndarray
    upper: np.ndarray
    lower_verdict: LoewnerVerdict
    upper_verdict: LoewnerVerdict
    case_tag: object
    assignment: object = None

    @property
    def ok(self):
        return self.lower_verdict.leq & self.upper_verdict.leq

    @property
    def min_eig_lower_gap(self):
        """Smallest eigenvalue of ``middle - lower``."""
        return self.lower_verdict.min_eig_B_minus_A

    @property
    def min_eig_upper_gap(self):
        """Smallest eigenvalue of ``upper - middle``."""
        return self.upper_verdict.min_eig_B_minus_A

    def as_dict(self, include_matrices: bool | None = None) -> dict:
        """JSON-ready report; matrices are summarized above dimension 8 unless forced."""
        lower_gap = np.asarray(self.min_eig_lower_gap).tolist()
        upper_gap = np.asarray(self.min_eig_upper_gap).tolist()
        out = {
            "case": np.asarray(self.case_tag).tolist(),
            "slack_lower": lower_gap,
            "slack_upper": upper_gap,
            "lower_ok": np.asarray(self.lower_verdict.leq).tolist(),
            "upper_ok": np.asarray(self.upper_verdict.leq).tolist(),
            "min_eig_lower_gap": lower_gap,
            "min_eig_upper_gap": upper_gap,
            "tol_used": np.asarray(self.lower_verdict.tol_used).tolist(),
        }
        if self.assignment is not None:
            out["assignment"] = np.asarray(self.assignment).tolist()
        if include_matrices is None:
            include_matrices = self.middle.shape[-1] <= 8
        for name in ("lower", "middle", "upper"):
            M = getattr(self, name)
            out[name] = M.tolist() if include_matrices else matrix_summary(M)
        return out


def matrix_summary(M) -> dict:
    """Dimension, trace and Frobenius norm (stack-aware) in place of the full matrix."""
    M = np.asarray(M)
    return {"dim": M.shape[-1], "trace": np.trace(M, axis1=-2, axis2=-1).tolist(),
            "frobenius": np.sqrt(np.einsum("...ij,...ij->...", M, M)).tolist()}


def _pair(A, B):
    A = as_symmetric(A, "A")
    B = as_symmetric(B, "B")
    if A.shape != B.shape:
        raise DimensionMismatch(f"shape mismatch: {A.shape} vs {B.shape}")
    return A, B


def _lambda(lam, open_interval=False):
    lam = float(lam)
    if open_interval and not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    return lam


def _ordering(A, B) -> tuple[LoewnerVerdict, np.ndarray]:
    verdict = loewner_cmp(A, B)
    relation = np.asarray(verdict.relation)
    if np.any(relation == INCOMPARABLE):
        raise OrderingIndeterminate("A and B are not comparable in the Loewner order")
    a_leq_b = np.asarray(verdict.leq)
    return verdict, a_leq_b


def _where(mask, x, y):
    return np.where(np.asarray(mask)[..., None, None], x, y)


def _scalar_tag(a_leq_b, yes=A_LEQ_B, no=B_LEQ_A):
    tag = np.where(a_leq_b, yes, no)
    return tag.item() if tag.ndim == 0 else tag


def _geometric_mean(eig_a, B, lam):
    inv_root = eig_a.apply(lambda w: 1.0 / np.sqrt(w))
    inner = spd_eig(sym(inv_root @ B @ inv_root), "B")
    if lam == 0.0:
        return eig_a.reconstruct()
    root = eig_a.apply(np.sqrt)
    return sym(root @ inner.apply(lambda w: w ** lam) @ root)


def _psd_terms(A, B, inv_a, inv_b):
    t1 = sym(A @ inv_b @ A) - 2.0 * A + B
    t2 = sym(B @ inv_a @ B) - 2.0 * B + A
    return t1, t2


def theorem41_sandwich(A, B, lam: float) -> OperatorSandwich:
    """Bracket ``(1-lam) A + lam B - A #_lam B`` for comparable PD ``A``, ``B``."""
    A, B = _pair(A, B)
    lam = _lambda(lam)
    _, a_leq_b = _ordering(A, B)
    eig_a = spd_eig(A, "A")
    inv_a = spd_inv(eig_a)
    inv_b = spd_inv(spd_eig(B, "B"))
    t1, t2 = _psd_terms(A, B, inv_a, inv_b)
    c = 0.5 * lam * (1.0 - lam)
    if lam == 1.0:
        middle = np.zeros_like(A)
    else:
        middle = (1.0 - lam) * A + lam * B - _geometric_mean(eig_a, B, lam)
    lower = c * _where(a_leq_b, t1, t2)
    upper = c * _where(a_leq_b, t2, t1)
    same = np.all(A == B, axis=(-2, -1))
    zero = np.zeros_like(A)
    lower, middle, upper = (_where(same, zero, X) for X in (lower, middle, upper))
    return OperatorSandwich(lower, middle, upper, loewner_cmp(lower, middle),
                            loewner_cmp(middle, upper), _scalar_tag(a_leq_b))


@dataclass(frozen=True)
class PsdTerms:
    t1: np.ndarray
    t2: np.ndarray
    t1_verdict: LoewnerVerdict
    t2_verdict: LoewnerVerdict

    @property
    def both_psd(self):
        return self.t1_verdict.leq & self.t2_verdict.leq


def remark41_psd_terms(A, B) -> PsdTerms:
    """``A B^-1 A - 2A + B`` and ``B A^-1 B - 2B + A``; both PSD for any PD pair."""
    A, B = _pair(A, B)
    t1, t2 = _psd_terms(A, B, spd_inv(A), spd_inv(B))
    zero = np.zeros_like(A)
    return PsdTerms(t1, t2, loewner_cmp(zero, t1), loewner_cmp(zero, t2))


def harmonic_from(inv_a, inv_b, lam):
    return spd_inv((1.0 - lam) * inv_a + lam * inv_b)


@dataclass(frozen=True)
class ChainCheck:
    harmonic: np.ndarray
    geometric: np.ndarray
    arithmetic: np.ndarray
    hm_leq_gm: LoewnerVerdict
    gm_leq_am: LoewnerVerdict

    @property
    def ok(self):
        return self.hm_leq_gm.leq & self.gm_leq_am.leq


def amghm_chain_check(A, B, lam: float) -> ChainCheck:
    """Harmonic <= geometric <= arithmetic weighted operator means."""
    A, B = _pair(A, B)
    lam = _lambda(lam)
    eig_a = spd_eig(A, "A")
    inv_a = spd_inv(eig_a)
    inv_b = spd_inv(spd_eig(B, "B"))
    if lam == 1.0:
        hm = gm = B
    else:
        hm = harmonic_from(inv_a, inv_b, lam) if lam > 0.0 else A
        gm = _geometric_mean(eig_a, B, lam) if lam > 0.0 else A
    am = (1.0 - lam) * A + lam * B
    return ChainCheck(hm, gm, am, loewner_cmp(hm, gm), loewner_cmp(gm, am))


def corollary42_sandwich(A, B, lam: float) -> OperatorSandwich:
    """Bracket the weighted harmonic mean by two corrections of ``G = A #_lam B``.

    Each candidate is ``G - G {2/(lam(1-lam)) Z^-1 + G}^-1 G`` with
    ``Z = A^-1 B A^-1 - 2A^-1 + B^-1`` or ``Z = B^-1 A B^-1 - 2B^-1 + A^-1``.
    Which candidate is the lower bound is decided from the Loewner verdicts.
    The nominal assignment takes the lower bound from the ``B^-1 A B^-1`` form
    when ``A <= B`` (the ``A^-1 B A^-1`` form otherwise); ``assignment`` is
    ``"as_printed"`` when that holds, ``"swapped"`` when only the other is lower,
    ``"indistinguishable"`` when both assignments bracket within tolerance and
    ``"neither"`` if no assignment brackets the harmonic mean.
    """
    A, B = _pair(A, B)
    lam = _lambda(lam, open_interval=True)
    _, a_leq_b = _ordering(A, B)
    eig_a = spd_eig(A, "A")
    eig_b = spd_eig(B, "B")
    gap = np.abs(eigvalsh(B - A)).min(axis=-1)
    floor = np.maximum(pd_floor(eig_a.eigenvalues), pd_floor(eig_b.eigenvalues))
    if np.any(gap <= 10.0 * floor):
        raise DegenerateInput("B - A is singular; the inner difference terms are not invertible")
    inv_a = spd_inv(eig_a)
    inv_b = spd_inv(eig_b)
    G = _geometric_mean(eig_a, B, lam)
    H = harmonic_from(inv_a, inv_b, lam)
    kappa = 2.0 / (lam * (1.0 - lam))
    z_ba = sym(inv_b @ A @ inv_b) - 2.0 * inv_b + inv_a
    z_ab = sym(inv_a @ B @ inv_a) - 2.0 * inv_a + inv_b

    def candidate(Z):
        try:
            inner = spd_inv(kappa * spd_inv(Z) + G)
        except NotPositiveDefinite as exc:
            raise DegenerateInput("inner difference term is numerically singular") from exc
        return G - sym(G @ inner @ G)

    c_ba, c_ab = candidate(z_ba), candidate(z_ab)
    nominal_lower = _where(a_leq_b, c_ba, c_ab)
    nominal_upper = _where(a_leq_b, c_ab, c_ba)
    lo_nominal = loewner_cmp(nominal_lower, H)
    up_nominal = loewner_cmp(H, nominal_upper)
    lo_swapped = loewner_cmp(nominal_upper, H)
    up_swapped = loewner_cmp(H, nominal_lower)
    nominal_ok = lo_nominal.leq & up_nominal.leq
    swapped_ok = lo_swapped.leq & up_swapped.leq
    use_swapped = swapped_ok & ~nominal_ok
    assignment = np.select([nominal_ok & swapped_ok, nominal_ok, swapped_ok],
                           ["indistinguishable", "as_printed", "swapped"], "neither")
    lower = _where(use_swapped, nominal_upper, nominal_lower)
    upper = _where(use_swapped, nominal_lower, nominal_upper)
    lower_verdict = loewner_cmp(lower, H)
    upper_verdict = loewner_cmp(H, upper)
    return OperatorSandwich(lower, H, upper, lower_verdict, upper_verdict,
                            _scalar_tag(a_leq_b),
                            assignment.item() if assignment.ndim == 0 else assignment)


@dataclass(frozen=True)
class Corollary43Result:
    expr: np.ndarray
    verdict: LoewnerVerdict

    @property
    def psd(self):
        return self.verdict.leq


def corollary43_check(A, B) -> Corollary43Result:
    """``3(A - B) + B A^-1 B - A B^-1 A >= 0`` whenever ``A <= B``."""
    A, B = _pair(A, B)
    _, a_leq_b = _ordering(A, B)
    if not np.all(a_leq_b):
        raise OrderingIndeterminate("corollary requires A <= B")
    expr = 3.0 * (A - B) + sym(B @ spd_inv(A) @ B) - sym(A @ spd_inv(B) @ A)
    return Corollary43Result(expr, loewner_cmp(np.zeros_like(A), expr))
