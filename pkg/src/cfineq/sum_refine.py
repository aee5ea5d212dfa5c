"""Refined power-mean, Hölder, Cauchy and Bergström inequalities.

Each function returns ``(sandwich, context)`` where ``context`` carries the
coefficient ``A`` and the extreme normalized fractions ``m``/``M`` the bounds
are built from. Normalized fractions are computed once and shared by ``A``,
``m`` and ``M``.

The middle terms are differences of two comparable quantities, so the
tolerance scale additionally includes the larger operand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, DomainError
from .sandwich import ScalarSandwich, Tolerance, make_sandwich, zero_sandwich


@dataclass(frozen=True)
class BoundContext:
    A: float
    m: float
    M: float


@dataclass(frozen=True)
class PowerMeanSpec:
    values: tuple
    weights: tuple
    r: float
    s: float

    def __post_init__(self):
        values = _positive_vector(self.values, "values")
        weights = _positive_vector(self.weights, "weights")
        if values.shape != weights.shape:
            raise DomainError("values and weights must have equal length")
        if not (0 < self.r <= self.s) or not math.isfinite(self.s):
            raise DomainError(f"need 0 < r <= s, got r={self.r!r}, s={self.s!r}")
        object.__setattr__(self, "values", tuple(values.tolist()))
        object.__setattr__(self, "weights", tuple(weights.tolist()))


@dataclass(frozen=True)
class HolderSpec:
    avec: tuple
    bvec: tuple
    p: float
    q: float | None = None

    def __post_init__(self):
        a = _positive_vector(self.avec, "avec")
        b = _positive_vector(self.bvec, "bvec")
        if a.shape != b.shape:
            raise DomainError("avec and bvec must have equal length")
        p = float(self.p)
        if not p > 1:
            raise DomainError(f"exponents must exceed 1, got p={p!r}")
        q = p / (p - 1.0) if self.q is None else float(self.q)
        if not (p > 1 and q > 1):
            raise DomainError(f"exponents must exceed 1, got p={p!r}, q={q!r}")
        if abs(1.0 / p + 1.0 / q - 1.0) > 1e-12:
            raise DomainError(f"1/p + 1/q must equal 1, got {1.0 / p + 1.0 / q!r}")
        object.__setattr__(self, "avec", tuple(a.tolist()))
        object.__setattr__(self, "bvec", tuple(b.tolist()))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)


def _positive_vector(v, name) -> np.ndarray:
    arr = np.asarray(v, dtype=float).reshape(-1)
    if arr.size == 0:
        raise DomainError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)) or not np.all(arr > 0):
        raise DomainError(f"all entries of {name} must be positive and finite")
    return arr


def _fsum(arr) -> float:
    return math.fsum(np.ravel(arr).tolist())


def power_mean(values, weights, r: float) -> float:
    """Weighted power mean ``(sum p_i a_i^r / sum p_i)^(1/r)`` for ``r > 0``."""
    a = _positive_vector(values, "values")
    p = _positive_vector(weights, "weights")
    if a.shape != p.shape:
        raise DomainError("values and weights must have equal length")
    if not r > 0 or not math.isfinite(r):
        raise DomainError(f"r must be positive, got {r!r}")
    top = a.max()
    if np.all(a == top):
        return float(top)
    ratio = _fsum(p * (a / top) ** r) / _fsum(p)
    return float(top * ratio ** (1.0 / r))


def power_mean_sandwich(spec: PowerMeanSpec, tolerance: Tolerance | None = None
                        ) -> tuple[ScalarSandwich, BoundContext]:
    """Bounds on ``M_s^r - M_r^r`` (refined power-mean monotonicity)."""
    a = np.asarray(spec.values)
    p = np.asarray(spec.weights)
    r, s = float(spec.r), float(spec.s)
    if r == s or np.all(a == a[0]):
        return zero_sandwich(tolerance), BoundContext(0.0, 1.0, 1.0)
    total = _fsum(p)
    ms = power_mean(a, p, s)
    ms_r = ms ** r
    # t_i = a_i^s / M_s^s, so that sum p_i t_i / sum p_i = 1
    t = np.exp(s * np.log(a / ms))
    dispersion = _fsum(p * (t - 1.0) ** 2) / total
    A = r * (s - r) / (2.0 * s * s) * ms_r * dispersion
    m = min(float(t.min()), 1.0)
    M = max(float(t.max()), 1.0)
    # M_s^r - M_r^r = -M_s^r * mean(expm1(r log(a_i / M_s)))
    middle = -ms_r * _fsum(p * np.expm1(r * np.log(a / ms))) / total
    sandwich = make_sandwich(A / M, middle, A / m, tolerance, extra_scale=ms_r)
    return sandwich, BoundContext(A, m, M)


def _fractions(x, e):
    """``x_i^e / sum x^e`` and ``sum x^e`` (or its log, flagged by the third item).

    Direct powers when they stay normal, log space otherwise (large ``e``
    would overflow or underflow ``x**e``). Zero entries are allowed.
    """
    with np.errstate(over="ignore", under="ignore"):
        powers = x ** e
    total = _fsum(powers)
    nonzero = powers[x > 0]
    if math.isfinite(total) and np.all(nonzero >= np.finfo(float).tiny):
        return powers / total, total, False
    with np.errstate(divide="ignore"):
        lx = e * np.log(x)
    top = float(lx.max())
    log_total = top + math.log(_fsum(np.exp(lx - top)))
    return np.exp(lx - log_total), log_total, True


def _holder_parts(a, b, p, q):
    u, sa, log_a = _fractions(a, p)
    v, sb, log_b = _fractions(b, q)
    if log_a or log_b:
        la = sa if log_a else math.log(sa)
        lb = sb if log_b else math.log(sb)
        norm_product = math.exp(la / p + lb / q)
    elif p == q == 2.0:
        norm_product = math.sqrt(sa * sb)
    else:
        norm_product = sa ** (1.0 / p) * sb ** (1.0 / q)
    dispersion = _fsum((u - v) ** 2)
    fractions = np.concatenate([u, v])
    return norm_product, dispersion, float(fractions.min()), float(fractions.max()), bool(np.all(u == v))


def holder_sandwich(spec: HolderSpec, tolerance: Tolerance | None = None
                    ) -> tuple[ScalarSandwich, BoundContext]:
    """Bounds on ``||a||_p ||b||_q - sum a_i b_i`` (refined Hölder)."""
    a = np.asarray(spec.avec)
    b = np.asarray(spec.bvec)
    p, q = spec.p, spec.q
    norm_product, dispersion, m, M, equal = _holder_parts(a, b, p, q)
    if equal:
        return zero_sandwich(tolerance), BoundContext(0.0, m, M)
    A = norm_product * dispersion / (2.0 * p * q)
    middle = norm_product - _fsum(a * b)
    sandwich = make_sandwich(A / M, middle, A / m if m > 0 else math.inf, tolerance,
                             extra_scale=norm_product)
    return sandwich, BoundContext(A, m, M)


def _cauchy_from_parts(a, b, tolerance):
    norm_product, dispersion, m, M, equal = _holder_parts(a, b, 2.0, 2.0)
    if equal:
        return zero_sandwich(tolerance), BoundContext(0.0, m, M)
    A = norm_product * dispersion / 8.0
    dot = _fsum(a * b)
    gram = _fsum(a * a) * _fsum(b * b)
    middle = gram - dot * dot

    def bound(g):
        return g * g + 2.0 * g * dot

    upper = bound(A / m) if m > 0 else math.inf
    sandwich = make_sandwich(bound(A / M), middle, upper, tolerance, extra_scale=gram)
    return sandwich, BoundContext(A, m, M)


def cauchy_sandwich(avec, bvec, tolerance: Tolerance | None = None
                    ) -> tuple[ScalarSandwich, BoundContext]:
    """Bounds on ``(sum a^2)(sum b^2) - (sum ab)^2`` (refined Cauchy-Schwarz)."""
    a = _positive_vector(avec, "avec")
    b = _positive_vector(bvec, "bvec")
    if a.shape != b.shape:
        raise DomainError("avec and bvec must have equal length")
    return _cauchy_from_parts(a, b, tolerance)


def bergstrom_sandwich(xvec, avec, tolerance: Tolerance | None = None
                       ) -> tuple[ScalarSandwich, BoundContext]:
    """Bounds on ``sum x_i^2/a_i - (sum |x_i|)^2 / sum a_i`` (refined Bergström).

    Entries of ``x`` may have any sign; the gap uses ``|x_i|``, which bounds a
    gap no larger than the signed ``(sum x_i)^2`` form. Raises
    :class:`DegenerateInput` (with the zero sandwich attached) if ``x == 0``.
    """
    x = np.asarray(xvec, dtype=float).reshape(-1)
    a = _positive_vector(avec, "avec")
    if x.shape != a.shape:
        raise DomainError("xvec and avec must have equal length")
    if not np.all(np.isfinite(x)):
        raise DomainError("xvec must be finite")
    if np.all(x == 0):
        raise DegenerateInput("all x_i are zero; normalized fractions are undefined",
                              result=(zero_sandwich(tolerance), BoundContext(0.0, 1.0, 1.0)))
    # every term is homogeneous in x (degree 2, A degree 1): work with max|x| = 1
    c = float(np.abs(x).max())
    ax = np.abs(x) / c
    # Cauchy bound under a_i -> |x_i|/sqrt(a_i), b_i -> sqrt(a_i)
    sum_a = _fsum(a)
    weighted = _fsum(ax * ax / a)
    u = (ax * ax / a) / weighted
    v = a / sum_a
    fractions = np.concatenate([u, v])
    m, M = float(fractions.min()), float(fractions.max())
    if np.all(u == v):
        return zero_sandwich(tolerance), BoundContext(0.0, m, M)
    A = math.sqrt(weighted * sum_a) * _fsum((u - v) ** 2) / 8.0
    abs_total = _fsum(ax)
    middle = weighted - abs_total * abs_total / sum_a

    def bound(g):
        return (g * g + 2.0 * g * abs_total) / sum_a

    # a zero x_i makes m == 0 and the upper bound vacuous
    c2 = c * c
    upper = c2 * bound(A / m) if m > 0 else math.inf
    sandwich = make_sandwich(c2 * bound(A / M), c2 * middle, upper, tolerance,
                             extra_scale=c2 * weighted)
    return sandwich, BoundContext(c * A, m, M)
