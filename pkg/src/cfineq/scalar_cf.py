"""Two-point and n-point Cartwright-Field bounds on the AM-GM gap.

Every sandwich here has the form ``lower <= gap <= upper`` where the gap is
a weighted arithmetic mean minus the matching geometric mean and both bounds
are the weighted variance divided by ``2*max`` and ``2*min`` respectively.

Gaps are evaluated through ``expm1``/``log1p`` around a reference point so
that the absolute rounding error scales with the spread of the inputs rather
than with their magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError
from .sandwich import (SandwichBatch, ScalarSandwich, Tolerance, make_sandwich,
                       make_sandwich_batch, zero_sandwich)

# exp(x) overflows binary64 above this
_LOG_MAX = math.log(np.finfo(float).max)


@dataclass(frozen=True)
class ScalarPair:
    a: float
    b: float
    lam: float

    def __post_init__(self):
        _check_pair(self.a, self.b, self.lam)

    @property
    def m(self) -> float:
        return min(self.a, self.b)

    @property
    def M(self) -> float:
        return max(self.a, self.b)


@dataclass(frozen=True)
class WeightedSample:
    points: tuple
    weights: tuple

    def __post_init__(self):
        points = tuple(float(x) for x in self.points)
        weights = tuple(float(w) for w in self.weights)
        if len(points) == 0 or len(points) != len(weights):
            raise DomainError("points and weights must be non-empty and of equal length")
        if not all(x > 0 and math.isfinite(x) for x in points):
            raise DomainError("all points must be positive and finite")
        if not all(w > 0 and math.isfinite(w) for w in weights):
            raise DomainError("all weights must be positive")
        if abs(math.fsum(weights) - 1.0) > 1e-9:
            raise DomainError(f"weights must sum to 1, got {math.fsum(weights)!r}")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "weights", weights)

    @property
    def m(self) -> float:
        return min(self.points)

    @property
    def M(self) -> float:
        return max(self.points)


def _check_pair(a, b, lam):
    if not (a > 0 and b > 0) or not (math.isfinite(a) and math.isfinite(b)):
        raise DomainError(f"a and b must be positive and finite, got a={a!r}, b={b!r}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")


def _as_pair(pair_or_a, b=None, lam=None) -> ScalarPair:
    if isinstance(pair_or_a, ScalarPair):
        return pair_or_a
    return ScalarPair(float(pair_or_a), float(b), float(lam))


def _bernoulli_gap(t: float, lam: float) -> float:
    # lam*t + 1 - lam - t**lam, accurate near t == 1
    return lam * (t - 1.0) - math.expm1(lam * math.log(t))


def young_gap(pair, b=None, lam=None) -> float:
    """``lam*a + (1-lam)*b - a**lam * b**(1-lam)``, nonnegative up to rounding.

    Accepts either a :class:`ScalarPair` or the three numbers ``(a, b, lam)``.
    """
    p = _as_pair(pair, b, lam)
    if p.lam in (0.0, 1.0) or p.a == p.b:
        return 0.0
    return p.b * _bernoulli_gap(p.a / p.b, p.lam)


def cf_sandwich_two(pair, b=None, lam=None, tolerance: Tolerance | None = None) -> ScalarSandwich:
    p = _as_pair(pair, b, lam)
    if p.lam in (0.0, 1.0) or p.a == p.b:
        return zero_sandwich(tolerance)
    spread = p.lam * (1.0 - p.lam) * (p.a - p.b) ** 2
    return make_sandwich(spread / (2.0 * p.M), young_gap(p), spread / (2.0 * p.m), tolerance)


def cf_sandwich_n(sample, weights: Sequence[float] | None = None,
                  tolerance: Tolerance | None = None) -> ScalarSandwich:
    """Weighted AM-GM gap of ``sample`` bracketed by its variance over ``2M`` and ``2m``."""
    if not isinstance(sample, WeightedSample):
        sample = WeightedSample(tuple(sample), tuple(weights))
    x = np.asarray(sample.points)
    w = np.asarray(sample.weights)
    w = w / math.fsum(w)
    if np.all(x == x[0]):
        return zero_sandwich(tolerance)
    mean = math.fsum(w * x)
    dev = x - mean
    variance = math.fsum(w * dev * dev)
    # AM - GM = mean * (1 - exp(sum w log(x/mean)))
    log_ratio = math.fsum(w * np.log1p(dev / mean))
    gap = -mean * math.expm1(log_ratio)
    return make_sandwich(variance / (2.0 * sample.M), gap, variance / (2.0 * sample.m), tolerance)


def reverse_young_exp(pair, b=None, lam=None) -> float:
    """Exponential reverse-Young bound ``G * (exp(lam(1-lam)(a-b)^2/m^2) - 1)``.

    Raises ``OverflowError`` when the bound is not representable; such a
    bound is vacuous anyway.
    """
    p = _as_pair(pair, b, lam)
    if p.lam in (0.0, 1.0) or p.a == p.b:
        return 0.0
    exponent = p.lam * (1.0 - p.lam) * (p.a - p.b) ** 2 / p.m ** 2
    if exponent > _LOG_MAX:
        raise OverflowError(f"exponent {exponent!r} exceeds the binary64 range")
    geo = math.exp(p.lam * math.log(p.a) + (1.0 - p.lam) * math.log(p.b))
    value = geo * math.expm1(exponent)
    if not math.isfinite(value):
        raise OverflowError("reverse-Young exponential bound overflows")
    return value


def reverse_young_log(pair, b=None, lam=None) -> float:
    """Logarithmic reverse-Young bound ``lam(1-lam) log(a/b)^2 * max(a, b)``."""
    p = _as_pair(pair, b, lam)
    if p.lam in (0.0, 1.0) or p.a == p.b:
        return 0.0
    return p.lam * (1.0 - p.lam) * math.log(p.a / p.b) ** 2 * p.M


def bernoulli_sandwich(x: float, lam: float, tolerance: Tolerance | None = None) -> ScalarSandwich:
    """Refined Bernoulli: bounds on ``lam*x + 1 - (1+x)**lam`` for ``x > -1``."""
    x, lam = float(x), float(lam)
    if not x > -1.0 or not math.isfinite(x):
        raise DomainError(f"x must exceed -1, got {x!r}")
    if not 0.0 <= lam <= 1.0:
        raise DomainError(f"lambda must lie in [0, 1], got {lam!r}")
    if lam in (0.0, 1.0) or x == 0.0:
        return zero_sandwich(tolerance)
    t = x + 1.0
    spread = lam * (1.0 - lam) * x * x
    middle = lam * x - math.expm1(lam * math.log1p(x))
    return make_sandwich(spread / (2.0 * max(t, 1.0)), middle, spread / (2.0 * min(t, 1.0)), tolerance)


@dataclass(frozen=True)
class TightnessReport:
    cf_upper: float
    exp_upper: float
    log_upper: float
    ordering: str

    def as_dict(self) -> dict:
        return {"cf_upper": self.cf_upper, "exp_upper": self.exp_upper,
                "log_upper": self.log_upper, "ordering": self.ordering}


def _ordering_tag(values: dict) -> str:
    items = sorted(values.items(), key=lambda kv: kv[1])
    if items[0][1] == items[-1][1]:
        return "tie"
    tag = items[0][0]
    for (_, prev), (name, value) in zip(items, items[1:]):
        tag += ("=" if value == prev else "<") + name
    return tag


def tightness_report(pair, b=None, lam=None) -> TightnessReport:
    """Compare the three upper bounds on the Young gap.

    The exponential bound is reported as ``inf`` when it overflows.
    """
    p = _as_pair(pair, b, lam)
    cf = cf_sandwich_two(p).upper
    try:
        ex = reverse_young_exp(p)
    except OverflowError:
        ex = math.inf
    lg = reverse_young_log(p)
    return TightnessReport(cf, ex, lg, _ordering_tag({"cf": cf, "log": lg, "exp": ex}))


# Vectorized variants. Same formulas and tolerance policy, evaluated over
# arrays; summations use numpy's pairwise sum instead of fsum.

def _check_batch(a, b, lam):
    a, b, lam = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (a, b, lam)))
    if not (np.all(a > 0) and np.all(b > 0) and np.all(np.isfinite(a)) and np.all(np.isfinite(b))):
        raise DomainError("a and b must be positive and finite")
    if not np.all((lam >= 0.0) & (lam <= 1.0)):
        raise DomainError("lambda must lie in [0, 1]")
    return a, b, lam


def young_gap_batch(a, b, lam) -> np.ndarray:
    a, b, lam = _check_batch(a, b, lam)
    gap = b * (lam * (a / b - 1.0) - np.expm1(lam * np.log(a / b)))
    return np.where((lam == 0.0) | (lam == 1.0) | (a == b), 0.0, gap)


def cf_sandwich_two_batch(a, b, lam, tolerance: Tolerance | None = None) -> SandwichBatch:
    """:func:`cf_sandwich_two` over broadcast arrays."""
    a, b, lam = _check_batch(a, b, lam)
    degenerate = (lam == 0.0) | (lam == 1.0) | (a == b)
    spread = np.where(degenerate, 0.0, lam * (1.0 - lam) * (a - b) ** 2)
    return make_sandwich_batch(spread / (2.0 * np.maximum(a, b)), young_gap_batch(a, b, lam),
                               spread / (2.0 * np.minimum(a, b)), tolerance)


def cf_sandwich_n_batch(points, weights, tolerance: Tolerance | None = None) -> SandwichBatch:
    """:func:`cf_sandwich_n` over rows of 2-D arrays.

    Rows may be padded: entries with zero weight are ignored. Weights are
    normalized per row.
    """
    x = np.atleast_2d(np.asarray(points, dtype=float))
    w = np.atleast_2d(np.asarray(weights, dtype=float))
    if x.shape != w.shape:
        raise DomainError("points and weights must have equal shape")
    used = w > 0
    if not np.all(used.any(axis=1)):
        raise DomainError("every row needs a positive weight")
    if np.any(w < 0) or not np.all(np.isfinite(w)):
        raise DomainError("weights must be nonnegative and finite")
    if not np.all((x[used] > 0) & np.isfinite(x[used])):
        raise DomainError("all weighted points must be positive and finite")
    w = w / w.sum(axis=1, keepdims=True)
    x = np.where(used, x, 1.0)
    m = np.where(used, x, np.inf).min(axis=1)
    M = np.where(used, x, -np.inf).max(axis=1)
    mean = np.sum(w * x, axis=1)
    dev = np.where(used, x - mean[:, None], 0.0)
    variance = np.sum(w * dev * dev, axis=1)
    gap = -mean * np.expm1(np.sum(w * np.log1p(dev / mean[:, None]), axis=1))
    degenerate = m == M
    variance = np.where(degenerate, 0.0, variance)
    gap = np.where(degenerate, 0.0, gap)
    return make_sandwich_batch(variance / (2.0 * M), gap, variance / (2.0 * m), tolerance)


def bernoulli_sandwich_batch(x, lam, tolerance: Tolerance | None = None) -> SandwichBatch:
    """:func:`bernoulli_sandwich` over broadcast arrays."""
    x, lam = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(lam, dtype=float))
    if not np.all((x > -1.0) & np.isfinite(x)):
        raise DomainError("x must exceed -1")
    if not np.all((lam >= 0.0) & (lam <= 1.0)):
        raise DomainError("lambda must lie in [0, 1]")
    degenerate = (lam == 0.0) | (lam == 1.0) | (x == 0.0)
    t = x + 1.0
    spread = np.where(degenerate, 0.0, lam * (1.0 - lam) * x * x)
    middle = np.where(degenerate, 0.0, lam * x - np.expm1(lam * np.log1p(x)))
    return make_sandwich_batch(spread / (2.0 * np.maximum(t, 1.0)), middle,
                               spread / (2.0 * np.minimum(t, 1.0)), tolerance)


def upper_bounds_batch(a, b, lam) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``(cf, exp, log)`` upper bounds on the Young gap; overflowing ``exp`` is ``inf``."""
    a, b, lam = _check_batch(a, b, lam)
    degenerate = (lam == 0.0) | (lam == 1.0) | (a == b)
    m, M = np.minimum(a, b), np.maximum(a, b)
    var = lam * (1.0 - lam) * (a - b) ** 2
    cf = var / (2.0 * m)
    exponent = var / (m * m)
    with np.errstate(over="ignore"):
        geo = np.exp(lam * np.log(a) + (1.0 - lam) * np.log(b))
        ex = np.where(exponent > _LOG_MAX, np.inf, geo * np.expm1(np.minimum(exponent, _LOG_MAX)))
    lg = lam * (1.0 - lam) * np.log(a / b) ** 2 * M
    zero = np.zeros_like(cf)
    return (np.where(degenerate, zero, cf), np.where(degenerate, zero, ex),
            np.where(degenerate, zero, lg))
