"""The (lower, middle, upper) result record and the tolerance policy."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np


@dataclass(frozen=True)
class Tolerance:
    """Relative tolerance ``rel_eps * max(1, scale)``, never below ``abs_floor``."""

    rel_eps: float = 1e-12
    abs_floor: float = 1e-300

    def __post_init__(self):
        if not self.rel_eps > 0:
            raise ValueError("rel_eps must be positive")

    def tol(self, scale: float) -> float:
        return max(self.abs_floor, self.rel_eps * max(1.0, abs(scale)))


DEFAULT_TOLERANCE = Tolerance()


@dataclass(frozen=True)
class ScalarSandwich:
    lower: float
    middle: float
    upper: float
    slack_lower: float
    slack_upper: float
    lower_ok: bool
    upper_ok: bool
    tol: float = 0.0

    @property
    def ok(self) -> bool:
        return self.lower_ok and self.upper_ok

    def relative_slacks(self) -> tuple[float, float]:
        """Slacks divided by the tolerance scale ``max(1, |middle| + |upper|)``."""
        finite_upper = abs(self.upper) if math.isfinite(self.upper) else 0.0
        scale = max(1.0, abs(self.middle) + finite_upper)
        return self.slack_lower / scale, self.slack_upper / scale

    def as_dict(self) -> dict:
        return asdict(self)


def make_sandwich(lower, middle, upper, tolerance: Tolerance | None = None,
                  extra_scale: float = 0.0) -> ScalarSandwich:
    """Build a sandwich and decide both pass flags.

    ``extra_scale`` widens the tolerance scale for quantities computed as a
    difference of two large operands; it is added to ``|middle| + |upper|``.
    """
    tolerance = tolerance or DEFAULT_TOLERANCE
    lower, middle, upper = float(lower), float(middle), float(upper)
    finite_upper = abs(upper) if math.isfinite(upper) else 0.0
    tol = tolerance.tol(abs(middle) + finite_upper + abs(extra_scale))
    slack_lower = middle - lower
    slack_upper = upper - middle
    return ScalarSandwich(
        lower=lower,
        middle=middle,
        upper=upper,
        slack_lower=slack_lower,
        slack_upper=slack_upper,
        lower_ok=slack_lower >= -tol,
        upper_ok=slack_upper >= -tol,
        tol=tol,
    )


def zero_sandwich(tolerance: Tolerance | None = None) -> ScalarSandwich:
    return make_sandwich(0.0, 0.0, 0.0, tolerance)


@dataclass(frozen=True)
class SandwichBatch:
    """Array-valued counterpart of :class:`ScalarSandwich` for vectorized evaluation."""

    lower: np.ndarray
    middle: np.ndarray
    upper: np.ndarray
    slack_lower: np.ndarray
    slack_upper: np.ndarray
    lower_ok: np.ndarray
    upper_ok: np.ndarray
    tol: np.ndarray

    @property
    def ok(self) -> np.ndarray:
        return self.lower_ok & self.upper_ok

    def __len__(self) -> int:
        return self.lower.shape[0]

    def __getitem__(self, i) -> ScalarSandwich:
        return ScalarSandwich(*(float(getattr(self, f)[i]) for f in _FLOAT_FIELDS),
                              bool(self.lower_ok[i]), bool(self.upper_ok[i]), float(self.tol[i]))

    def relative_slacks(self) -> tuple[np.ndarray, np.ndarray]:
        finite = np.where(np.isfinite(self.upper), np.abs(self.upper), 0.0)
        scale = np.maximum(1.0, np.abs(self.middle) + finite)
        return self.slack_lower / scale, self.slack_upper / scale


_FLOAT_FIELDS = ("lower", "middle", "upper", "slack_lower", "slack_upper")


def make_sandwich_batch(lower, middle, upper, tolerance: Tolerance | None = None,
                        extra_scale=0.0) -> SandwichBatch:
    """Vectorized :func:`make_sandwich` with the same tolerance policy."""
    tolerance = tolerance or DEFAULT_TOLERANCE
    lower, middle, upper = (np.asarray(v, dtype=float) for v in (lower, middle, upper))
    finite_upper = np.where(np.isfinite(upper), np.abs(upper), 0.0)
    scale = np.abs(middle) + finite_upper + np.abs(extra_scale)
    tol = np.maximum(tolerance.abs_floor, tolerance.rel_eps * np.maximum(1.0, scale))
    slack_lower = middle - lower
    slack_upper = upper - middle
    return SandwichBatch(lower, middle, upper, slack_lower, slack_upper,
                         slack_lower >= -tol, slack_upper >= -tol, tol)
