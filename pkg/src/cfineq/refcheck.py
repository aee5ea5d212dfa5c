"""Independent oracles: extended-precision evaluation and brute-force divisors.

Every bound is recomputed here from its textbook formula in ``mpmath`` at a
configurable binary precision (default 256 bits), deliberately without the
cancellation-avoiding rewrites used by the fast paths. The rational mode
evaluates the two-point bound exactly when the weighted geometric mean is
rational.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import mpmath

from .errors import DegenerateInput, DomainError

DEFAULT_BITS = 256
KINDS = ("cf_two", "cf_n", "bernoulli", "power_mean", "holder", "cauchy", "bergstrom",
         "divisor_mean")


@dataclass(frozen=True)
class HPSandwich:
    lower: mpmath.mpf
    middle: mpmath.mpf
    upper: mpmath.mpf
    precision_bits: int

    def as_floats(self) -> tuple[float, float, float]:
        return float(self.lower), float(self.middle), float(self.upper)


def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    return mpmath.mpf(x)


def _vec(v):
    return [_mp(x) for x in v]


def _fsum(xs):
    return mpmath.fsum(xs)


def _cf_two(a, b, lam):
    a, b, lam = _mp(a), _mp(b), _mp(lam)
    spread = lam * (1 - lam) * (a - b) ** 2
    middle = lam * a + (1 - lam) * b - a ** lam * b ** (1 - lam)
    return spread / (2 * max(a, b)), middle, spread / (2 * min(a, b))


def _cf_n(points, weights):
    x, w = _vec(points), _vec(weights)
    total = _fsum(w)
    w = [wi / total for wi in w]
    mean = _fsum(wi * xi for wi, xi in zip(w, x))
    geo = mpmath.exp(_fsum(wi * mpmath.log(xi) for wi, xi in zip(w, x)))
    var = _fsum(wi * (xi - mean) ** 2 for wi, xi in zip(w, x))
    return var / (2 * max(x)), mean - geo, var / (2 * min(x))


def _bernoulli(x, lam):
    x, lam = _mp(x), _mp(lam)
    t = x + 1
    spread = lam * (1 - lam) * x ** 2
    return spread / (2 * max(t, 1)), lam * x + 1 - t ** lam, spread / (2 * min(t, 1))


def _power_mean(values, weights, r):
    a, p, r = _vec(values), _vec(weights), _mp(r)
    return (_fsum(pi * ai ** r for pi, ai in zip(p, a)) / _fsum(p)) ** (1 / r)


def _power_mean_sandwich(values, weights, r, s):
    a, p, r, s = _vec(values), _vec(weights), _mp(r), _mp(s)
    ms = _power_mean(a, p, s)
    mr = _power_mean(a, p, r)
    t = [ai ** s / ms ** s for ai in a]
    disp = _fsum(pi * (ti - 1) ** 2 for pi, ti in zip(p, t)) / _fsum(p)
    A = r * (s - r) / (2 * s * s) * ms ** r * disp
    return A / max(t + [1]), ms ** r - mr ** r, A / min(t + [1])


def _holder_parts(a, b, p, q):
    sa = _fsum(x ** p for x in a)
    sb = _fsum(y ** q for y in b)
    u = [x ** p / sa for x in a]
    v = [y ** q / sb for y in b]
    disp = _fsum((ui - vi) ** 2 for ui, vi in zip(u, v))
    return sa ** (1 / p) * sb ** (1 / q), disp, min(u + v), max(u + v)


def _holder(avec, bvec, p, q=None):
    a, b, p = _vec(avec), _vec(bvec), _mp(p)
    q = p / (p - 1) if q is None else _mp(q)
    norms, disp, m, M = _holder_parts(a, b, p, q)
    A = norms * disp / (2 * p * q)
    return A / M, norms - _fsum(x * y for x, y in zip(a, b)), A / m


def _cauchy(avec, bvec):
    a, b = _vec(avec), _vec(bvec)
    norms, disp, m, M = _holder_parts(a, b, mpmath.mpf(2), mpmath.mpf(2))
    A = norms * disp / 8
    dot = _fsum(x * y for x, y in zip(a, b))
    middle = _fsum(x * x for x in a) * _fsum(y * y for y in b) - dot ** 2
    return A ** 2 / M ** 2 + 2 * A / M * dot, middle, A ** 2 / m ** 2 + 2 * A / m * dot


def _bergstrom(xvec, avec):
    x, a = _vec(xvec), _vec(avec)
    if all(xi == 0 for xi in x):
        raise DegenerateInput("all x_i are zero")
    weighted = _fsum(xi ** 2 / ai for xi, ai in zip(x, a))
    sum_a = _fsum(a)
    u = [xi ** 2 / (ai * weighted) for xi, ai in zip(x, a)]
    v = [ai / sum_a for ai in a]
    A = mpmath.sqrt(weighted * sum_a) / 8 * _fsum((ui - vi) ** 2 for ui, vi in zip(u, v))
    m, M = min(u + v), max(u + v)
    abs_total = _fsum(abs(xi) for xi in x)
    middle = weighted - abs_total ** 2 / sum_a
    upper = (A ** 2 / m ** 2 + 2 * A / m * abs_total) / sum_a if m > 0 else mpmath.inf
    return (A ** 2 / M ** 2 + 2 * A / M * abs_total) / sum_a, middle, upper


def _divisor_mean(n, k, unitary=False, variant="proof_corrected", big_m_choice=None):
    ds = brute_divisors(n)
    if unitary:
        ds = [d for d in ds if math.gcd(d, n // d) == 1]
    k = _mp(k)
    tau = len(ds)
    x = [mpmath.mpf(d) ** k for d in ds]
    s1 = _fsum(x)
    s2 = _fsum(xi ** 2 for xi in x)
    if variant == "proof_corrected":
        bracket = s2 - s1 ** 2 / tau
    elif variant == "as_printed":
        bracket = s2 - (s1 / tau) ** 2
    else:
        raise DomainError(f"unknown variant {variant!r}")
    if big_m_choice is None:
        big_m_choice = "n_to_k" if variant == "proof_corrected" else "n_as_printed"
    big_m = mpmath.mpf(n) ** k if big_m_choice == "n_to_k" else mpmath.mpf(n)
    middle = s1 / tau - mpmath.sqrt(mpmath.mpf(n) ** k)
    return bracket / (2 * big_m * tau), middle, bracket / (2 * tau)


_DISPATCH = {
    "cf_two": _cf_two,
    "cf_n": _cf_n,
    "bernoulli": _bernoulli,
    "power_mean": _power_mean_sandwich,
    "holder": _holder,
    "cauchy": _cauchy,
    "bergstrom": _bergstrom,
    "divisor_mean": _divisor_mean,
}


def hp_sandwich(kind: str, inputs: dict, precision_bits: int = DEFAULT_BITS) -> HPSandwich:
    """Evaluate the ``kind`` sandwich from ``inputs`` at ``precision_bits``.

    ``inputs`` uses the keyword names of the fast-path functions, e.g.
    ``{"a": 4, "b": 1, "lam": 0.5}`` for ``cf_two``.
    """
    if kind not in _DISPATCH:
        raise DomainError(f"unknown kind {kind!r}; expected one of {KINDS}")
    with mpmath.workprec(precision_bits):
        lower, middle, upper = _DISPATCH[kind](**inputs)
        # degenerate inputs are exact zeros, as on the fast path
        if middle == 0 and lower == upper == 0:
            lower = middle = upper = mpmath.mpf(0)
        return HPSandwich(+lower, +middle, +upper, precision_bits)


def hp_reverse_young(a, b, lam, precision_bits: int = DEFAULT_BITS) -> tuple:
    """``(exp_bound, log_bound)`` reverse-Young upper bounds at high precision."""
    with mpmath.workprec(precision_bits):
        a, b, lam = _mp(a), _mp(b), _mp(lam)
        m, M = min(a, b), max(a, b)
        geo = a ** lam * b ** (1 - lam)
        exp_bound = geo * (mpmath.exp(lam * (1 - lam) * (a - b) ** 2 / m ** 2) - 1)
        log_bound = lam * (1 - lam) * mpmath.log(a / b) ** 2 * M
        return +exp_bound, +log_bound


def _iroot(n: int, v: int) -> int:
    """Floor of the ``v``-th root of ``n >= 0`` by integer Newton iteration."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // v)
    while True:
        y = ((v - 1) * x + n // x ** (v - 1)) // v
        if y >= x:
            return x
        x = y


def _exact_root(x: Fraction, v: int) -> Fraction:
    num, den = _iroot(x.numerator, v), _iroot(x.denominator, v)
    if num ** v != x.numerator or den ** v != x.denominator:
        raise DomainError(f"{x}^(1/{v}) is irrational")
    return Fraction(num, den)


def rational_cf_two(a, b, lam) -> tuple[Fraction, Fraction, Fraction]:
    """Two-point sandwich in exact rational arithmetic.

    Requires ``a^lam b^(1-lam)`` to be rational (e.g. ``4^(1/2) 1^(1/2) = 2``);
    raises :class:`DomainError` otherwise.
    """
    a, b, lam = Fraction(a), Fraction(b), Fraction(lam)
    if a <= 0 or b <= 0 or not 0 <= lam <= 1:
        raise DomainError("need a, b > 0 and 0 <= lam <= 1")
    u, v = lam.numerator, lam.denominator
    geo = _exact_root(a ** u * b ** (v - u), v)
    spread = lam * (1 - lam) * (a - b) ** 2
    middle = lam * a + (1 - lam) * b - geo
    return spread / (2 * max(a, b)), middle, spread / (2 * min(a, b))


def brute_divisors(n: int) -> list[int]:
    """Divisors by trial division over ``1..isqrt(n)`` with paired complements."""
    if isinstance(n, bool) or not isinstance(n, int) or not 1 <= n <= 10 ** 7:
        raise DomainError(f"n must be an integer in [1, 1e7], got {n!r}")
    small, large = [], []
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
    return small + large[::-1]


def _encode(value):
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    if isinstance(value, Fraction):
        return str(value)
    return value


def fixture_record(kind: str, inputs: dict, precision_bits: int = DEFAULT_BITS) -> dict:
    """A JSON-ready fixture; bound values are decimal strings at full precision."""
    hp = hp_sandwich(kind, inputs, precision_bits)
    digits = int(precision_bits * math.log10(2))
    with mpmath.workprec(precision_bits):
        return {
            "kind": kind,
            "inputs": {k: _encode(v) for k, v in inputs.items()},
            "lower": mpmath.nstr(hp.lower, digits),
            "middle": mpmath.nstr(hp.middle, digits),
            "upper": mpmath.nstr(hp.upper, digits),
            "precision_bits": precision_bits,
        }


def write_fixtures(path, records) -> None:
    Path(path).write_text(json.dumps(list(records), indent=1) + "\n")


def load_fixtures(path) -> list[dict]:
    return json.loads(Path(path).read_text())
