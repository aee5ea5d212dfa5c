"""Divisor functions and the divisor-mean sandwich.

For divisors ``d_1..d_s`` of ``n`` (or the unitary divisors), the mean of
``d_i^k`` exceeds its geometric mean ``n^(k/2)``; the n-point Cartwright-Field
bound with ``m = 1`` and ``M = n^k`` brackets that excess by the divisor
variance.

Two variants are provided. ``proof_corrected`` is the bracket that the
n-point bound actually yields, ``sigma_2k - sigma_k^2 / tau`` over
``2 n^k tau``. ``as_printed`` is the variant with
``sigma_2k - (sigma_k / tau)^2`` over ``2 n tau``; it is kept for comparison
and fails e.g. at ``n = 6, k = 1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Iterator

import numpy as np

from .errors import DomainError
from .sandwich import ScalarSandwich, Tolerance, make_sandwich, zero_sandwich

PROOF_CORRECTED = "proof_corrected"
AS_PRINTED = "as_printed"
N_TO_K = "n_to_k"
N_AS_PRINTED = "n_as_printed"

_MAX_N = 2 ** 63 - 1
_TRIAL_LIMIT = 1 << 16
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# gaps between residues coprime to 30, starting from 7
_WHEEL = (4, 2, 4, 2, 4, 6, 2, 6)


def _check_n(n) -> int:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)):
        raise DomainError(f"n must be an integer, got {n!r}")
    n = int(n)
    if not 1 <= n <= _MAX_N:
        raise DomainError(f"n must lie in [1, 2^63 - 1], got {n}")
    return n


def _check_k(k):
    if isinstance(k, bool) or not isinstance(k, (int, float, np.integer, np.floating, Fraction)):
        raise DomainError(f"k must be a real number, got {k!r}")
    if not k >= 0 or not math.isfinite(k):
        raise DomainError(f"k must be nonnegative, got {k!r}")
    if float(k).is_integer():
        return int(k)
    return float(k)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for all ``n < 3.3e24``."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    if n % 2 == 0:
        return 2
    for c in range(1, n):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"no factor found for {n}")


def _split(n: int, out: dict):
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    d = _pollard_brent(n)
    _split(d, out)
    _split(n // d, out)


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization as ``[(p, e), ...]`` with increasing primes.

    Trial division by a mod-30 wheel up to 2^16; any remaining cofactor is
    settled by deterministic Miller-Rabin and, if composite, Pollard-Brent.
    """
    n = _check_n(n)
    found: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
    p, i = 7, 0
    while p * p <= n and p <= _TRIAL_LIMIT:
        while n % p == 0:
            found[p] = found.get(p, 0) + 1
            n //= p
        p += _WHEEL[i]
        i = (i + 1) % 8
    if n > 1:
        if p * p > n:
            found[n] = found.get(n, 0) + 1
        else:
            _split(n, found)
    return sorted(found.items())


def _divisors_from(factorization, unitary: bool) -> list[int]:
    if unitary:
        choices = [(1, p ** e) for p, e in factorization]
    else:
        choices = [[p ** j for j in range(e + 1)] for p, e in factorization]
    out = [1]
    for options in choices:
        out = [d * c for d in out for c in options]
    out.sort()
    return out


def divisors(n: int, unitary: bool = False) -> list[int]:
    """Sorted divisors of ``n``; with ``unitary`` only those with ``gcd(d, n/d) = 1``."""
    return _divisors_from(factorize(n), unitary)


def _power_sum(ds, k):
    if isinstance(k, int):
        return sum(d ** k for d in ds)
    return math.fsum(d ** k for d in ds)


def divisor_function(n: int, k=1, unitary: bool = False):
    """``sigma_k(n)`` (or the unitary ``sigma*_k``); exact ``int`` for integer ``k``.

    ``k = 0`` gives the divisor count ``tau``.
    """
    k = _check_k(k)
    return _power_sum(divisors(n, unitary), k)


def divisor_function_closed_form(n: int, k: int, unitary: bool = False) -> int:
    """Multiplicative closed form of ``sigma_k`` / ``sigma*_k`` for integer ``k >= 0``."""
    k = _check_k(k)
    if not isinstance(k, int):
        raise DomainError("closed form requires integer k")
    total = 1
    for p, e in factorize(n):
        if unitary:
            total *= 1 + p ** (k * e)
        elif k == 0:
            total *= e + 1
        else:
            total *= (p ** (k * (e + 1)) - 1) // (p ** k - 1)
    return total


@dataclass(frozen=True)
class DivisorProfile:
    n: int
    factorization: tuple
    divisors: tuple
    unitary_divisors: tuple

    @property
    def tau(self) -> int:
        return len(self.divisors)

    @property
    def tau_unitary(self) -> int:
        return len(self.unitary_divisors)

    def sigma(self, k, unitary: bool = False):
        return _power_sum(self.unitary_divisors if unitary else self.divisors, _check_k(k))


def divisor_profile(n: int) -> DivisorProfile:
    fac = factorize(n)
    return DivisorProfile(n, tuple(fac), tuple(_divisors_from(fac, False)),
                          tuple(_divisors_from(fac, True)))


@dataclass(frozen=True)
class DivisorSandwichReport:
    n: int
    k: float
    unitary: bool
    variant: str
    big_m_choice: str
    sandwich: ScalarSandwich
    exact: bool
    lower_exact: Fraction | None = field(default=None, compare=False)
    upper_exact: Fraction | None = field(default=None, compare=False)

    def as_dict(self) -> dict:
        out = {"n": self.n, "k": self.k, "family": "unitary" if self.unitary else "all",
               "variant": self.variant, "big_m_choice": self.big_m_choice,
               "exact": self.exact}
        out.update(self.sandwich.as_dict())
        if self.exact:
            out["lower_exact"] = str(self.lower_exact)
            out["upper_exact"] = str(self.upper_exact)
        return out


def _ge_sqrt(num: int, den: int, square: int) -> bool:
    """``num/den >= sqrt(square)`` for ``den > 0``, decided in integers."""
    return num >= 0 and num * num >= square * den * den


def _le_sqrt(num: int, den: int, square: int) -> bool:
    """``num/den <= sqrt(square)`` for ``den > 0``, decided in integers."""
    return num < 0 or num * num <= square * den * den


def _exact_sandwich(n, ds, k, variant, big_m_choice):
    tau = len(ds)
    s1 = sum(d ** k for d in ds)
    s2 = sum(d ** (2 * k) for d in ds)
    nk = n ** k
    big_m = nk if big_m_choice == N_TO_K else n
    # bracket = num / den
    if variant == PROOF_CORRECTED:
        num, den = tau * s2 - s1 * s1, tau
    else:
        num, den = tau * tau * s2 - s1 * s1, tau * tau
    den_lower = 2 * big_m * tau * den
    den_upper = 2 * tau * den
    # lower <= s1/tau - sqrt(nk)  <=>  (s1*den_lower - num*tau) / (tau*den_lower) >= sqrt(nk)
    lower_ok = _ge_sqrt(s1 * den_lower - num * tau, tau * den_lower, nk)
    # s1/tau - sqrt(nk) <= upper  <=>  sqrt(nk) >= (s1*den_upper - num*tau) / (tau*den_upper)
    upper_ok = _le_sqrt(s1 * den_upper - num * tau, tau * den_upper, nk)
    lower = Fraction(num, den_lower)
    upper = Fraction(num, den_upper)
    middle = s1 / tau - math.sqrt(nk) if tau > 1 else 0.0
    lo, up = num / den_lower, num / den_upper
    sandwich = ScalarSandwich(lo, middle, up, middle - lo, up - middle, lower_ok, upper_ok, 0.0)
    return sandwich, lower, upper


def _float_sandwich(n, ds, k, variant, big_m_choice, tolerance):
    tau = len(ds)
    x = [float(d) ** k for d in ds]
    mean = math.fsum(x) / tau
    if variant == PROOF_CORRECTED:
        bracket = math.fsum((xi - mean) ** 2 for xi in x)
    else:
        bracket = math.fsum(xi * xi for xi in x) - mean * mean
    big_m = float(n) ** k if big_m_choice == N_TO_K else float(n)
    middle = mean - float(n) ** (k / 2.0)
    return make_sandwich(bracket / (2.0 * big_m * tau), middle, bracket / (2.0 * tau),
                         tolerance, extra_scale=mean)


def _sandwich_report(n, ds, k, unitary, variant, big_m_choice, tolerance):
    if variant not in (PROOF_CORRECTED, AS_PRINTED):
        raise DomainError(f"unknown variant {variant!r}")
    if big_m_choice not in (N_TO_K, N_AS_PRINTED):
        raise DomainError(f"unknown big_m_choice {big_m_choice!r}")
    if isinstance(k, int):
        sandwich, lower, upper = _exact_sandwich(n, ds, k, variant, big_m_choice)
        return DivisorSandwichReport(n, k, unitary, variant, big_m_choice, sandwich, True,
                                     lower, upper)
    if len(ds) == 1:
        sandwich = zero_sandwich(tolerance)
    else:
        sandwich = _float_sandwich(n, ds, k, variant, big_m_choice, tolerance)
    return DivisorSandwichReport(n, k, unitary, variant, big_m_choice, sandwich, False)


def divisor_mean_sandwich(n: int, k=1, unitary: bool = False, variant: str = PROOF_CORRECTED,
                          big_m_choice: str | None = None,
                          tolerance: Tolerance | None = None) -> DivisorSandwichReport:
    """Bracket ``sigma_k/tau - n^(k/2)`` by the divisor variance.

    Integer ``k`` is evaluated in exact rational arithmetic and its pass flags
    are exact; real ``k`` uses compensated floating point and the tolerance
    policy. ``big_m_choice`` defaults to the one matching ``variant``.
    """
    n = _check_n(n)
    k = _check_k(k)
    if big_m_choice is None:
        big_m_choice = N_TO_K if variant == PROOF_CORRECTED else N_AS_PRINTED
    return _sandwich_report(n, divisors(n, unitary), k, unitary, variant, big_m_choice, tolerance)


def _spf_sieve(n_max: int) -> np.ndarray:
    spf = np.zeros(n_max + 1, dtype=np.int64)
    for p in range(2, math.isqrt(n_max) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    missing = spf == 0
    spf[missing] = np.arange(n_max + 1)[missing]
    return spf


def _factor_spf(n: int, spf) -> list[tuple[int, int]]:
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return out


def iter_profiles(n_max: int, n_min: int = 1) -> Iterator[DivisorProfile]:
    """Divisor profiles for ``n_min..n_max`` using a smallest-prime-factor sieve."""
    if n_min < 1 or n_max < n_min:
        raise DomainError("need 1 <= n_min <= n_max")
    spf = _spf_sieve(n_max)
    for n in range(n_min, n_max + 1):
        fac = _factor_spf(n, spf)
        yield DivisorProfile(n, tuple(fac), tuple(_divisors_from(fac, False)),
                             tuple(_divisors_from(fac, True)))


def arith_scan(n_max: int, ks: Iterable = (0, 0.5, 1, 2, 3), families=(False, True),
               variant: str = PROOF_CORRECTED, big_m_choice: str | None = None,
               n_min: int = 1, tolerance: Tolerance | None = None
               ) -> Iterator[DivisorSandwichReport]:
    """Yield a report per ``(n, k, family)`` over a range of ``n``."""
    ks = [_check_k(k) for k in ks]
    if big_m_choice is None:
        big_m_choice = N_TO_K if variant == PROOF_CORRECTED else N_AS_PRINTED
    for prof in iter_profiles(n_max, n_min):
        for unitary in families:
            ds = prof.unitary_divisors if unitary else prof.divisors
            for k in ks:
                yield _sandwich_report(prof.n, ds, k, unitary, variant, big_m_choice, tolerance)
