import math
from fractions import Fraction

import mpmath
import pytest

from cfineq import arith_fn, refcheck, scalar_cf, sum_refine
from cfineq.errors import DomainError

from conftest import FIXTURES

RECORDS = refcheck.load_fixtures(FIXTURES / "oracle_sandwiches.json")


def fast_path(kind, inputs):
    if kind == "cf_two":
        return scalar_cf.cf_sandwich_two(inputs["a"], inputs["b"], inputs["lam"])
    if kind == "cf_n":
        return scalar_cf.cf_sandwich_n(inputs["points"], inputs["weights"])
    if kind == "bernoulli":
        return scalar_cf.bernoulli_sandwich(inputs["x"], inputs["lam"])
    if kind == "power_mean":
        spec = sum_refine.PowerMeanSpec(inputs["values"], inputs["weights"], inputs["r"],
                                        inputs["s"])
        return sum_refine.power_mean_sandwich(spec)[0]
    if kind == "holder":
        spec = sum_refine.HolderSpec(inputs["avec"], inputs["bvec"], inputs["p"], inputs["q"])
        return sum_refine.holder_sandwich(spec)[0]
    if kind == "cauchy":
        return sum_refine.cauchy_sandwich(inputs["avec"], inputs["bvec"])[0]
    if kind == "bergstrom":
        return sum_refine.bergstrom_sandwich(inputs["xvec"], inputs["avec"])[0]
    if kind == "divisor_mean":
        return arith_fn.divisor_mean_sandwich(inputs["n"], inputs["k"], inputs["unitary"]).sandwich
    raise KeyError(kind)


def _id(record):
    return f"{record['kind']}-{RECORDS.index(record)}"


@pytest.mark.parametrize("record", RECORDS, ids=_id)
def test_fast_path_matches_frozen_oracle(record):
    fast = fast_path(record["kind"], record["inputs"])
    for field in ("lower", "middle", "upper"):
        oracle = float(record[field])
        got = getattr(fast, field)
        if math.isinf(oracle):
            assert got == oracle
        else:
            assert abs(got - oracle) <= 1e-12 * max(1.0, abs(oracle)), field


def test_fixture_file_covers_every_kind():
    assert {r["kind"] for r in RECORDS} == set(refcheck.KINDS)
    assert all(r["precision_bits"] == 256 for r in RECORDS)


def test_oracle_reproduces_frozen_values():
    # the oracle is deterministic: recomputing a sample gives identical strings
    for record in RECORDS[::25]:
        again = refcheck.fixture_record(record["kind"], record["inputs"])
        assert again == record


def test_hp_cf_two_exact():
    hp = refcheck.hp_sandwich("cf_two", {"a": 4, "b": 1, "lam": 0.5})
    assert (hp.lower, hp.middle, hp.upper) == (mpmath.mpf("0.28125"), mpmath.mpf("0.5"),
                                              mpmath.mpf("1.125"))
    assert hp.precision_bits == 256


def test_hp_holder_exact():
    hp = refcheck.hp_sandwich("holder", {"avec": (1, 2), "bvec": (2, 1), "p": 2, "q": 2})
    assert hp.as_floats() == (0.5625, 1.0, 2.25)


@pytest.mark.parametrize("kind,inputs", [
    ("cf_two", {"a": 3, "b": 3, "lam": 0.2}),
    ("cf_n", {"points": (2, 2, 2), "weights": (0.2, 0.3, 0.5)}),
    ("bernoulli", {"x": 0, "lam": 0.4}),
    ("cauchy", {"avec": (1, 2), "bvec": (3, 6)}),
    ("divisor_mean", {"n": 1, "k": 2}),
])
def test_hp_degenerate_exact_zero(kind, inputs):
    hp = refcheck.hp_sandwich(kind, inputs)
    assert hp.lower == hp.middle == hp.upper == 0


def test_hp_reverse_young():
    ex, lg = refcheck.hp_reverse_young(4, 1, 0.5)
    with mpmath.workprec(256):
        assert abs(ex - 2 * (mpmath.exp(mpmath.mpf(2.25)) - 1)) < mpmath.mpf(10) ** -70
        assert abs(lg - mpmath.log(4) ** 2 / 4 * 4) < mpmath.mpf(10) ** -70
    assert float(ex) == pytest.approx(16.97547167, rel=1e-9)


def test_rational_mode():
    assert refcheck.rational_cf_two(4, 1, 0.5) == (Fraction(9, 32), Fraction(1, 2), Fraction(9, 8))
    assert refcheck.rational_cf_two(Fraction(27), 1, Fraction(1, 3)) == (
        Fraction(2 * 26 ** 2, 9 * 2 * 27), Fraction(26 + 3 * 1, 3) - 3, Fraction(2 * 26 ** 2, 18))
    with pytest.raises(DomainError):
        refcheck.rational_cf_two(2, 1, 0.5)


def test_rational_matches_float_path():
    lo, mid, up = refcheck.rational_cf_two(4, 1, 0.5)
    s = scalar_cf.cf_sandwich_two(4, 1, 0.5)
    assert (s.lower, s.middle, s.upper) == (float(lo), float(mid), float(up))


def test_brute_divisors():
    assert refcheck.brute_divisors(1) == [1]
    assert refcheck.brute_divisors(36) == [1, 2, 3, 4, 6, 9, 12, 18, 36]
    for bad in (0, 10 ** 7 + 1, 2.0):
        with pytest.raises(DomainError):
            refcheck.brute_divisors(bad)


def test_unknown_kind():
    with pytest.raises(DomainError):
        refcheck.hp_sandwich("nope", {})
