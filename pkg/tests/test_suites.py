import math

import numpy as np

from cfineq import suites
from cfineq.suites import CheckResult


def test_check_result_records_failures():
    c = CheckResult("x")
    c.record(True, 0.5)
    c.record(False, -1.0, {"a": 1})
    assert c.trials == 2 and c.failures == 1 and c.worst == -1.0
    assert c.examples == [{"a": 1}] and not c.passed
    c.record_batch(np.array([True, False]), np.array([0.1, -2.0]), lambda i: {"i": i})
    assert c.failures == 2 and c.examples[-1] == {"i": 1} and c.worst == -2.0
    assert c.as_dict()["worst"] == -2.0
    assert CheckResult("y").as_dict()["worst"] is None


def test_examples_are_capped():
    c = CheckResult("x")
    for _ in range(20):
        c.record(False, inputs={})
    assert len(c.examples) == suites.MAX_EXAMPLES and c.failures == 20


def test_streams_are_independent_and_reproducible():
    a = suites.rng_for(1, "scalar", 0).random(3)
    assert np.array_equal(a, suites.rng_for(1, "scalar", 0).random(3))
    assert not np.array_equal(a, suites.rng_for(1, "scalar", 1).random(3))
    assert not np.array_equal(a, suites.rng_for(1, "sums", 0).random(3))
    assert not np.array_equal(a, suites.rng_for(2, "scalar", 0).random(3))


def test_suite_results_deterministic():
    r1 = suites.run_suite("sums", 30, 5)
    r2 = suites.run_suite("sums", 30, 5)
    assert r1.as_dict() == r2.as_dict() and r1.passed


def test_random_spd_spectrum(rng):
    S = suites.random_spd(rng, 50, 4)
    w = np.linalg.eigvalsh(S)
    assert np.all(w > 0.1 * (1 - 1e-12)) and np.all(w < 10 * (1 + 1e-12))
    np.testing.assert_allclose(S, np.swapaxes(S, 1, 2))


def test_comparable_pairs_both_orders(rng):
    A, B = suites.comparable_pairs(rng, 64, 3)
    d = np.linalg.eigvalsh(B - A)
    up = np.all(d > 0, axis=1)
    down = np.all(d < 0, axis=1)
    assert np.all(up | down) and up.any() and down.any()


def test_each_suite_runs_small():
    for name in suites.SUITES:
        trials = 60 if name == "arith" else 8
        res = suites.run_suite(name, trials, 3, dims=(1, 3), lambdas=(0.5,))
        assert res.passed, res.as_dict()
        assert res.elapsed >= 0 and all(c.trials > 0 for c in res.checks)


def test_unknown_suite():
    try:
        suites.run_suite("bogus", 1, 0)
    except ValueError as exc:
        assert "bogus" in str(exc)
    else:
        raise AssertionError("expected ValueError")


def test_timing_excluded_from_dict():
    res = suites.run_suite("kernel", 3, 0)
    assert "elapsed" not in res.as_dict() and math.isfinite(res.as_dict(timing=True)["elapsed"])
