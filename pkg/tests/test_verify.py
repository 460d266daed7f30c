import numpy as np
import pytest

from ensemble_volumes.divdiff import min_gap
from ensemble_volumes.verify import (
    SUITES,
    SuiteResult,
    near_coincident_spectrum,
    positivity_grid,
    random_spectrum,
    run_suite,
)


def test_spectrum_generators(rng):
    for _ in range(50):
        x = random_spectrum(5, rng, 1e-3, 1e-3)
        assert x.sum() == pytest.approx(1.0)
        assert min_gap(x) >= 1e-3 and x.min() >= 1e-3
        y = near_coincident_spectrum(4, rng)
        assert y.sum() == pytest.approx(1.0) and min_gap(y) <= 1e-5


def test_suite_result_bookkeeping():
    r = SuiteResult("demo", 0)
    r.record("a", 0.5, True)
    r.record("a", 0.2, True)
    assert r.passed and r.worst["a"] == 0.5
    r.record("b", 1.0, False)
    assert not r.passed and r.violations == 1 and r.checks == 3
    assert r.summary_line().startswith("FAIL demo: 3 checks")


@pytest.mark.parametrize("name", SUITES)
def test_suites_small(name):
    (res,) = run_suite(name, trials=20, seed=1)
    assert res.passed, res.summary_line()
    assert res.checks > 0


def test_suites_deterministic():
    a = run_suite("gradients", trials=10, seed=4)[0]
    b = run_suite("gradients", trials=10, seed=4)[0]
    assert a.worst == b.worst and a.checks == b.checks


def test_tolerance_override_can_fail():
    (res,) = run_suite("identities", trials=10, seed=0, tolerance=1e-30)
    assert not res.passed


def test_run_suite_all_and_unknown():
    assert [r.name for r in run_suite("all", trials=2)] == list(SUITES)
    with pytest.raises(ValueError):
        run_suite("nope")


def test_positivity_grid():
    checks, violations, smallest = positivity_grid(8, 1000)
    assert checks == 1000 * sum(n - 1 for n in range(2, 9))
    assert violations == 0 and smallest > 0
