import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ensemble_volumes.divdiff import (
    ConfluenceError,
    LogMonomial,
    divided_difference,
    divided_difference_table,
    explicit_divided_difference_terms,
    min_gap,
    xm_logx_derivative,
)
from strategies import spectra


def _mp_dd(m, nodes, dps=60):
    """Arbitrary-precision divided difference of x^m ln x at distinct nodes."""
    with mp.workdps(dps):
        xs = [mp.mpf(v) for v in nodes]
        tot = mp.mpf(0)
        for k, xk in enumerate(xs):
            den = mp.fprod(xk - xi for i, xi in enumerate(xs) if i != k)
            tot += xk**m * mp.log(xk) / den
        return float(tot)


class Square:
    singularity = None

    def __call__(self, x):
        return x * x

    def derivative(self, j, x):
        return [x * x, 2 * x, 2.0][j] if j <= 2 else 0.0


def test_polynomial_examples():
    assert divided_difference(Square(), [0.3, 0.9]) == pytest.approx(1.2)
    assert divided_difference(LogMonomial(2, 0.0, 1.0), [0.3, 0.9]) == pytest.approx(1.2)


@given(x=spectra(1, 7))
def test_monomial_gives_first_symmetric_poly(x):
    n = x.size
    assert divided_difference(LogMonomial(n, 0.0, 1.0), x) == pytest.approx(x.sum(), rel=1e-12)


def test_coincident_limit_richardson():
    f = LogMonomial(3)
    near = divided_difference(f, [0.3, 0.3 + 1e-12, 0.7])
    # distinct-node values at shrinking gaps, extrapolated to zero gap
    gaps = [1e-4, 5e-5, 2.5e-5]
    vals = [_mp_dd(3, [0.3, 0.3 + g, 0.7]) for g in gaps]
    r1 = [2 * vals[i + 1] - vals[i] for i in range(2)]
    limit = (4 * r1[1] - r1[0]) / 3
    assert near == pytest.approx(limit, abs=1e-5)
    assert near == pytest.approx(limit, rel=1e-9)


@pytest.mark.parametrize(
    "nodes",
    [
        [0.6, 0.4],
        [0.5, 0.3, 0.2],
        [0.4, 0.3, 0.2, 0.1],
        [0.35, 0.25, 0.2, 0.12, 0.08],
        [0.9, 0.05, 0.03, 0.015, 0.004, 0.001],
        [0.31, 0.3100001, 0.2, 0.1899999],
    ],
)
@pytest.mark.parametrize("m", [0, 1, 3, 6])
def test_against_arbitrary_precision(nodes, m):
    got = divided_difference(LogMonomial(m), nodes)
    assert got == pytest.approx(_mp_dd(m, nodes), rel=1e-10, abs=1e-13)


def test_fully_confluent_is_derivative():
    f = LogMonomial(4, -1.0)
    for c, n in [(0.25, 4), (0.5, 2), (0.1, 6)]:
        want = f.derivative(n - 1, c) / math.factorial(n - 1)
        assert divided_difference(f, [c] * n) == pytest.approx(want, rel=1e-13)


@given(x=spectra(2, 6), perm_seed=st.integers(0, 1000))
def test_permutation_invariance(x, perm_seed):
    f = LogMonomial(x.size - 2, -1.0)
    y = np.random.default_rng(perm_seed).permutation(x)
    assert divided_difference(f, y) == pytest.approx(divided_difference(f, x), rel=1e-9)


@given(x=spectra(2, 6))
def test_leading_matches_explicit_sum(x):
    f = LogMonomial(x.size - 1, 1.0)
    terms = explicit_divided_difference_terms(f(x), x)
    assert divided_difference(f, x) == pytest.approx(math.fsum(terms), rel=1e-9, abs=1e-12)


def test_table_structure():
    nodes = [0.7, 0.2, 0.45]
    t = divided_difference_table(LogMonomial(2), nodes)
    assert t.leading == pytest.approx(divided_difference(LogMonomial(2), nodes), rel=1e-14)
    coeffs = t.newton_coefficients
    # Newton form interpolates f at the (sorted) nodes
    z = t.nodes
    for xi in z:
        val, w = 0.0, 1.0
        for j, c in enumerate(coeffs):
            val += c * w
            w *= xi - z[j]
        assert val == pytest.approx(LogMonomial(2)(xi), abs=1e-14)


def test_value_only_callable_rejects_confluence():
    with pytest.raises(ConfluenceError):
        divided_difference(lambda x: x**3, [0.2, 0.2 + 1e-10, 0.5])
    assert divided_difference(lambda x: x**3, [0.1, 0.5, 0.2]) == pytest.approx(0.8)


def test_min_gap():
    assert min_gap([0.5, 0.1, 0.45]) == pytest.approx(0.05)
    assert min_gap([0.3]) == math.inf


def test_xm_logx_derivative_examples():
    assert xm_logx_derivative(1, 1, math.e) == pytest.approx(2.0)
    assert xm_logx_derivative(2, 2, 1.0) == pytest.approx(3.0)
    h = 1e-4
    fd = (xm_logx_derivative(3, 4, 0.5 + h) - xm_logx_derivative(3, 4, 0.5 - h)) / (2 * h)
    assert xm_logx_derivative(3, 5, 0.5) == pytest.approx(fd, rel=1e-5)


@pytest.mark.parametrize("m,j", [(0, 1), (2, 3), (4, 2), (5, 7)])
def test_derivatives_against_mpmath(m, j):
    for x in [0.05, 0.3, 0.9]:
        want = float(mp.diff(lambda t: t**m * mp.log(t), mp.mpf(x), j))
        assert xm_logx_derivative(m, j, x) == pytest.approx(want, rel=1e-12)


def test_scaled_taylor_matches_derivatives():
    f = LogMonomial(3, -1.0, 0.5)
    c, h = 0.4, 0.01
    coeffs = f.scaled_taylor(c, 6, h)
    for j, cj in enumerate(coeffs):
        assert cj == pytest.approx(f.derivative(j, c) / math.factorial(j) * h**j, rel=1e-12, abs=1e-300)
