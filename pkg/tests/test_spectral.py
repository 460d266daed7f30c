from itertools import combinations
from math import comb, prod

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ensemble_volumes.ensemble import gram_matrix, random_ensemble
from ensemble_volumes.errors import InvalidSpectrumError, ValidationError
from ensemble_volumes.spectral import (
    as_spectrum,
    characteristic_coefficients,
    eigenvalues_hermitian,
    ensemble_spectrum,
    roots_from_symmetric_polys,
    symmetric_polys,
    von_neumann_entropy,
)
from strategies import seeds, spectra


def test_eigenvalue_examples():
    np.testing.assert_allclose(eigenvalues_hermitian(np.diag([0.5, 0.5])), [0.5, 0.5])
    np.testing.assert_allclose(eigenvalues_hermitian(np.full((2, 2), 0.5)), [1.0, 0.0], atol=1e-15)
    with pytest.raises(ValidationError):
        eigenvalues_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_eigenvalues_match_characteristic_roots():
    G = gram_matrix(random_ensemble(6, 6, seed=3))
    ev = eigenvalues_hermitian(G)
    # companion oracle built independently via numpy's poly/roots
    roots = np.sort(np.roots(np.poly(G)).real)[::-1]
    np.testing.assert_allclose(ev, roots, atol=1e-8)


def test_eigenvectors():
    G = gram_matrix(random_ensemble(4, 3, seed=8))
    w, V = eigenvalues_hermitian(G, return_vectors=True)
    np.testing.assert_allclose(G @ V, V * w, atol=1e-13)
    assert np.all(np.diff(w) <= 0)


def test_entropy_examples():
    assert von_neumann_entropy([1.0, 0.0]) == 0.0
    assert von_neumann_entropy([0.5, 0.5]) == pytest.approx(np.log(2), abs=1e-15)
    mp.mp.dps = 40
    ref = -(mp.mpf("0.6") * mp.log(mp.mpf("0.6")) + mp.mpf("0.4") * mp.log(mp.mpf("0.4")))
    assert abs(von_neumann_entropy([0.6, 0.4]) - float(ref)) < 1e-12


@given(x=spectra(1, 8, 0, 0))
def test_entropy_bounds(x):
    S = von_neumann_entropy(x)
    assert -1e-15 <= S <= np.log(x.size) + 1e-12


def test_entropy_max_only_at_uniform():
    assert von_neumann_entropy(np.full(5, 0.2)) == pytest.approx(np.log(5), abs=1e-12)
    assert von_neumann_entropy([0.21, 0.2, 0.2, 0.2, 0.19]) < np.log(5) - 1e-9


def test_as_spectrum():
    np.testing.assert_array_equal(as_spectrum([0.2, -1e-12, 0.8]), [0.8, 0.2, 0.0])
    with pytest.raises(ValidationError):
        as_spectrum([0.5, -0.1, 0.6])
    with pytest.raises(ValidationError):
        as_spectrum([0.5, 0.4], normalized=True)


def test_symmetric_polys_examples():
    np.testing.assert_allclose(symmetric_polys([0.6, 0.4]), [1.0, 1.0, 0.24])
    for n in range(1, 8):
        s = symmetric_polys(np.full(n, 1.0 / n))
        np.testing.assert_allclose(s, [comb(n, q) * n**-q for q in range(n + 1)], rtol=1e-13)


def test_symmetric_polys_brute_force(rng):
    x = rng.random(7)
    s = symmetric_polys(x)
    for q in range(8):
        brute = sum(prod(x[list(u)]) for u in combinations(range(7), q))
        assert s[q] == pytest.approx(brute, rel=1e-12, abs=1e-15)


def test_characteristic_coefficients():
    np.testing.assert_allclose(characteristic_coefficients([1, 1.0, 0.24]), [1.0, -1.0, 0.24])
    np.testing.assert_allclose(np.poly([0.5, 0.3, 0.2]), characteristic_coefficients(symmetric_polys([0.5, 0.3, 0.2])))


def test_roots_examples():
    np.testing.assert_allclose(roots_from_symmetric_polys([1, 1, 0.24]), [0.6, 0.4], atol=1e-14)
    with pytest.raises(InvalidSpectrumError):
        roots_from_symmetric_polys([1, 1, 0.3])
    with pytest.raises(InvalidSpectrumError):
        roots_from_symmetric_polys([1, 0.5, -0.5])  # roots 1 and -0.5


@given(x=spectra(2, 8, 1e-4, 1e-4))
def test_roots_round_trip(x):
    np.testing.assert_allclose(roots_from_symmetric_polys(symmetric_polys(x)), x, atol=1e-8)


@given(seed=seeds, k=st.integers(2, 7), n=st.integers(1, 4))
def test_structural_zeros(seed, k, n):
    e = random_ensemble(k, n, seed=seed)
    full = ensemble_spectrum(e, drop_zeros=False)
    assert full.size == k
    rank = min(k, n)
    assert np.all(np.abs(full[rank:]) < 1e-9)
    assert ensemble_spectrum(e).size == rank
    assert full.sum() == pytest.approx(1.0, abs=1e-12)
