import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ensemble_volumes.ensemble import (
    Ensemble,
    check_overlap_matrix,
    density_matrix,
    ensemble_from_overlaps,
    gram_matrix,
    overlap_matrix,
    random_ensemble,
)
from ensemble_volumes.errors import NotPSDError, ValidationError
from ensemble_volumes.spectral import eigenvalues_hermitian
from strategies import seeds

ORTHO_PAIR = Ensemble(np.eye(2), [0.5, 0.5])
SAME_PAIR = Ensemble([[1, 0], [1, 0]], [0.5, 0.5])


def test_validation():
    with pytest.raises(ValidationError):
        Ensemble([[1, 1]], [1.0])  # norm sqrt 2
    with pytest.raises(ValidationError):
        Ensemble(np.eye(2), [0.5, 0.6])
    with pytest.raises(ValidationError):
        Ensemble(np.eye(2), [1.0, 0.0])
    with pytest.raises(ValidationError):
        Ensemble(np.eye(2), [1.0])
    e = Ensemble(np.eye(2), [0.5, 0.5])
    with pytest.raises(ValueError):
        e.states[0, 0] = 2


def test_overlap_examples():
    np.testing.assert_allclose(overlap_matrix(ORTHO_PAIR), np.eye(2))
    e = random_ensemble(1, 3, seed=4)
    same = Ensemble(np.repeat(e.states, 4, axis=0), [0.25] * 4)
    np.testing.assert_allclose(overlap_matrix(same), np.ones((4, 4)), atol=1e-14)


def test_overlap_is_B_Bdagger():
    # rows of B are the conjugated amplitudes, so (B B^dag)_ij = <psi_i|psi_j>
    e = random_ensemble(3, 3, seed=11)
    B = e.states.conj()
    A = np.empty((3, 3), complex)
    for i in range(3):
        for j in range(3):
            A[i, j] = sum(np.conj(e.states[i, m]) * e.states[j, m] for m in range(3))
    np.testing.assert_allclose(overlap_matrix(e), A, atol=1e-12)
    np.testing.assert_allclose(overlap_matrix(e), B @ B.conj().T, atol=1e-12)


def test_gram_examples():
    np.testing.assert_allclose(gram_matrix(ORTHO_PAIR), np.diag([0.5, 0.5]))
    np.testing.assert_allclose(gram_matrix(SAME_PAIR), np.full((2, 2), 0.5))


@pytest.mark.parametrize("a", [0.0, 0.3, 0.77, 1.0])
def test_gram_eigenvalues_two_states(a):
    psi2 = np.array([a, np.sqrt(1 - a * a)]) * np.exp(0.4j)
    e = Ensemble([[1, 0], psi2], [0.5, 0.5])
    ev = eigenvalues_hermitian(gram_matrix(e))
    np.testing.assert_allclose(ev, [(1 + a) / 2, (1 - a) / 2], atol=1e-14)


def test_density_examples():
    e = random_ensemble(1, 4, seed=2)
    rho = density_matrix(e)
    np.testing.assert_allclose(rho @ rho, rho, atol=1e-14)
    assert np.isclose(np.trace(rho).real, 1.0)
    basis = Ensemble(np.eye(5), np.full(5, 0.2))
    np.testing.assert_allclose(density_matrix(basis), np.eye(5) / 5)


@given(seed=seeds, k=st.integers(1, 7), n=st.integers(1, 5))
def test_density_and_gram_share_spectrum(seed, k, n):
    e = random_ensemble(k, n, prob_mode="dirichlet", seed=seed)
    g = eigenvalues_hermitian(gram_matrix(e))
    r = eigenvalues_hermitian(density_matrix(e))
    m = max(k, n)
    pad = lambda v: np.concatenate([v, np.zeros(m - v.size)])  # noqa: E731
    np.testing.assert_allclose(pad(g), pad(r), atol=1e-12)


def test_from_overlaps_identity_and_ones():
    e = ensemble_from_overlaps(np.eye(3), [0.2, 0.3, 0.5])
    np.testing.assert_allclose(overlap_matrix(e), np.eye(3), atol=1e-12)
    e = ensemble_from_overlaps(np.ones((3, 3)), [0.2, 0.3, 0.5])
    assert e.span_dimension() == 1
    np.testing.assert_allclose(np.abs(overlap_matrix(e)), np.ones((3, 3)), atol=1e-12)


@given(seed=seeds, k=st.integers(1, 7), n=st.integers(1, 5))
def test_from_overlaps_round_trip(seed, k, n):
    e = random_ensemble(k, n, seed=seed)
    A = overlap_matrix(e)
    back = ensemble_from_overlaps(A, e.probs)
    np.testing.assert_allclose(overlap_matrix(back), A, atol=1e-9)


def test_check_overlap_matrix_rejects():
    with pytest.raises(ValidationError):
        check_overlap_matrix(np.array([[1, 0.5], [0.4, 1]]))
    with pytest.raises(ValidationError):
        check_overlap_matrix(np.array([[1, 0.2], [0.2, 0.9]]))
    with pytest.raises(NotPSDError) as info:
        check_overlap_matrix(np.array([[1, 0.9, 0.9], [0.9, 1, -0.9], [0.9, -0.9, 1]]))
    assert info.value.min_eigenvalue < 0


def test_random_ensemble_contract():
    e = random_ensemble(1, 1, seed=0)
    assert e.states.shape == (1, 1) and np.isclose(abs(e.states[0, 0]), 1.0)
    assert e.probs.tolist() == [1.0]
    a, b = random_ensemble(5, 3, "dirichlet", seed=9), random_ensemble(5, 3, "dirichlet", seed=9)
    np.testing.assert_array_equal(a.states, b.states)
    np.testing.assert_array_equal(a.probs, b.probs)
    f = random_ensemble(3, 2, "fixed", seed=1, probs=[0.1, 0.2, 0.7])
    assert f.probs.tolist() == [0.1, 0.2, 0.7]
    with pytest.raises(ValueError):
        random_ensemble(3, 2, "fixed", seed=1)


def test_haar_overlap_moment():
    # E|<psi|phi>|^2 = 1/n for independent Haar states
    n = 4
    e = random_ensemble(100, n, seed=123)
    A2 = np.abs(overlap_matrix(e)) ** 2
    vals = A2[np.triu_indices(100, 1)]
    # Var|<psi|phi>|^2 = (n-1)/(n^2 (n+1)); pairs are weakly dependent, so use a 5 sigma bound
    se = np.sqrt((n - 1) / (n * n * (n + 1)) / vals.size)
    assert abs(vals.mean() - 1 / n) < 5 * se * np.sqrt(2)


def test_with_phases_keeps_moduli():
    e = random_ensemble(4, 3, seed=5)
    f = e.with_phases([0.3, -1.2, 2.0, 0.0])
    np.testing.assert_allclose(np.abs(overlap_matrix(f)), np.abs(overlap_matrix(e)), atol=1e-14)


@given(seed=seeds, k=st.integers(1, 8), n=st.integers(1, 6), phases=st.lists(st.floats(-4, 4), min_size=8, max_size=8))
def test_trace_and_phase_invariance(seed, k, n, phases):
    e = random_ensemble(k, n, "dirichlet", seed=seed)
    G = gram_matrix(e)
    assert abs(np.trace(G).real - 1.0) <= 1e-12
    f = e.with_phases(phases[:k])
    np.testing.assert_allclose(density_matrix(f), density_matrix(e), atol=1e-12)
    np.testing.assert_allclose(eigenvalues_hermitian(gram_matrix(f)), eigenvalues_hermitian(G), atol=1e-12)
