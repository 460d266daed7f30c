"""Eigenvalues, entropy and elementary symmetric polynomials of spectra."""

from __future__ import annotations

import numpy as np
from scipy.special import entr

from .errors import InvalidSpectrumError, ValidationError

HERMITIAN_TOL = 1e-10
CLAMP_TOL = 1e-10
ROOT_IMAG_TOL = 1e-8
ROOT_NEG_TOL = 1e-8


def eigenvalues_hermitian(M, return_vectors: bool = False):
    """Real eigenvalues of a Hermitian matrix, sorted descending.

    With ``return_vectors`` the columns of the second return value are the
    matching eigenvectors, so ``M = V @ diag(w) @ V^H``.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValidationError("matrix must be square")
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    if np.max(np.abs(M - M.conj().T), initial=0.0) > HERMITIAN_TOL * scale:
        raise ValidationError("matrix is not Hermitian")
    if not return_vectors:
        return np.linalg.eigvalsh(M)[::-1]
    w, v = np.linalg.eigh(M)
    return w[::-1], v[:, ::-1]


def as_spectrum(values, normalized: bool = False) -> np.ndarray:
    """Validate a probability-like spectrum, clamp to [0, 1], sort descending.

    With ``normalized`` the values must also sum to 1 within 1e-10.
    """
    x = np.asarray(values, dtype=float).reshape(-1)
    if np.any(x < -CLAMP_TOL) or np.any(x > 1.0 + CLAMP_TOL):
        raise ValidationError(f"spectrum values must lie in [0, 1], got {x}")
    if normalized and abs(x.sum() - 1.0) > CLAMP_TOL:
        raise ValidationError(f"spectrum sums to {x.sum()!r}, expected 1")
    return np.sort(np.clip(x, 0.0, 1.0))[::-1]


def ensemble_spectrum(e, drop_zeros: bool = True, zero_tol: float = CLAMP_TOL) -> np.ndarray:
    """Spectrum of the Gram matrix of an ensemble.

    With ``drop_zeros`` the k - n' structural zeros are removed, leaving the
    n' nonzero eigenvalues of the density matrix.
    """
    from .ensemble import gram_matrix

    x = as_spectrum(eigenvalues_hermitian(gram_matrix(e)), normalized=True)
    if drop_zeros:
        x = x[x > zero_tol]
    return x


def von_neumann_entropy(x) -> float:
    """-sum x ln x in nats, with 0 ln 0 = 0."""
    x = np.asarray(x, dtype=float)
    return float(np.sum(entr(np.clip(x, 0.0, None))))


def symmetric_polys(x) -> np.ndarray:
    """Elementary symmetric polynomials s_0..s_n of x, s_0 = 1.

    Built by expanding prod(1 + x_i t) one factor at a time.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    s = np.zeros(x.size + 1)
    s[0] = 1.0
    for i, xi in enumerate(x, start=1):
        s[1:i + 1] = s[1:i + 1] + xi * s[0:i]
    return s


def characteristic_coefficients(s) -> np.ndarray:
    """Coefficients of x^n - s_1 x^(n-1) + ... + (-1)^n s_n, highest power first."""
    s = np.asarray(s, dtype=float)
    signs = (-1.0) ** np.arange(s.size)
    return signs * s


def roots_from_symmetric_polys(s) -> np.ndarray:
    """Recover the spectrum (descending) whose symmetric polynomials are s.

    Roots come from the companion-matrix eigenvalues. Raises
    InvalidSpectrumError if a root is complex beyond 1e-8 or negative beyond
    -1e-8, which happens when s has left the realizable region.
    """
    s = np.asarray(s, dtype=float).reshape(-1)
    if s.size < 2:
        raise ValueError("need at least s_0 and s_1")
    if s[0] != 1.0:
        raise ValueError("s_0 must equal 1")
    n = s.size - 1
    companion = np.zeros((n, n))
    companion[0, :] = -characteristic_coefficients(s)[1:]
    companion[1:, :-1] = np.eye(n - 1)
    r = np.linalg.eigvals(companion)
    if np.max(np.abs(r.imag)) > ROOT_IMAG_TOL:
        raise InvalidSpectrumError(
            f"not a valid spectrum: complex roots (max imaginary part {np.max(np.abs(r.imag)):.3e})"
        )
    r = r.real
    if r.min() < -ROOT_NEG_TOL:
        raise InvalidSpectrumError(f"not a valid spectrum: negative root {r.min():.3e}")
    return np.sort(np.clip(r, 0.0, None))[::-1]
