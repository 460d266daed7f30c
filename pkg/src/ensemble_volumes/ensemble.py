"""Pure-state ensembles, their overlap/Gram/density matrices, and generators."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotPSDError, ValidationError

NORM_TOL = 1e-12
PROB_TOL = 1e-12
HERMITIAN_TOL = 1e-12
PSD_TOL = 1e-10
# residual diagonal below this ends the pivoted factorization
RANK_TOL = 1e-10


def _frozen(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Ensemble:
    """k pure states of dimension n emitted with probabilities ``probs``.

    ``states`` is a (k, n) complex array whose rows are the state vectors.
    Both arrays are copied and made read-only on construction.
    """

    states: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        states = np.atleast_2d(np.asarray(self.states, dtype=complex))
        probs = np.asarray(self.probs, dtype=float).reshape(-1)
        if states.ndim != 2:
            raise ValidationError("states must be a (k, n) array")
        k = states.shape[0]
        if probs.shape[0] != k:
            raise ValidationError(f"{k} states but {probs.shape[0]} probabilities")
        norms = np.linalg.norm(states, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > NORM_TOL)
        if bad.size:
            raise ValidationError(
                f"state {bad[0] + 1} has norm {norms[bad[0]]!r}, expected 1"
            )
        if np.any(probs <= PROB_TOL):
            raise ValidationError("probabilities must be strictly positive")
        if abs(probs.sum() - 1.0) > PROB_TOL:
            raise ValidationError(f"probabilities sum to {probs.sum()!r}, expected 1")
        object.__setattr__(self, "states", _frozen(states))
        object.__setattr__(self, "probs", _frozen(probs))

    @property
    def k(self) -> int:
        return self.states.shape[0]

    @property
    def dimension(self) -> int:
        return self.states.shape[1]

    def span_dimension(self, tol: float = 1e-10) -> int:
        """Rank of the span of the states (the effective n')."""
        sv = np.linalg.svd(self.states, compute_uv=False)
        return int(np.sum(sv**2 > tol))

    def with_phases(self, phases) -> Ensemble:
        """Multiply state i by exp(1j * phases[i])."""
        phases = np.asarray(phases, dtype=float)
        return Ensemble(self.states * np.exp(1j * phases)[:, None], self.probs)


def overlap_matrix(e: Ensemble) -> np.ndarray:
    """A[i, j] = <psi_i|psi_j>, conjugate-linear in the first slot."""
    return e.states.conj() @ e.states.T


def gram_matrix(e: Ensemble) -> np.ndarray:
    """G = Q A Q with Q = diag(sqrt(p))."""
    q = np.sqrt(e.probs)
    return q[:, None] * overlap_matrix(e) * q[None, :]


def density_matrix(e: Ensemble) -> np.ndarray:
    """rho = sum_i p_i |psi_i><psi_i| as an (n, n) matrix."""
    psi = e.states
    return (psi.T * e.probs) @ psi.conj()


def check_overlap_matrix(A, tol: float = PSD_TOL) -> np.ndarray:
    """Validate Hermitian, unit-diagonal, PSD; return A as a complex array."""
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError("overlap matrix must be square")
    if np.max(np.abs(A - A.conj().T), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError("overlap matrix is not Hermitian")
    if np.max(np.abs(np.diag(A) - 1.0), initial=0.0) > HERMITIAN_TOL:
        raise ValidationError("overlap matrix must have unit diagonal")
    lam_min = float(np.linalg.eigvalsh(A)[0])
    if lam_min < -tol:
        raise NotPSDError("overlap matrix is not positive semidefinite", lam_min)
    return A


def _pivoted_cholesky(M, tol):
    """Outer-product Cholesky with diagonal pivoting, M ~= L L^H.

    Returns (L, perm, rank) with L lower trapezoidal (k x rank) in pivoted
    order, i.e. M[perm][:, perm] ~= L @ L^H.
    """
    M = np.array(M, dtype=complex)
    k = M.shape[0]
    perm = np.arange(k)
    L = np.zeros((k, k), dtype=complex)
    rank = 0
    for j in range(k):
        d = M.diagonal().real.copy()
        p = j + int(np.argmax(d[j:]))
        if d[p] <= tol:
            break
        if p != j:
            M[[j, p]] = M[[p, j]]
            M[:, [j, p]] = M[:, [p, j]]
            L[[j, p]] = L[[p, j]]
            perm[[j, p]] = perm[[p, j]]
        piv = np.sqrt(M[j, j].real)
        L[j, j] = piv
        L[j + 1:, j] = M[j + 1:, j] / piv
        M[j + 1:, j + 1:] -= np.outer(L[j + 1:, j], L[j + 1:, j].conj())
        M[j, :] = 0.0
        M[:, j] = 0.0
        rank += 1
    return L[:, :rank], perm, rank


def ensemble_from_overlaps(A, probs) -> Ensemble:
    """Realize a PSD unit-diagonal overlap matrix as an ensemble.

    The states are the rows of the lower-triangular factor of conj(A) (so that
    <psi_i|psi_j> = A[i, j]) with nonnegative real diagonal. A full-rank A
    gives states in dimension k with psi_1 = e_1; a rank-r A goes through a
    pivoted factorization and yields states in dimension r.
    """
    A = check_overlap_matrix(A)
    target = A.conj()
    k = A.shape[0]
    lam = np.linalg.eigvalsh(A)
    if lam[0] > RANK_TOL:
        B = np.linalg.cholesky(target)
    else:
        L, perm, rank = _pivoted_cholesky(target, RANK_TOL)
        B = np.zeros((k, rank), dtype=complex)
        B[perm] = L
    B = B / np.linalg.norm(B, axis=1, keepdims=True)
    return Ensemble(B, probs)


def random_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unit vector in C^n."""
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return z / np.linalg.norm(z)


def random_ensemble(k: int, n: int, prob_mode: str = "uniform", seed=None, probs=None) -> Ensemble:
    """Draw k Haar-random states in C^n.

    prob_mode is ``"uniform"`` (1/k each), ``"dirichlet"`` (uniform on the
    simplex, from normalized exponential draws) or ``"fixed"`` (use ``probs``).
    """
    if k < 1 or n < 1:
        raise ValueError("k and n must be at least 1")
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((k, n)) + 1j * rng.standard_normal((k, n))
    states = z / np.linalg.norm(z, axis=1, keepdims=True)
    if prob_mode == "uniform":
        p = np.full(k, 1.0 / k)
    elif prob_mode == "dirichlet":
        w = rng.standard_exponential(k)
        p = w / w.sum()
    elif prob_mode == "fixed":
        if probs is None:
            raise ValueError("prob_mode='fixed' requires probs")
        p = np.asarray(probs, dtype=float)
    else:
        raise ValueError(f"unknown prob_mode {prob_mode!r}")
    return Ensemble(states, p)
