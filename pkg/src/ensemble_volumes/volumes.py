"""Squared complex volumes (principal minors of the overlap matrix).

Subsets are tuples of 1-based state labels, e.g. ``(1, 2, 4)``.
"""

from __future__ import annotations

from collections.abc import Mapping
from itertools import combinations
from math import comb, prod

import numpy as np

from .errors import NumericalIntegrityError, ValidationError

IMAG_DISCARD_TOL = 1e-10
IMAG_ERROR_TOL = 1e-8


def check_subset(u, k: int) -> tuple:
    u = tuple(int(i) for i in u)
    if len(u) < 2:
        raise ValidationError(f"subset {u} must have at least two labels")
    if any(b <= a for a, b in zip(u, u[1:])):
        raise ValidationError(f"subset {u} must be strictly increasing")
    if u[0] < 1 or u[-1] > k:
        raise ValidationError(f"subset {u} has labels outside 1..{k}")
    return u


def alpha(A, u) -> float:
    """det of the principal submatrix of A on the labels in u."""
    A = np.asarray(A, dtype=complex)
    u = check_subset(u, A.shape[0])
    idx = np.asarray(u) - 1
    d = np.linalg.det(A[np.ix_(idx, idx)])
    if abs(d.imag) > IMAG_ERROR_TOL:
        raise NumericalIntegrityError(
            f"minor {u} has imaginary part {d.imag:.3e}; is A Hermitian?"
        )
    return float(d.real)


class VolumeInvariants(Mapping):
    """All alpha values of a k-state overlap matrix in ambient dimension n.

    Holds exactly tau(k, n) subsets (sizes 2..n). Looking up a valid subset
    larger than n returns an exact 0.0, since more than n states are linearly
    dependent.
    """

    def __init__(self, values: dict, k: int, n: int):
        self._values = {tuple(key): float(v) for key, v in values.items()}
        self.k = int(k)
        self.n = int(n)

    def __getitem__(self, u):
        u = check_subset(u, self.k)
        if len(u) > self.n:
            return 0.0
        return self._values[u]

    def __iter__(self):
        return iter(self._values)

    def __len__(self):
        return len(self._values)

    def __repr__(self):
        return f"VolumeInvariants(k={self.k}, n={self.n}, {len(self)} values)"

    def is_complete(self) -> bool:
        return len(self._values) == sum(comb(self.k, i) for i in range(2, self.n + 1)) and all(
            u in self._values
            for i in range(2, min(self.n, self.k) + 1)
            for u in combinations(range(1, self.k + 1), i)
        )


def all_alphas(A, n: int) -> VolumeInvariants:
    """Every alpha_u with 2 <= |u| <= n."""
    A = np.asarray(A, dtype=complex)
    k = A.shape[0]
    values = {}
    for size in range(2, min(n, k) + 1):
        for u in combinations(range(1, k + 1), size):
            values[u] = alpha(A, u)
    return VolumeInvariants(values, k, n)


def symmetric_polys_from_alphas(v: VolumeInvariants, probs) -> np.ndarray:
    """s_i = sum over |u| = i of (prod of p_u) * alpha_u, for i = 0..n."""
    probs = np.asarray(probs, dtype=float)
    if probs.size != v.k:
        raise ValidationError(f"{probs.size} probabilities for {v.k} states")
    if not v.is_complete():
        raise ValidationError("volume invariants are incomplete")
    s = np.zeros(v.n + 1)
    s[0] = 1.0
    s[1] = probs.sum()
    for u, a in v.items():
        s[len(u)] += prod(probs[i - 1] for i in u) * a
    return s


def dS_dalpha(e, u) -> float:
    """Partial derivative of the entropy of ``e`` with respect to alpha_u.

    Equals (prod_{j in u} p_j) * dS/ds_|u|, evaluated at the nonzero spectrum
    of the ensemble. Requires |u| <= n' (the span dimension).
    """
    from .calculus import dS_ds
    from .spectral import ensemble_spectrum

    u = check_subset(u, e.k)
    x = ensemble_spectrum(e)
    if len(u) > x.size:
        raise ValidationError(
            f"|u| = {len(u)} exceeds the number of nonzero eigenvalues ({x.size})"
        )
    return float(prod(e.probs[i - 1] for i in u)) * dS_ds(x, len(u))
