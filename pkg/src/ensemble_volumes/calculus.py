"""Entropy derivatives in symmetric-polynomial coordinates, and subentropy.

Every closed form here is the leading divided difference of some
x^m (a ln x + b) over the spectrum, so all of them go through
``divdiff.divided_difference`` and inherit its handling of coincident
eigenvalues.

Index conventions: ``q`` always labels s_q; eigenvalue labels ``k`` are
1-based to match subset labels elsewhere in the package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .divdiff import (
    CONFLUENCE_TOL,
    LogMonomial,
    divided_difference,
    explicit_divided_difference_terms,
    min_gap,
)
from .errors import BoundaryProximityError, ConfluenceError, InvalidSpectrumError
from .spectral import roots_from_symmetric_polys, symmetric_polys, von_neumann_entropy

MIN_EIGENVALUE_LOG = 1e-12


def _positive_nodes(x) -> np.ndarray:
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size == 0:
        raise ValueError("empty spectrum")
    if np.any(x <= 0.0):
        raise ValueError("all eigenvalues must be positive")
    return x


def _check_q(q: int, n: int, lo: int = 2):
    if not lo <= q <= n:
        raise ValueError(f"q = {q} outside {lo}..{n}")


def entropy_kernel(n: int, q: int) -> LogMonomial:
    """g_q(x) = (-1)^q x^(n-q) ln x, whose divided difference is dS/ds_q."""
    return LogMonomial(n - q, (-1.0) ** q)


def dS_ds(x, q: int) -> float:
    """dS/ds_q at the spectrum x (all entries positive), 2 <= q <= n."""
    x = _positive_nodes(x)
    n = x.size
    _check_q(q, n)
    if q == n and x.min() < MIN_EIGENVALUE_LOG:
        raise ValueError(f"dS/ds_n needs eigenvalues >= {MIN_EIGENVALUE_LOG}")
    return divided_difference(entropy_kernel(n, q), x)


def power_identity_residual(x, q: int, return_scale: bool = False):
    """sum_k x_k^(n-q) / prod_{i != k}(x_k - x_i), which vanishes for 2 <= q <= n.

    With ``return_scale`` also returns the largest term magnitude, the natural
    yardstick for the roundoff in the sum.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    _check_q(q, n)
    if min_gap(x) < CONFLUENCE_TOL:
        raise ConfluenceError("power identity needs pairwise distinct nodes")
    terms = explicit_divided_difference_terms(x ** (n - q), x)
    total = math.fsum(terms)
    if return_scale:
        return total, float(np.max(np.abs(terms)))
    return total


def dx_ds(x, k: int, q: int) -> float:
    """d x_k / d s_q for the root x_k (1-based) of the characteristic polynomial."""
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    _check_q(q, n, lo=1)
    if not 1 <= k <= n:
        raise ValueError(f"k = {k} outside 1..{n}")
    if min_gap(x) < CONFLUENCE_TOL:
        raise ConfluenceError("roots coincide; the s -> x Jacobian is singular there")
    xk = x[k - 1]
    others = np.delete(x, k - 1)
    return (-1.0) ** (q + 1) * xk ** (n - q) / float(np.prod(xk - others))


def finite_diff_dx_ds(x, q: int, h: float | None = None) -> np.ndarray:
    """Re-rooted finite-difference estimate of dx_k/ds_q for every k at once.

    Richardson-extrapolated central difference (steps h and 2h). The default
    step, 1e-2 * min gap / max_k |dx_k/ds_q|, moves no root by more than a
    hundredth of the gap to its neighbour, so the root ordering is stable.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    _check_q(q, n, lo=1)
    s = symmetric_polys(x)
    if h is None:
        slope = max(abs(dx_ds(x, k, q)) for k in range(1, n + 1))
        h = 1e-2 * (min_gap(x) if n > 1 else 1.0) / slope

    def roots_at(t):
        sp = s.copy()
        sp[q] += t
        return roots_from_symmetric_polys(sp)

    try:
        d1 = (roots_at(h) - roots_at(-h)) / (2.0 * h)
        d2 = (roots_at(2 * h) - roots_at(-2 * h)) / (4.0 * h)
    except InvalidSpectrumError as err:
        raise BoundaryProximityError(f"stencil of width {h:g} leaves s-space region: {err}") from err
    return (4.0 * d1 - d2) / 3.0


def entropy_from_symmetric_polys(s) -> float:
    return von_neumann_entropy(roots_from_symmetric_polys(s))


def central_difference(func, h: float) -> float:
    """(func(h) - func(-h)) / 2h."""
    return (func(h) - func(-h)) / (2.0 * h)


def finite_diff_dS_ds(x, q: int, h: float | None = None) -> float:
    """Central difference of S along s_q, re-rooting the characteristic polynomial.

    Default step is 1e-6 * s_q. Raises BoundaryProximityError when either
    stencil point has no real nonnegative spectrum.
    """
    x = _positive_nodes(x)
    n = x.size
    _check_q(q, n)
    s = symmetric_polys(x)
    if h is None:
        h = 1e-6 * abs(s[q])

    def S_at(t):
        sp = s.copy()
        sp[q] += t
        return entropy_from_symmetric_polys(sp)

    try:
        return central_difference(S_at, h)
    except InvalidSpectrumError as err:
        raise BoundaryProximityError(f"stencil of width {h:g} leaves s-space region: {err}") from err


def W(x, q: int, a: float) -> float:
    """(-1)^q sum_k (x_k+a)^(n-q) ln(x_k+a) / prod_{i != k}(x_k - x_i).

    The divided difference of g_q over the shifted nodes x + a, so W(x, q, 0)
    is dS/ds_q.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    _check_q(q, n)
    if a < 0:
        raise ValueError("a must be nonnegative")
    return divided_difference(entropy_kernel(n, q), _positive_nodes(x + a))


def lower_bound_dS_ds(n: int, q: int) -> Fraction:
    """Lower bound on dS/ds_q valid for every probability spectrum of length n.

    With j = n - q + 1 the bound reads n^(n-j) / (j * C(n-1, j)); j = 1 gives
    n^(n-1)/(n-1) for s_n and j = 2 gives n^(n-2)/((n-1)(n-2)) for s_(n-1).
    """
    _check_q(q, n)
    j = n - q + 1
    return Fraction(n ** (n - j), j * math.comb(n - 1, j))


def beta_integral(q: int, n: int) -> Fraction:
    """int_0^1 y^(q-2) (1-y)^(n-q) dy = B(q-1, n-q+1), exactly."""
    return Fraction(math.factorial(q - 2) * math.factorial(n - q), math.factorial(n - 1))


@dataclass(frozen=True)
class AsymptoticRow:
    a: float
    scaled_W: float
    beta: float

    @property
    def ratio(self) -> float:
        return self.scaled_W / self.beta


def w_asymptotic_check(x, q: int, a_values) -> list:
    """W_q(a) * a^(q-1) against B(q-1, n-q+1) for each a (ratio -> 1)."""
    x = np.asarray(x, dtype=float).reshape(-1)
    n = x.size
    _check_q(q, n)
    beta = float(beta_integral(q, n))
    return [AsymptoticRow(float(a), W(x, q, a) * float(a) ** (q - 1), beta) for a in a_values]


def subentropy(x) -> float:
    """Q = -sum_k x_k^n ln x_k / prod_{i != k}(x_k - x_i); needs all x_k > 0."""
    x = _positive_nodes(x)
    return -divided_difference(LogMonomial(x.size, 1.0), x)


def _implicit_first_coefficient_term(x) -> float:
    # sum_k (1 + ln x_k) x_k^n / prod_{i != k}(x_k - x_i)
    x = _positive_nodes(x)
    return divided_difference(LogMonomial(x.size, 1.0, 1.0), x)


def dS_dt1(x) -> float:
    """dS/dt_1 with t = (1/s_1, s_2/s_1, ..., s_n/s_1), others held fixed.

    Computed from the implicit derivative dx_k/dt_1 = -s_1 x_k^n / prod(x_k - x_i),
    which makes it s_1 (s_1 - Q).
    """
    x = _positive_nodes(x)
    return float(x.sum()) * _implicit_first_coefficient_term(x)


def dS_drn(x) -> float:
    """dS/dr_n with r_q = s_(n-q)/s_n, r_1..r_(n-1) held fixed; equals s_n (s_1 - Q)."""
    x = _positive_nodes(x)
    return float(np.prod(x)) * _implicit_first_coefficient_term(x)


def t_chart(s) -> np.ndarray:
    """(t_1, ..., t_n) = (1/s_1, s_2/s_1, ..., s_n/s_1)."""
    s = np.asarray(s, dtype=float)
    t = s[1:] / s[1]
    t[0] = 1.0 / s[1]
    return t


def s_from_t_chart(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    s1 = 1.0 / t[0]
    s = np.empty(t.size + 1)
    s[0] = 1.0
    s[1] = s1
    s[2:] = t[1:] * s1
    return s


def r_chart(s) -> np.ndarray:
    """(r_1, ..., r_n) with r_q = s_(n-q)/s_n."""
    s = np.asarray(s, dtype=float)
    n = s.size - 1
    return np.array([s[n - q] / s[n] for q in range(1, n + 1)])


def s_from_r_chart(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    n = r.size
    sn = 1.0 / r[n - 1]
    s = np.empty(n + 1)
    for q in range(1, n + 1):
        s[n - q] = r[q - 1] * sn
    s[n] = sn
    s[0] = 1.0
    return s


def finite_diff_dS_dt1(x, h: float | None = None) -> float:
    """Central difference of S in t_1 with t_2..t_n held fixed."""
    x = _positive_nodes(x)
    t = t_chart(symmetric_polys(x))
    h = 1e-6 * abs(t[0]) if h is None else h

    def S_at(d):
        tp = t.copy()
        tp[0] += d
        return entropy_from_symmetric_polys(s_from_t_chart(tp))

    try:
        return central_difference(S_at, h)
    except InvalidSpectrumError as err:
        raise BoundaryProximityError(f"stencil of width {h:g} leaves chart region: {err}") from err


def finite_diff_dS_drn(x, h: float | None = None) -> float:
    """Central difference of S in r_n with r_1..r_(n-1) held fixed."""
    x = _positive_nodes(x)
    r = r_chart(symmetric_polys(x))
    n = r.size
    h = 1e-6 * abs(r[n - 1]) if h is None else h

    def S_at(d):
        rp = r.copy()
        rp[n - 1] += d
        return entropy_from_symmetric_polys(s_from_r_chart(rp))

    try:
        return central_difference(S_at, h)
    except InvalidSpectrumError as err:
        raise BoundaryProximityError(f"stencil of width {h:g} leaves chart region: {err}") from err


def _simplex_integrand(x, q, p):
    n = x.size
    y = p @ x
    return entropy_kernel(n, q).derivative(n - 1, y)


def hermite_gennochi_estimate(x, q: int, samples: int, seed=None, chunk: int = 65536):
    """Monte Carlo value of dS/ds_q as a simplex average.

    The divided difference of g_q equals the integral over the standard
    simplex of g_q^(n-1)(p . x), i.e. the uniform-simplex mean divided by
    (n-1)!. Points are drawn as normalized exponentials in fixed-size chunks,
    each chunk with its own spawned seed, so the result does not depend on how
    chunks are scheduled. Returns (mean, stderr).
    """
    x = _positive_nodes(x)
    n = x.size
    _check_q(q, n)
    if samples < 2:
        raise ValueError("need at least two samples")
    nchunks = -(-samples // chunk)
    seeds = np.random.SeedSequence(seed).spawn(nchunks)
    count = 0
    mean = 0.0
    m2 = 0.0
    for ss in seeds:
        m = min(chunk, samples - count)
        rng = np.random.default_rng(ss)
        e = rng.standard_exponential((m, n))
        p = e / e.sum(axis=1, keepdims=True)
        vals = _simplex_integrand(x, q, p)
        # pairwise merge of (count, mean, M2)
        cmean = float(vals.mean())
        cm2 = float(((vals - cmean) ** 2).sum())
        delta = cmean - mean
        tot = count + m
        mean += delta * m / tot
        m2 += cm2 + delta * delta * count * m / tot
        count = tot
    norm = math.factorial(n - 1)
    var = m2 / (samples - 1)
    return mean / norm, math.sqrt(var / samples) / norm
