"""Newton divided differences with confluent (repeated-node) support.

Table entries whose nodes are close compared with their distance to the
function's nearest singularity are evaluated from a Taylor expansion about
the cluster centre,

    f[z_0..z_k] = sum_{j >= k} f^(j)(c)/j! * h_{j-k}(z_0 - c, ..., z_k - c),

where h_r is the complete homogeneous symmetric polynomial. This is exact
for coincident nodes (only the j = k term survives, giving f^(k)(c)/k!) and
avoids the cancellation that the two-term recurrence suffers on clustered
nodes. All other entries use the usual recurrence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConfluenceError

CONFLUENCE_TOL = 1e-8
# Taylor path when node span <= TAYLOR_RATIO * (distance to singularity)
TAYLOR_RATIO = 1.0
_SERIES_EPS = 1e-18
_MAX_TERMS = 400


class LogMonomial:
    """f(x) = x**m * (a*ln(x) + b) on x > 0 (or all x when a == 0).

    Supplies exact derivatives of every order and scaled Taylor coefficients,
    which is what the divided-difference kernel needs for clustered nodes.
    """

    def __init__(self, m: int, a: float = 1.0, b: float = 0.0):
        if m < 0 or int(m) != m:
            raise ValueError("m must be a nonnegative integer")
        self.m = int(m)
        self.a = float(a)
        self.b = float(b)
        self.singularity = 0.0 if self.a != 0.0 else None

    def __repr__(self):
        return f"LogMonomial(m={self.m}, a={self.a}, b={self.b})"

    def __call__(self, x):
        if np.ndim(x) == 0:
            x = float(x)
            if self.a == 0.0:
                return self.b * x**self.m
            if x <= 0.0:
                raise ValueError(f"x**m ln x needs x > 0, got {x}")
            return x**self.m * (self.a * math.log(x) + self.b)
        return self.derivative(0, x)

    def derivative(self, j: int, x):
        """j-th derivative, tracking (a, b, p) in a*x^p*ln x + b*x^p."""
        a, b, p = self.a, self.b, self.m
        for _ in range(j):
            a, b, p = a * p, a + b * p, p - 1
        x = np.asarray(x, dtype=float)
        if a == 0.0:
            out = b * x**float(p)
        else:
            if np.any(x <= 0.0):
                raise ValueError("x**m ln x derivatives need x > 0")
            out = x**float(p) * (a * np.log(x) + b)
        return float(out) if out.ndim == 0 else out

    def scaled_taylor(self, c: float, order: int, scale: float) -> list:
        """[f^(j)(c) / j! * scale**j for j = 0..order]."""
        m, a, b = self.m, self.a, self.b
        binom = _binomials(m)
        if a == 0.0:
            return [
                b * binom[j] * c ** (m - j) * scale**j if j <= m else 0.0
                for j in range(order + 1)
            ]
        # about c with y = (x - c)/c: c^m (1+y)^m (a ln c + b + a ln(1+y))
        lead = a * math.log(c) + b
        logpart = _log_binomial_series(m, order)
        cm = c**m
        ratio = scale / c
        out = []
        rj = cm
        for j in range(order + 1):
            acc = a * logpart[j]
            if j <= m:
                acc += lead * binom[j]
            out.append(rj * acc)
            rj *= ratio
        return out


@lru_cache(maxsize=None)
def _binomials(m: int) -> tuple:
    return tuple(math.comb(m, j) for j in range(m + 1))


_LOG_SERIES: dict = {}


def _log_binomial_series(m: int, order: int) -> list:
    """Coefficients of y^j in (1+y)^m ln(1+y), j = 0..order (cached per m)."""
    cached = _LOG_SERIES.get(m)
    if cached is None or len(cached) <= order:
        binom = _binomials(m)
        size = max(order + 1, 64)
        cached = [
            math.fsum(
                (1.0 if l % 2 else -1.0) / l * binom[j - l]
                for l in range(max(1, j - m), j + 1)
            )
            for j in range(size)
        ]
        _LOG_SERIES[m] = cached
    return cached


def xm_logx_derivative(m: int, j: int, x):
    """j-th derivative of x**m * ln(x) at x > 0."""
    return LogMonomial(m).derivative(j, x)


def _series_length(k: int, rho: float) -> int:
    """Terms needed so that C(J+k, k) * rho**J < eps."""
    if rho == 0.0:
        return 0
    # round rho up onto a grid so the cache stays small and conservative
    return _series_length_cached(k, math.ceil(rho * 512.0) / 512.0)


@lru_cache(maxsize=None)
def _series_length_cached(k: int, rho: float) -> int:
    if rho >= 1.0:
        return _MAX_TERMS
    log_rho = math.log(rho)
    log_eps = math.log(_SERIES_EPS)
    for J in range(4, _MAX_TERMS):
        if math.lgamma(J + k + 1) - math.lgamma(J + 1) - math.lgamma(k + 1) + J * log_rho < log_eps:
            return J
    return _MAX_TERMS


def _taylor_dd(f, z: list, sing) -> float:
    k = len(z) - 1
    lo, hi = z[0], z[-1]
    c = 0.5 * (lo + hi)
    if sing is None:
        scale = max(abs(c), hi - lo, 1e-300)
    else:
        scale = abs(c - sing)
    w = [(zi - c) / scale for zi in z]
    rho = max(abs(wi) for wi in w)
    J = _series_length(k, rho)
    coef = f.scaled_taylor(c, k + J, scale)
    h = [1.0] + [0.0] * J
    if J:
        for wi in w:
            for r in range(1, J + 1):
                h[r] += wi * h[r - 1]
    total = math.fsum(coef[k + r] * h[r] for r in range(J + 1))
    return total / scale**k


def _taylor_eligible(z: list, sing) -> bool:
    span = z[-1] - z[0]
    if sing is None:
        return True
    if z[0] > sing:
        dist = z[0] - sing
    elif z[-1] < sing:
        dist = sing - z[-1]
    else:
        return False
    return span <= TAYLOR_RATIO * dist


@dataclass(frozen=True)
class DividedDifferenceTable:
    """Triangular table ``table[i][j] = f[z_i, ..., z_j]`` over sorted nodes."""

    nodes: tuple
    table: tuple

    @property
    def leading(self) -> float:
        """Leading Newton coefficient f[z_0, ..., z_{N-1}]."""
        return self.table[0][-1]

    @property
    def newton_coefficients(self) -> list:
        return [self.table[0][j] for j in range(len(self.nodes))]


def _prepare(f, nodes):
    z = sorted(float(v) for v in np.asarray(nodes, dtype=float).reshape(-1))
    if not z:
        raise ValueError("need at least one node")
    has_taylor = hasattr(f, "scaled_taylor")
    sing = getattr(f, "singularity", None) if has_taylor else None
    return z, has_taylor, sing


def _entry(f, z, i, j, has_taylor, sing, lookup):
    """f[z_i..z_j] given ``lookup(i, j)`` for the two sub-entries."""
    sub = z[i:j + 1]
    if has_taylor and _taylor_eligible(sub, sing):
        return _taylor_dd(f, sub, sing)
    span = z[j] - z[i]
    if span < CONFLUENCE_TOL and (not has_taylor or span == 0.0):
        if not has_taylor:
            raise ConfluenceError(
                f"nodes {z[i]!r} and {z[j]!r} are within {CONFLUENCE_TOL} "
                "and f supplies no derivatives"
            )
        raise ConfluenceError(f"confluent nodes at the singularity of {f!r}")
    return (lookup(i + 1, j) - lookup(i, j - 1)) / span


def divided_difference_table(f, nodes) -> DividedDifferenceTable:
    """Full divided-difference table of f over ``nodes`` (sorted internally).

    ``f`` is either a plain callable (values only) or an object that also
    provides ``scaled_taylor(c, order, scale)`` and a ``singularity``
    attribute, such as LogMonomial. Plain callables cannot handle nodes
    closer than 1e-8 and raise ConfluenceError there.
    """
    z, has_taylor, sing = _prepare(f, nodes)
    N = len(z)
    T = [[0.0] * N for _ in range(N)]
    for i in range(N):
        T[i][i] = float(f(z[i]))
    for width in range(1, N):
        for i in range(N - width):
            j = i + width
            T[i][j] = _entry(f, z, i, j, has_taylor, sing, lambda a, b: T[a][b])
    return DividedDifferenceTable(tuple(z), tuple(tuple(row) for row in T))


def divided_difference(f, nodes) -> float:
    """Leading Newton coefficient of f over ``nodes`` (confluent-capable).

    Same values as ``divided_difference_table(f, nodes).leading`` but only
    the entries actually needed are evaluated.
    """
    z, has_taylor, sing = _prepare(f, nodes)
    memo = {}

    def get(i, j):
        key = (i, j)
        if key not in memo:
            if i == j:
                memo[key] = float(f(z[i]))
            else:
                memo[key] = _entry(f, z, i, j, has_taylor, sing, get)
        return memo[key]

    return get(0, len(z) - 1)


def explicit_divided_difference_terms(values, nodes) -> np.ndarray:
    """Terms f(x_k) / prod_{i != k}(x_k - x_i) of the distinct-node formula."""
    x = np.asarray(nodes, dtype=float)
    values = np.asarray(values, dtype=float)
    diff = x[:, None] - x[None, :]
    np.fill_diagonal(diff, 1.0)
    return values / np.prod(diff, axis=1)


def min_gap(nodes) -> float:
    x = np.sort(np.asarray(nodes, dtype=float))
    return float(np.min(np.diff(x))) if x.size > 1 else math.inf
