"""Randomized property suites behind ``ensemble-volumes verify``.

Each suite draws its instances from a seeded generator and returns a
SuiteResult; a suite passes only with zero violations.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import calculus as calc
from .divdiff import explicit_divided_difference_terms, min_gap, xm_logx_derivative
from .ensemble import gram_matrix, overlap_matrix, random_ensemble
from .errors import BoundaryProximityError
from .spectral import (
    eigenvalues_hermitian,
    symmetric_polys,
    von_neumann_entropy,
)
from .volumes import all_alphas, symmetric_polys_from_alphas

SUITES = ("theorem1", "bounds", "identities", "gradients", "subentropy", "w-function", "hermite-gennochi")


@dataclass
class SuiteResult:
    name: str
    seed: int | None
    cases: int = 0
    checks: int = 0
    violations: int = 0
    skipped: int = 0
    worst: dict = field(default_factory=dict)
    runtime: float = 0.0
    notes: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def record(self, key: str, value: float, ok: bool):
        """Count one check and keep the largest value seen under ``key``."""
        self.checks += 1
        if not ok:
            self.violations += 1
        if math.isnan(value):
            self.worst[key] = value
        elif key not in self.worst or value > self.worst[key]:
            self.worst[key] = value

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        worst = ", ".join(f"{k}={v:.3e}" for k, v in self.worst.items())
        return (
            f"{status} {self.name}: {self.checks} checks on {self.cases} cases, "
            f"{self.violations} violations, {self.skipped} skipped [{worst}] ({self.runtime:.2f}s)"
        )


def random_spectrum(n: int, rng: np.random.Generator, min_gap_: float = 1e-4, min_value: float = 1e-4) -> np.ndarray:
    """Uniform draw from the probability simplex, rejected until the gap/min constraints hold."""
    for _ in range(100_000):
        e = rng.standard_exponential(n)
        x = np.sort(e / e.sum())[::-1]
        if x[-1] >= min_value and (n == 1 or np.min(-np.diff(x)) >= min_gap_):
            return x
    raise RuntimeError(f"could not draw a spectrum with n={n}, gap {min_gap_}, min {min_value}")


def near_coincident_spectrum(n: int, rng: np.random.Generator) -> np.ndarray:
    """Probability spectrum with one pair split by 0 or 10^-12..10^-5."""
    x = random_spectrum(n, rng, 1e-3, 1e-3)
    if n >= 2:
        i = int(rng.integers(0, n - 1))
        gap = 0.0 if rng.random() < 0.25 else 10.0 ** rng.uniform(-12, -5)
        mid = 0.5 * (x[i] + x[i + 1])
        x[i], x[i + 1] = mid + 0.5 * gap, mid - 0.5 * gap
    return np.sort(x / x.sum())[::-1]


def _finish(result: SuiteResult, t0: float) -> SuiteResult:
    result.runtime = time.perf_counter() - t0
    return result


def _positivity_and_bounds(name, trials, seed, n_values, check_positive, check_bound):
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult(name, seed)
    for n in n_values:
        bounds = {q: float(calc.lower_bound_dS_ds(n, q)) for q in range(2, n + 1)}
        for _ in range(trials):
            x = random_spectrum(n, rng)
            res.cases += 1
            for q in range(2, n + 1):
                d = calc.dS_ds(x, q)
                if check_positive:
                    res.record("min_dS_ds_negated", -d, d > 0.0)
                if check_bound:
                    # worst = largest shortfall below the bound (negative means satisfied)
                    res.record("bound_shortfall", bounds[q] - d, d >= bounds[q])
    return _finish(res, t0)


def suite_theorem1(trials: int = 10_000, seed=0, n_values=range(2, 7), tolerance=None) -> SuiteResult:
    """dS/ds_q > 0 and dS/ds_q >= the closed-form lower bound."""
    return _positivity_and_bounds("theorem1", trials, seed, n_values, True, True)


def suite_bounds(trials: int = 10_000, seed=0, n_values=range(2, 7), tolerance=None) -> SuiteResult:
    return _positivity_and_bounds("bounds", trials, seed, n_values, False, True)


def suite_identities(trials: int = 1000, seed=0, tolerance=None) -> SuiteResult:
    """Power-sum identities on ensemble spectra and the minor route to s."""
    tol = 1e-9 if tolerance is None else tolerance
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult("identities", seed)
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        k = int(rng.integers(2, 8))
        e = random_ensemble(k, n, "dirichlet", seed=rng)
        res.cases += 1
        s_alpha = symmetric_polys_from_alphas(all_alphas(overlap_matrix(e), n), e.probs)
        lam = np.clip(eigenvalues_hermitian(gram_matrix(e)), 0.0, None)
        s_spec = symmetric_polys(lam)
        m = min(n, k)
        err = float(np.max(np.abs(s_alpha[: m + 1] - s_spec[: m + 1])))
        err = max(err, float(np.max(np.abs(s_spec[m + 1:]), initial=0.0)))
        res.record("alpha_vs_spectral_s", err, err <= tol)

        x = lam[:m]
        if x[-1] <= 1e-10 or min_gap(x) < 1e-8:
            res.skipped += 1
            continue
        for q in range(2, m + 1):
            r, scale = calc.power_identity_residual(x, q, return_scale=True)
            rel = abs(r) / scale
            res.record("power_residual_over_scale", rel, rel <= tol)
        s1 = math.fsum(explicit_divided_difference_terms(x**m, x))
        rel = abs(s1 - x.sum()) / x.sum()
        res.record("xn_identity_rel", rel, rel <= tol)
    return _finish(res, t0)


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def suite_gradients(trials: int = 1000, seed=0, tolerance=None) -> SuiteResult:
    """Closed-form derivatives against finite differences in s-, t- and r-coordinates."""
    tol = 1e-4 if tolerance is None else tolerance
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult("gradients", seed)
    for _ in range(trials):
        n = int(rng.integers(2, 6))
        x = random_spectrum(n, rng, 1e-2, 1e-2)
        res.cases += 1
        for q in range(2, n + 1):
            exact = calc.dS_ds(x, q)
            try:
                fd = calc.finite_diff_dS_ds(x, q)
            except BoundaryProximityError:
                res.skipped += 1
                continue
            err = abs(fd - exact)
            res.record("dS_ds_rel", err / abs(exact), err <= max(tol * abs(exact), 1e-8))
        for q in range(1, n + 1):
            try:
                fd = calc.finite_diff_dx_ds(x, q)
            except BoundaryProximityError:
                res.skipped += 1
                continue
            for k in range(1, n + 1):
                exact = calc.dx_ds(x, k, q)
                res.record("dx_ds_rel", _rel(fd[k - 1], exact), _rel(fd[k - 1], exact) <= tol)
        for key, exact, route in (
            ("dS_dt1_rel", calc.dS_dt1(x), calc.finite_diff_dS_dt1),
            ("dS_drn_rel", calc.dS_drn(x), calc.finite_diff_dS_drn),
        ):
            try:
                fd = route(x)
            except BoundaryProximityError:
                res.skipped += 1
                continue
            res.record(key, _rel(fd, exact), _rel(fd, exact) <= tol)
    return _finish(res, t0)


def suite_subentropy(trials: int = 1000, seed=0, tolerance=None) -> SuiteResult:
    """Q = 1 - dS/dt_1 and dS/dr_n = s_n (1 - Q) on probability spectra.

    A third of the spectra carry a (near-)coincident eigenvalue pair so the
    confluent path is exercised.
    """
    tol = 1e-6 if tolerance is None else tolerance
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult("subentropy", seed)
    for i in range(trials):
        n = int(rng.integers(2, 7))
        x = near_coincident_spectrum(n, rng) if i % 3 == 0 else random_spectrum(n, rng)
        res.cases += 1
        Q = calc.subentropy(x)
        r1 = abs(Q - (1.0 - calc.dS_dt1(x)))
        res.record("theorem2_residual", r1, r1 <= tol)
        r2 = abs(calc.dS_drn(x) - float(np.prod(x)) * (1.0 - Q))
        res.record("r_chart_residual", r2, r2 <= tol)
        S = von_neumann_entropy(x)
        res.record("Q_minus_S", Q - S, -1e-12 <= Q <= S + 1e-9)
    return _finish(res, t0)


def _W_raw(x, q, a):
    # W without the a >= 0 guard, for stencils straddling a = 0
    return calc.divided_difference(calc.entropy_kernel(x.size, q), x + a)


def five_point_derivative(func, a: float, h: float) -> float:
    return (-func(a + 2 * h) + 8 * func(a + h) - 8 * func(a - h) + func(a - 2 * h)) / (12 * h)


def suite_w_function(trials: int = 200, seed=0, tolerance=None) -> SuiteResult:
    """Derivative recursions of W_q(a) and its large-a Beta-integral limit."""
    tol = 1e-6 if tolerance is None else tolerance
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult("w-function", seed)
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        x = random_spectrum(n, rng)
        a = float(rng.uniform(0.0, 5.0))
        h = 1e-3 * (a + x.min())
        res.cases += 1
        for q in range(2, n + 1):
            d = five_point_derivative(lambda b: _W_raw(x, q, b), a, h)
            if q < n:
                target = -(n - q) * calc.W(x, q + 1, a)
                key = "induct_rel"
            else:
                target = -1.0 / float(np.prod(a + x))
                key = "ncase_rel"
            res.record(key, _rel(d, target), _rel(d, target) <= tol)
            row = calc.w_asymptotic_check(x, q, [1e3 * x.max()])[0]
            dev = abs(row.ratio - 1.0)
            res.record("asymptotic_ratio_dev", dev, dev <= 0.02)
    return _finish(res, t0)


def positivity_grid(n_max: int = 8, points: int = 1000) -> tuple:
    """(-1)^q d^(n-1)/dx^(n-1) [x^(n-q) ln x] > 0 on a grid of (0, 1).

    Returns (checks, violations, smallest value).
    """
    grid = np.linspace(0.0, 1.0, points + 2)[1:-1]
    checks = violations = 0
    smallest = math.inf
    for n in range(2, n_max + 1):
        for q in range(2, n + 1):
            vals = (-1.0) ** q * xm_logx_derivative(n - q, n - 1, grid)
            checks += vals.size
            violations += int(np.sum(vals <= 0.0))
            smallest = min(smallest, float(vals.min()))
    return checks, violations, smallest


def suite_hermite_gennochi(trials: int = 100, seed=0, samples: int = 100_000, tolerance=None) -> SuiteResult:
    """Monte Carlo simplex average against the divided difference, within k*stderr."""
    k_sigma = 4.0 if tolerance is None else tolerance
    t0 = time.perf_counter()
    rng = np.random.default_rng(seed)
    res = SuiteResult("hermite-gennochi", seed)
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        q = int(rng.integers(2, n + 1))
        x = random_spectrum(n, rng, 1e-4, 1e-2)
        res.cases += 1
        mean, se = calc.hermite_gennochi_estimate(x, q, samples, seed=int(rng.integers(2**63)))
        z = abs(mean - calc.dS_ds(x, q)) / se
        res.record("z_score", z, z <= k_sigma)
        res.record("negated_mean", -mean, mean > 0.0)
    checks, violations, smallest = positivity_grid()
    res.checks += checks
    res.violations += violations
    res.worst["grid_min_integrand"] = smallest
    return _finish(res, t0)


RUNNERS = {
    "theorem1": suite_theorem1,
    "bounds": suite_bounds,
    "identities": suite_identities,
    "gradients": suite_gradients,
    "subentropy": suite_subentropy,
    "w-function": suite_w_function,
    "hermite-gennochi": suite_hermite_gennochi,
}


def run_suite(name: str, trials: int | None = None, seed=0, tolerance=None) -> list:
    """Run one suite (or all of them for ``"all"``); returns a list of SuiteResult."""
    names = SUITES if name == "all" else (name,)
    out = []
    for nm in names:
        if nm not in RUNNERS:
            raise ValueError(f"unknown suite {nm!r}")
        kwargs = {"seed": seed, "tolerance": tolerance}
        if trials is not None:
            kwargs["trials"] = trials
        out.append(RUNNERS[nm](**kwargs))
    return out
