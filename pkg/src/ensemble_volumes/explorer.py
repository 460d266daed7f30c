"""Constructive demonstrations on small ensembles.

* A four-state family parametrized by the six overlap moduli and three
  triple-product phases, used to exhibit a phase deformation that keeps every
  pairwise overlap fixed yet lowers the entropy.
* A random search for three-state ensembles whose perturbation increases
  every pairwise overlap and still increases the entropy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from ._parallel import ordered_map
from .calculus import dS_ds
from .ensemble import Ensemble, ensemble_from_overlaps, gram_matrix, overlap_matrix, random_state
from .errors import NotPSDError, ValidationError
from .spectral import eigenvalues_hermitian, von_neumann_entropy
from .volumes import all_alphas, symmetric_polys_from_alphas

PAIRS = tuple(combinations(range(1, 5), 2))
HALF_PI = 0.5 * math.pi
PSD_TOL = 1e-10


@dataclass(frozen=True)
class PhaseParams:
    """Four states described by r_ij = |a_ij| and the phases

    u = arg(a12 a23 a31), v = arg(a14 a21 a42), w = arg(a13 a34 a41).
    """

    r: dict
    u: float
    v: float
    w: float
    probs: tuple = (0.25, 0.25, 0.25, 0.25)

    def __post_init__(self):
        r = {tuple(sorted(key)): float(val) for key, val in dict(self.r).items()}
        if set(r) != set(PAIRS):
            raise ValidationError(f"r must cover the pairs {PAIRS}")
        if any(not 0.0 <= val <= 1.0 for val in r.values()):
            raise ValidationError("overlap moduli must lie in [0, 1]")
        probs = tuple(float(p) for p in self.probs)
        if len(probs) != 4 or min(probs) <= 0 or abs(sum(probs) - 1.0) > 1e-12:
            raise ValidationError("need four positive probabilities summing to 1")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "probs", probs)

    def shifted(self, t: float, direction) -> PhaseParams:
        """Move the phases by t * (u_x, v_x, w_x); moduli unchanged."""
        ux, vx, wx = direction
        return PhaseParams(self.r, self.u + t * ux, self.v + t * vx, self.w + t * wx, self.probs)


def phase_overlap_matrix(p: PhaseParams, check: bool = True) -> np.ndarray:
    """Overlap matrix in the gauge a12, a13, a14 >= 0 real.

    Then arg a23 = u, arg a24 = -v, arg a34 = w.
    """
    r = p.r
    A = np.eye(4, dtype=complex)
    A[0, 1] = r[1, 2]
    A[0, 2] = r[1, 3]
    A[0, 3] = r[1, 4]
    A[1, 2] = r[2, 3] * np.exp(1j * p.u)
    A[1, 3] = r[2, 4] * np.exp(-1j * p.v)
    A[2, 3] = r[3, 4] * np.exp(1j * p.w)
    A = np.triu(A) + np.triu(A, 1).conj().T
    if check:
        lam = float(np.linalg.eigvalsh(A)[0])
        if lam < -PSD_TOL:
            raise NotPSDError("phase parameters are not realizable", lam)
    return A


def ensemble_from_phase_params(p: PhaseParams) -> Ensemble:
    return ensemble_from_overlaps(phase_overlap_matrix(p), p.probs)


def phase_params_from_ensemble(e: Ensemble) -> PhaseParams:
    """Read (r, u, v, w) off a four-state ensemble; gauge independent."""
    if e.k != 4:
        raise ValidationError("phase parameters are defined for four states")
    A = overlap_matrix(e)

    def a(i, j):
        return A[i - 1, j - 1]

    r = {(i, j): float(abs(a(i, j))) for i, j in PAIRS}
    u = float(np.angle(a(1, 2) * a(2, 3) * a(3, 1)))
    v = float(np.angle(a(1, 4) * a(2, 1) * a(4, 2)))
    w = float(np.angle(a(1, 3) * a(3, 4) * a(4, 1)))
    return PhaseParams(r, u, v, w, tuple(e.probs))


def alpha_route_polys(A, probs) -> np.ndarray:
    """s_0..s_n from the principal minors of A (n = k here)."""
    A = np.asarray(A)
    return symmetric_polys_from_alphas(all_alphas(A, A.shape[0]), probs)


def _at_right_angles(p: PhaseParams) -> bool:
    return all(abs(math.remainder(ph - HALF_PI, 2 * math.pi)) <= 1e-9 for ph in (p.u, p.v, p.w))


def ds3_dx_formula(p: PhaseParams, direction) -> float:
    """ds_3/dx along a pure phase direction, valid at u = v = w = pi/2.

    -2 p1p2p3 r12r23r31 u_x - 2 p1p2p4 r14r21r42 v_x - 2 p1p3p4 r13r34r41 w_x
    + 2 p2p3p4 r23r34r42 (u_x + v_x + w_x)
    """
    if not _at_right_angles(p):
        raise ValueError("the closed form holds only at u = v = w = pi/2")
    r = p.r
    if min(r.values()) <= 0.0:
        raise ValueError("the closed form needs every r_ij > 0")
    ux, vx, wx = (float(c) for c in direction)
    p1, p2, p3, p4 = p.probs
    return (
        -2 * p1 * p2 * p3 * r[1, 2] * r[2, 3] * r[1, 3] * ux
        - 2 * p1 * p2 * p4 * r[1, 4] * r[1, 2] * r[2, 4] * vx
        - 2 * p1 * p3 * p4 * r[1, 3] * r[3, 4] * r[1, 4] * wx
        + 2 * p2 * p3 * p4 * r[2, 3] * r[3, 4] * r[2, 4] * (ux + vx + wx)
    )


def curve_polys(p: PhaseParams, direction, t: float) -> np.ndarray:
    """alpha-route s along the reconstructed-ensemble curve at parameter t."""
    e = ensemble_from_phase_params(p.shifted(t, direction))
    return alpha_route_polys(overlap_matrix(e), e.probs)


def curve_entropy(p: PhaseParams, direction, t: float) -> float:
    """Entropy from the Gram eigenvalues of the reconstructed ensemble at t."""
    e = ensemble_from_phase_params(p.shifted(t, direction))
    return von_neumann_entropy(np.clip(eigenvalues_hermitian(gram_matrix(e)), 0.0, None))


def ds_dx_finite_difference(p: PhaseParams, direction, h: float = 1e-5) -> np.ndarray:
    """Central differences of s_0..s_4 along the phase curve."""
    return (curve_polys(p, direction, h) - curve_polys(p, direction, -h)) / (2 * h)


@dataclass
class NonmonotonicityReport:
    found: bool
    candidates: int
    seed: int | None
    p_small: float
    direction: tuple
    params: PhaseParams | None = None
    small_index: int | None = None
    spectrum: list = field(default_factory=list)
    dS_ds: dict = field(default_factory=dict)
    ds_dx: dict = field(default_factory=dict)
    ds3_dx_finite_difference: float | None = None
    chain_rule_dS_dx: float | None = None
    finite_difference_dS_dx: float | None = None
    entropy_base: float | None = None
    entropy_step: float | None = None
    step: float = 1e-5
    message: str = ""


def evaluate_phase_direction(p: PhaseParams, direction, step: float = 1e-5) -> dict:
    """Both routes to dS/dx along a pure phase direction at p."""
    A = phase_overlap_matrix(p)
    x = np.clip(eigenvalues_hermitian(gram_matrix(ensemble_from_overlaps(A, p.probs))), 0.0, None)
    fd = ds_dx_finite_difference(p, direction, step)
    ds = {2: float(fd[2]), 3: ds3_dx_formula(p, direction), 4: float(fd[4])}
    dS = {q: dS_ds(x, q) for q in (2, 3, 4)}
    chain = math.fsum(dS[q] * ds[q] for q in (2, 3, 4))
    s_base = curve_entropy(p, direction, 0.0)
    s_plus = curve_entropy(p, direction, step)
    s_minus = curve_entropy(p, direction, -step)
    return {
        "spectrum": [float(v) for v in x],
        "dS_ds": dS,
        "ds_dx": ds,
        "ds3_fd": float(fd[3]),
        "chain": chain,
        "fd": (s_plus - s_minus) / (2 * step),
        "S_base": s_base,
        "S_step": s_plus,
    }


def nonmonotonicity_demo(
    p_small: float,
    seed=None,
    budget: int = 100_000,
    direction=(-1.0, -1.0, -1.0),
    step: float = 1e-5,
    r_range=(0.05, 0.6),
) -> NonmonotonicityReport:
    """Find moduli r_ij > 0 at u = v = w = pi/2 where the phase direction lowers S.

    The direction leaves every r_ij (hence s_2) fixed. If all of its
    components are <= 0 the small probability goes to p_1, otherwise to p_4.
    Success requires ds_2/dx = 0 within 1e-8 and dS/dx < -1e-6 both from the
    chain rule sum_q dS/ds_q * ds_q/dx and from a direct difference of S.
    """
    if not 0.0 < p_small <= 0.1:
        raise ValueError("p_small must lie in (0, 0.1]")
    direction = tuple(float(c) for c in direction)
    small_index = 1 if all(c <= 0 for c in direction) else 4
    rest = (1.0 - p_small) / 3.0
    probs = [rest] * 4
    probs[small_index - 1] = p_small
    rng = np.random.default_rng(seed)
    report = NonmonotonicityReport(False, 0, seed, p_small, direction, step=step)
    if not any(direction):
        report.message = "zero direction: dS/dx vanishes identically"
        return report
    lo, hi = r_range
    for cand in range(1, budget + 1):
        r = dict(zip(PAIRS, rng.uniform(lo, hi, size=6)))
        p = PhaseParams(r, HALF_PI, HALF_PI, HALF_PI, tuple(probs))
        A = phase_overlap_matrix(p, check=False)
        # keep clear of the boundary so the whole stencil stays realizable
        if np.linalg.eigvalsh(A)[0] < 1e-6:
            continue
        ev = evaluate_phase_direction(p, direction, step)
        if abs(ev["ds_dx"][2]) <= 1e-8 and ev["chain"] < -1e-6 and ev["fd"] < -1e-6 and ev["S_step"] < ev["S_base"]:
            report.found = True
            report.candidates = cand
            report.params = p
            report.small_index = small_index
            report.spectrum = ev["spectrum"]
            report.dS_ds = ev["dS_ds"]
            report.ds_dx = ev["ds_dx"]
            report.ds3_dx_finite_difference = ev["ds3_fd"]
            report.chain_rule_dS_dx = ev["chain"]
            report.finite_difference_dS_dx = ev["fd"]
            report.entropy_base = ev["S_base"]
            report.entropy_step = ev["S_step"]
            report.message = "witness found"
            return report
    report.candidates = budget
    report.message = f"no witness in {budget} candidates"
    return report


# --- overlap/entropy counterexample search ---------------------------------

STRICT_MARGIN = 1e-6
SLACK = 1e-12


def pairwise_overlaps(e: Ensemble) -> np.ndarray:
    """|<psi_i|psi_j>| for i < j, in combinations() order."""
    A = np.abs(overlap_matrix(e))
    return np.array([A[i, j] for i, j in combinations(range(e.k), 2)])


def ensemble_entropy(e: Ensemble) -> float:
    return von_neumann_entropy(np.clip(eigenvalues_hermitian(gram_matrix(e)), 0.0, None))


def verify_counterexample(base: Ensemble, perturbed: Ensemble) -> bool:
    """Recompute from the raw vectors: every overlap weakly up, one strictly, S strictly up."""
    if not np.allclose(base.probs, perturbed.probs, rtol=0, atol=1e-15):
        return False
    ob, op = pairwise_overlaps(base), pairwise_overlaps(perturbed)
    if np.any(op < ob - SLACK) or not np.any(op >= ob + STRICT_MARGIN):
        return False
    return ensemble_entropy(perturbed) >= ensemble_entropy(base) + STRICT_MARGIN


@dataclass
class CounterexampleReport:
    found: bool
    evaluations: int
    seed: int | None
    n_states: int
    base: Ensemble | None = None
    perturbed: Ensemble | None = None
    base_overlaps: list = field(default_factory=list)
    perturbed_overlaps: list = field(default_factory=list)
    base_entropy: float | None = None
    perturbed_entropy: float | None = None
    bases_tried: int = 0
    weak_overlap_hits: int = 0
    best_entropy_gain: float | None = None
    message: str = ""


def _batched_scores(states, probs, pairs):
    A = np.einsum("bim,bjm->bij", states.conj(), states)
    ov = np.abs(A[:, [i for i, _ in pairs], [j for _, j in pairs]])
    sq = np.sqrt(probs)
    G = sq[None, :, None] * A * sq[None, None, :]
    lam = np.clip(np.linalg.eigvalsh(G), 0.0, None)
    S = -np.sum(np.where(lam > 0, lam * np.log(np.where(lam > 0, lam, 1.0)), 0.0), axis=1)
    return ov, S


def _search_shard(seed_seq, budget, probs, n_states, batch, steps, restarts_per_base):
    rng = np.random.default_rng(seed_seq)
    pairs = list(combinations(range(n_states), 2))
    evaluations = 0
    bases = 0
    weak_hits = 0
    best_gain = -math.inf
    while evaluations < budget:
        base_states = np.array([random_state(n_states, rng) for _ in range(n_states)])
        base = Ensemble(base_states, probs)
        bases += 1
        ob = pairwise_overlaps(base)
        Sb = ensemble_entropy(base)
        for _ in range(restarts_per_base):
            for step in steps:
                m = min(batch, budget - evaluations)
                if m <= 0:
                    break
                noise = rng.standard_normal((m, n_states, n_states)) + 1j * rng.standard_normal(
                    (m, n_states, n_states)
                )
                cand = base_states[None] + step * noise
                cand /= np.linalg.norm(cand, axis=2, keepdims=True)
                ov, S = _batched_scores(cand, probs, pairs)
                weak = np.all(ov >= ob - SLACK, axis=1) & np.any(ov >= ob + STRICT_MARGIN, axis=1)
                weak_hits += int(weak.sum())
                if weak.any():
                    best_gain = max(best_gain, float((S[weak] - Sb).max()))
                hit = np.flatnonzero(weak & (S >= Sb + STRICT_MARGIN))
                for idx in hit:
                    perturbed = Ensemble(cand[idx], probs)
                    if verify_counterexample(base, perturbed):
                        return {
                            "found": True,
                            "evaluations": evaluations + int(idx) + 1,
                            "base": base,
                            "perturbed": perturbed,
                            "bases": bases,
                            "weak_hits": weak_hits,
                            "best_gain": best_gain,
                        }
                evaluations += m
    return {
        "found": False,
        "evaluations": evaluations,
        "bases": bases,
        "weak_hits": weak_hits,
        "best_gain": best_gain,
    }


def js_counterexample_search(
    seed=None,
    budget: int = 1_000_000,
    probs=None,
    n_states: int = 3,
    shards: int = 1,
    batch: int = 4096,
    steps=(1e-1, 3e-2, 1e-2, 3e-3, 1e-3),
    restarts_per_base: int = 2,
) -> CounterexampleReport:
    """Random search for an overlap-increasing, entropy-increasing perturbation.

    Each base is n_states Haar-random states in dimension n_states with fixed
    probabilities (uniform by default). Candidates are base + step * complex
    Gaussian noise, renormalized, for a shrinking schedule of steps. The
    budget is split evenly over ``shards`` independent seed streams; the
    witness from the lowest-numbered successful shard is reported, so the
    result does not depend on how many threads run the shards.
    """
    if budget < 1:
        raise ValueError("budget must be at least 1")
    probs = np.full(n_states, 1.0 / n_states) if probs is None else np.asarray(probs, dtype=float)
    seqs = np.random.SeedSequence(seed).spawn(shards)
    budgets = [budget // shards + (1 if i < budget % shards else 0) for i in range(shards)]
    results = ordered_map(
        lambda args: _search_shard(args[0], args[1], probs, n_states, batch, steps, restarts_per_base),
        zip(seqs, budgets),
    )
    total = sum(r["evaluations"] for r in results)
    report = CounterexampleReport(
        False,
        total,
        seed,
        n_states,
        bases_tried=sum(r["bases"] for r in results),
        weak_overlap_hits=sum(r["weak_hits"] for r in results),
    )
    gains = [r["best_gain"] for r in results if r["best_gain"] > -math.inf]
    report.best_entropy_gain = max(gains) if gains else None
    winner = next((r for r in results if r["found"]), None)
    if winner is None:
        report.message = f"no counterexample in {total} evaluations"
        return report
    base, perturbed = winner["base"], winner["perturbed"]
    report.found = True
    report.base = base
    report.perturbed = perturbed
    report.base_overlaps = [float(v) for v in pairwise_overlaps(base)]
    report.perturbed_overlaps = [float(v) for v in pairwise_overlaps(perturbed)]
    report.base_entropy = ensemble_entropy(base)
    report.perturbed_entropy = ensemble_entropy(perturbed)
    report.message = "verified counterexample"
    return report
