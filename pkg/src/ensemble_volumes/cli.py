"""ensemble-volumes: analyze ensembles, run the property suites, search for witnesses.

Every command writes one JSON document (fixed key order, floats rounded to
12 significant digits) to stdout or ``--output``.

Exit codes: 0 success, 1 a check ran and failed, 2 invalid input,
3 search budget exhausted, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from itertools import combinations

import numpy as np

from . import __version__
from .calculus import dS_ds, dS_dt1, subentropy
from .ensemble import Ensemble, overlap_matrix
from .errors import ValidationError
from .explorer import js_counterexample_search, nonmonotonicity_demo
from .geometry import check_against_paper, dof_table, render_table
from .spectral import ensemble_spectrum, symmetric_polys, von_neumann_entropy
from .verify import SUITES, run_suite
from .volumes import all_alphas, dS_dalpha, symmetric_polys_from_alphas

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64

INPUT_NORM_TOL = 1e-9
INPUT_PROB_TOL = 1e-9
SIG_DIGITS = 12
SCHEMA_FIELDS = ("dimension", "states", "probs")


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


# --- document formatting ----------------------------------------------------


def _round(v: float):
    v = float(v)
    if not math.isfinite(v):
        return None
    return float(f"{v:.{SIG_DIGITS}g}") + 0.0  # no negative zero


def to_document(obj):
    """Recursively convert to JSON-ready values with rounded floats."""
    if isinstance(obj, dict):
        return {str(k): to_document(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_document(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_document(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return _round(obj)
    if isinstance(obj, complex):
        return [_round(obj.real), _round(obj.imag)]
    return obj


def dumps(doc) -> str:
    return json.dumps(to_document(doc), indent=2, allow_nan=False) + "\n"


def subset_key(u) -> str:
    return ",".join(str(i) for i in u)


def ensemble_document(e: Ensemble) -> dict:
    """An ensemble in the input schema, so reports can be fed back to analyze."""
    return {
        "dimension": e.dimension,
        "states": [[[z.real, z.imag] for z in row] for row in e.states.tolist()],
        "probs": e.probs,
    }


# --- input parsing ----------------------------------------------------------


def _reject_duplicates(pairs):
    out = {}
    for key, val in pairs:
        if key in out:
            raise InputError(f"duplicate field {key!r}")
        out[key] = val
    return out


def _number(v, where: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise InputError(f"{where}: expected a number, got {json.dumps(v)}")
    if not math.isfinite(v):
        raise InputError(f"{where}: non-finite value")
    return float(v)


def parse_ensemble_document(text: str, renormalize: bool = False) -> Ensemble:
    """Parse and validate an ensemble document.

    States whose norm is off by more than 1e-9 are rejected unless
    ``renormalize``; smaller deviations (e.g. from 12-digit round trips) are
    normalized away silently. Probabilities get the same 1e-9 allowance.
    """
    try:
        doc = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as err:
        raise InputError(f"line {err.lineno}, column {err.colno}: {err.msg}") from None
    if not isinstance(doc, dict):
        raise InputError("top level: expected an object with fields " + ", ".join(SCHEMA_FIELDS))
    unknown = [k for k in doc if k not in SCHEMA_FIELDS]
    if unknown:
        raise InputError(f"unknown field(s): {', '.join(unknown)}")
    missing = [k for k in SCHEMA_FIELDS if k not in doc]
    if missing:
        raise InputError(f"missing field(s): {', '.join(missing)}")

    n = doc["dimension"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InputError(f"dimension: expected a positive integer, got {json.dumps(n)}")
    states = doc["states"]
    if not isinstance(states, list) or not states:
        raise InputError("states: expected a non-empty array of states")
    rows = []
    for i, st in enumerate(states):
        if not isinstance(st, list) or len(st) != n:
            raise InputError(f"states[{i}]: expected {n} [re, im] pairs")
        row = []
        for j, z in enumerate(st):
            if not isinstance(z, list) or len(z) != 2:
                raise InputError(f"states[{i}][{j}]: expected a [re, im] pair")
            row.append(complex(_number(z[0], f"states[{i}][{j}][0]"), _number(z[1], f"states[{i}][{j}][1]")))
        rows.append(row)
    psi = np.array(rows, dtype=complex)

    probs = doc["probs"]
    if not isinstance(probs, list) or len(probs) != len(rows):
        raise InputError(f"probs: expected an array of {len(rows)} numbers")
    p = np.array([_number(v, f"probs[{i}]") for i, v in enumerate(probs)])
    if np.any(p <= 0):
        raise InputError(f"probs[{int(np.argmax(p <= 0))}]: probabilities must be positive")
    if abs(p.sum() - 1.0) > INPUT_PROB_TOL:
        raise InputError(f"probs: sum is {p.sum()!r}, expected 1")
    p = p / p.sum()

    norms = np.linalg.norm(psi, axis=1)
    for i, nm in enumerate(norms):
        if nm == 0.0:
            raise InputError(f"states[{i}]: zero vector")
        if abs(nm - 1.0) > INPUT_NORM_TOL and not renormalize:
            raise InputError(f"states[{i}]: norm {nm!r} is not 1 (use --renormalize)")
    psi = psi / norms[:, None]
    try:
        return Ensemble(psi, p)
    except ValidationError as err:
        raise InputError(str(err)) from None


def read_ensemble(path: str, renormalize: bool = False) -> Ensemble:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None
    try:
        return parse_ensemble_document(text, renormalize)
    except InputError as err:
        raise InputError(f"{path}: {err}") from None


# --- commands ---------------------------------------------------------------


def analysis_report(e: Ensemble, bits: bool = False) -> dict:
    """The analyze document for an ensemble."""
    n, k = e.dimension, e.k
    A = overlap_matrix(e)
    vols = all_alphas(A, n)
    s_alpha = symmetric_polys_from_alphas(vols, e.probs)
    full = symmetric_polys(ensemble_spectrum(e, drop_zeros=False))
    s_spec = np.zeros(n + 1)
    m = min(n, k)
    s_spec[: m + 1] = full[: m + 1]
    x = ensemble_spectrum(e)

    S = von_neumann_entropy(x)
    entropy = {"nats": S}
    if bits:
        entropy["bits"] = S / math.log(2.0)

    alphas = {}
    grads = {}
    for size in range(2, n + 1):
        for u in combinations(range(1, k + 1), size):
            alphas[subset_key(u)] = vols[u]
            grads[subset_key(u)] = dS_dalpha(e, u) if size <= x.size else None
    Q = subentropy(x)
    return {
        "command": "analyze",
        "ensemble": {"dimension": n, "k": k, "probs": e.probs},
        "spectrum": x,
        "rank": int(x.size),
        "entropy": entropy,
        "symmetric_polys": {
            "spectral": s_spec[1:],
            "alpha_route": s_alpha[1:],
            "max_abs_difference": float(np.max(np.abs(s_spec - s_alpha))),
        },
        "alphas": alphas,
        "dS_ds": {str(q): dS_ds(x, q) for q in range(2, x.size + 1)},
        "dS_dalpha": grads,
        "subentropy": Q,
        "theorem2_residual": abs(Q - (1.0 - dS_dt1(x))),
    }


def cmd_analyze(args) -> tuple:
    e = read_ensemble(args.input, args.renormalize)
    return analysis_report(e, args.bits), EXIT_OK


def cmd_verify(args) -> tuple:
    results = run_suite(args.suite, trials=args.trials, seed=args.seed, tolerance=args.tolerance)
    suites = []
    for r in results:
        print(r.summary_line(), file=sys.stderr)
        entry = {
            "name": r.name,
            "passed": r.passed,
            "cases": r.cases,
            "checks": r.checks,
            "violations": r.violations,
            "skipped": r.skipped,
            "worst": r.worst,
        }
        if args.timings:
            entry["runtime_s"] = r.runtime
        suites.append(entry)
    ok = all(r.passed for r in results)
    doc = {
        "command": "verify",
        "suite": args.suite,
        "seed": args.seed,
        "trials": args.trials,
        "tolerance": args.tolerance,
        "passed": ok,
        "suites": suites,
    }
    return doc, EXIT_OK if ok else EXIT_CHECK_FAILED


def _nonmonotone_document(rep) -> dict:
    doc = {
        "command": "search",
        "kind": "nonmonotone",
        "found": rep.found,
        "seed": rep.seed,
        "candidates": rep.candidates,
        "p_small": rep.p_small,
        "direction": list(rep.direction),
        "message": rep.message,
    }
    if rep.found:
        p = rep.params
        doc["witness"] = {
            "r": {subset_key(key): val for key, val in sorted(p.r.items())},
            "u": p.u,
            "v": p.v,
            "w": p.w,
            "probs": list(p.probs),
            "small_index": rep.small_index,
            "spectrum": rep.spectrum,
            "dS_ds": {str(q): v for q, v in sorted(rep.dS_ds.items())},
            "ds_dx": {str(q): v for q, v in sorted(rep.ds_dx.items())},
            "ds3_dx_finite_difference": rep.ds3_dx_finite_difference,
            "chain_rule_dS_dx": rep.chain_rule_dS_dx,
            "finite_difference_dS_dx": rep.finite_difference_dS_dx,
            "entropy_base": rep.entropy_base,
            "entropy_step": rep.entropy_step,
            "step": rep.step,
        }
    return doc


def _counterexample_document(rep) -> dict:
    doc = {
        "command": "search",
        "kind": "js-counterexample",
        "found": rep.found,
        "seed": rep.seed,
        "n_states": rep.n_states,
        "evaluations": rep.evaluations,
        "bases_tried": rep.bases_tried,
        "weak_overlap_hits": rep.weak_overlap_hits,
        "best_entropy_gain": rep.best_entropy_gain,
        "message": rep.message,
    }
    if rep.found:
        pairs = [subset_key(u) for u in combinations(range(1, rep.n_states + 1), 2)]
        doc["witness"] = {
            "base": ensemble_document(rep.base),
            "perturbed": ensemble_document(rep.perturbed),
            "base_overlaps": dict(zip(pairs, rep.base_overlaps)),
            "perturbed_overlaps": dict(zip(pairs, rep.perturbed_overlaps)),
            "base_entropy": rep.base_entropy,
            "perturbed_entropy": rep.perturbed_entropy,
        }
    return doc


def cmd_search(args) -> tuple:
    if args.kind == "nonmonotone":
        budget = 100_000 if args.budget is None else args.budget
        if not 0.0 < args.p_small <= 0.1:
            raise UsageError("--p-small must lie in (0, 0.1]")
        rep = nonmonotonicity_demo(args.p_small, seed=args.seed, budget=budget)
        doc = _nonmonotone_document(rep)
    else:
        budget = 1_000_000 if args.budget is None else args.budget
        rep = js_counterexample_search(seed=args.seed, budget=budget, n_states=args.states, shards=args.shards)
        doc = _counterexample_document(rep)
    doc["budget"] = budget
    return doc, EXIT_OK if rep.found else EXIT_BUDGET


def cmd_table(args) -> tuple:
    entries = dof_table(args.k_max)
    if args.grid:
        text = render_table(entries) + "\n"
    else:
        text = "".join(e.row() + "\n" for e in entries)
    code = EXIT_OK
    if args.check_paper:
        bad = check_against_paper(dof_table(max(args.k_max, 5)))
        if bad:
            print("published table mismatch at " + ", ".join(f"(k={k}, n={n})" for k, n in bad), file=sys.stderr)
            code = EXIT_CHECK_FAILED
        else:
            print("published table: all 10 entries match", file=sys.stderr)
    return text, code


# --- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _bounded_int(lo: int, hi: int | None = None):
    def conv(text):
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
        if v < lo or (hi is not None and v > hi):
            rng = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
            raise argparse.ArgumentTypeError(f"{v} not {rng}")
        return v

    return conv


def _positive_float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError("must be positive")
    return v


SEED = _bounded_int(0, 2**64 - 1)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--output", "-o", help="write the document here instead of stdout")

    parser = _Parser(prog="ensemble-volumes", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", parents=[common], help="full invariant/derivative report for an ensemble file")
    p.add_argument("input", help="ensemble document (JSON: dimension, states, probs)")
    p.add_argument("--bits", action="store_true", help="also report the entropy in bits")
    p.add_argument("--renormalize", action="store_true", help="normalize states instead of rejecting them")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("verify", parents=[common], help="run randomized property suites")
    p.add_argument("suite", choices=SUITES + ("all",))
    p.add_argument("--trials", type=_bounded_int(1), default=None, help="instances per suite (suite default if omitted)")
    p.add_argument("--seed", type=SEED, default=0)
    p.add_argument("--tolerance", type=_positive_float, default=None, help="override the suite tolerance")
    p.add_argument("--timings", action="store_true", help="include runtimes (makes output non-reproducible)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("search", parents=[common], help="search for a witness ensemble")
    p.add_argument("kind", choices=("js-counterexample", "nonmonotone"))
    p.add_argument("--seed", type=SEED, default=0)
    p.add_argument("--budget", type=_bounded_int(1), default=None)
    p.add_argument("--shards", type=_bounded_int(1), default=1, help="independent seed streams (js-counterexample)")
    p.add_argument("--states", type=_bounded_int(2), default=3, help="number of states (js-counterexample)")
    p.add_argument("--p-small", type=float, default=0.01, help="the small probability (nonmonotone)")
    p.set_defaults(func=cmd_search)

    p = sub.add_parser("table", parents=[common], help="degree-of-freedom table nu (tau)")
    p.add_argument("k_max", type=_bounded_int(2))
    p.add_argument("--check-paper", action="store_true", help="compare the k <= 5 entries with the published table")
    p.add_argument("--grid", action="store_true", help="print a grid instead of 'k n nu tau' rows")
    p.set_defaults(func=cmd_table)
    return parser


def _emit(payload, path):
    text = payload if isinstance(payload, str) else dumps(payload)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        payload, code = args.func(args)
    except UsageError as err:
        print(f"usage error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return EXIT_INVALID
    try:
        _emit(payload, args.output)
    except OSError as err:
        print(f"cannot write {args.output}: {err.strerror}", file=sys.stderr)
        return EXIT_INVALID
    return code


if __name__ == "__main__":
    sys.exit(main())
