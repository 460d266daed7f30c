"""Degree-of-freedom counts for k states in n dimensions."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

# (k, n) -> (nu, tau), as published for k <= 5
PAPER_TABLE = {
    (2, 2): (1, 1),
    (3, 2): (3, 3),
    (3, 3): (4, 4),
    (4, 2): (5, 6),
    (4, 3): (8, 10),
    (4, 4): (9, 11),
    (5, 2): (7, 10),
    (5, 3): (12, 20),
    (5, 4): (15, 25),
    (5, 5): (16, 26),
}


def _check(k: int, n: int, n_min: int):
    if n < n_min:
        raise ValueError(f"n must be at least {n_min}")
    if k < n:
        raise ValueError(f"k = {k} < n = {n}: outside the k >= n regime")


def nu(k: int, n: int) -> int:
    """Real parameters of k states in C^n modulo unitaries and state phases."""
    _check(k, n, 1)
    return k * (2 * n - 2) - (n * n - 1)


def tau(k: int, n: int) -> int:
    """Number of principal minors of sizes 2..n of a k x k matrix."""
    _check(k, n, 2)
    return sum(comb(k, i) for i in range(2, n + 1))


@dataclass(frozen=True)
class DofEntry:
    k: int
    n: int
    nu: int
    tau: int

    def row(self) -> str:
        return f"{self.k} {self.n} {self.nu} {self.tau}"


def dof_table(k_max: int) -> list:
    """Entries for every 2 <= n <= k <= k_max, ordered by k then n."""
    if k_max < 2:
        raise ValueError("k_max must be at least 2")
    return [DofEntry(k, n, nu(k, n), tau(k, n)) for k in range(2, k_max + 1) for n in range(2, k + 1)]


def check_against_paper(entries) -> list:
    """Return the (k, n) keys whose values differ from PAPER_TABLE."""
    got = {(e.k, e.n): (e.nu, e.tau) for e in entries}
    return [key for key, val in PAPER_TABLE.items() if got.get(key) != val]


def render_table(entries) -> str:
    """Grid with one line per k: 'nu (tau)' under each n."""
    entries = list(entries)
    k_values = sorted({e.k for e in entries})
    n_values = sorted({e.n for e in entries})
    cells = {(e.k, e.n): f"{e.nu} ({e.tau})" for e in entries}
    width = max([len(c) for c in cells.values()] + [5])
    lines = ["k   " + "".join(f"n={n}".rjust(width + 2) for n in n_values)]
    for k in k_values:
        lines.append(f"{k:<4}" + "".join(cells.get((k, n), "").rjust(width + 2) for n in n_values))
    return "\n".join(lines)
