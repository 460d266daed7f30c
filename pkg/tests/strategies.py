"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st


@st.composite
def spectra(draw, n_min=2, n_max=6, min_gap=1e-3, min_value=1e-3):
    """Probability spectra (descending) with separated, positive entries."""
    n = draw(st.integers(n_min, n_max))
    w = draw(st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n))
    x = np.sort(np.asarray(w) / sum(w))[::-1]
    if n > 1 and np.min(-np.diff(x)) < min_gap:
        # spread out deterministically rather than rejecting
        x = np.linspace(2.0, 1.0, n)
        x = x / x.sum()
    if x[-1] < min_value:
        x = np.linspace(2.0, 1.0, n) / np.linspace(2.0, 1.0, n).sum()
    return x


seeds = st.integers(0, 2**32 - 1)
