"""
Subentropy and the t- and r-coordinates
=======================================

In the chart t = (1/s_1, s_2/s_1, ..., s_n/s_1) the derivative of S with
respect to t_1 is 1 - Q at s_1 = 1, where Q is the subentropy. The r chart
(r_q = s_(n-q)/s_n) gives dS/dr_n = s_n (1 - Q). Both are checked against
finite differences, including a spectrum with a repeated eigenvalue.
"""

import numpy as np

from ensemble_volumes import (
    dS_drn,
    dS_dt1,
    finite_diff_dS_drn,
    finite_diff_dS_dt1,
    subentropy,
    von_neumann_entropy,
)

for x in ([0.6, 0.4], [0.5, 0.3, 0.2], [0.4, 0.3, 0.2, 0.1], [0.5, 0.25, 0.25]):
    x = np.array(x)
    Q = subentropy(x)
    S = von_neumann_entropy(x)
    print(f"x = {x}")
    print(f"  Q = {Q:.10f}   S = {S:.10f}")
    print(f"  dS/dt1 = {dS_dt1(x):.10f}   1 - Q = {1 - Q:.10f}")
    print(f"  dS/drn = {dS_drn(x):.10f}   s_n (1 - Q) = {np.prod(x) * (1 - Q):.10f}")
    if len(set(x)) == x.size:
        print(f"  chart finite differences: {finite_diff_dS_dt1(x):.8f}, {finite_diff_dS_drn(x):.8f}")

# a nearly pure state has vanishing subentropy
print("\nQ(1 - 1e-6, 1e-6) =", subentropy([1 - 1e-6, 1e-6]))
