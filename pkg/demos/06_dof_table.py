"""
Counting parameters
===================

k states in C^n modulo unitaries and phases have nu(k, n) real parameters,
while there are tau(k, n) volume invariants. They agree for k <= 3; beyond
that the volumes over-parametrize the ensemble.
"""

from ensemble_volumes import check_against_paper, dof_table, render_table

entries = dof_table(7)
print(render_table(entries))
print("\nmismatches against the published k <= 5 table:", check_against_paper(entries) or "none")
