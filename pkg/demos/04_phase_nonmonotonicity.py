"""
Pairwise overlaps are not enough
================================

Four states are described by their six overlap moduli r_ij and three
triple-product phases u, v, w. Moving the phases leaves every r_ij (and so
s_2) fixed but changes s_3 and s_4. At u = v = w = pi/2 with one small
probability, the direction (-1, -1, -1) lowers the entropy: S is not a
monotone function of the pairwise overlaps alone.
"""

from ensemble_volumes import nonmonotonicity_demo

rep = nonmonotonicity_demo(0.01, seed=0)
print(rep.message, f"(candidate {rep.candidates})")
print("r_ij:", {k: round(v, 4) for k, v in rep.params.r.items()})
print("probabilities:", rep.params.probs)
print("spectrum:", [round(v, 6) for v in rep.spectrum])
print("ds_q/dx along the phase direction:", {q: f"{v:.3e}" for q, v in rep.ds_dx.items()})
print("dS/ds_q:", {q: round(v, 4) for q, v in rep.dS_ds.items()})
print(f"dS/dx by the chain rule   : {rep.chain_rule_dS_dx:.6e}")
print(f"dS/dx by finite difference: {rep.finite_difference_dS_dx:.6e}")
