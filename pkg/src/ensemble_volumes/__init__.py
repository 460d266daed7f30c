"""Volumetric invariants, entropy derivatives and subentropy of pure-state ensembles."""

from .calculus import (
    W,
    beta_integral,
    dS_ds,
    dS_drn,
    dS_dt1,
    dx_ds,
    entropy_from_symmetric_polys,
    finite_diff_dS_drn,
    finite_diff_dS_ds,
    finite_diff_dS_dt1,
    finite_diff_dx_ds,
    hermite_gennochi_estimate,
    lower_bound_dS_ds,
    power_identity_residual,
    r_chart,
    s_from_r_chart,
    s_from_t_chart,
    subentropy,
    t_chart,
    w_asymptotic_check,
)
from .divdiff import LogMonomial, divided_difference, divided_difference_table, xm_logx_derivative
from .ensemble import (
    Ensemble,
    check_overlap_matrix,
    density_matrix,
    ensemble_from_overlaps,
    gram_matrix,
    overlap_matrix,
    random_ensemble,
)
from .errors import (
    BoundaryProximityError,
    ConfluenceError,
    InvalidSpectrumError,
    NotPSDError,
    NumericalIntegrityError,
    ValidationError,
)
from .explorer import (
    PhaseParams,
    ds3_dx_formula,
    ensemble_from_phase_params,
    js_counterexample_search,
    nonmonotonicity_demo,
    phase_overlap_matrix,
    verify_counterexample,
)
from .geometry import PAPER_TABLE, check_against_paper, dof_table, nu, render_table, tau
from .spectral import (
    as_spectrum,
    eigenvalues_hermitian,
    ensemble_spectrum,
    roots_from_symmetric_polys,
    symmetric_polys,
    von_neumann_entropy,
)
from .volumes import VolumeInvariants, all_alphas, alpha, dS_dalpha, symmetric_polys_from_alphas

__version__ = "0.1.0"
