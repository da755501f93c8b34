"""Continuous-state inverse reinforcement learning on [-1, 1].

Transition densities are modelled by coefficient matrices over an
orthonormal trigonometric basis; rewards are recovered by an l1-minimal
linear program over a covering grid and verified by independent margin
and rollout checks.
"""

from .basis import (
    TRIGONOMETRIC,
    BasisSpec,
    eval_basis,
    eval_basis_deriv,
    eval_phi_deriv_matrix,
    eval_phi_matrix,
    eval_phi_vector,
    moment_integral,
)
from .estimate import (
    CoeffMatrix,
    EstimationPlan,
    InfeasibleRegimeError,
    estimate_Z,
    fourier_rho,
    inf_norm,
    min_truncation_k,
    required_samples,
    required_samples_irl,
    truncation_error_bound,
)
from .irlcore import (
    CoveringSet,
    DivergenceError,
    FMatrix,
    IrlInfeasible,
    LPStandardForm,
    RewardVector,
    build_lp,
    compute_F,
    continuous_irl,
    covering_set,
    estimate_beta,
    load_reward,
    save_reward,
    solve_lp,
)
from .multidim import (
    ComposedReward,
    DecomposedProblem,
    eval_composed,
    solve_decomposed,
)
from .polymdp import (
    IRLProblem,
    PolyDensity,
    PolyTransition,
    exact_Z,
    gen_polynomial_density,
    gen_problem,
    gen_transition,
    load_problem,
    sample_next,
    save_problem,
    transition_pdf,
)
from .verify import (
    ActionReturns,
    VerificationReport,
    classify_reward,
    empirical_returns,
    gauss_legendre_rule,
    multistep_coeffs,
    quadrature_Z,
)

__all__ = [
    "TRIGONOMETRIC",
    "ActionReturns",
    "BasisSpec",
    "CoeffMatrix",
    "ComposedReward",
    "CoveringSet",
    "DecomposedProblem",
    "DivergenceError",
    "EstimationPlan",
    "FMatrix",
    "IRLProblem",
    "InfeasibleRegimeError",
    "IrlInfeasible",
    "LPStandardForm",
    "PolyDensity",
    "PolyTransition",
    "RewardVector",
    "VerificationReport",
    "build_lp",
    "classify_reward",
    "compute_F",
    "continuous_irl",
    "covering_set",
    "empirical_returns",
    "estimate_Z",
    "estimate_beta",
    "eval_basis",
    "eval_basis_deriv",
    "eval_composed",
    "eval_phi_deriv_matrix",
    "eval_phi_matrix",
    "eval_phi_vector",
    "exact_Z",
    "fourier_rho",
    "gauss_legendre_rule",
    "gen_polynomial_density",
    "gen_problem",
    "gen_transition",
    "inf_norm",
    "load_problem",
    "load_reward",
    "min_truncation_k",
    "moment_integral",
    "multistep_coeffs",
    "quadrature_Z",
    "required_samples",
    "required_samples_irl",
    "sample_next",
    "save_problem",
    "save_reward",
    "solve_decomposed",
    "solve_lp",
    "transition_pdf",
    "truncation_error_bound",
]

__version__ = "0.1.0"
