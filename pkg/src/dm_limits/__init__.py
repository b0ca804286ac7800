"""Drift-and-minorization convergence bounds, floors on the best achievable
bound, and exact finite-chain oracles for checking both."""

import os as _os

# Cap BLAS parallelism before numpy loads anywhere in the package.
_threads = _os.environ.get("DM_LIMITS_THREADS")
if _threads:
    for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
        _os.environ.setdefault(_var, _threads)

from . import errors  # noqa: E402
from .dm_bounds import (  # noqa: E402
    BoundReport,
    Branch,
    DmParamsA,
    DmParamsB,
    baxendale_alpha_star,
    baxendale_bound,
    chain_specific_lower_a,
    chain_specific_lower_b,
    paraoptima_lower,
    pic1_stationary_mass_lower,
    rosenthal_bound,
    rosenthal_paraoptima_lower,
)
from .finite_chain import (  # noqa: E402
    BivariateDriftSpec,
    DriftSpecA,
    DriftSpecB,
    FiniteChain,
    VerifyResult,
    adjacency_from_chain,
    cycle_walk,
    epsilon_c,
    exhaustive_chain_floor,
    is_nonneg_definite,
    is_reversible,
    load_chain_csv,
    load_chain_json,
    max_degree,
    min_majority_cardinality,
    star_walk,
    stationary_distribution,
    true_rate,
    tv_distance,
    verify_a,
    verify_b,
    verify_bivariate,
    witness_figure1,
    witness_rosenthal,
    witness_two_state,
)
from .gaussian_ar import (  # noqa: E402
    GaussianArConfig,
    alpha_n,
    divergence_curve,
    drift_params,
    eps_upper_from_diameter,
    minorization_eps,
    optimize_baxendale,
    rho_star_lower,
    rosenthal_side_lower,
    true_rate_reference,
)
from .mala import (  # noqa: E402
    MalaTarget,
    accept_prob,
    asymptotic_table,
    eps_upper,
    rho_opt_lower_a,
    rho_opt_lower_b,
    simulate,
    standard_normal_target,
    step,
)
from .numerics import (  # noqa: E402
    Interval,
    chi_square_cdf,
    chi_square_median,
    floor_guarded,
    minimize_scalar,
    std_normal_cdf,
)

__version__ = "0.1.0"
