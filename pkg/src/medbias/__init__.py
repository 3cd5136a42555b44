"""Median-bias bounds for univariate and partialled M/Z-estimators.

The library computes the median-bias functional, exact subgradients of the
standard convex location objectives, the sign-probability bounds that cap
the median bias of their minimizers, and the partialled / sample-split
regression variants.  ``medbias.simlab`` drives the Monte-Carlo experiments
that certify every bound against small-instance oracles.
"""

from .core import (
    EstimatorDraws,
    MedBiasEstimate,
    SignProbabilities,
    freq_std_err,
    mc_med_bias,
    med_bias,
    sign_probabilities,
)
from .objectives import (
    AbsoluteDeviation,
    BiweightLocation,
    CheckLoss,
    LogisticLocation,
    NegativeLogLikelihood,
    NormalLocation,
    PowerLoss,
    SubgradientInterval,
    is_convex_on,
    loglik_ratio_sum,
    make_family,
    make_objective,
)
from .solver import (
    Bracket,
    BracketingError,
    ConvergenceError,
    NonConvexityError,
    minimize_convex,
    minimize_scan,
    solve_z,
)
from .bounds import (
    BERRY_ESSEEN_CONSTANT,
    BoundReport,
    IdentifiabilityError,
    clt_asymptotic_bound,
    convex_bound,
    mle_llr_lower_bounds,
    nonconvex_bound,
    nondiff_bound,
    nondiff_profile,
    z_exact_medbias,
)
from .partialling import (
    CollinearityError,
    PartialledFit,
    RegressionData,
    ScoreDecomposition,
    default_eta_grid,
    fwl_estimate,
    joint_theta,
    load_regression_csv,
    proposition_bound,
    score_decompose,
)
from .plm import (
    CovariateSpec,
    FunctionSpec,
    NoiseSpec,
    NuisanceMethod,
    PlmDgp,
    PlmSplitFit,
    fit_nuisance,
    nuisance_error_moments,
    plm_conditional_bias,
    plm_medbias_bound,
    plm_split_fit,
    plm_theta,
    simulate_plm,
    split_indices,
)

__version__ = "0.1.0"
