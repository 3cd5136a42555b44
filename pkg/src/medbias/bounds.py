"""Right-hand sides of the median-bias bounds.

Every bound here turns sign or comparison probabilities of a score-like
statistic at the target into a cap on the median bias of the estimator.  The
convex bound consumes strict-sign probabilities; any atom at zero simply
weakens it.  The Z-estimator version is an equality in distribution and uses
the weak-inequality probabilities instead.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .core import MedBiasEstimate, SignProbabilities, freq_std_err
from .objectives import loglik_ratio_sum

#: Published universal constant for the iid Berry-Esseen (Lyapunov-ratio)
#: bound; callers may pass their own.
BERRY_ESSEEN_CONSTANT = 0.56

BOUND_KINDS = frozenset({
    "convex_thm1",
    "nondiff_eps",
    "nonconvex_delta",
    "z_exact",
    "mle_llr",
    "clt_asymptotic",
})


class IdentifiabilityError(ValueError):
    """The shifted density is not distinguishable from the reference one."""


@dataclass(frozen=True)
class BoundReport:
    """One comparison of a Monte-Carlo median bias against a bound.

    ``z_exact`` reports an equality target; every other kind an upper bound.
    """

    lhs: MedBiasEstimate
    rhs: float
    rhs_std_err: float
    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in BOUND_KINDS:
            raise ValueError(f"unknown bound kind {self.kind!r}")
        if not 0.0 <= self.rhs <= 0.5:
            raise ValueError(f"rhs={self.rhs!r} outside [0, 1/2]")
        if self.rhs_std_err < 0.0:
            raise ValueError("rhs_std_err must be >= 0")


def _half_minus_min(p_a: float, p_b: float) -> float:
    for p in (p_a, p_b):
        if not 0.0 <= p <= 1.0:
            raise ValueError(f"{p!r} is not a probability in [0, 1]")
    return max(0.0, 0.5 - min(p_a, p_b))


def convex_bound(sp: SignProbabilities) -> float:
    """Median-bias cap from the strict-sign probabilities of the score at the target.

    The weaker of P(score < 0) and P(score > 0) lower-bounds the probability
    mass of the estimator on the corresponding side of the target; the atom
    P(score = 0) is not redistributed and just loosens the cap.
    """
    return _half_minus_min(sp.p_neg, sp.p_pos)


def z_exact_medbias(p_weak_le: float, p_weak_ge: float) -> float:
    """Exact median bias of a Z-estimator from weak-sign score probabilities.

    Takes P(score <= 0) and P(score >= 0) at the target.  When the estimator
    is the unique root of an absolutely continuous, strictly monotone score,
    the estimator's side of the target is determined by the score's sign and
    the returned value matches the median bias exactly in distribution.
    """
    return _half_minus_min(p_weak_le, p_weak_ge)


def nondiff_profile(eps_grid, center_values, plus_values, minus_values):
    """Per-epsilon comparison bounds from objective values at the target.

    For each epsilon the bound is built from the empirical frequencies of
    {M(theta0) < M(theta0 + eps)} and {M(theta0) < M(theta0 - eps)}.  Returns
    a list of dicts (one per epsilon, in grid order).
    """
    eps = np.asarray(eps_grid, dtype=float)
    if eps.size < 2:
        raise ValueError("epsilon grid needs at least 2 points")
    if np.any(eps <= 0.0) or np.any(np.diff(eps) >= 0.0):
        raise ValueError("epsilon grid must be positive and strictly decreasing")
    center = np.asarray(center_values, dtype=float)
    plus = np.asarray(plus_values, dtype=float)
    minus = np.asarray(minus_values, dtype=float)
    if plus.shape != (eps.size, center.size) or minus.shape != plus.shape:
        raise ValueError("value arrays must be (n_eps, reps) aligned with the grid")
    reps = center.size
    profile = []
    for k, e in enumerate(eps):
        p_plus = float(np.count_nonzero(center < plus[k])) / reps
        p_minus = float(np.count_nonzero(center < minus[k])) / reps
        bound = _half_minus_min(p_plus, p_minus)
        profile.append({
            "eps": float(e),
            "p_plus": p_plus,
            "p_minus": p_minus,
            "bound": bound,
            "std_err": freq_std_err(min(p_plus, p_minus), reps),
        })
    return profile


def nondiff_bound(eps_grid, center_values, plus_values, minus_values) -> float:
    """Comparison bound evaluated at the finest epsilon of the grid.

    The limit as epsilon drops to zero is approached from below; the finest
    grid point is reported as-is, without extrapolation, so the bound stays
    an honestly measured quantity.  Use ``nondiff_profile`` for the full
    profile.
    """
    return nondiff_profile(eps_grid, center_values, plus_values, minus_values)[-1]["bound"]


def centered_llr_sums(family, data_draws, theta0: float, eps: float) -> np.ndarray:
    """Per-replication centered log-likelihood-ratio sums for a location shift.

    Centering subtracts n times the per-observation expected log-likelihood
    ratio under ``theta0``, which must be strictly negative for ``eps != 0``
    (identifiability); otherwise ``IdentifiabilityError`` is raised.
    """
    draws = np.atleast_2d(np.asarray(data_draws, dtype=float))
    n = draws.shape[1]
    expected = family.expected_log_likelihood_ratio(theta0, eps)
    if expected >= 0.0:
        raise IdentifiabilityError(
            f"expected log-likelihood ratio {expected!r} at shift {eps!r} is not "
            "strictly negative"
        )
    llr = family.log_density(draws, theta0 + eps) - family.log_density(draws, theta0)
    return llr.sum(axis=1) - n * expected


def mle_llr_lower_bounds(family, data_draws, theta0: float, eps: float):
    """Lower bounds on both objective-comparison probabilities for an MLE.

    Returns empirical frequencies of the centered log-likelihood-ratio sum
    being <= 0 at shifts +eps and -eps.  Each is a lower bound for the
    corresponding comparison probability because the centering term is
    strictly negative.
    """
    if eps == 0.0:
        raise IdentifiabilityError("eps must be nonzero")
    plus = centered_llr_sums(family, data_draws, theta0, abs(eps))
    minus = centered_llr_sums(family, data_draws, theta0, -abs(eps))
    reps = plus.size
    lb_plus = float(np.count_nonzero(plus <= 0.0)) / reps
    lb_minus = float(np.count_nonzero(minus <= 0.0)) / reps
    return lb_plus, lb_minus


def nonconvex_profile(sp: SignProbabilities, eta_profile) -> dict:
    """Window-convexity correction of the convex bound over a delta grid.

    ``eta_profile`` is a sequence of (delta, eta1, eta2): eta1 is the
    probability the objective fails to be convex on the window of half-width
    delta around the target, eta2 the probability the estimator escapes the
    window.  Returns the raw and clamped bound plus the minimizing delta.
    """
    entries = list(eta_profile)
    if not entries:
        raise ValueError("eta profile must be non-empty")
    base = convex_bound(sp)
    best = None
    for delta, eta1, eta2 in entries:
        for name, v in (("eta1", eta1), ("eta2", eta2)):
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name}={v!r} at delta={delta!r} outside [0, 1]")
        penalty = eta1 + eta2
        if best is None or penalty < best[1]:
            best = (delta, penalty)
    raw = base + best[1]
    return {
        "convex_part": base,
        "best_delta": float(best[0]),
        "raw": raw,
        "clamped": min(max(raw, 0.0), 0.5),
    }


def nonconvex_bound(sp: SignProbabilities, eta_profile) -> float:
    """Convex bound plus the best window-convexity penalty, clamped to [0, 1/2].

    With an all-zero eta profile this reproduces ``convex_bound`` bit for bit.
    """
    return nonconvex_profile(sp, eta_profile)["clamped"]


def clt_asymptotic_bound(mean: float, variance: float, third_abs_moment: float,
                         n: int, atom_prob: float = 0.0,
                         constant: float = BERRY_ESSEEN_CONSTANT) -> float:
    """Normal-approximation estimate of the sign-probability gap for an iid sum.

    Returns ``constant * rho / (sigma^3 sqrt(n)) + atom_prob / 2`` where the
    moments are per-summand; the summands must be centered.  This is an
    asymptotic estimate, not a certified bound: the constant is a published
    universal value and the caller supplies any atom probability at zero.
    """
    if variance <= 0.0:
        raise ValueError("variance must be positive")
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not math.isfinite(third_abs_moment) or third_abs_moment < 0.0:
        raise ValueError("third absolute moment must be finite and >= 0")
    if not 0.0 <= atom_prob <= 1.0:
        raise ValueError("atom_prob must be a probability")
    sigma = math.sqrt(variance)
    if abs(mean) > 1e-8 * sigma:
        raise ValueError(f"summands are not centered: mean={mean!r}")
    return constant * third_abs_moment / (sigma**3 * math.sqrt(n)) + 0.5 * atom_prob


def direct_comparison_probabilities(family, data_draws, theta0: float, eps: float):
    """Directly measured objective-comparison frequencies for an MLE shift.

    Companion to ``mle_llr_lower_bounds``: frequencies of
    {M(theta0) < M(theta0 +/- eps)} computed from the log-likelihood-ratio
    sums themselves.
    """
    draws = np.atleast_2d(np.asarray(data_draws, dtype=float))
    reps = draws.shape[0]
    sums_plus = np.array([loglik_ratio_sum(family, row, theta0, abs(eps)) for row in draws])
    sums_minus = np.array([loglik_ratio_sum(family, row, theta0, -abs(eps)) for row in draws])
    p_plus = float(np.count_nonzero(sums_plus < 0.0)) / reps
    p_minus = float(np.count_nonzero(sums_minus < 0.0)) / reps
    return p_plus, p_minus
