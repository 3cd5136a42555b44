"""Location objectives with exact subgradients.

Each objective is a sum over the data of a per-observation loss in a scalar
location parameter.  The convex families (absolute deviation, check loss,
power loss with exponent >= 1, negative log-likelihood of a log-concave
location family) expose the left/right subgradient at every point, which is
what the sign-probability bounds consume.  A redescending bounded-influence
objective is included as the non-convex test case; it is smooth, so its
subgradient interval collapses to the derivative.
"""

import math
from typing import NamedTuple

import numpy as np
from scipy import integrate


class SubgradientInterval(NamedTuple):
    left: float
    right: float


# ---------------------------------------------------------------------------
# Parametric location families (used by the likelihood objective and by the
# log-likelihood-ratio machinery).


class NormalLocation:
    """Normal location family with known standard deviation."""

    name = "normal_location"

    def __init__(self, sigma: float = 1.0):
        if sigma <= 0.0:
            raise ValueError("sigma must be positive")
        self.sigma = float(sigma)

    def log_density(self, x, theta):
        z = (np.asarray(x, dtype=float) - theta) / self.sigma
        return -0.5 * z * z - math.log(self.sigma) - 0.5 * math.log(2.0 * math.pi)

    def score(self, x, theta):
        """d/dtheta log density."""
        return (np.asarray(x, dtype=float) - theta) / self.sigma**2

    def sample(self, rng, theta, size):
        return theta + self.sigma * rng.standard_normal(size)

    def expected_log_likelihood_ratio(self, theta0: float, shift: float) -> float:
        """Per-observation E[log p_{theta0+shift}(X) - log p_{theta0}(X)] under theta0."""
        return -0.5 * (shift / self.sigma) ** 2

    def params(self) -> dict:
        return {"sigma": self.sigma}


class LogisticLocation:
    """Logistic location family with known scale."""

    name = "logistic_location"

    def __init__(self, scale: float = 1.0):
        if scale <= 0.0:
            raise ValueError("scale must be positive")
        self.scale = float(scale)

    def log_density(self, x, theta):
        z = (np.asarray(x, dtype=float) - theta) / self.scale
        # -z - 2*log(1 + exp(-z)) - log(scale), written overflow-safe
        return -np.abs(z) - 2.0 * np.log1p(np.exp(-np.abs(z))) - math.log(self.scale)

    def score(self, x, theta):
        z = (np.asarray(x, dtype=float) - theta) / self.scale
        return np.tanh(z / 2.0) / self.scale

    def sample(self, rng, theta, size):
        return rng.logistic(loc=theta, scale=self.scale, size=size)

    def expected_log_likelihood_ratio(self, theta0: float, shift: float) -> float:
        """Per-observation expected log-likelihood ratio, by quadrature.

        Location invariance makes the value independent of ``theta0``; it is
        minus the KL divergence from the centered density to its shift.
        """
        if shift == 0.0:
            return 0.0

        def integrand(x):
            delta = self.log_density(x, shift) - self.log_density(x, 0.0)
            return float(delta * math.exp(self.log_density(x, 0.0)))

        span = 40.0 * self.scale + 4.0 * abs(shift)
        value, _ = integrate.quad(integrand, -span, span, limit=200)
        return value

    def params(self) -> dict:
        return {"scale": self.scale}


_FAMILIES = {
    NormalLocation.name: NormalLocation,
    LogisticLocation.name: LogisticLocation,
}


def make_family(name: str, **params):
    """Build a likelihood family from its registry name and parameter map."""
    try:
        cls = _FAMILIES[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {sorted(_FAMILIES)}") from None
    return cls(**params)


def loglik_ratio_sum(family, data, theta0: float, eps: float) -> float:
    """Sum over the data of log p_{theta0+eps}(x) - log p_{theta0}(x).

    Equals the drop in the negative log-likelihood objective when moving from
    ``theta0`` to ``theta0 + eps``.
    """
    x = np.asarray(data, dtype=float)
    if eps == 0.0:
        return 0.0
    return float(np.sum(family.log_density(x, theta0 + eps) - family.log_density(x, theta0)))


# ---------------------------------------------------------------------------
# Objectives.


class LocationObjective:
    """Base class: holds the data and the tolerance anchor."""

    is_convex = True

    def __init__(self, data):
        x = np.asarray(data, dtype=float)
        if x.ndim != 1 or x.size == 0:
            raise ValueError("data must be a non-empty 1-d sequence")
        if not np.all(np.isfinite(x)):
            raise ValueError("data must be finite")
        self.data = x

    def scale_at(self, theta: float) -> float:
        """Affine-invariant tolerance anchor: 1 + max|x| + |theta|."""
        return 1.0 + float(np.max(np.abs(self.data))) + abs(theta)

    def value(self, theta: float) -> float:
        raise NotImplementedError

    def subgradient(self, theta: float) -> SubgradientInterval:
        raise NotImplementedError


class AbsoluteDeviation(LocationObjective):
    """Sum of absolute deviations; minimized by the sample median."""

    kind = "abs_dev"

    def value(self, theta):
        return float(np.sum(np.abs(self.data - theta)))

    def subgradient(self, theta):
        n_le = int(np.count_nonzero(self.data <= theta))
        n_eq = int(np.count_nonzero(self.data == theta))
        right = float(2 * n_le - self.data.size)
        return SubgradientInterval(right - 2.0 * n_eq, right)


class CheckLoss(LocationObjective):
    """Quantile check loss (tau - 1{x <= theta})(x - theta); each term >= 0."""

    kind = "quantile"

    def __init__(self, data, tau: float):
        super().__init__(data)
        if not 0.0 < tau < 1.0:
            raise ValueError("tau must be in (0, 1)")
        self.tau = float(tau)

    def value(self, theta):
        resid = self.data - theta
        weight = np.where(self.data <= theta, self.tau - 1.0, self.tau)
        return float(np.sum(weight * resid))

    def subgradient(self, theta):
        n_le = int(np.count_nonzero(self.data <= theta))
        n_eq = int(np.count_nonzero(self.data == theta))
        right = float(n_le - self.data.size * self.tau)
        return SubgradientInterval(right - n_eq, right)


class PowerLoss(LocationObjective):
    """Sum of |x - theta|**p for p >= 1; p < 1 is non-convex and rejected."""

    kind = "lp"

    def __init__(self, data, p: float):
        super().__init__(data)
        if p < 1.0:
            raise ValueError(f"p={p} < 1 gives a non-convex objective")
        self.p = float(p)

    def value(self, theta):
        return float(np.sum(np.abs(self.data - theta) ** self.p))

    def subgradient(self, theta):
        diff = theta - self.data
        away = diff != 0.0
        g = self.p * float(np.sum(np.abs(diff[away]) ** (self.p - 1.0) * np.sign(diff[away])))
        n_eq = int(np.count_nonzero(~away))
        if n_eq == 0 or self.p > 1.0:
            # for p > 1 the per-term derivative at a data point is 0
            return SubgradientInterval(g, g)
        # p == 1: each tied point contributes the full slope interval [-1, 1]
        return SubgradientInterval(g - n_eq, g + n_eq)


class NegativeLogLikelihood(LocationObjective):
    """Negative log-likelihood of a log-concave location family."""

    kind = "neg_loglik"

    def __init__(self, data, family):
        super().__init__(data)
        if not isinstance(family, tuple(_FAMILIES.values())):
            raise ValueError(
                "family must be one of the built-in log-concave location families"
            )
        self.family = family

    def value(self, theta):
        return float(-np.sum(self.family.log_density(self.data, theta)))

    def subgradient(self, theta):
        g = float(-np.sum(self.family.score(self.data, theta)))
        return SubgradientInterval(g, g)


# ---------------------------------------------------------------------------
# Bounded-influence (biweight) location objective: the non-convex test case.
# The per-observation loss is smooth, convex near zero and flat in the tails,
# so the full objective is convex on a window around the target only with
# some probability -- exactly the regime the non-convex bound addresses.


def biweight_rho(u, c: float):
    """Biweight loss: (c^2/6) * (1 - (1 - (u/c)^2)^3) inside |u| <= c, constant outside."""
    u = np.asarray(u, dtype=float)
    t = np.clip(1.0 - (u / c) ** 2, 0.0, None)
    return (c * c / 6.0) * (1.0 - t**3)


def biweight_drho(u, c: float):
    """Derivative of the biweight loss: u * (1 - (u/c)^2)^2 inside, 0 outside."""
    u = np.asarray(u, dtype=float)
    t = np.clip(1.0 - (u / c) ** 2, 0.0, None)
    return u * t * t


def biweight_ddrho(u, c: float):
    """Second derivative: (1 - (u/c)^2)(1 - 5(u/c)^2) inside, 0 outside."""
    u = np.asarray(u, dtype=float)
    s = (u / c) ** 2
    inside = s <= 1.0
    return np.where(inside, (1.0 - s) * (1.0 - 5.0 * s), 0.0)


class BiweightLocation(LocationObjective):
    """Redescending location objective built from the biweight loss."""

    kind = "biweight"
    is_convex = False

    def __init__(self, data, c: float = 2.0):
        super().__init__(data)
        if c <= 0.0:
            raise ValueError("c must be positive")
        self.c = float(c)

    def value(self, theta):
        return float(np.sum(biweight_rho(self.data - theta, self.c)))

    def subgradient(self, theta):
        g = float(-np.sum(biweight_drho(self.data - theta, self.c)))
        return SubgradientInterval(g, g)

    def second_derivative(self, theta):
        return float(np.sum(biweight_ddrho(self.data - theta, self.c)))


# ---------------------------------------------------------------------------
# Factory and convexity probe.


def make_objective(kind: str, data, **params) -> LocationObjective:
    """Build an objective from its kind name and parameter map.

    ``neg_loglik`` takes either a prebuilt ``family`` or ``family_name`` plus
    ``family_params``.
    """
    if kind == AbsoluteDeviation.kind:
        return AbsoluteDeviation(data, **params)
    if kind == CheckLoss.kind:
        return CheckLoss(data, **params)
    if kind == PowerLoss.kind:
        return PowerLoss(data, **params)
    if kind == BiweightLocation.kind:
        return BiweightLocation(data, **params)
    if kind == NegativeLogLikelihood.kind:
        family = params.pop("family", None)
        if family is None:
            family = make_family(params.pop("family_name"), **params.pop("family_params", {}))
        if params:
            raise ValueError(f"unexpected parameters {sorted(params)} for neg_loglik")
        return NegativeLogLikelihood(data, family)
    raise ValueError(f"unknown objective kind {kind!r}")


def is_convex_on(obj: LocationObjective, lo: float, hi: float, num: int = 65) -> bool:
    """Subgradient-monotonicity test for convexity on [lo, hi].

    Checks g_left <= g_right at each grid point and g_right(t_k) <=
    g_left(t_{k+1}) across consecutive points, within a scale-relative slack.
    A pass certifies convexity only up to the grid resolution.
    """
    if not lo < hi:
        raise ValueError("need lo < hi")
    grid = np.linspace(lo, hi, num)
    slack = 1e-9 * max(obj.scale_at(lo), obj.scale_at(hi))
    prev_right = -math.inf
    for theta in grid:
        left, right = obj.subgradient(float(theta))
        if left > right + slack:
            return False
        if prev_right > left + slack:
            return False
        prev_right = right
    return True
