"""Sample-split partial-linear model with rate-controllable nuisances.

The response is linear in the treatment plus a smooth function of the
covariates; the treatment is a smooth function of the covariates plus noise.
Nuisances are fitted on one half of the data and the treatment coefficient
solved from a residual score on the other half.  The ``corrupted`` nuisance
method perturbs the truth by a fixed-norm direction, pinning the nuisance
error norms exactly so the product-of-rates behaviour of the conditional
bias becomes a deterministic experiment.
"""

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .partialling import RegressionData

# ---------------------------------------------------------------------------
# Named smooth functions, noise laws, and covariate laws (config-addressable).


@dataclass(frozen=True)
class FunctionSpec:
    """Named smooth function of the covariates with a parameter map."""

    name: str
    params: dict = field(default_factory=dict)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        p = self.params
        if self.name == "zero":
            return np.zeros(x.shape[0])
        if self.name == "linear":
            weights = np.broadcast_to(
                np.asarray(p.get("weights", 1.0), dtype=float), (x.shape[1],)
            )
            return x @ weights + float(p.get("intercept", 0.0))
        if self.name == "sine":
            coord = int(p.get("coord", 0))
            return float(p.get("amplitude", 1.0)) * np.sin(
                float(p.get("frequency", 1.0)) * x[:, coord]
            )
        raise ValueError(f"unknown function name {self.name!r}")


@dataclass(frozen=True)
class NoiseSpec:
    """Mean-centered noise law."""

    name: str
    params: dict = field(default_factory=dict)

    def sample(self, rng, n: int) -> np.ndarray:
        p = self.params
        if self.name == "normal":
            return float(p.get("sigma", 1.0)) * rng.standard_normal(n)
        if self.name == "laplace":
            return rng.laplace(0.0, float(p.get("scale", 1.0)), n)
        if self.name == "exp_centered":
            scale = float(p.get("scale", 1.0))
            return rng.exponential(scale, n) - scale
        if self.name == "uniform":
            hw = float(p.get("half_width", 1.0))
            return rng.uniform(-hw, hw, n)
        raise ValueError(f"unknown noise law {self.name!r}")


@dataclass(frozen=True)
class CovariateSpec:
    """Law of the covariate vector; iid across observations."""

    dim: int
    name: str = "normal"

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.name not in ("normal", "uniform"):
            raise ValueError(f"unknown covariate law {self.name!r}")

    def sample(self, rng, n: int) -> np.ndarray:
        if self.name == "normal":
            return rng.standard_normal((n, self.dim))
        return rng.uniform(-1.0, 1.0, (n, self.dim))

    def pdf_1d(self, x):
        """Marginal density when dim == 1 (used by the quadrature path)."""
        if self.dim != 1:
            raise ValueError("pdf_1d only defined for dim == 1")
        if self.name == "normal":
            return np.exp(-0.5 * np.square(x)) / math.sqrt(2.0 * math.pi)
        return np.where(np.abs(x) <= 1.0, 0.5, 0.0)

    @property
    def quad_support(self):
        return (-12.0, 12.0) if self.name == "normal" else (-1.0, 1.0)


@dataclass(frozen=True)
class PlmDgp:
    """Partial-linear data-generating process."""

    theta0: float
    g0: FunctionSpec
    m0: FunctionSpec
    noise_u: NoiseSpec
    noise_v: NoiseSpec
    x_law: CovariateSpec


def simulate_plm(dgp: PlmDgp, n: int, seed) -> RegressionData:
    """Draw one dataset: t = m0(x) + v and y = theta0 t + g0(x) + u."""
    if n < 2:
        raise ValueError("n must be >= 2")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    x = dgp.x_law.sample(rng, n)
    v = dgp.noise_v.sample(rng, n)
    u = dgp.noise_u.sample(rng, n)
    t = dgp.m0(x) + v
    y = dgp.theta0 * t + dgp.g0(x) + u
    return RegressionData(y=y, t=t, x=x)


def split_indices(n: int, seed) -> tuple[np.ndarray, np.ndarray]:
    """Deterministic 50/50 split of range(n) from a seed."""
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    perm = rng.permutation(n)
    half = n // 2
    return np.sort(perm[:half]), np.sort(perm[half:])


# ---------------------------------------------------------------------------
# Nuisance estimators.  Each fit is a callable x -> prediction; the corrupted
# fit additionally carries closed-form error norms.


@dataclass(frozen=True)
class NuisanceMethod:
    """Nuisance estimation recipe: series(k), knn(k), oracle, or corrupted.

    ``corrupted`` takes ``rate`` (the exact error norm of both fits),
    ``overlap`` in [-1, 1] (the cosine between the two perturbation
    directions: 1 aligns them, 0 makes them orthogonal) and ``seed`` (rotates
    the fixed direction pair inside its two-dimensional span).
    """

    kind: str
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("series", "knn", "oracle", "corrupted"):
            raise ValueError(f"unknown nuisance method {self.kind!r}")


class OracleFit:
    """Returns the true nuisance function."""

    def __init__(self, truth: FunctionSpec):
        self.truth = truth

    def __call__(self, x):
        return self.truth(x)


class CorruptedFit:
    """Truth plus a fixed perturbation of exactly known norm.

    The perturbation lives in the span of the first two Hermite directions
    h1(x) = x_1 and h2(x) = (x_1^2 - 1)/sqrt(2), an exactly orthonormal pair
    under a standard normal covariate law.  ``pair_overlap`` stores the inner
    product between this fit's direction and its partner's; closed-form error
    moments are reported from the stored rate and overlap, not re-derived
    from the coefficients.
    """

    def __init__(self, truth: FunctionSpec, rate: float, coeff_1: float,
                 coeff_2: float, pair_overlap: float):
        if rate < 0.0:
            raise ValueError("rate must be >= 0")
        if not -1.0 <= pair_overlap <= 1.0:
            raise ValueError("overlap must be in [-1, 1]")
        self.truth = truth
        self.rate = float(rate)
        self.coeff_1 = float(coeff_1)
        self.coeff_2 = float(coeff_2)
        self.pair_overlap = float(pair_overlap)

    def perturbation(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        h1 = x[:, 0]
        h2 = (np.square(x[:, 0]) - 1.0) / math.sqrt(2.0)
        return self.rate * (self.coeff_1 * h1 + self.coeff_2 * h2)

    def __call__(self, x):
        return self.truth(x) + self.perturbation(x)


class SeriesFit:
    """Polynomial least-squares fit on a one-dimensional covariate."""

    def __init__(self, x_train: np.ndarray, target: np.ndarray, basis_size: int):
        if x_train.shape[1] != 1:
            raise ValueError("series fit supports one-dimensional covariates only")
        if basis_size < 1:
            raise ValueError("basis size must be >= 1")
        if basis_size > x_train.shape[0]:
            raise ValueError(
                f"basis size {basis_size} exceeds the training size {x_train.shape[0]}"
            )
        design = np.vander(x_train[:, 0], basis_size, increasing=True)
        self.coeffs, *_ = np.linalg.lstsq(design, target, rcond=None)

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        design = np.vander(x[:, 0], self.coeffs.size, increasing=True)
        return design @ self.coeffs


class KnnFit:
    """k-nearest-neighbour regression under the Euclidean metric."""

    def __init__(self, x_train: np.ndarray, target: np.ndarray, k: int):
        if not 1 <= k <= x_train.shape[0]:
            raise ValueError(f"k={k} outside [1, {x_train.shape[0]}]")
        self.x_train = np.asarray(x_train, dtype=float)
        self.target = np.asarray(target, dtype=float)
        self.k = int(k)

    def __call__(self, x):
        x = np.atleast_2d(np.asarray(x, dtype=float))
        d2 = np.square(x[:, None, :] - self.x_train[None, :, :]).sum(axis=2)
        nearest = np.argpartition(d2, self.k - 1, axis=1)[:, :self.k]
        return self.target[nearest].mean(axis=1)


def fit_nuisance(d1_data: RegressionData, method: NuisanceMethod,
                 dgp: PlmDgp | None = None):
    """Fit (m_hat, g_hat) on the first data fold.

    ``g_hat`` targets the covariate component of the response net of the
    treatment term (the object the residual score centers on).  The oracle
    and corrupted methods perturb that truth directly.  The data-driven
    methods regress ``y - theta0 * t`` on the covariates when the process is
    supplied (simulation mode, same target); without it they fall back to
    regressing ``y`` itself, which targets the full conditional mean of the
    response instead and shifts the centering of the split score.
    """
    p = method.params
    if method.kind == "oracle":
        if dgp is None:
            raise ValueError("oracle nuisances need the data-generating process")
        return OracleFit(dgp.m0), OracleFit(dgp.g0)
    if method.kind == "corrupted":
        if dgp is None:
            raise ValueError("corrupted nuisances need the data-generating process")
        if dgp.x_law.name != "normal":
            raise ValueError(
                "corrupted nuisances require the normal covariate law "
                "(the perturbation basis is orthonormal under it)"
            )
        rate = float(p["rate"])
        overlap = float(p.get("overlap", 1.0))
        seed = int(p.get("seed", 0))
        phi = 2.0 * math.pi * np.random.default_rng(seed).random()
        ortho = math.sqrt(max(0.0, 1.0 - overlap * overlap))
        # g direction at angle phi; m direction rotated to have cosine = overlap
        a_g, b_g = math.cos(phi), math.sin(phi)
        a_m = overlap * a_g - ortho * b_g
        b_m = overlap * b_g + ortho * a_g
        m_hat = CorruptedFit(dgp.m0, rate, a_m, b_m, overlap)
        g_hat = CorruptedFit(dgp.g0, rate, a_g, b_g, overlap)
        return m_hat, g_hat

    t = d1_data.t
    y_net = d1_data.y - dgp.theta0 * t if dgp is not None else d1_data.y
    if method.kind == "series":
        k = int(p["basis_size"])
        return (
            SeriesFit(d1_data.x, t, k),
            SeriesFit(d1_data.x, y_net, k),
        )
    k = int(p["k"])
    return KnnFit(d1_data.x, t, k), KnnFit(d1_data.x, y_net, k)


# ---------------------------------------------------------------------------
# Error moments, the split score, and the conditional-bias bound.


@dataclass(frozen=True)
class NuisanceErrorMoments:
    """L2(P_X) moments of the nuisance errors: norms, inner product, MC error."""

    norm_m: float
    norm_g: float
    inner: float
    mc_std_err: float  # 0 for closed-form and quadrature paths


def nuisance_error_moments(dgp: PlmDgp, m_hat, g_hat, n_mc: int = 100_000,
                           seed: int = 0) -> NuisanceErrorMoments:
    """Norms and inner product of (m_hat - m0, g_hat - g0) under the covariate law.

    Corrupted pairs report their stored closed-form values; a one-dimensional
    covariate law with known density is integrated by quadrature; anything
    else falls back to a large plug-in Monte-Carlo sample.
    """
    if isinstance(m_hat, CorruptedFit) and isinstance(g_hat, CorruptedFit):
        inner = g_hat.rate * m_hat.rate * g_hat.pair_overlap
        return NuisanceErrorMoments(
            norm_m=m_hat.rate, norm_g=g_hat.rate, inner=inner, mc_std_err=0.0
        )

    def dm(x):
        return np.asarray(m_hat(x)) - dgp.m0(x)

    def dg(x):
        return np.asarray(g_hat(x)) - dgp.g0(x)

    if dgp.x_law.dim == 1:
        lo, hi = dgp.x_law.quad_support

        def moment(f):
            value, _ = integrate.quad(
                lambda s: float(f(np.array([[s]]))[0] * dgp.x_law.pdf_1d(s)),
                lo, hi, limit=200,
            )
            return value

        try:
            with warnings.catch_warnings():
                warnings.simplefilter("error", integrate.IntegrationWarning)
                mm = moment(lambda x: dm(x) ** 2)
                gg = moment(lambda x: dg(x) ** 2)
                gm = moment(lambda x: dg(x) * dm(x))
        except integrate.IntegrationWarning:
            pass  # rough predictor (piecewise constant): use the plug-in path
        else:
            return NuisanceErrorMoments(
                norm_m=math.sqrt(max(mm, 0.0)),
                norm_g=math.sqrt(max(gg, 0.0)),
                inner=gm,
                mc_std_err=0.0,
            )

    rng = np.random.default_rng(seed)
    x = dgp.x_law.sample(rng, n_mc)
    a, b = dg(x), dm(x)
    prod = a * b
    inner = float(prod.mean())
    return NuisanceErrorMoments(
        norm_m=float(np.sqrt(np.mean(b * b))),
        norm_g=float(np.sqrt(np.mean(a * a))),
        inner=inner,
        mc_std_err=float(np.std(prod) / math.sqrt(n_mc)),
    )


def plm_theta(d2_data: RegressionData, m_hat, g_hat):
    """Solve the residual score on the second fold for the treatment coefficient.

    The score is z(theta) = sum of (t - m_hat(x)) ((y - g_hat(x)) - t theta),
    linear in theta; returns the closed-form root and the score function.
    """
    rt = d2_data.t - np.asarray(m_hat(d2_data.x), dtype=float)
    ry = d2_data.y - np.asarray(g_hat(d2_data.x), dtype=float)
    slope = float(rt @ d2_data.t)
    if slope == 0.0:
        raise ValueError("degenerate design: residualized treatment is orthogonal to t")

    level = float(rt @ ry)

    def z_function(theta: float) -> float:
        return level - slope * theta

    return level / slope, z_function


def plm_conditional_bias(dgp: PlmDgp, m_hat, g_hat, d2_size: int,
                         n_mc: int = 100_000, seed: int = 0):
    """Conditional bias of the split score at the target, and its product bound.

    The bias is the fold-2 sum of the expected product of the two nuisance
    errors; the bound is ``d2_size * norm_g * norm_m`` (Cauchy-Schwarz), so
    ``|cond_bias| <= product_bound`` always.
    """
    if d2_size < 1:
        raise ValueError("d2_size must be >= 1")
    mom = nuisance_error_moments(dgp, m_hat, g_hat, n_mc=n_mc, seed=seed)
    # same multiplication order on both sides so the inequality survives
    # floating point even at the Cauchy-Schwarz equality case
    return d2_size * mom.inner, d2_size * (mom.norm_g * mom.norm_m)


@dataclass(frozen=True)
class PlmSplitFit:
    """State of one sample-split fit: folds, nuisances, score, bias, norms."""

    d1_indices: np.ndarray
    d2_indices: np.ndarray
    m_hat: object
    g_hat: object
    theta_hat: float
    z_at_theta0: float
    cond_bias: float
    norm_g: float
    norm_m: float

    def __post_init__(self):
        d1 = set(np.asarray(self.d1_indices).tolist())
        d2 = set(np.asarray(self.d2_indices).tolist())
        if d1 & d2:
            raise ValueError("folds must be disjoint")
        if d1 | d2 != set(range(len(d1) + len(d2))):
            raise ValueError("folds must partition the observation indices")
        if self.norm_g < 0.0 or self.norm_m < 0.0:
            raise ValueError("error norms must be >= 0")


def plm_split_fit(dgp: PlmDgp, data: RegressionData, method: NuisanceMethod,
                  split_seed) -> PlmSplitFit:
    """One full sample-split pass: split, fit nuisances on fold 1, solve on fold 2."""
    idx1, idx2 = split_indices(data.n, split_seed)
    d1, d2 = data.subset(idx1), data.subset(idx2)
    m_hat, g_hat = fit_nuisance(d1, method, dgp=dgp)
    theta_hat, z_function = plm_theta(d2, m_hat, g_hat)
    cond_bias, _ = plm_conditional_bias(dgp, m_hat, g_hat, d2.n)
    mom = nuisance_error_moments(dgp, m_hat, g_hat)
    return PlmSplitFit(
        d1_indices=idx1,
        d2_indices=idx2,
        m_hat=m_hat,
        g_hat=g_hat,
        theta_hat=theta_hat,
        z_at_theta0=z_function(dgp.theta0),
        cond_bias=cond_bias,
        norm_g=mom.norm_g,
        norm_m=mom.norm_m,
    )


def plm_medbias_bound(z_centered_draws, cond_bias_draws) -> float:
    """Median-bias bound for the split estimator from joint replication draws.

    Per replication the centered score is compared against that replication's
    absolute conditional bias; the bound is built from the two joint
    frequencies, so a bias that varies with the first fold is handled
    correctly.
    """
    z = np.asarray(z_centered_draws, dtype=float)
    b = np.abs(np.asarray(cond_bias_draws, dtype=float))
    if z.size == 0 or z.shape != b.shape:
        raise ValueError("need equal-length non-empty draw sequences")
    reps = z.size
    p_low = float(np.count_nonzero(z <= -b)) / reps
    p_high = float(np.count_nonzero(z >= b)) / reps
    return max(0.0, 0.5 - min(p_low, p_high))
