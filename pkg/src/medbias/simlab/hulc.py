"""Min-max batch confidence interval for (near) median-unbiased estimators.

The data are cut into B disjoint equal-size batches and the estimator
computed on each; the interval is the range of the batch estimates.  For an
exactly median-unbiased estimator the target escapes the range only when all
B batch estimates fall on the same side, so the miss probability is
2 * 2**(-B); B is the smallest batch count pushing that below alpha.
"""

import math

import numpy as np


def batch_count(alpha: float) -> int:
    """Smallest B with 2 * 2**(-B) <= alpha."""
    if not 0.0 < alpha < 1.0:
        raise ValueError("alpha must be in (0, 1)")
    return math.ceil(math.log2(2.0 / alpha))


def hulc_interval(values, alpha: float, estimator) -> tuple[float, float]:
    """Interval [min, max] of the estimator over B disjoint equal-size batches.

    Batches are consecutive runs of the input order; with n not divisible by
    B the trailing remainder observations are dropped.  ``estimator`` maps a
    1-d array to a scalar.
    """
    data = np.asarray(values, dtype=float)
    if data.ndim != 1:
        raise ValueError("values must be 1-d")
    b = batch_count(alpha)
    size = data.size // b
    if size < 1:
        raise ValueError(f"need at least {b} observations for alpha={alpha}, got {data.size}")
    batches = data[: size * b].reshape(b, size)
    estimates = [float(estimator(batch)) for batch in batches]
    return min(estimates), max(estimates)
