"""Tests for the subgradient-bisection solver and the scan fallback."""

import numpy as np
import pytest

from medbias import (
    AbsoluteDeviation,
    BiweightLocation,
    Bracket,
    BracketingError,
    CheckLoss,
    LogisticLocation,
    NegativeLogLikelihood,
    NonConvexityError,
    NormalLocation,
    PowerLoss,
    minimize_convex,
    minimize_scan,
    solve_z,
)


def grid_argmin(obj, lo, hi, step=1e-6):
    """Dense-grid oracle, independent of the bisection path.

    Coarse scan over the window, then a fine scan at the requested step
    around the coarse winner.
    """
    coarse_step = max((hi - lo) / 20_000, step)
    coarse = np.arange(lo, hi, coarse_step)
    values = np.array([obj.value(float(t)) for t in coarse])
    center = float(coarse[np.argmin(values)])
    fine = np.arange(center - 2 * coarse_step, center + 2 * coarse_step, step)
    fine_values = np.array([obj.value(float(t)) for t in fine])
    return float(fine[np.argmin(fine_values)])


def test_bracket_validation():
    with pytest.raises(ValueError):
        Bracket(1.0, 1.0)
    with pytest.raises(ValueError):
        Bracket(0.0, 1.0, tol=0.0)
    b = Bracket(-2.0, 3.0)
    assert b.tol == pytest.approx(1e-10 * 6.0)


def test_minimize_odd_median():
    theta = minimize_convex(AbsoluteDeviation([1, 2, 3]), Bracket(0, 10))
    assert theta == pytest.approx(2.0, abs=1e-8)


def test_minimize_even_median_midpoint_tiebreak():
    theta = minimize_convex(AbsoluteDeviation([1, 3]), Bracket(0, 10))
    assert theta == pytest.approx(2.0, abs=1e-8)
    theta = minimize_convex(AbsoluteDeviation([0, 1, 5, 9]), Bracket(-20, 20))
    assert theta == pytest.approx(3.0, abs=1e-7)


def test_minimize_mean_case():
    theta = minimize_convex(PowerLoss([0, 1, 5], p=2), Bracket(-10, 10))
    assert theta == pytest.approx(2.0, abs=1e-8)


def test_minimize_lp4_matches_grid_oracle():
    obj = PowerLoss([0, 1, 5], p=4)
    theta = minimize_convex(obj, Bracket(-10, 10))
    oracle = grid_argmin(obj, 2.0, 3.0, step=1e-6)
    assert theta == pytest.approx(oracle, abs=2e-6)


def test_minimize_at_bracket_endpoint():
    # minimizer outside the bracket: clamp to the near endpoint
    obj = PowerLoss([5.0, 6.0], p=2)
    assert minimize_convex(obj, Bracket(-1.0, 1.0)) == 1.0
    assert minimize_convex(obj, Bracket(9.0, 12.0)) == 9.0


def test_solve_z_examples():
    assert solve_z(AbsoluteDeviation([1, 2, 3]), Bracket(0, 10)) == pytest.approx(2.0, abs=1e-8)
    theta = solve_z(NegativeLogLikelihood([-1, 0, 4], NormalLocation(1.0)), Bracket(-10, 10))
    assert theta == pytest.approx(1.0, abs=1e-8)


def test_solve_z_logistic_matches_grid_oracle():
    obj = NegativeLogLikelihood([-2, 0, 1], LogisticLocation(1.0))
    theta = solve_z(obj, Bracket(-10, 10))
    oracle = grid_argmin(obj, -1.0, 0.5, step=1e-6)
    assert theta == pytest.approx(oracle, abs=2e-6)


def test_solve_z_requires_bracketed_root():
    with pytest.raises(BracketingError):
        solve_z(PowerLoss([5.0, 6.0], p=2), Bracket(-1.0, 1.0))


@pytest.mark.parametrize("seed", range(10))
def test_sign_implications(seed):
    # negative right subgradient at a probe forces the minimizer to its
    # right, and symmetrically: 1e3 random datasets across the ten seeds
    rng = np.random.default_rng(seed)
    factories = [
        lambda d: AbsoluteDeviation(d),
        lambda d: CheckLoss(d, tau=0.35),
        lambda d: PowerLoss(d, p=1.5),
        lambda d: PowerLoss(d, p=3.0),
        lambda d: NegativeLogLikelihood(d, LogisticLocation(1.0)),
    ]
    bracket = Bracket(-8.0, 8.0)
    for _ in range(100):
        data = rng.standard_normal(rng.integers(3, 15))
        obj = factories[rng.integers(len(factories))](data)
        theta_hat = minimize_convex(obj, bracket)
        for _ in range(3):
            probe = float(rng.uniform(-7.5, 7.5))
            left, right = obj.subgradient(probe)
            if right < 0:
                assert theta_hat >= probe - bracket.tol
            if left > 0:
                assert theta_hat <= probe + bracket.tol


@pytest.mark.parametrize("seed", range(5))
def test_translation_equivariance(seed):
    rng = np.random.default_rng(100 + seed)
    data = rng.standard_normal(9)
    shift = float(rng.uniform(-5, 5))
    factories = [
        lambda d: AbsoluteDeviation(d),
        lambda d: CheckLoss(d, tau=0.7),
        lambda d: PowerLoss(d, p=2.5),
        lambda d: NegativeLogLikelihood(d, NormalLocation(0.9)),
        lambda d: NegativeLogLikelihood(d, LogisticLocation(1.2)),
    ]
    for factory in factories:
        base = minimize_convex(factory(data), Bracket(-12, 12))
        moved = minimize_convex(factory(data + shift), Bracket(-12 + shift, 12 + shift))
        assert moved == pytest.approx(base + shift, abs=1e-6)


@pytest.mark.parametrize("seed", range(5))
def test_solve_z_agrees_with_minimize(seed):
    rng = np.random.default_rng(200 + seed)
    data = rng.standard_normal(11)
    bracket = Bracket(-9, 9)
    factories = [
        lambda d: AbsoluteDeviation(d),
        lambda d: PowerLoss(d, p=2.0),
        lambda d: PowerLoss(d, p=1.0),
        lambda d: NegativeLogLikelihood(d, NormalLocation(1.0)),
        lambda d: NegativeLogLikelihood(d, LogisticLocation(1.0)),
    ]
    for factory in factories:
        a = minimize_convex(factory(data), bracket)
        b = solve_z(factory(data), bracket)
        assert abs(a - b) <= 2 * bracket.tol


def test_iteration_cap_raises(monkeypatch):
    import medbias.solver as solver_module
    monkeypatch.setattr(solver_module, "_MAX_ITER", 3)
    from medbias import ConvergenceError
    with pytest.raises(ConvergenceError):
        minimize_convex(PowerLoss([0.0, 1.0, 5.0], p=2), Bracket(-1e6, 1e6, tol=1e-12))


def test_nonconvex_detection_names_probes():
    obj = BiweightLocation([-5.0, -4.5, 4.0, 5.0, 0.1], c=2.0)
    with pytest.raises(NonConvexityError) as err:
        minimize_convex(obj, Bracket(-8, 8))
    assert "g_right(" in str(err.value) and "g_left(" in str(err.value)


def test_minimize_scan_finds_global_minimum():
    data = np.array([-5.0, -4.9, -5.1, 4.0, 5.0])
    obj = BiweightLocation(data, c=2.0)
    theta = minimize_scan(obj, Bracket(-8, 8), num=4001)
    oracle = grid_argmin(obj, -6.0, -4.0, step=1e-5)
    assert theta == pytest.approx(oracle, abs=1e-4)


def test_minimize_scan_agrees_with_bisection_on_convex():
    rng = np.random.default_rng(17)
    data = rng.standard_normal(10)
    obj = PowerLoss(data, p=2.0)
    scan = minimize_scan(obj, Bracket(-5, 5), num=2001)
    exact = minimize_convex(obj, Bracket(-5, 5))
    assert scan == pytest.approx(exact, abs=1e-5)
