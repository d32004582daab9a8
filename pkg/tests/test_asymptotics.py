import numpy as np
import pytest

from heatvar.asymptotics import (
    clt_variance_components,
    covariance_telescoping_term,
    fbm_increment_correlation,
    fbm_quartic_clt_constant,
    increment_covariance,
    increment_variance,
    scaled_mode_sum,
    scaled_mode_sum_report,
    theoretical_std,
    zeta2_tail,
)
from heatvar.estimators import Scheme
from heatvar.gaussian import FbmSpec, fbm_path
from heatvar.grids import DomainError, power_variation, uniform_grid

THETA, X, LEN = 0.1, np.pi / 2, 0.75


def test_zeta2_tail_matches_exact_head_subtraction():
    import math
    for K in (0, 3, 50, 2000):
        head = math.fsum(1.0 / k**2 for k in range(1, K + 1))
        assert zeta2_tail(K) == pytest.approx(np.pi**2 / 6.0 - head, rel=1e-12)


def test_increment_variance_scaling_to_interval_length():
    n = 10**6
    v = np.sqrt(n) * increment_variance(THETA, X, LEN, n)
    assert v == pytest.approx(np.sqrt(LEN), rel=1e-4)


def test_increment_variance_matches_brute_force_series():
    # closed-form tail handling reproduces a deep explicit summation
    n = 64
    beta = THETA * LEN / n
    k = np.arange(1.0, 2 * 10**7)
    brute = 2.0 / np.sqrt(np.pi * THETA) * float(
        np.sum(np.sin(k * X) ** 2 / k**2 * -np.expm1(-beta * k**2)))
    exact = increment_variance(THETA, X, LEN, n)
    # brute force still misses ~1/(2K) of the flat tail; allow just that
    assert abs(exact - brute) < 2.0 / np.sqrt(np.pi * THETA) / (2 * k[-1]) * 1.5
    assert exact > brute  # the dropped tail is positive


def test_increment_variance_monotone_in_n():
    vals = [increment_variance(THETA, X, LEN, n) for n in (16, 64, 256, 1024)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_increment_variance_theta_rescaling():
    # doubling theta at fixed theta/n leaves the exponents invariant and
    # rescales the prefactor by 1/sqrt(2)
    v1 = increment_variance(THETA, X, LEN, 500)
    v2 = increment_variance(2 * THETA, X, LEN, 1000)
    assert v2 == pytest.approx(v1 / np.sqrt(2.0), rel=1e-12)


def test_increment_variance_rejects_boundary_x():
    for bad in (0.0, np.pi):
        with pytest.raises(DomainError):
            increment_variance(THETA, bad, LEN, 100)
    with pytest.raises(DomainError):
        increment_variance(THETA, X, LEN, 100, tail_tol=-1.0)


def test_lag_covariances_negative_and_dominated():
    n = 256
    s2 = increment_variance(THETA, X, LEN, n)
    F = np.array([increment_covariance(THETA, X, LEN, n, j) for j in range(n)])
    assert F[0] == s2
    assert np.all(F[1:] < 0.0)
    assert np.all(np.abs(F) <= s2 + 1e-18)


def test_lag_covariance_equals_telescoping_difference():
    n = 128
    for j in (1, 2, 7, 60):
        g_j = covariance_telescoping_term(THETA, X, LEN, n, j)
        g_jm1 = covariance_telescoping_term(THETA, X, LEN, n, j - 1)
        assert increment_covariance(THETA, X, LEN, n, j) == pytest.approx(
            g_j - g_jm1, rel=1e-10, abs=1e-18)


def test_telescoping_sum_identities():
    n = 256
    s2_n = increment_variance(THETA, X, LEN, n)
    s2_1 = increment_variance(THETA, X, LEN, 1)
    g = np.array([covariance_telescoping_term(THETA, X, LEN, n, j) for j in range(n)])
    assert np.all(np.diff(g) < 0)  # strictly decreasing
    assert g[0] == pytest.approx(s2_n / 2.0, rel=1e-13)
    assert float(np.sum(g)) == pytest.approx(s2_1 / 2.0, rel=1e-10)
    # one-sided power-sum bound: sum_j |F(j)|^m <= sigma_n^{2m} / 2
    F = np.array([increment_covariance(THETA, X, LEN, n, j) for j in range(1, n)])
    for mm in (1, 2, 4):
        assert np.sum(np.abs(F) ** mm) <= 0.5 * s2_n ** (2 * mm) / s2_n ** mm + 1e-18


def test_clt_variance_component_bounds_and_stability():
    comps = clt_variance_components(THETA, X, LEN, (256, 1024, 4096))
    assert comps.converged
    assert 72.0 <= comps.sigma_bar2_sq <= 144.0
    assert 24.0 <= comps.sigma_bar4_sq <= 48.0
    assert comps.F.shape == (4096,)
    assert comps.F[0] == comps.sigma_n2
    # values stabilize to three significant digits along the sequence
    v2 = 72.0 + 144.0 * comps.s2_values
    assert np.all(np.abs(np.diff(v2)) / v2[1:] < 1e-3)
    with pytest.raises(DomainError):
        clt_variance_components(THETA, X, LEN, (256,))


def test_clt_components_nearly_x_independent_in_limit():
    a = clt_variance_components(THETA, np.pi / 2, LEN, (256, 1024))
    b = clt_variance_components(THETA, 1.0, LEN, (256, 1024))
    assert a.total == pytest.approx(b.total, rel=1e-2)


def test_fbm_increment_correlation_values():
    assert fbm_increment_correlation(0) == 1.0
    assert fbm_increment_correlation(1) == pytest.approx((np.sqrt(2) - 2) / 2, rel=1e-12)
    r1000 = fbm_increment_correlation(1000)
    assert r1000 == pytest.approx(-1.0 / (8.0 * 1000.0**1.5), rel=1e-3)
    j = np.arange(1, 10**5)
    r = fbm_increment_correlation(j)
    assert np.isfinite(np.sum(r**2)) and np.sum(r**2) < 0.1
    assert np.sum(r**4) < 0.01


def test_quartic_clt_constant_bounds():
    whole = fbm_quartic_clt_constant()
    assert whole.converged
    assert whole.c_check2_sq >= 1.0 and whole.c_check4_sq >= 1.0
    r1 = fbm_increment_correlation(1)
    assert whole.c_check4_sq >= 1.0 + 2.0 * r1**4 - 1e-12
    assert r1**4 == pytest.approx(0.0073593, abs=1e-6)
    assert whole.c_check_sq == pytest.approx(
        72 * whole.c_check2_sq + 24 * whole.c_check4_sq, rel=1e-14)
    with pytest.raises(DomainError):
        fbm_quartic_clt_constant(max_lag=2)


def test_quartic_clt_constant_against_monte_carlo():
    # light cross-check at small n (finite-n variance sits a few percent
    # above the limit); acceptance criterion 4 is the tight full-size check
    n, reps = 2**10, 600
    grid = uniform_grid(0, 1, n)
    v4 = np.array([
        power_variation(fbm_path(FbmSpec(0.25, grid, 1000 + r, method="circulant")), 4)
        for r in range(reps)
    ])
    stat_var = (np.sqrt(n) * (v4 - 3.0)).var(ddof=1)
    constant = fbm_quartic_clt_constant().c_check_sq
    assert abs(stat_var - constant) < 0.3 * constant


def test_scaled_mode_sum_values():
    assert scaled_mode_sum(1.0, X, 10**6) == pytest.approx(np.sqrt(np.pi) / 2, rel=5e-3)
    assert scaled_mode_sum(0.1, X, 10**6) == pytest.approx(np.sqrt(0.1 * np.pi) / 2, rel=5e-3)
    assert scaled_mode_sum(0.1, X, 10**6) == pytest.approx(0.280250, abs=3e-6)


def test_scaled_mode_sum_report_brackets():
    for theta in (0.1, 1.0, 3.0):
        for n in (10, 10**3, 10**5):
            rep = scaled_mode_sum_report(theta, X, n)
            assert rep.lower_bound <= rep.half_component <= rep.upper_bound + 1e-15
            assert abs(rep.oscillatory_component) <= rep.oscillatory_bound + 1e-15
            assert rep.value == pytest.approx(
                rep.half_component - rep.oscillatory_component, rel=1e-10)


def test_theoretical_std_examples():
    assert theoretical_std(Scheme.FIXED_TIME_SPACE_GRID, "drift", 1000, theta=0.1) \
        == pytest.approx(0.0044721, abs=1e-6)
    assert theoretical_std(Scheme.FIXED_TIME_SPACE_GRID, "volatility2", 1000, sigma2=0.04) \
        == pytest.approx(0.0017889, abs=1e-6)
    # quadratic-variation special case: beta * sqrt(2/m)
    beta, m = 2.0, 500
    assert theoretical_std(Scheme.FIXED_TIME_SPACE_GRID, "volatility2", m, sigma2=beta) \
        == pytest.approx(beta * np.sqrt(2 / m))
    c = 109.22
    assert theoretical_std(Scheme.FIXED_SPACE_TIME_GRID, "drift", 4096,
                           theta=0.1, clt_constant=c) \
        == pytest.approx(0.1 * np.sqrt(c) / (3 * 64))
    assert theoretical_std(Scheme.FIXED_SPACE_TIME_GRID, "volatility2", 4096,
                           sigma2=0.04, clt_constant=c) \
        == pytest.approx(0.04 * np.sqrt(c) / (6 * 64))


def test_theoretical_std_mismatches():
    with pytest.raises(DomainError):
        theoretical_std(Scheme.FIXED_TIME_SPACE_GRID, "drift", 100)
    with pytest.raises(DomainError):
        theoretical_std(Scheme.FIXED_SPACE_TIME_GRID, "drift", 100, theta=0.1)
    with pytest.raises(DomainError):
        theoretical_std(Scheme.JOINT, "drift", 100, theta=0.1)
    with pytest.raises(DomainError):
        theoretical_std(Scheme.FIXED_TIME_SPACE_GRID, "spread", 100, theta=0.1)
