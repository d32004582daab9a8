import io

import numpy as np
import pytest

from heatvar import rng
from heatvar.estimators import (
    Scheme,
    averaged_estimate,
    drift_from_space_section,
    drift_from_time_section,
    joint_drift_volatility2,
    volatility2_from_space_section,
    volatility2_from_time_section,
)
from heatvar.gaussian import SmoothPerturbation, wholeline_time_section
from heatvar.grids import (
    DegenerateSampleError,
    DomainError,
    PathSample,
    power_variation,
    uniform_grid,
)
from heatvar.spectral import FixedTimeSampler, HeatModel, sample_time_section


def _noise_path(seed, m=256, a=0.25, b=1.0, axis="t"):
    vals = np.random.default_rng(seed).standard_normal(m + 1) * 0.01
    return PathSample(uniform_grid(a, b, m), vals, axis=axis)


def _seeds(base, count):
    return [rng.derive_seed(base, rng.TAG_REPLICATION, r) for r in range(count)]


def test_drift_time_section_exact_inversion():
    # choose sigma so the quartic-variation limit matches the path exactly
    path = _noise_path(1)
    v4 = power_variation(path, 4)
    theta = 0.37
    sigma4 = theta * np.pi * v4 / (3.0 * path.grid.length)
    rep = drift_from_time_section(path, sigma4**0.25)
    assert rep.estimate == pytest.approx(theta, rel=1e-12)
    assert rep.scheme is Scheme.FIXED_SPACE_TIME_GRID
    assert rep.n_or_m == path.grid.m


def test_time_section_homogeneity_in_sigma():
    path = _noise_path(2)
    base = drift_from_time_section(path, 0.2).estimate
    scaled = drift_from_time_section(path, 0.2 * 1.7).estimate
    assert scaled == pytest.approx(1.7**4 * base, rel=1e-12)


def test_volatility_time_section_scales_sqrt2_when_v4_doubles():
    path = _noise_path(3)
    doubled = PathSample(path.grid, path.values * 2.0**0.25, axis="t")
    assert power_variation(doubled, 4) == pytest.approx(2 * power_variation(path, 4), rel=1e-12)
    a = volatility2_from_time_section(path, 0.1).estimate
    b = volatility2_from_time_section(doubled, 0.1).estimate
    assert b == pytest.approx(np.sqrt(2) * a, rel=1e-12)


def test_space_section_homogeneity_in_sigma():
    path = _noise_path(4, a=0.0, b=np.pi, axis="x")
    base = drift_from_space_section(path, 0.2).estimate
    scaled = drift_from_space_section(path, 0.2 * 3.0).estimate
    assert scaled == pytest.approx(9.0 * base, rel=1e-12)


def test_space_section_chaining_identity():
    # plugging the drift estimate back as known drift returns the assumed
    # volatility exactly: 2 theta_est V2 / (b-a) == sigma^2
    path = _noise_path(5, a=0.0, b=np.pi, axis="x")
    sigma = 0.2
    th = drift_from_space_section(path, sigma).estimate
    s2 = volatility2_from_space_section(path, th).estimate
    assert s2 == pytest.approx(sigma**2, rel=1e-12)


def test_degenerate_paths_raise():
    flat_t = PathSample(uniform_grid(0.25, 1, 8), np.zeros(9), axis="t")
    flat_x = PathSample(uniform_grid(0, np.pi, 8), np.zeros(9), axis="x")
    with pytest.raises(DegenerateSampleError):
        drift_from_time_section(flat_t, 0.2)
    with pytest.raises(DegenerateSampleError):
        volatility2_from_time_section(flat_t, 0.1)
    with pytest.raises(DegenerateSampleError):
        drift_from_space_section(flat_x, 0.2)
    with pytest.raises(DegenerateSampleError):
        volatility2_from_space_section(flat_x, 0.1)
    with pytest.raises(DegenerateSampleError):
        joint_drift_volatility2(flat_t, _noise_path(6, a=0, b=np.pi, axis="x"))
    with pytest.raises(DomainError):
        drift_from_space_section(_noise_path(7), -0.1)


def test_monotonicity_in_variation():
    path = _noise_path(8)
    bigger = PathSample(path.grid, path.values * 1.3, axis="t")
    assert drift_from_time_section(bigger, 0.2).estimate \
        < drift_from_time_section(path, 0.2).estimate
    assert volatility2_from_time_section(bigger, 0.1).estimate \
        > volatility2_from_time_section(path, 0.1).estimate
    spath = _noise_path(9, a=0, b=np.pi, axis="x")
    sbig = PathSample(spath.grid, spath.values * 1.3, axis="x")
    assert drift_from_space_section(sbig, 0.2).estimate \
        < drift_from_space_section(spath, 0.2).estimate
    assert volatility2_from_space_section(sbig, 0.1).estimate \
        > volatility2_from_space_section(spath, 0.1).estimate


def test_joint_identity_and_scale_invariance():
    tsec = _noise_path(10)
    ssec = _noise_path(11, a=0.0, b=np.pi, axis="x")
    th, s2 = joint_drift_volatility2(tsec, ssec)
    v2 = power_variation(ssec, 2)
    assert s2.estimate == pytest.approx(2 * th.estimate * v2 / ssec.grid.length, rel=1e-13)
    lam = 2.3
    th2, _ = joint_drift_volatility2(
        PathSample(tsec.grid, lam * tsec.values, axis="t"),
        PathSample(ssec.grid, lam * ssec.values, axis="x"),
    )
    assert th2.estimate == pytest.approx(th.estimate, rel=1e-12)
    assert th.theoretical_std is None and s2.theoretical_std is None


def test_averaged_single_and_identical_sections():
    path = _noise_path(12, a=0.0, b=np.pi, axis="x")
    single = drift_from_space_section(path, 0.2).estimate
    rep1 = averaged_estimate([path], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    assert rep1.estimate == pytest.approx(single, rel=1e-15)
    assert rep1.scheme is Scheme.SPACE_TIME_AVERAGED
    rep3 = averaged_estimate([path, path, path], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    assert rep3.estimate == pytest.approx(single, rel=1e-13)


def test_averaged_validation_and_weights():
    a = _noise_path(13, a=0.0, b=np.pi, axis="x")
    b = _noise_path(14, a=0.0, b=np.pi, axis="x")
    flat = PathSample(a.grid, np.zeros(a.grid.m + 1), axis="x")
    with pytest.raises(DomainError):
        averaged_estimate([], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    with pytest.raises(DegenerateSampleError):
        averaged_estimate([a, flat], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    other = _noise_path(15, a=0.0, b=np.pi / 2, axis="x")
    with pytest.raises(DomainError):
        averaged_estimate([a, other], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    ea = drift_from_space_section(a, 0.2).estimate
    eb = drift_from_space_section(b, 0.2).estimate
    plain = averaged_estimate([a, b], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2)
    assert plain.estimate == pytest.approx(0.5 * (ea + eb), rel=1e-14)
    weighted = averaged_estimate([a, b], Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2,
                                 weights=[3.0, 1.0])
    assert weighted.estimate == pytest.approx(0.75 * ea + 0.25 * eb, rel=1e-14)


def test_report_csv_format():
    path = _noise_path(16, a=0.0, b=np.pi, axis="x")
    rep = drift_from_space_section(path, 0.2)
    buf = io.StringIO()
    rep.to_csv(buf)
    header, row = buf.getvalue().strip().splitlines()
    assert header == "scheme,n_or_m,estimate,theoretical_std,known_parameter"
    fields = row.split(",")
    assert fields[0] == "fixed_time_space_grid"
    assert int(fields[1]) == path.grid.m
    assert float(fields[3]) == pytest.approx(rep.estimate * np.sqrt(2 / path.grid.m))
    assert float(fields[4]) == 0.2


def test_theoretical_std_plumbing_time_section():
    path = _noise_path(17)
    bare = drift_from_time_section(path, 0.2)
    assert bare.theoretical_std is None
    c = 109.2
    rep = drift_from_time_section(path, 0.2, clt_constant=c)
    n = path.grid.m
    assert rep.theoretical_std == pytest.approx(rep.estimate * np.sqrt(c) / (3 * np.sqrt(n)))
    vrep = volatility2_from_time_section(path, 0.1, clt_constant=c)
    assert vrep.theoretical_std == pytest.approx(vrep.estimate * np.sqrt(c) / (6 * np.sqrt(n)))


def test_wholeline_end_to_end_recovery():
    # drift and volatility recovered from the whole-line time-section surrogate
    model = HeatModel(0.1, 0.2)
    zero = SmoothPerturbation.zero()
    grid = uniform_grid(0.25, 1.0, 2**12)
    reps = 200
    ths = np.empty(reps)
    s2s = np.empty(reps)
    for r, s in enumerate(_seeds(18, reps)):
        path = wholeline_time_section(model, zero, grid, s)
        ths[r] = drift_from_time_section(path, model.sigma).estimate
        s2s[r] = volatility2_from_time_section(path, model.theta).estimate
    assert abs(ths.mean() - 0.1) < 0.03 * 0.1
    assert abs(s2s.mean() - 0.04) < 0.03 * 0.04


def test_bounded_domain_weak_consistency_median():
    model = HeatModel(0.1, 0.2)
    reps, n = 15, 2**14
    ths = np.array([
        drift_from_time_section(
            sample_time_section(model, np.pi / 2, (0.25, 1.0), n, s), model.sigma).estimate
        for s in _seeds(19, reps)
    ])
    assert abs(np.median(ths) - 0.1) < 0.05 * 0.1


def test_fixed_time_estimator_mean_and_std():
    model = HeatModel(0.1, 0.2, modes=2000)
    m, reps = 1000, 300
    sampler = FixedTimeSampler(model, 1.0, uniform_grid(0, np.pi, m))
    rows = sampler.draw_values_many(_seeds(20, reps))
    ths = np.array([
        drift_from_space_section(PathSample(sampler.grid, row, axis="x"), 0.2).estimate
        for row in rows
    ])
    theo = 0.1 * np.sqrt(2.0 / m)
    assert theo == pytest.approx(0.004472, abs=2e-6)
    assert abs(ths.mean() - 0.1) < 4 * theo / np.sqrt(reps) + 5e-4
    assert abs(ths.std(ddof=1) - theo) < 0.15 * theo
