"""Acceptance criteria: one runnable check per criterion.

Each check returns a :class:`CriterionResult` with the measured quantities
and its pass/fail verdict at the stated tolerance.  Checks are
seed-deterministic (the seeds below are pinned experiment seeds), so
verdicts are reproducible; ``fast=True`` shrinks replication counts for
smoke runs and is informative only -- the recorded tolerances are calibrated
for the full sizes.

Shared setup throughout: drift 0.1, volatility 0.2, observation point
pi/2, time window [0.25, 1], space window [0, pi], as in the reference
experiments.
"""

from __future__ import annotations

import math
import os
import tempfile
from dataclasses import dataclass

import numpy as np

from . import rng
from .asymptotics import (
    clt_variance_components,
    fbm_quartic_clt_constant,
    increment_variance,
    scaled_mode_sum_report,
)
from .estimators import (
    drift_from_space_section,
    drift_from_time_section,
    joint_drift_volatility2,
    volatility2_from_space_section,
    volatility2_from_time_section,
)
from .gaussian import (
    FbmSpec,
    PerturbationKind,
    SmoothPerturbation,
    brownian_path,
    fbm_path,
)
from .grids import PathSample, power_variation, uniform_grid
from .spectral import FixedTimeSampler, HeatModel, sample_time_section

THETA, SIGMA = 0.1, 0.2
X_POINT = np.pi / 2
C, D = 0.25, 1.0

_SEEDS = {1: 66001, 3: 66003, 4: 66004, 5: 66005, 6: 66006, 9: 66009, 10: 66010}


@dataclass(frozen=True)
class CriterionResult:
    criterion: int
    description: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"AC{self.criterion:<2d} {'PASS' if self.passed else 'FAIL'}  {self.description}: {self.detail}"


def _rep_seeds(base: int, count: int) -> list[int]:
    return [rng.derive_seed(base, rng.TAG_REPLICATION, r) for r in range(count)]


def _rel(value: float, target: float) -> float:
    return abs(value - target) / abs(target)


# --- criteria 1 and 2: fixed-time estimation at scheme-B scale -------------


def _fixed_time_run(fast: bool):
    m, reps = 1000, (200 if fast else 1000)
    model = HeatModel(THETA, SIGMA, modes=2000)
    sampler = FixedTimeSampler(model, 1.0, uniform_grid(0.0, np.pi, m))
    rows = sampler.draw_values_many(_rep_seeds(_SEEDS[1], reps))
    drift = np.empty(reps)
    vol = np.empty(reps)
    for r in range(reps):
        path = PathSample(sampler.grid, rows[r], axis="x")
        drift[r] = drift_from_space_section(path, SIGMA).estimate
        vol[r] = volatility2_from_space_section(path, THETA).estimate
    return m, reps, drift, vol


def criterion_1(fast: bool = False) -> CriterionResult:
    m, reps, drift, _ = _fixed_time_run(fast)
    mean_tol = 3.0 * THETA * np.sqrt(2.0 / m) / np.sqrt(reps)
    theo = THETA * np.sqrt(2.0 / m)
    mean_err = abs(drift.mean() - THETA)
    std_err = _rel(drift.std(ddof=1), theo)
    passed = mean_err <= mean_tol and std_err <= 0.20
    return CriterionResult(
        1, "fixed-time drift estimation",
        passed,
        f"mean={drift.mean():.6f} (|err| {mean_err:.2e} <= {mean_tol:.2e}), "
        f"std={drift.std(ddof=1):.6f} vs {theo:.6f} ({std_err:.1%} <= 20%)",
    )


def criterion_2(fast: bool = False) -> CriterionResult:
    m, reps, _, vol = _fixed_time_run(fast)
    s2 = SIGMA**2
    mean_tol = 3.0 * s2 * np.sqrt(2.0 / m) / np.sqrt(reps)
    theo = s2 * np.sqrt(2.0 / m)
    mean_err = abs(vol.mean() - s2)
    std_err = _rel(vol.std(ddof=1), theo)
    passed = mean_err <= mean_tol and std_err <= 0.20
    return CriterionResult(
        2, "fixed-time volatility estimation",
        passed,
        f"mean={vol.mean():.6f} (|err| {mean_err:.2e} <= {mean_tol:.2e}), "
        f"std={vol.std(ddof=1):.6f} vs {theo:.6f} ({std_err:.1%} <= 20%)",
    )


# --- criterion 3: quadratic-variation oracle on scaled Brownian motion -----


def criterion_3(fast: bool = False) -> CriterionResult:
    beta, m, reps = 2.0, 10**4, (100 if fast else 500)
    grid = uniform_grid(0.0, 1.0, m)
    v2 = np.empty(reps)
    for r, seed in enumerate(_rep_seeds(_SEEDS[3], reps)):
        path = brownian_path(grid, np.sqrt(beta), seed)
        v2[r] = power_variation(path, 2)
    mean_tol = 3.0 * beta * np.sqrt(2.0) / np.sqrt(m * reps)
    mean_err = abs(v2.mean() - beta)
    stat_var = (np.sqrt(m) * (v2 - beta)).var(ddof=1)
    var_err = _rel(stat_var, 2.0 * beta**2)
    passed = mean_err <= mean_tol and var_err <= 0.15
    return CriterionResult(
        3, "quadratic-variation oracle",
        passed,
        f"mean V2={v2.mean():.6f} (|err| {mean_err:.2e} <= {mean_tol:.2e}), "
        f"var of sqrt(m)(V2-beta)={stat_var:.3f} vs {2 * beta**2:.0f} ({var_err:.1%} <= 15%)",
    )


# --- criterion 4: quartic-variation oracle on Hurst-1/4 fBM ----------------


def criterion_4(fast: bool = False) -> CriterionResult:
    n, reps = 2**12, (200 if fast else 1000)
    grid = uniform_grid(0.0, 1.0, n)
    v4 = np.empty(reps)
    for r, seed in enumerate(_rep_seeds(_SEEDS[4], reps)):
        path = fbm_path(FbmSpec(0.25, grid, seed, method="circulant"))
        v4[r] = power_variation(path, 4)
    constant = fbm_quartic_clt_constant().c_check_sq
    mean_err = _rel(v4.mean(), 3.0)
    stat_var = (np.sqrt(n) * (v4 - 3.0)).var(ddof=1)
    var_err = _rel(stat_var, constant)
    passed = mean_err <= 0.01 and var_err <= 0.15
    return CriterionResult(
        4, "quartic-variation oracle",
        passed,
        f"mean V4={v4.mean():.5f} ({mean_err:.2%} <= 1%), "
        f"var of sqrt(n)(V4-3)={stat_var:.2f} vs computed constant {constant:.2f} "
        f"({var_err:.1%} <= 15%)",
    )


# --- criterion 5: bounded-domain quartic variation of time sections --------


def _time_sections_v4(n: int, reps: int, base_seed: int):
    model = HeatModel(THETA, SIGMA)
    v4 = np.empty(reps)
    paths = []
    for r, seed in enumerate(_rep_seeds(base_seed, reps)):
        path = sample_time_section(model, X_POINT, (C, D), n, seed)
        v4[r] = power_variation(path, 4)
        paths.append(path)
    return v4, paths


def criterion_5(fast: bool = False) -> CriterionResult:
    n, reps = 2**14, (50 if fast else 200)
    v4, _ = _time_sections_v4(n, reps, _SEEDS[5])
    target = 3.0 * (D - C) * SIGMA**4 / (np.pi * THETA)
    err = _rel(v4.mean(), target)
    passed = err <= 0.05
    return CriterionResult(
        5, "bounded-domain 4-variation limit",
        passed,
        f"mean V4={v4.mean():.6e} vs {target:.6e} ({err:.2%} <= 5%)",
    )


# --- criterion 6: recentered CLT for the bounded-domain drift estimator ----


def criterion_6(fast: bool = False) -> CriterionResult:
    n, reps = 2**12, (150 if fast else 500)
    v4, paths = _time_sections_v4(n, reps, _SEEDS[6])
    est = np.array([drift_from_time_section(p, SIGMA).estimate for p in paths])
    s_n2 = increment_variance(THETA, X_POINT, D - C, n)
    center = (D - C) * THETA / (n * s_n2**2)
    stat = np.sqrt(n) * (est - center)
    comps = clt_variance_components(THETA, X_POINT, D - C, (256, 1024, 4096))
    # delta-method variance of the recentered estimator: theta^2 * total / 9
    target = THETA**2 * comps.total / 9.0
    var_err = _rel(stat.var(ddof=1), target)
    skew = float(((stat - stat.mean()) ** 3).mean() / stat.std() ** 3)
    passed = var_err <= 0.25 and abs(skew) < 0.3
    return CriterionResult(
        6, "recentered bounded-domain CLT",
        passed,
        f"var={stat.var(ddof=1):.4f} vs {target:.4f} ({var_err:.1%} <= 25%), "
        f"|skewness|={abs(skew):.3f} < 0.3",
    )


# --- criteria 7 and 8: spectral-series limits -------------------------------


def criterion_7(fast: bool = False) -> CriterionResult:
    rep = scaled_mode_sum_report(1.0, X_POINT, 10**6)
    err = _rel(rep.value, rep.limit)
    bracket_ok = True
    details = []
    for n in (10**2, 10**3, 10**4, 10**5, 10**6):
        r = scaled_mode_sum_report(1.0, X_POINT, n)
        ok = (r.lower_bound <= r.half_component <= r.upper_bound
              and abs(r.oscillatory_component) <= r.oscillatory_bound)
        bracket_ok &= ok
        details.append(f"n=1e{int(math.log10(n))}:{'ok' if ok else 'VIOLATED'}")
    passed = err <= 0.005 and bracket_ok
    return CriterionResult(
        7, "scaled mode-sum limit",
        passed,
        f"value={rep.value:.6f} vs {rep.limit:.6f} ({err:.3%} <= 0.5%); "
        f"integral bracket and oscillation bound: {' '.join(details)}",
    )


def criterion_8(fast: bool = False) -> CriterionResult:
    n, length = 10**6, D - C
    worst = 0.0
    details = []
    for theta in (0.1, 1.0):
        for x in (np.pi / 2, 1.0):
            val = np.sqrt(n) * increment_variance(theta, x, length, n)
            err = _rel(val, np.sqrt(length))
            worst = max(worst, err)
            details.append(f"theta={theta},x={x:.3f}:{err:.2e}")
    passed = worst < 0.01
    return CriterionResult(
        8, "increment-variance scaling",
        passed,
        f"max |sqrt(n) s_n^2 - sqrt(d-c)|/sqrt(d-c) = {worst:.2e} < 1% ({'; '.join(details)})",
    )


# --- criterion 9: smooth-perturbation invariance ----------------------------


def _quadratic_bump() -> SmoothPerturbation:
    return SmoothPerturbation(PerturbationKind.POLYNOMIAL, (0.0, 0.0, 0.5))


def _sandwich_v(vx: float, vy: float, p: float) -> tuple[float, float]:
    lo = max(vx ** (1 / p) - vy ** (1 / p), 0.0) ** p
    hi = (vx ** (1 / p) + vy ** (1 / p)) ** p
    return lo, hi


def criterion_9(fast: bool = False) -> CriterionResult:
    model = HeatModel(THETA, SIGMA, modes=2000)
    bump = _quadratic_bump()
    reps = 150 if fast else 400
    ms = (128, 256, 512, 1024, 2048)
    ok_bounds = True
    drift_gap, vol_gap = [], []
    for m in ms:
        grid = uniform_grid(0.0, np.pi, m)
        sampler = FixedTimeSampler(model, 1.0, grid)
        y = bump(grid.points)
        ypath = PathSample(grid, y, axis="x")
        v2y = power_variation(ypath, 2)
        lip = bump.derivative_bound(1, (grid.a, grid.b))
        if not v2y <= m * (lip * grid.length / m) ** 2 + 1e-12:
            ok_bounds = False
        rows = sampler.draw_values_many(_rep_seeds(_SEEDS[9] + m, reps))
        d_x = np.empty(reps)
        d_xy = np.empty(reps)
        v_x = np.empty(reps)
        v_xy = np.empty(reps)
        for r in range(reps):
            px = PathSample(grid, rows[r], axis="x")
            pxy = PathSample(grid, rows[r] + y, axis="x")
            v2 = power_variation(px, 2)
            lo, hi = _sandwich_v(v2, v2y, 2)
            d_x[r] = drift_from_space_section(px, SIGMA).estimate
            d_xy[r] = drift_from_space_section(pxy, SIGMA).estimate
            v_x[r] = volatility2_from_space_section(px, THETA).estimate
            v_xy[r] = volatility2_from_space_section(pxy, THETA).estimate
            # estimators are monotone in the variation, so the sandwich maps
            # to deterministic per-path enclosure intervals
            c2 = grid.length * SIGMA**2 / 2.0
            if lo > 0 and not (c2 / hi - 1e-12 <= d_xy[r] <= c2 / lo + 1e-12):
                ok_bounds = False
            sv = 2.0 * THETA / grid.length
            if not (sv * lo - 1e-12 <= v_xy[r] <= sv * hi + 1e-12):
                ok_bounds = False
        drift_gap.append(abs((d_xy - d_x).mean()))
        vol_gap.append(abs((v_xy - v_x).mean()))
    slope_d = float(np.polyfit(np.log(ms), np.log(drift_gap), 1)[0])
    slope_v = float(np.polyfit(np.log(ms), np.log(vol_gap), 1)[0])

    # time sections, p=4: per-path enclosure only (drift rate is p=2 specific)
    tmodel = HeatModel(THETA, SIGMA)
    tbump = _quadratic_bump()
    for r, seed in enumerate(_rep_seeds(_SEEDS[9] + 7, 5)):
        path = sample_time_section(tmodel, X_POINT, (C, D), 1024, seed)
        y = tbump(path.grid.points)
        v4 = power_variation(path, 4)
        v4y = power_variation(PathSample(path.grid, y, axis="t"), 4)
        lo, hi = _sandwich_v(v4, v4y, 4)
        pert = PathSample(path.grid, path.values + y, axis="t")
        th = drift_from_time_section(pert, SIGMA).estimate
        c4 = 3.0 * path.grid.length * SIGMA**4 / np.pi
        if lo > 0 and not (c4 / hi - 1e-15 <= th <= c4 / lo + 1e-15):
            ok_bounds = False
        s2 = volatility2_from_time_section(pert, THETA).estimate
        scale = THETA * np.pi / (3.0 * path.grid.length)
        if not (np.sqrt(scale * lo) - 1e-15 <= s2 <= np.sqrt(scale * hi) + 1e-15):
            ok_bounds = False

    slopes_ok = -1.5 <= slope_d <= -0.5 and -1.5 <= slope_v <= -0.5
    passed = ok_bounds and slopes_ok
    return CriterionResult(
        9, "smooth-perturbation invariance",
        passed,
        f"sandwich bounds hold on every path: {ok_bounds}; "
        f"drift-gap slope {slope_d:.2f}, volatility-gap slope {slope_v:.2f} "
        f"(within [-1.5, -0.5])",
    )


# --- criterion 10: joint estimation -----------------------------------------


def criterion_10(fast: bool = False) -> CriterionResult:
    n, m, reps = 2**14, 2000, (25 if fast else 100)
    model = HeatModel(THETA, SIGMA, modes=2000)
    sampler = FixedTimeSampler(model, 1.0, uniform_grid(0.0, np.pi, m))
    tseeds = [rng.derive_seed(_SEEDS[10], rng.TAG_REPLICATION, 2 * r) for r in range(reps)]
    sseeds = [rng.derive_seed(_SEEDS[10], rng.TAG_REPLICATION, 2 * r + 1) for r in range(reps)]
    srows = sampler.draw_values_many(sseeds)
    theta_j = np.empty(reps)
    sigma2_j = np.empty(reps)
    identity_ok = True
    for r in range(reps):
        tsec = sample_time_section(model, X_POINT, (C, D), n, tseeds[r])
        ssec = PathSample(sampler.grid, srows[r], axis="x")
        th, s2 = joint_drift_volatility2(tsec, ssec)
        theta_j[r], sigma2_j[r] = th.estimate, s2.estimate
        v2 = power_variation(ssec, 2)
        lhs = s2.estimate
        rhs = 2.0 * th.estimate * v2 / ssec.grid.length
        if abs(lhs - rhs) > 1e-12 * abs(lhs):
            identity_ok = False
    err_t = _rel(theta_j.mean(), THETA)
    err_s = _rel(sigma2_j.mean(), SIGMA**2)
    passed = err_t <= 0.10 and err_s <= 0.10 and identity_ok
    return CriterionResult(
        10, "joint estimation",
        passed,
        f"mean drift={theta_j.mean():.5f} ({err_t:.2%} <= 10%), "
        f"mean volatility2={sigma2_j.mean():.6f} ({err_s:.2%} <= 10%), "
        f"per-path identity to machine precision: {identity_ok}",
    )


# --- criterion 11: thread-count determinism ---------------------------------


def criterion_11(fast: bool = False) -> CriterionResult:
    import contextlib
    import io

    from . import cli

    outputs = {}
    saved_env = os.environ.pop("HEATVAR_THREADS", None)
    try:
        for threads in (1, 8):
            with tempfile.TemporaryDirectory() as tmp:
                argv = ["reproduce-figures", "--figure", "3", "--seed", "42",
                        "--threads", str(threads), "--out", tmp]
                if fast:
                    argv.append("--fast")
                with contextlib.redirect_stdout(io.StringIO()):
                    rc = cli.main(argv)
                assert rc == 0, f"reproduce-figures exited with {rc}"
                with open(os.path.join(tmp, "fig3.csv"), "rb") as fh:
                    csv_bytes = fh.read()
                with open(os.path.join(tmp, "fig3.svg"), "rb") as fh:
                    svg_bytes = fh.read()
                outputs[threads] = (csv_bytes, svg_bytes)
    finally:
        if saved_env is not None:
            os.environ["HEATVAR_THREADS"] = saved_env
    same_csv = outputs[1][0] == outputs[8][0]
    same_svg = outputs[1][1] == outputs[8][1]
    passed = same_csv and same_svg
    return CriterionResult(
        11, "thread-count determinism",
        passed,
        f"fig3.csv byte-identical across threads 1 vs 8: {same_csv}; "
        f"fig3.svg byte-identical: {same_svg}",
    )


ALL_CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
    9: criterion_9, 10: criterion_10, 11: criterion_11,
}


def run_all(fast: bool = False, criteria=None) -> list[CriterionResult]:
    picked = sorted(criteria) if criteria else sorted(ALL_CRITERIA)
    return [ALL_CRITERIA[c](fast=fast) for c in picked]
