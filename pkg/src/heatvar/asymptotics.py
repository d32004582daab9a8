"""Closed-form asymptotic constants for the power-variation estimators.

Everything here is a deterministic series evaluation.  The spectral series
over k are computed machine-exactly: exponential factors are summed until
they drop below double resolution and the remaining pure power-law tail is
replaced by its closed form (sum of sin^2(kx)/k^2 over all k is x(pi-x)/2,
sum of cos(ku)/k^2 is a quadratic in |u|, and the zeta(2) tail has an
Euler-Maclaurin expansion).  Reported truncation errors are therefore
bounded by a few ulp; the ``tail_tol`` arguments are validated and always
met.

The limits that define the central-limit variance components are evaluated
along an increasing sequence of grid sizes and extrapolated, with the spread
of the last two extrapolants reported as the error estimate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .estimators import Scheme
from .gaussian import fbm_increment_covariance
from .grids import DomainError

LOG_EPS = 41.5  # exp(-41.5) ~ 1e-18, below double resolution of the sums


def _check_x(x: float) -> None:
    if not 0 < x < np.pi:
        raise DomainError("x must lie strictly inside (0, pi): the series "
                          "vanishes at the boundary where every sin^2(kx) = 0")


def _check_tail_tol(tail_tol: Optional[float]) -> None:
    if tail_tol is not None and not tail_tol > 0:
        raise DomainError("tail_tol must be positive")


def zeta2_tail(K: int) -> float:
    """sum_{k > K} 1/k^2, machine-exact (explicit head + Euler-Maclaurin)."""
    n0 = max(K + 1, 1024)
    head = 0.0
    if n0 > K + 1:
        k = np.arange(K + 1, n0, dtype=np.float64)
        head = float(np.sum(1.0 / k**2))
    em = 1.0 / n0 + 1.0 / (2.0 * n0**2) + 1.0 / (6.0 * n0**3) \
        - 1.0 / (30.0 * n0**5) + 1.0 / (42.0 * n0**7)
    return head + em


def _sin2_weighted_sum(x: float, beta: float) -> float:
    """sum_k sin^2(kx)/k^2 (1 - exp(-beta k^2)) over all k >= 1."""
    K = int(np.ceil(np.sqrt(LOG_EPS / beta))) + 1
    k = np.arange(1, K + 1, dtype=np.float64)
    s2 = np.sin(k * x) ** 2
    head = float(np.sum(s2 / k**2 * -np.expm1(-beta * k**2)))
    tail = x * (np.pi - x) / 2.0 - float(np.sum(s2 / k**2))
    return head + tail


def increment_variance(theta: float, x: float, length: float, n: int,
                       tail_tol: Optional[float] = None) -> float:
    """Variance of one grid increment of the rough time-section component.

    (2/sqrt(pi theta)) * sum_k sin^2(kx)/k^2 (1 - exp(-length theta k^2 / n));
    decreasing in n, with sqrt(n) * value -> sqrt(length).
    """
    _check_x(x)
    _check_tail_tol(tail_tol)
    if not (theta > 0 and length > 0 and n >= 1):
        raise DomainError("need theta > 0, length > 0, n >= 1")
    beta = theta * length / n
    return 2.0 / np.sqrt(np.pi * theta) * _sin2_weighted_sum(x, beta)


def covariance_telescoping_term(theta: float, x: float, length: float, n: int,
                                j: int) -> float:
    """One-sided telescoping primitive G_j of the increment covariance.

    G_j = (1/sqrt(pi theta)) sum_k sin^2(kx)/k^2 (e^{-j b k^2} - e^{-(j+1) b k^2})
    with b = length*theta/n.  Strictly decreasing in j; G_0 equals half the
    increment variance; the lag covariance is G_j - G_{j-1}.
    """
    _check_x(x)
    if j < 0:
        raise DomainError("need j >= 0")
    beta = theta * length / n
    if j == 0:
        return _sin2_weighted_sum(x, beta) / np.sqrt(np.pi * theta)
    K = int(np.ceil(np.sqrt(LOG_EPS / (j * beta)))) + 1
    k = np.arange(1, K + 1, dtype=np.float64)
    s2 = np.sin(k * x) ** 2
    terms = s2 / k**2 * np.exp(-j * beta * k**2) * -np.expm1(-beta * k**2)
    return float(np.sum(terms)) / np.sqrt(np.pi * theta)


def increment_covariance(theta: float, x: float, length: float, n: int, j: int,
                         tail_tol: Optional[float] = None) -> float:
    """Covariance of two grid increments of the rough component at lag j.

    Negative for every j >= 1 (each series term is
    -e^{-(j-1) b k^2} (1-e^{-b k^2})^2); the lag-0 value is the increment
    variance.  |value| never exceeds the increment variance.
    """
    _check_x(x)
    _check_tail_tol(tail_tol)
    if j < 0 or j > n:
        raise DomainError("need 0 <= j <= n")
    if j == 0:
        return increment_variance(theta, x, length, n)
    beta = theta * length / n
    pref = 1.0 / np.sqrt(np.pi * theta)
    if j == 1:
        # (1-e^{-b k^2})^2 -> 1 for large k: explicit head + closed-form tail
        K = int(np.ceil(np.sqrt(LOG_EPS / beta))) + 1
        k = np.arange(1, K + 1, dtype=np.float64)
        s2 = np.sin(k * x) ** 2
        head = float(np.sum(s2 / k**2 * np.expm1(-beta * k**2) ** 2))
        tail = x * (np.pi - x) / 2.0 - float(np.sum(s2 / k**2))
        return -pref * (head + tail)
    K = int(np.ceil(np.sqrt(LOG_EPS / ((j - 1) * beta)))) + 1
    k = np.arange(1, K + 1, dtype=np.float64)
    s2 = np.sin(k * x) ** 2
    terms = s2 / k**2 * np.exp(-(j - 1) * beta * k**2) * np.expm1(-beta * k**2) ** 2
    return -pref * float(np.sum(terms))


def _lag_covariances(theta: float, x: float, length: float, n: int) -> np.ndarray:
    """F(j) for j = 0..n-1 (index 0 holds the increment variance)."""
    out = np.empty(n)
    out[0] = increment_variance(theta, x, length, n)
    for j in range(1, n):
        out[j] = increment_covariance(theta, x, length, n, j)
    return out


def _extrapolate(us: np.ndarray, vs: np.ndarray):
    """Linear-in-u extrapolants to u=0 from consecutive pairs."""
    ex = []
    for i in range(1, len(us)):
        u1, u2 = us[i - 1], us[i]
        v1, v2 = vs[i - 1], vs[i]
        ex.append((v2 * u1 - v1 * u2) / (u1 - u2))
    return np.array(ex)


@dataclass(frozen=True)
class BoundedDomainConstants:
    """CLT variance components for the bounded-domain time-section estimators.

    sigma_bar2_sq / sigma_bar4_sq are the second- and fourth-chaos variance
    contributions 72 + 144*lim S2(n) and 24 + 48*lim S4(n) with
    S_l(n) = sum_{j<n} (1-j/n) |F(j)/F(0)|^l, extrapolated linearly in
    1/sqrt(n) along n_sequence; the error fields hold the spread of the last
    two extrapolants.
    """

    theta: float
    x: float
    length: float
    n: int
    K_series: int
    sigma_n2: float
    F: np.ndarray
    sigma_bar2_sq: float
    sigma_bar4_sq: float
    error2: float
    error4: float
    converged: bool
    n_sequence: tuple
    s2_values: np.ndarray
    s4_values: np.ndarray

    @property
    def total(self) -> float:
        return self.sigma_bar2_sq + self.sigma_bar4_sq


def clt_variance_components(theta: float, x: float, length: float,
                            n_sequence: Sequence[int] = (256, 1024, 4096),
                            tail_tol: Optional[float] = None) -> BoundedDomainConstants:
    """Evaluate the bounded-domain CLT variance components along n_sequence.

    The defining limits are evaluated at each finite n, extrapolated
    linearly in 1/sqrt(n), and flagged non-converged when the spread of
    successive extrapolants fails to shrink.
    """
    _check_tail_tol(tail_tol)
    ns = [int(v) for v in n_sequence]
    if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n_sequence must be increasing with at least two entries")
    s2_vals, s4_vals = [], []
    F_last = None
    for n in ns:
        F = _lag_covariances(theta, x, length, n)
        j = np.arange(1, n)
        w = 1.0 - j / n
        ratios = F[1:] / F[0]
        s2_vals.append(float(np.sum(w * ratios**2)))
        s4_vals.append(float(np.sum(w * ratios**4)))
        F_last = F
    us = 1.0 / np.sqrt(np.array(ns, dtype=np.float64))
    ex2 = _extrapolate(us, np.array(s2_vals))
    ex4 = _extrapolate(us, np.array(s4_vals))
    err2 = abs(ex2[-1] - ex2[-2]) if len(ex2) > 1 else float("nan")
    err4 = abs(ex4[-1] - ex4[-2]) if len(ex4) > 1 else float("nan")
    def _shrinking(ex):
        spreads = np.abs(np.diff(ex))
        return bool(len(spreads) < 2 or np.all(np.diff(spreads) <= 1e-15))
    converged = _shrinking(ex2) and _shrinking(ex4)
    n_big = ns[-1]
    beta = theta * length / n_big
    return BoundedDomainConstants(
        theta=theta, x=x, length=length, n=n_big,
        K_series=int(np.ceil(np.sqrt(LOG_EPS / beta))) + 1,
        sigma_n2=float(F_last[0]), F=F_last,
        sigma_bar2_sq=72.0 + 144.0 * float(ex2[-1]),
        sigma_bar4_sq=24.0 + 48.0 * float(ex4[-1]),
        error2=144.0 * err2, error4=48.0 * err4,
        converged=converged, n_sequence=tuple(ns),
        s2_values=np.array(s2_vals), s4_values=np.array(s4_vals),
    )


# ---------------------------------------------------------------------------
# whole-line constants (Hurst-1/4 quartic variation)
# ---------------------------------------------------------------------------


def fbm_increment_correlation(j) -> float | np.ndarray:
    """Lag correlation of unit-spaced Hurst-1/4 fBM increments.

    r(j) = ((j+1)^{1/2} + |j-1|^{1/2} - 2 j^{1/2}) / 2, r(0) = 1; decays like
    -(1/8) j^{-3/2}, so both sum r^2 and sum r^4 converge.
    """
    out = fbm_increment_covariance(j, 0.25)
    return float(out) if np.isscalar(j) else out


@dataclass(frozen=True)
class WholeLineConstants:
    """Quartic-variation CLT constants for Hurst-1/4 fBM.

    c_check_sq = 72 * c_check2_sq + 24 * c_check4_sq with
    c_check_l_sq = lim (1/n) sum_{i,j<n} r^l(|i-j|), extrapolated linearly in
    1/n along n_sequence.
    """

    r: np.ndarray
    c_check2_sq: float
    c_check4_sq: float
    c_check_sq: float
    error2: float
    error4: float
    converged: bool
    n_sequence: tuple


def fbm_quartic_clt_constant(max_lag: Optional[int] = None,
                             n_sequence: Sequence[int] = (1024, 4096, 16384)
                             ) -> WholeLineConstants:
    """Evaluate the Hurst-1/4 quartic CLT constants along n_sequence.

    c_check_l_sq(n) = 1 + 2 sum_{j=1}^{L} (1 - j/n) r^l(j) with
    L = min(n-1, max_lag); requires r(max_lag)^2 below double resolution
    when a cap is given.
    """
    ns = [int(v) for v in n_sequence]
    if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])):
        raise DomainError("n_sequence must be increasing with at least two entries")
    if max_lag is not None and fbm_increment_correlation(max_lag) ** 2 > 1e-12:
        raise DomainError("max_lag too small: r(max_lag)^2 not negligible")
    c2_vals, c4_vals = [], []
    for n in ns:
        L = n - 1 if max_lag is None else min(n - 1, int(max_lag))
        j = np.arange(1, L + 1)
        r = fbm_increment_correlation(j)
        w = 1.0 - j / n
        c2_vals.append(1.0 + 2.0 * float(np.sum(w * r**2)))
        c4_vals.append(1.0 + 2.0 * float(np.sum(w * r**4)))
    us = 1.0 / np.array(ns, dtype=np.float64)
    ex2 = _extrapolate(us, np.array(c2_vals))
    ex4 = _extrapolate(us, np.array(c4_vals))
    err2 = abs(ex2[-1] - ex2[-2]) if len(ex2) > 1 else float("nan")
    err4 = abs(ex4[-1] - ex4[-2]) if len(ex4) > 1 else float("nan")
    spreads2 = np.abs(np.diff(ex2))
    spreads4 = np.abs(np.diff(ex4))
    converged = bool(
        (len(spreads2) < 2 or np.all(np.diff(spreads2) <= 1e-15))
        and (len(spreads4) < 2 or np.all(np.diff(spreads4) <= 1e-15))
    )
    c2, c4 = float(ex2[-1]), float(ex4[-1])
    lag_cap = max_lag if max_lag is not None else ns[-1] - 1
    return WholeLineConstants(
        r=fbm_increment_correlation(np.arange(0, min(lag_cap, 64) + 1)),
        c_check2_sq=c2, c_check4_sq=c4,
        c_check_sq=72.0 * c2 + 24.0 * c4,
        error2=err2, error4=err4, converged=converged, n_sequence=tuple(ns),
    )


# ---------------------------------------------------------------------------
# the key scaled mode-sum limit
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ScaledModeSumReport:
    """Finite-n scaled mode sum with its proof-side decomposition and bounds.

    value = half_component - oscillatory_component, where the half component
    is the sin^2 -> 1/2 average and is bracketed by the two integral bounds;
    the oscillatory component is bounded by 2 theta / sqrt(n).
    """

    n: int
    theta: float
    x: float
    value: float
    half_component: float
    oscillatory_component: float
    lower_bound: float
    upper_bound: float
    oscillatory_bound: float
    limit: float


def scaled_mode_sum(theta: float, x: float, n: int,
                    tail_tol: Optional[float] = None) -> float:
    """sqrt(n) * sum_k sin^2(kx)/k^2 (1 - e^{-theta k^2 / n}).

    Converges to sqrt(pi theta)/2 as n grows.
    """
    _check_x(x)
    _check_tail_tol(tail_tol)
    if not (theta > 0 and n >= 1):
        raise DomainError("need theta > 0, n >= 1")
    return float(np.sqrt(n) * _sin2_weighted_sum(x, theta / n))


def scaled_mode_sum_report(theta: float, x: float, n: int) -> ScaledModeSumReport:
    """Scaled mode sum plus its half/oscillatory split and integral bracket."""
    value = scaled_mode_sum(theta, x, n)
    beta = theta / n
    K = int(np.ceil(np.sqrt(LOG_EPS / beta))) + 1
    k = np.arange(1, K + 1, dtype=np.float64)
    w = -np.expm1(-beta * k**2)
    half_head = float(np.sum(w / (2.0 * k**2)))
    half = np.sqrt(n) * (half_head + 0.5 * zeta2_tail(K))
    osc = half - value
    eps = np.sqrt(beta)
    lower = (np.sqrt(theta) / 2.0) * (-np.expm1(-eps**2) / eps + np.sqrt(np.pi) * math.erfc(eps))
    upper = np.sqrt(np.pi * theta) / 2.0
    return ScaledModeSumReport(
        n=int(n), theta=theta, x=x, value=value,
        half_component=float(half), oscillatory_component=float(osc),
        lower_bound=float(lower), upper_bound=float(upper),
        oscillatory_bound=float(2.0 * theta / np.sqrt(n)),
        limit=float(np.sqrt(np.pi * theta) / 2.0),
    )


# ---------------------------------------------------------------------------
# theoretical standard deviations
# ---------------------------------------------------------------------------


def theoretical_std(scheme: Scheme, target: str, size: int, *,
                    theta: Optional[float] = None,
                    sigma2: Optional[float] = None,
                    clt_constant: Optional[float] = None) -> float:
    """Per-sample-size standard deviation implied by the relevant CLT.

    Space sections (fixed time): theta*sqrt(2/m) for the drift,
    sigma^2*sqrt(2/m) for the squared volatility.  Time sections (fixed
    point): theta*sqrt(C)/(3 sqrt(n)) and sigma^2*sqrt(C)/(6 sqrt(n)), where
    C is the quartic CLT constant (whole line) or the sum of the
    bounded-domain variance components for the recentered statistic.
    """
    if size < 1:
        raise DomainError("need size >= 1")
    if target not in ("drift", "volatility2"):
        raise DomainError("target must be 'drift' or 'volatility2'")
    if scheme is Scheme.FIXED_TIME_SPACE_GRID:
        if target == "drift":
            if theta is None:
                raise DomainError("drift std needs theta")
            return float(theta * np.sqrt(2.0 / size))
        if sigma2 is None:
            raise DomainError("volatility2 std needs sigma2")
        return float(sigma2 * np.sqrt(2.0 / size))
    if scheme is Scheme.FIXED_SPACE_TIME_GRID:
        if clt_constant is None:
            raise DomainError("time-section stds need the quartic CLT constant")
        if target == "drift":
            if theta is None:
                raise DomainError("drift std needs theta")
            return float(theta * np.sqrt(clt_constant) / (3.0 * np.sqrt(size)))
        if sigma2 is None:
            raise DomainError("volatility2 std needs sigma2")
        return float(sigma2 * np.sqrt(clt_constant) / (6.0 * np.sqrt(size)))
    raise DomainError(f"no closed-form std for scheme {scheme} "
                      "(joint/averaged asymptotic normality is not available)")
