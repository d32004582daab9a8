"""Power-variation estimators of the drift and the squared volatility.

Four single-section families plus their combinations:

* time section at a fixed space point (quartic variation, p=4): drift from a
  known volatility, or squared volatility from a known drift;
* space section at a fixed time (quadratic variation, p=2): same pair;
* joint estimation from one time section and one space section (neither
  parameter known);
* space-time averaged estimators: the plain mean of single-section estimates
  across sections.

Degenerate zero-variation inputs raise instead of producing infinities: they
occur with probability zero under the model, so they signal caller bugs.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence

import numpy as np

from . import _backend
from .grids import DegenerateSampleError, DomainError, PathSample, power_variation


class Scheme(Enum):
    FIXED_SPACE_TIME_GRID = "fixed_space_time_grid"  # one x, fine time grid
    FIXED_TIME_SPACE_GRID = "fixed_time_space_grid"  # one t, fine space grid
    JOINT = "joint"
    SPACE_TIME_AVERAGED = "space_time_averaged"


@dataclass(frozen=True)
class EstimateReport:
    """Point estimate with grid size, sampling scheme, and (when a CLT is
    available) the theoretical asymptotic standard deviation, evaluated with
    the estimate plugged in for the unknown parameter."""

    estimate: float
    n_or_m: int
    scheme: Scheme
    theoretical_std: Optional[float] = None
    known_parameter: float = float("nan")

    def csv_row(self) -> str:
        std = "" if self.theoretical_std is None else f"{self.theoretical_std:.17g}"
        return (
            f"{self.scheme.value},{self.n_or_m},{self.estimate:.17g},"
            f"{std},{self.known_parameter:.17g}"
        )

    @staticmethod
    def csv_header() -> str:
        return "scheme,n_or_m,estimate,theoretical_std,known_parameter"

    def to_csv(self, path_or_buf) -> None:
        text = self.csv_header() + "\n" + self.csv_row() + "\n"
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)


def _positive_variation(sample: PathSample, p: float) -> float:
    v = power_variation(sample, p)
    if v <= 0.0:
        raise DegenerateSampleError(
            f"zero p={p} variation: estimator undefined on a constant path"
        )
    return v


def drift_from_time_section(time_section: PathSample, sigma: float,
                            clt_constant: Optional[float] = None) -> EstimateReport:
    """Drift estimate from quartic variation along a time section.

    estimate = 3 (d-c) sigma^4 / (pi V4).  With ``clt_constant`` (the
    whole-line quartic CLT constant from heatvar.asymptotics) the report
    carries the plug-in standard deviation estimate * sqrt(constant)/(3 sqrt(n)).
    """
    if not sigma > 0:
        raise DomainError("need sigma > 0")
    v4 = _positive_variation(time_section, 4)
    n = time_section.grid.m
    est = 3.0 * time_section.grid.length * sigma**4 / (np.pi * v4)
    std = None if clt_constant is None else est * np.sqrt(clt_constant) / (3.0 * np.sqrt(n))
    return EstimateReport(est, n, Scheme.FIXED_SPACE_TIME_GRID, std, sigma)


def volatility2_from_time_section(time_section: PathSample, theta: float,
                                  clt_constant: Optional[float] = None) -> EstimateReport:
    """Squared-volatility estimate from quartic variation along a time section.

    estimate = sqrt(theta pi V4 / (3 (d-c))); plug-in standard deviation
    estimate * sqrt(constant)/(6 sqrt(n)) when the CLT constant is supplied.
    """
    if not theta > 0:
        raise DomainError("need theta > 0")
    v4 = _positive_variation(time_section, 4)
    n = time_section.grid.m
    est = float(np.sqrt(theta * np.pi * v4 / (3.0 * time_section.grid.length)))
    std = None if clt_constant is None else est * np.sqrt(clt_constant) / (6.0 * np.sqrt(n))
    return EstimateReport(est, n, Scheme.FIXED_SPACE_TIME_GRID, std, theta)


def drift_from_space_section(space_section: PathSample, sigma: float) -> EstimateReport:
    """Drift estimate from quadratic variation along a space section.

    estimate = (b-a) sigma^2 / (2 V2); asymptotic std is estimate*sqrt(2/m).
    """
    if not sigma > 0:
        raise DomainError("need sigma > 0")
    v2 = _positive_variation(space_section, 2)
    m = space_section.grid.m
    est = space_section.grid.length * sigma**2 / (2.0 * v2)
    return EstimateReport(est, m, Scheme.FIXED_TIME_SPACE_GRID,
                          est * np.sqrt(2.0 / m), sigma)


def volatility2_from_space_section(space_section: PathSample, theta: float) -> EstimateReport:
    """Squared-volatility estimate from quadratic variation along a space section.

    estimate = 2 theta V2 / (b-a); asymptotic std is estimate*sqrt(2/m).
    """
    if not theta > 0:
        raise DomainError("need theta > 0")
    v2 = _positive_variation(space_section, 2)
    m = space_section.grid.m
    est = 2.0 * theta * v2 / space_section.grid.length
    return EstimateReport(est, m, Scheme.FIXED_TIME_SPACE_GRID,
                          est * np.sqrt(2.0 / m), theta)


def joint_drift_volatility2(time_section: PathSample, space_section: PathSample
                            ) -> tuple[EstimateReport, EstimateReport]:
    """Joint estimates of drift and squared volatility, neither known.

    Combines the quartic variation of a time section (which identifies
    sigma^4/theta) with the quadratic variation of a space section (which
    identifies sigma^2/theta):

        drift       = pi (b-a)^2 V4 / (12 (d-c) V2^2)
        volatility2 = pi (b-a)   V4 / (6 (d-c) V2)

    No theoretical_std: the joint asymptotic distribution is not available
    (only consistency).  Reports carry the time-section size.
    """
    v4 = _positive_variation(time_section, 4)
    v2 = _positive_variation(space_section, 2)
    dc = time_section.grid.length
    ba = space_section.grid.length
    n = time_section.grid.m
    theta_bar = np.pi * ba**2 * v4 / (12.0 * dc * v2**2)
    sigma2_bar = np.pi * ba * v4 / (6.0 * dc * v2)
    return (
        EstimateReport(theta_bar, n, Scheme.JOINT),
        EstimateReport(sigma2_bar, n, Scheme.JOINT),
    )


_SINGLE = {
    (Scheme.FIXED_SPACE_TIME_GRID, "drift"): drift_from_time_section,
    (Scheme.FIXED_SPACE_TIME_GRID, "volatility2"): volatility2_from_time_section,
    (Scheme.FIXED_TIME_SPACE_GRID, "drift"): drift_from_space_section,
    (Scheme.FIXED_TIME_SPACE_GRID, "volatility2"): volatility2_from_space_section,
}


def averaged_estimate(sections: Sequence[PathSample], scheme: Scheme, target: str,
                      known_parameter: float,
                      weights: Optional[Sequence[float]] = None) -> EstimateReport:
    """Mean of single-section estimates across sections of a space-time grid.

    ``scheme`` names the per-section estimator family and ``target`` the
    estimated parameter ("drift" or "volatility2").  Plain arithmetic mean
    by default (weights are exposed but off); summation is compensated and
    runs in section-index order, so the result is deterministic.  Any
    degenerate section fails the whole call.
    """
    if len(sections) < 1:
        raise DomainError("need at least one section")
    if (scheme, target) not in _SINGLE:
        raise DomainError(f"no single-section estimator for ({scheme}, {target})")
    g0 = sections[0].grid
    for s in sections[1:]:
        if (s.grid.a, s.grid.b, s.grid.m) != (g0.a, g0.b, g0.m):
            raise DomainError("all sections must share one grid")
    if weights is not None:
        w = np.asarray(weights, dtype=np.float64)
        if w.shape != (len(sections),) or np.any(w < 0) or w.sum() <= 0:
            raise DomainError("weights must be nonnegative, one per section")
        w = w / w.sum()
    else:
        w = np.full(len(sections), 1.0 / len(sections))
    fn = _SINGLE[(scheme, target)]
    per_section = np.array([fn(s, known_parameter).estimate for s in sections])
    est = float(_backend.neumaier_sum(w * per_section))
    return EstimateReport(est, g0.m, Scheme.SPACE_TIME_AVERAGED, None, known_parameter)
