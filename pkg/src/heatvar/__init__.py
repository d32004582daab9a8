"""heatvar: simulation and power-variation inference for the 1D stochastic
heat equation with additive space-time white noise.

Spectral (Fourier-mode) simulation with exact Ornstein-Uhlenbeck transitions
and exact spectral-tail completion; estimators of the drift and the squared
volatility from discrete time- or space-sampled observations; closed-form
asymptotic-variance constants; a Monte Carlo harness reproducing the
reference experiments.
"""

from ._backend import BACKEND
from .asymptotics import (
    BoundedDomainConstants,
    WholeLineConstants,
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
from .estimators import (
    EstimateReport,
    Scheme,
    averaged_estimate,
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
    fgn_exact,
    smooth_path,
    wholeline_space_section,
    wholeline_time_section,
)
from .grids import (
    DegenerateSampleError,
    DomainError,
    PathSample,
    UniformGrid,
    increments,
    power_variation,
    uniform_grid,
)
from .mc import ExperimentConfig, McSummary, load_config, parse_config, run_experiment
from .spectral import (
    Domain,
    FixedTimeSampler,
    HeatModel,
    SpectralState,
    default_mode_count,
    eigenfunction,
    evaluate_at_x,
    fixed_time_covariance,
    mode_variance,
    sample_fixed_time,
    sample_space_time,
    sample_time_section,
    simulate_modes,
    tail_variance,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
