"""Reference Gaussian processes and smooth perturbations.

Exact generators for Brownian motion, two-sided Brownian motion, and
fractional Brownian motion with Hurst index 1/4, plus closed-form smooth
perturbations with computable derivative bounds.  The whole-line solution of
the heat equation is represented through these processes: at a fixed space
point the time section is a scaled H=1/4 fBM plus a smooth process, at a
fixed time the space section is a scaled two-sided Brownian motion plus a
smooth process.  The surrogates below are representation-faithful (exact in
the law that the estimators see), with a user-chosen smooth part.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import rng
from .grids import DomainError, PathSample, UniformGrid
from .spectral import HeatModel

#: largest grid size for the dense-covariance (Cholesky) fBM path
FBM_CHOLESKY_CAP = 4096


def brownian_path(grid: UniformGrid, scale: float, seed: int, axis: str = "x") -> PathSample:
    """Brownian path with Var(B(x)-B(y)) = scale^2 |x-y| on the grid.

    Exact independent Gaussian increments.  Starts at 0 when grid.a == 0;
    otherwise the start is anchored by an independent N(0, scale^2 |a|) draw
    (two-sided convention).
    """
    if not scale > 0:
        raise DomainError("need scale > 0")
    gen = rng.substream(seed, rng.TAG_BROWNIAN)
    z = gen.standard_normal(grid.m + 1)
    vals = np.empty(grid.m + 1)
    vals[0] = 0.0 if grid.a == 0 else scale * np.sqrt(abs(grid.a)) * z[0]
    steps = scale * np.sqrt(grid.mesh) * z[1:]
    vals[1:] = vals[0] + np.cumsum(steps)
    return PathSample(grid, vals, axis=axis)


def fbm_increment_covariance(j, hurst: float):
    """Covariance of unit-spaced fractional Gaussian noise at lag j."""
    j = np.abs(np.asarray(j, dtype=np.float64))
    return 0.5 * ((j + 1) ** (2 * hurst) + np.abs(j - 1) ** (2 * hurst) - 2 * j ** (2 * hurst))


def fgn_exact(n: int, hurst: float, gen: np.random.Generator) -> np.ndarray:
    """Exact unit-spaced fractional Gaussian noise via circulant embedding.

    The length-2n circulant embedding of the fGn covariance has nonnegative
    eigenvalues for hurst <= 1/2 (always true in this package's usage), in
    which case the synthesized noise is exact in law.
    """
    if not 0 < hurst < 1:
        raise DomainError("hurst must lie in (0, 1)")
    r = fbm_increment_covariance(np.arange(n), hurst)
    cvec = np.concatenate([r, [0.0], r[-1:0:-1]])
    ev = np.fft.fft(cvec).real
    if ev.min() < -1e-9:
        raise DomainError(
            f"circulant embedding not nonnegative (min eigenvalue {ev.min():.3e}); "
            "use the cholesky method"
        )
    ev = np.maximum(ev, 0.0)
    w = np.zeros(2 * n, dtype=complex)
    w[0] = gen.standard_normal()
    w[n] = gen.standard_normal()
    v = gen.standard_normal((n - 1, 2))
    w[1:n] = (v[:, 0] + 1j * v[:, 1]) / np.sqrt(2.0)
    w[n + 1 :] = np.conj(w[1:n][::-1])
    return np.fft.ifft(np.sqrt(ev) * w).real[:n] * np.sqrt(2 * n)


@dataclass(frozen=True)
class FbmSpec:
    """Fractional Brownian path request: Hurst index, grid, seed, method.

    method: "auto" picks the dense-covariance factorization up to
    FBM_CHOLESKY_CAP subintervals and circulant embedding beyond.
    """

    hurst: float
    grid: UniformGrid
    seed: int
    method: str = "auto"

    def __post_init__(self):
        if not 0 < self.hurst < 1:
            raise DomainError("hurst must lie in (0, 1)")
        if self.grid.a < 0:
            raise DomainError("fbm grids start at a >= 0")
        if self.method not in ("auto", "cholesky", "circulant"):
            raise DomainError("method must be auto, cholesky, or circulant")


def fbm_path(spec: FbmSpec, axis: str = "t") -> PathSample:
    """Exact fractional Brownian path on the grid.

    cholesky: factorizes the full covariance 0.5(|s|^2H + |t|^2H - |t-s|^2H)
    on the grid points, so the joint law (including the anchor value at
    grid.a > 0) is exact; fails with a DomainError if the factorization
    loses positive-definiteness.

    circulant: exact increment law via circulant embedding (self-similar
    rescaling of unit-spaced fGn); the path is pinned to 0 at the left
    endpoint, which for grid.a > 0 discards the anchor B(a).  Increments,
    and hence every power-variation statistic, keep the exact law.
    """
    method = spec.method
    if method == "auto":
        method = "cholesky" if spec.grid.m <= FBM_CHOLESKY_CAP else "circulant"
    gen = rng.substream(spec.seed, rng.TAG_FBM)
    grid = spec.grid
    if method == "circulant":
        incs = fgn_exact(grid.m, spec.hurst, gen) * grid.mesh**spec.hurst
        vals = np.concatenate([[0.0], np.cumsum(incs)])
        return PathSample(grid, vals, axis=axis)
    pts = grid.points
    start = 1 if grid.a == 0 else 0  # B(0) = 0 exactly; factor the rest
    sub = pts[start:]
    h2 = 2 * spec.hurst
    cov = 0.5 * (
        np.abs(sub[:, None]) ** h2 + np.abs(sub[None, :]) ** h2
        - np.abs(sub[:, None] - sub[None, :]) ** h2
    )
    try:
        L = np.linalg.cholesky(cov)
    except np.linalg.LinAlgError as exc:
        raise DomainError(
            "fbm covariance factorization lost positive-definiteness; "
            "grid too large for the exact path (use circulant)"
        ) from exc
    vals = np.zeros(grid.m + 1)
    vals[start:] = L @ gen.standard_normal(sub.size)
    return PathSample(grid, vals, axis=axis)


# ---------------------------------------------------------------------------
# smooth perturbations
# ---------------------------------------------------------------------------


class PerturbationKind(Enum):
    POLYNOMIAL = "polynomial"
    TRIG_SERIES = "trig_series"
    EXP_DECAY_SERIES = "exp_decay_series"


@dataclass(frozen=True)
class SmoothPerturbation:
    """Deterministic C^infinity function from one of three parametric families.

    polynomial:        Y(s) = sum_i c_i s^i
    trig_series:       Y(s) = sum_i c_i sin((i+1) s)
    exp_decay_series:  Y(s) = sum_i c_i exp(-(i+1) s)

    All have derivative bounds computable from the coefficients (see
    ``derivative_bound``), which the perturbation-invariance checks rely on.
    """

    kind: PerturbationKind
    coefficients: tuple

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not all(np.isfinite(coeffs)):
            raise DomainError("coefficients must be finite")
        object.__setattr__(self, "coefficients", coeffs)

    @staticmethod
    def zero() -> "SmoothPerturbation":
        return SmoothPerturbation(PerturbationKind.POLYNOMIAL, (0.0,))

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=np.float64)
        c = np.asarray(self.coefficients)
        if self.kind is PerturbationKind.POLYNOMIAL:
            return np.polynomial.polynomial.polyval(s, c)
        i = np.arange(1, c.size + 1, dtype=np.float64)
        if self.kind is PerturbationKind.TRIG_SERIES:
            return np.sin(np.outer(s, i)) @ c
        return np.exp(-np.outer(s, i)) @ c

    def derivative_bound(self, order: int, interval: tuple[float, float]) -> float:
        """Upper bound for sup |Y^(order)| on [lo, hi], from the coefficients."""
        lo, hi = float(interval[0]), float(interval[1])
        if not lo <= hi:
            raise DomainError("need lo <= hi")
        c = np.abs(np.asarray(self.coefficients))
        if self.kind is PerturbationKind.POLYNOMIAL:
            s = max(abs(lo), abs(hi))
            total = 0.0
            for i, ci in enumerate(c):
                if i >= order:
                    fac = np.prod(np.arange(i - order + 1, i + 1, dtype=np.float64))
                    total += ci * fac * s ** (i - order)
            return float(total)
        i = np.arange(1, c.size + 1, dtype=np.float64)
        if self.kind is PerturbationKind.TRIG_SERIES:
            return float(np.sum(c * i**order))
        if lo < 0:
            raise DomainError("exp_decay_series bounds need interval in [0, inf)")
        return float(np.sum(c * i**order * np.exp(-i * lo)))


def smooth_path(pert: SmoothPerturbation, grid: UniformGrid, axis: str = "x") -> PathSample:
    """Deterministic evaluation of the perturbation on the grid."""
    return PathSample(grid, pert(grid.points), axis=axis)


# ---------------------------------------------------------------------------
# whole-line solution surrogates
# ---------------------------------------------------------------------------


def wholeline_time_section(model: HeatModel, pert: SmoothPerturbation,
                           grid: UniformGrid, seed: int) -> PathSample:
    """Whole-line solution at a fixed space point, as a time path on [c, d].

    Law-level surrogate sigma/(theta pi)^{1/4} * B^{1/4}(t) + Y(t): the
    fixed-point time section of the whole-line solution is exactly a scaled
    Hurst-1/4 fBM plus a smooth process, and every estimator in this package
    depends on the section only through that representation.  The smooth
    part is the supplied perturbation (the true smooth remainder has no
    constructive form), so outputs are representation-faithful rather than
    path-faithful.  Uses the circulant fBM path (exact increment law, left
    endpoint pinned to 0), which is what the increment functionals see;
    grids may start at 0.
    """
    if grid.a < 0:
        raise DomainError("time sections need c >= 0")
    spec = FbmSpec(0.25, grid, seed, method="circulant")
    rough = fbm_path(spec, axis="t")
    scale = model.sigma / (model.theta * np.pi) ** 0.25
    return PathSample(grid, scale * rough.values + pert(grid.points), axis="t")


def wholeline_space_section(model: HeatModel, pert: SmoothPerturbation,
                            grid: UniformGrid, seed: int) -> PathSample:
    """Whole-line solution at a fixed time, as a space path on [a, b].

    Surrogate sigma/sqrt(2 theta) * B(x) + R(x) with B a (two-sided)
    Brownian motion and R the supplied smooth perturbation; same
    representation-faithfulness caveat as the time section.
    """
    scale = model.sigma / np.sqrt(2.0 * model.theta)
    rough = brownian_path(grid, scale, seed, axis="x")
    return PathSample(grid, rough.values + pert(grid.points), axis="x")
