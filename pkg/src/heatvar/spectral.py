"""Spectral simulation of the additive-noise heat equation on (0, pi).

The zero-initial-data solution with Dirichlet boundary expands over the
Laplacian eigenfunctions sqrt(2/pi) sin(kx); each coefficient is an
independent Ornstein-Uhlenbeck process with rate theta*k^2 driven at
intensity sigma.  Time stepping always uses the exact OU transition
(exponential decay plus exact conditional noise variance), so sampled
marginals carry no time-discretization bias.

Truncation policy.  Storing modes truncates the expansion at K = model.modes;
the *section samplers* additionally complete the spectral tail k > K in law:

* at a fixed time, the tail of the mode sum is a Gaussian field whose
  covariance has the closed form (sigma^2/2theta)(min(x,y) - xy/pi - head),
  sampled exactly through a one-time Cholesky factor of the tail covariance;
* along a fine time grid at a fixed point, every mode with
  theta k^2 dt >= LOG_EPS decorrelates within a single step to below double
  resolution, so the aggregated tail contributes one independent draw per
  grid time with an exactly known variance.

Both completions are exact in law to double precision, which makes the
sampled sections free of spectral-truncation bias for any K.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import _backend, rng
from .grids import DomainError, PathSample, UniformGrid

# -log eps used to size truncations so dropped terms are below double
# resolution (exp(-41.5) ~ 1e-18).
LOG_EPS = 41.5


class Domain(Enum):
    BOUNDED_0_PI = "bounded_0_pi"
    WHOLE_LINE = "whole_line"


@dataclass(frozen=True)
class HeatModel:
    """Heat-equation parameters: drift theta, volatility sigma, domain, and
    spectral truncation level for stored states."""

    theta: float
    sigma: float
    domain: Domain = Domain.BOUNDED_0_PI
    modes: int = 15000

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta > 0):
            raise DomainError(f"need theta > 0, got {self.theta}")
        if not (np.isfinite(self.sigma) and self.sigma > 0):
            raise DomainError(f"need sigma > 0, got {self.sigma}")
        if int(self.modes) != self.modes or self.modes < 1:
            raise DomainError(f"need modes >= 1, got {self.modes}")
        object.__setattr__(self, "modes", int(self.modes))


def default_mode_count(x: float, rel_tol: float = 1e-6) -> int:
    """Smallest K whose pointwise tail-variance bound sigma^2/(pi theta K)
    is below rel_tol * stationary variance sigma^2/(2 theta) * min(x, pi-x)."""
    if not 0 < x < np.pi:
        raise DomainError("x must lie inside (0, pi)")
    if not rel_tol > 0:
        raise DomainError("rel_tol must be positive")
    return int(np.ceil(2.0 / (np.pi * rel_tol * min(x, np.pi - x))))


def eigenfunction(k: int, x) -> float | np.ndarray:
    """Dirichlet-Laplacian eigenfunction sqrt(2/pi) sin(kx) on [0, pi]."""
    if int(k) != k or k < 1:
        raise DomainError(f"need integer k >= 1, got {k}")
    xa = np.asarray(x, dtype=np.float64)
    if np.any(xa < 0) or np.any(xa > np.pi):
        raise DomainError("x must lie in [0, pi]")
    out = np.sqrt(2.0 / np.pi) * np.sin(int(k) * xa)
    return float(out) if np.isscalar(x) else out


def mode_variance(model: HeatModel, k, t: float):
    """Exact marginal variance sigma^2 (1 - exp(-2 theta k^2 t)) / (2 theta k^2)."""
    k = np.asarray(k, dtype=np.float64)
    lam = model.theta * k**2
    return model.sigma**2 * -np.expm1(-2.0 * lam * t) / (2.0 * lam)


# ---------------------------------------------------------------------------
# closed-form spectral sums
# ---------------------------------------------------------------------------


def _cos_k2_head(K: int, u: np.ndarray, weights=None) -> np.ndarray:
    """sum_{k=1..K} w_k cos(k u) / k^2 with w_k = 1 (or given), vectorized in u."""
    out = np.zeros_like(u, dtype=np.float64)
    chunk = max(1, int(4e6 // max(1, u.size)))
    for k0 in range(1, K + 1, chunk):
        k = np.arange(k0, min(K, k0 + chunk - 1) + 1, dtype=np.float64)
        w = 1.0 / k**2 if weights is None else weights(k) / k**2
        out += np.cos(np.outer(k, u)).T @ w
    return out


def _cos_k2_full(u: np.ndarray) -> np.ndarray:
    """sum_{k>=1} cos(k u)/k^2 = pi^2/6 - pi|u|/2 + u^2/4 for |u| <= 2 pi."""
    au = np.abs(u)
    if np.any(au > 2 * np.pi + 1e-12):
        raise DomainError("closed form valid for |u| <= 2 pi only")
    return np.pi**2 / 6.0 - np.pi * au / 2.0 + au**2 / 4.0


def sin_k2_tail(x: float, K: int) -> float:
    """sum_{k>K} sin^2(kx)/k^2 via the closed-form full sum x(pi-x)/2."""
    k = np.arange(1, K + 1, dtype=np.float64)
    return float(x * (np.pi - x) / 2.0 - np.sum(np.sin(k * x) ** 2 / k**2))


def tail_variance(model: HeatModel, x: float, K: int) -> float:
    """Stationary variance of the discarded spectral tail at position x."""
    return (model.sigma**2 / (2.0 * model.theta)) * (2.0 / np.pi) * sin_k2_tail(x, K)


def _pair_offsets(points: np.ndarray):
    """Offset tables for a uniformly spaced point set.

    Returns (u_diff, u_sum, idx_diff, idx_sum) with x_i - x_j = u_diff[|i-j|]
    and x_i + x_j = u_sum[i+j], so any function of pair differences/sums is
    evaluated at O(npts) arguments instead of O(npts^2).
    """
    p = points.size
    if p > 1:
        d = (points[-1] - points[0]) / (p - 1)
        if not np.allclose(np.diff(points), d, rtol=1e-9, atol=1e-12):
            raise DomainError("pair-offset tables require uniformly spaced points")
    else:
        d = 0.0
    u_diff = d * np.arange(p, dtype=np.float64)
    u_sum = 2.0 * points[0] + d * np.arange(2 * p - 1, dtype=np.float64)
    ar = np.arange(p)
    idx_diff = np.abs(np.subtract.outer(ar, ar))
    idx_sum = np.add.outer(ar, ar)
    return u_diff, u_sum, idx_diff, idx_sum


def _tail_gram(points: np.ndarray, K: int, theta: float, t: float | None) -> np.ndarray:
    """Covariance of the k > K part of the fixed-time field at unit noise scale.

    Entries: min(x,y) - xy/pi - head_K(x,y) - exp-correction(x,y), where the
    head is the k <= K part already carried by the modal draws and the
    correction removes the not-yet-stationary portion of modes
    K < k <= k_exp(t).  ``t=None`` means the tail is already stationary
    (no correction).  The product-to-sum identity reduces the work to two
    1-d cosine sums over O(npts) offsets.
    """
    u_diff, u_sum, idx_diff, idx_sum = _pair_offsets(points)
    uvals = np.concatenate([u_diff, u_sum])
    tail_u = _cos_k2_full(uvals) - _cos_k2_head(K, uvals)
    if t is not None:
        k_exp = int(np.ceil(np.sqrt(LOG_EPS / (2.0 * theta * t))))
        if k_exp > K:
            ks = np.arange(K + 1, k_exp + 1, dtype=np.float64)
            w = np.exp(-2.0 * theta * t * ks**2) / ks**2
            tail_u = tail_u - np.cos(np.outer(ks, uvals)).T @ w
    td, ts = tail_u[: u_diff.size], tail_u[u_diff.size :]
    return (td[idx_diff] - ts[idx_sum]) / np.pi


def _cholesky_psd(mat: np.ndarray) -> np.ndarray:
    """Cholesky with one tiny-jitter retry; raises DomainError if that fails."""
    try:
        return np.linalg.cholesky(mat)
    except np.linalg.LinAlgError:
        jitter = 1e-12 * float(np.max(np.diag(mat)))
        try:
            return np.linalg.cholesky(mat + jitter * np.eye(mat.shape[0]))
        except np.linalg.LinAlgError as exc:
            raise DomainError(
                "covariance factorization lost positive-definiteness"
            ) from exc


# ---------------------------------------------------------------------------
# mode simulation on a time grid
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpectralState:
    """Fourier-mode coefficients u_k(t_i), stored mode-major (K, n+1)."""

    model: HeatModel
    time_grid: UniformGrid
    coeffs: np.ndarray
    seed: int

    def __post_init__(self):
        c = np.ascontiguousarray(self.coeffs, dtype=np.float64)
        if c.shape != (self.model.modes, self.time_grid.m + 1):
            raise DomainError(
                f"coeffs must be (modes, n+1) = "
                f"({self.model.modes}, {self.time_grid.m + 1}), got {c.shape}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)


def _ou_step_params(theta: float, sigma: float, k: np.ndarray, dt: float):
    lam = theta * k**2
    decay = np.exp(-lam * dt)
    step_sd = sigma * np.sqrt(-np.expm1(-2.0 * lam * dt) / (2.0 * lam))
    return decay, step_sd


def simulate_modes(model: HeatModel, time_grid: UniformGrid, seed: int) -> SpectralState:
    """Exact-transition simulation of all K stored modes from zero initial data.

    Mode k consumes its own substream (seed, TAG_MODE, k), so enlarging K
    reproduces the shared modes bit for bit.  Deterministic: identical
    (model, grid, seed) give identical coefficients.
    """
    if model.domain is not Domain.BOUNDED_0_PI:
        raise DomainError("mode simulation requires the bounded domain; "
                          "use the whole-line surrogates in heatvar.gaussian")
    if time_grid.a != 0.0:
        raise DomainError("time grid must start at 0 (zero initial data)")
    K, n = model.modes, time_grid.m
    dt = time_grid.mesh
    coeffs = np.zeros((K, n + 1))
    chunk = max(1, int(8e6 // max(1, n)))
    for k0 in range(1, K + 1, chunk):
        k = np.arange(k0, min(K, k0 + chunk - 1) + 1, dtype=np.float64)
        decay, step_sd = _ou_step_params(model.theta, model.sigma, k, dt)
        z = np.empty((k.size, n))
        for j, kk in enumerate(range(k0, k0 + k.size)):
            z[j] = rng.substream(seed, rng.TAG_MODE, kk).standard_normal(n)
        block = coeffs[k0 - 1 : k0 - 1 + k.size]
        u = np.zeros(k.size)
        for i in range(1, n + 1):
            u = u * decay + step_sd * z[:, i - 1]
            block[:, i] = u
    return SpectralState(model, time_grid, coeffs, int(seed))


def evaluate_at_x(state: SpectralState, x: float) -> PathSample:
    """Evaluate the truncated mode sum at one interior point, for all times.

    The k-sum uses compensated (Neumaier) accumulation in fixed mode order,
    vectorized across time, so the result is independent of chunking.
    """
    if not 0 < x < np.pi:
        raise DomainError("x must lie inside (0, pi)")
    K = state.model.modes
    k = np.arange(1, K + 1, dtype=np.float64)
    hk = np.sqrt(2.0 / np.pi) * np.sin(k * x)
    npts = state.time_grid.m + 1
    s = np.zeros(npts)
    comp = np.zeros(npts)
    for j in range(K):
        term = state.coeffs[j] * hk[j]
        t = s + term
        big = np.abs(s) >= np.abs(term)
        comp += np.where(big, (s - t) + term, (term - t) + s)
        s = t
    return PathSample(state.time_grid, s + comp, axis="t")


# ---------------------------------------------------------------------------
# fixed-time sampler (sampling scheme: one time, fine space grid)
# ---------------------------------------------------------------------------


class FixedTimeSampler:
    """Reusable exact sampler of u(t, .) on a fixed space grid.

    Draws the K stored mode coefficients from their exact Gaussian marginals
    and evaluates the mode sum on the grid; with ``tail="exact"`` (default)
    the k > K remainder is added as one exact Gaussian field draw, so the
    output law is the untruncated solution restricted to the grid.  Boundary
    grid points (x = 0 or pi) carry the exact value 0.

    Stream layout per draw: K modal normals in mode order from substream
    (seed, TAG_SECTION_MODES) -- prefix-stable when K grows -- then one
    normal per interior grid point from (seed, TAG_SECTION_TAIL).
    """

    def __init__(self, model: HeatModel, t: float, space_grid: UniformGrid,
                 tail: str = "exact"):
        if model.domain is not Domain.BOUNDED_0_PI:
            raise DomainError("fixed-time sampling requires the bounded domain")
        if not t > 0:
            raise DomainError("need t > 0")
        if space_grid.a < 0 or space_grid.b > np.pi:
            raise DomainError("space grid must lie within [0, pi]")
        if tail not in ("exact", "none"):
            raise DomainError("tail must be 'exact' or 'none'")
        self.model = model
        self.t = float(t)
        self.grid = space_grid
        self.tail = tail
        pts = space_grid.points
        interior = (pts > 0.0) & (pts < np.pi)
        self._interior = interior
        xi = pts[interior]
        K = model.modes
        k = np.arange(1, K + 1, dtype=np.float64)
        coeff_sd = np.sqrt(mode_variance(model, k, t))
        # modal evaluation matrix, chunked to bound the sin() working set
        self._W = np.empty((K, xi.size))
        chunk = max(1, int(4e6 // max(1, xi.size)))
        for k0 in range(0, K, chunk):
            ks = k[k0 : k0 + chunk]
            self._W[k0 : k0 + chunk] = (
                coeff_sd[k0 : k0 + chunk, None]
                * np.sqrt(2.0 / np.pi)
                * np.sin(np.outer(ks, xi))
            )
        if tail == "exact" and xi.size:
            gram = _tail_gram(xi, K, model.theta, t)
            scale = model.sigma**2 / (2.0 * model.theta)
            self._L = _cholesky_psd(scale * gram)
        else:
            self._L = None

    def draw(self, seed: int) -> PathSample:
        return PathSample(self.grid, self.draw_values(seed), axis="x")

    def draw_values(self, seed: int) -> np.ndarray:
        K = self.model.modes
        xi_modes = rng.substream(seed, rng.TAG_SECTION_MODES).standard_normal(K)
        vals = np.zeros(self.grid.m + 1)
        interior = xi_modes @ self._W
        if self._L is not None:
            z = rng.substream(seed, rng.TAG_SECTION_TAIL).standard_normal(self._L.shape[0])
            interior = interior + self._L @ z
        vals[self._interior] = interior
        return vals

    def mode_draws(self, seed: int) -> np.ndarray:
        """The exact marginal coefficient draws u_k(t) behind ``draw(seed)``."""
        K = self.model.modes
        k = np.arange(1, K + 1, dtype=np.float64)
        xi = rng.substream(seed, rng.TAG_SECTION_MODES).standard_normal(K)
        return np.sqrt(mode_variance(self.model, k, self.t)) * xi

    def draw_values_many(self, seeds) -> np.ndarray:
        """Batched draws, one row per seed, identical streams as ``draw``.

        Same law and same per-seed random streams as repeated ``draw`` calls;
        the modal projection runs as one matrix product per chunk, so values
        may differ from single draws in the last ulp (BLAS association).
        """
        seeds = list(seeds)
        K = self.model.modes
        out = np.zeros((len(seeds), self.grid.m + 1))
        chunk = max(1, int(3.2e7) // max(1, K))
        for r0 in range(0, len(seeds), chunk):
            sub = seeds[r0 : r0 + chunk]
            xi = np.empty((len(sub), K))
            for i, s in enumerate(sub):
                xi[i] = rng.substream(s, rng.TAG_SECTION_MODES).standard_normal(K)
            vals = xi @ self._W
            if self._L is not None:
                ni = self._L.shape[0]
                z = np.empty((len(sub), ni))
                for i, s in enumerate(sub):
                    z[i] = rng.substream(s, rng.TAG_SECTION_TAIL).standard_normal(ni)
                vals += z @ self._L.T
            out[r0 : r0 + len(sub), self._interior] = vals
        return out


def sample_fixed_time(model: HeatModel, t: float, space_grid: UniformGrid,
                      seed: int, tail: str = "exact") -> PathSample:
    """One-shot exact sample of u(t, .) on a space grid (no time stepping).

    Convenience wrapper over :class:`FixedTimeSampler`; build the sampler
    once when drawing many replications on the same grid.
    """
    return FixedTimeSampler(model, t, space_grid, tail=tail).draw(seed)


def fixed_time_covariance(model: HeatModel, t: float, space_grid: UniformGrid) -> np.ndarray:
    """Exact covariance matrix of u(t, .) on the grid (closed form).

    Cov(x, y) = (sigma^2/2theta) [min(x,y) - xy/pi - sum_k e^{-2 theta k^2 t}
    (2/pi) sin(kx) sin(ky) / k^2], with the k-sum truncated only below double
    resolution.  Serves as the oracle for the samplers.
    """
    if not t > 0:
        raise DomainError("need t > 0")
    pts = space_grid.points
    if np.any(pts < 0) or np.any(pts > np.pi):
        raise DomainError("space grid must lie within [0, pi]")
    u_diff, u_sum, idx_diff, idx_sum = _pair_offsets(pts)
    uvals = np.concatenate([u_diff, u_sum])
    k_exp = int(np.ceil(np.sqrt(LOG_EPS / (2.0 * model.theta * t))))
    base = _cos_k2_full(uvals)
    corr = _cos_k2_head(k_exp, uvals, weights=lambda k: np.exp(-2.0 * model.theta * t * k**2))
    vals = base - corr
    vd, vs = vals[: u_diff.size], vals[u_diff.size :]
    gram = (vd[idx_diff] - vs[idx_sum]) / np.pi
    return (model.sigma**2 / (2.0 * model.theta)) * gram


# ---------------------------------------------------------------------------
# fixed-point time-section sampler (sampling scheme: one point, fine times)
# ---------------------------------------------------------------------------


def _resolved_mode_count(theta: float, dt: float, c: float) -> int:
    """Modes that must be stepped explicitly for the tail to be one-step
    decorrelated (theta k^2 dt >= LOG_EPS) and stationary from time c on."""
    kres = int(np.ceil(np.sqrt(LOG_EPS / (theta * dt))))
    if c > 0:
        kres = max(kres, int(np.ceil(np.sqrt(LOG_EPS / (2.0 * theta * c)))))
    return max(kres, 1)


def sample_time_section(model: HeatModel, x: float, interval: tuple[float, float],
                        n: int, seed: int) -> PathSample:
    """Exact-in-law sample of t -> u(t, x) on the uniform grid of [c, d].

    Modes up to the decorrelation bound are stepped with the exact OU
    transition after an exact warm start at t = c; all higher modes mix
    within one grid step, so their aggregate enters as one independent draw
    per grid time with the exact stationary tail variance.  The output law
    is the untruncated solution's restriction to the grid, to double
    precision, for any model.modes (which this sampler does not use).

    Stream layout: (n+1)*(kres+1) standard normals, step-major, from
    substream (seed, TAG_TIME_SECTION).
    """
    if model.domain is not Domain.BOUNDED_0_PI:
        raise DomainError("time-section sampling requires the bounded domain")
    if not 0 < x < np.pi:
        raise DomainError("x must lie inside (0, pi)")
    c, d = float(interval[0]), float(interval[1])
    if not 0 <= c < d:
        raise DomainError("need 0 <= c < d")
    grid = UniformGrid(c, d, n)
    dt = grid.mesh
    kres = _resolved_mode_count(model.theta, dt, c)
    k = np.arange(1, kres + 1, dtype=np.float64)
    hk = np.sqrt(2.0 / np.pi) * np.sin(k * x)
    decay, step_sd = _ou_step_params(model.theta, model.sigma, k, dt)
    init_sd = np.sqrt(mode_variance(model, k, c)) if c > 0 else np.zeros(kres)
    tail_sd = np.sqrt(tail_variance(model, x, kres))
    out = np.empty(n + 1)
    gen = rng.substream(seed, rng.TAG_TIME_SECTION)
    _backend.ou_section_fill(hk, decay, step_sd, init_sd, tail_sd, n, gen, out)
    if c == 0.0:
        out[0] = 0.0  # zero initial data; the slot's tail draw is discarded
    return PathSample(grid, out, axis="t")


# ---------------------------------------------------------------------------
# full space-time field (averaged estimators, joint figures)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpaceTimeField:
    """u(t_i, x_j) on a time grid starting at 0 and a space grid in [0, pi]."""

    model: HeatModel
    time_grid: UniformGrid
    space_grid: UniformGrid
    values: np.ndarray  # (n+1, m+1)

    def time_section(self, i: int) -> PathSample:
        """u(t_i, .) as a space path (i >= 1; the t=0 row is identically 0)."""
        return PathSample(self.space_grid, self.values[i], axis="x")

    def space_point_section(self, j: int) -> PathSample:
        """u(., x_j) as a time path."""
        return PathSample(self.time_grid, self.values[:, j], axis="t")


def sample_space_time(model: HeatModel, time_grid: UniformGrid,
                      space_grid: UniformGrid, seed: int) -> SpaceTimeField:
    """Exact-in-law field sample on a (time x space) grid from zero data.

    Resolved modes (decorrelation bound for the time mesh) are stepped
    exactly and share the per-mode streams of :func:`simulate_modes`; the
    spectral tail beyond them is stationary and one-step independent from
    t_1 on, so each time level i >= 1 receives an independent exact spatial
    tail draw (Cholesky of the tail covariance, one factorization).
    """
    if model.domain is not Domain.BOUNDED_0_PI:
        raise DomainError("field sampling requires the bounded domain")
    if time_grid.a != 0.0:
        raise DomainError("time grid must start at 0 (zero initial data)")
    if space_grid.a < 0 or space_grid.b > np.pi:
        raise DomainError("space grid must lie within [0, pi]")
    n, dt = time_grid.m, time_grid.mesh
    kres = _resolved_mode_count(model.theta, dt, 0.0)
    resolved = HeatModel(model.theta, model.sigma, model.domain, kres)
    state = simulate_modes(resolved, time_grid, seed)
    pts = space_grid.points
    k = np.arange(1, kres + 1, dtype=np.float64)
    H = np.sqrt(2.0 / np.pi) * np.sin(np.outer(k, pts))
    values = state.coeffs.T @ H  # (n+1, m+1)
    interior = (pts > 0.0) & (pts < np.pi)
    values[:, ~interior] = 0.0  # Dirichlet boundary, exact zeros
    xi = pts[interior]
    if xi.size:
        gram = _tail_gram(xi, kres, model.theta, None)
        scale = model.sigma**2 / (2.0 * model.theta)
        L = _cholesky_psd(scale * gram)
        z = rng.substream(seed, rng.TAG_SPACETIME_TAIL).standard_normal((n, xi.size))
        values[1:, interior] += z @ L.T
    values[0] = 0.0
    return SpaceTimeField(model, time_grid, space_grid, values)


# ---------------------------------------------------------------------------
# persistence
# ---------------------------------------------------------------------------


def save_state_csv(state: SpectralState, path_or_buf) -> None:
    """CSV matrix dump: one comment header with the run metadata, then k,i,u."""
    g = state.time_grid
    buf = io.StringIO()
    buf.write(
        f"# theta={state.model.theta:.17g},sigma={state.model.sigma:.17g},"
        f"K={state.model.modes},n={g.m},T={g.b:.17g},seed={state.seed}\n"
    )
    buf.write("k,i,u\n")
    for ki in range(state.model.modes):
        row = state.coeffs[ki]
        for i in range(g.m + 1):
            buf.write(f"{ki + 1},{i},{row[i]:.17g}\n")
    text = buf.getvalue()
    if hasattr(path_or_buf, "write"):
        path_or_buf.write(text)
    else:
        with open(path_or_buf, "w") as fh:
            fh.write(text)


def load_state_csv(path_or_buf) -> SpectralState:
    if hasattr(path_or_buf, "read"):
        lines = path_or_buf.read().splitlines()
    else:
        with open(path_or_buf) as fh:
            lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise DomainError("missing metadata header line")
    meta = dict(item.split("=", 1) for item in lines[0][1:].strip().split(","))
    model = HeatModel(float(meta["theta"]), float(meta["sigma"]),
                      Domain.BOUNDED_0_PI, int(meta["K"]))
    grid = UniformGrid(0.0, float(meta["T"]), int(meta["n"]))
    coeffs = np.zeros((model.modes, grid.m + 1))
    for ln in lines[2:]:
        if not ln.strip():
            continue
        ks, is_, us = ln.split(",")
        coeffs[int(ks) - 1, int(is_)] = float(us)
    return SpectralState(model, grid, coeffs, int(meta["seed"]))
