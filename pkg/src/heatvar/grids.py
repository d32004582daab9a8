"""Uniform grids, sampled paths, and discrete power-variation sums.

The power-variation sum over a refining uniform partition is the primitive
underneath every estimator in this package: quadratic variation (p=2) for
space sections, quartic variation (p=4) for time sections.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from . import _backend


class DomainError(ValueError):
    """Parameter outside the admissible domain (bad interval, order, range)."""


class DegenerateSampleError(ValueError):
    """Zero-variation input where a positive variation is required."""


@dataclass(frozen=True)
class UniformGrid:
    """Uniform partition of [a, b] into m subintervals.

    Points are always formed as ``a + (b-a)*j/m`` (never by repeated
    addition), so the endpoints are exact and the sequence is strictly
    increasing.
    """

    a: float
    b: float
    m: int

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise DomainError("grid endpoints must be finite")
        if not self.a < self.b:
            raise DomainError(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.m) != self.m or self.m < 1:
            raise DomainError(f"need integer m >= 1, got m={self.m}")
        object.__setattr__(self, "m", int(self.m))

    @property
    def points(self) -> np.ndarray:
        j = np.arange(self.m + 1, dtype=np.float64)
        pts = self.a + (self.b - self.a) * j / self.m
        pts[0] = self.a   # the formula gives the endpoints exactly in real
        pts[-1] = self.b  # arithmetic; pin them against rounding
        pts.setflags(write=False)
        return pts

    @property
    def mesh(self) -> float:
        return (self.b - self.a) / self.m

    @property
    def length(self) -> float:
        return self.b - self.a


def uniform_grid(a: float, b: float, m: int) -> UniformGrid:
    """Uniform partition of [a, b] of size m (m+1 points)."""
    return UniformGrid(float(a), float(b), m)


@dataclass(frozen=True)
class PathSample:
    """Values of a scalar process on a uniform grid.

    ``axis`` records whether the grid coordinate is space ("x") or time
    ("t"); it only affects the CSV header.
    """

    grid: UniformGrid
    values: np.ndarray
    axis: str = "x"

    def __post_init__(self):
        vals = np.ascontiguousarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.shape[0] != self.grid.m + 1:
            raise DomainError(
                f"values must have length m+1={self.grid.m + 1}, got {vals.shape}"
            )
        if not np.all(np.isfinite(vals)):
            raise DomainError("values must be finite")
        if self.axis not in ("x", "t"):
            raise DomainError("axis must be 'x' or 't'")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    def to_csv(self, path_or_buf) -> None:
        """Write ``axis,value`` rows at full double precision (17 digits)."""
        buf = io.StringIO()
        buf.write(f"{self.axis},value\n")
        for p, v in zip(self.grid.points, self.values):
            buf.write(f"{p:.17g},{v:.17g}\n")
        text = buf.getvalue()
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)

    @staticmethod
    def from_csv(path_or_buf) -> "PathSample":
        if hasattr(path_or_buf, "read"):
            lines = path_or_buf.read().splitlines()
        else:
            with open(path_or_buf) as fh:
                lines = fh.read().splitlines()
        header = lines[0].split(",")
        axis = header[0].strip()
        rows = [ln.split(",") for ln in lines[1:] if ln.strip()]
        pts = np.array([float(r[0]) for r in rows])
        vals = np.array([float(r[1]) for r in rows])
        m = len(pts) - 1
        if m < 1:
            raise DomainError("need at least two grid points")
        grid = UniformGrid(float(pts[0]), float(pts[-1]), m)
        if not np.allclose(pts, grid.points, rtol=0, atol=1e-12 * max(1.0, abs(pts[-1]))):
            raise DomainError("CSV points do not form a uniform grid")
        return PathSample(grid, vals, axis=axis)


def increments(sample: PathSample) -> np.ndarray:
    """Consecutive differences values[j] - values[j-1], length m."""
    return np.diff(sample.values)


def power_variation(sample: PathSample, p: float) -> float:
    """Discrete p-variation sum over the sample's grid.

    Sum of |increment|^p with compensated (Neumaier) accumulation; the
    increments at fine meshes are small and their p-th powers are prone to
    cancellation in naive chunked sums.  p=2 and p=4 take an exact
    integer-power fast path.
    """
    if not p >= 1:
        raise DomainError(f"need p >= 1, got p={p}")
    diffs = np.diff(sample.values)
    if p == 2 or p == 4:
        return float(_backend.abs_pow_sum(diffs, int(p)))
    powered = np.abs(diffs) ** float(p)
    return float(_backend.neumaier_sum(powered))
