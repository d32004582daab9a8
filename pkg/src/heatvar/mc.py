"""Monte Carlo experiment harness: configuration, replication runner, and
reproduction of the reference figures (estimator paths, sample means, sample
standard deviations, averaged and joint estimation) as CSV plus SVG.

Determinism contract: replication r draws from the seed derived as
``derive_seed(base_seed, TAG_REPLICATION, r)``, results are aggregated in
replication-index order, and figure/summary files are byte-identical for a
fixed (config, base_seed) regardless of the worker count.
"""

from __future__ import annotations

import concurrent.futures
import io
import os
from dataclasses import dataclass, replace
from typing import Optional, Sequence

import numpy as np

from . import rng, svg
from .asymptotics import clt_variance_components, theoretical_std
from .estimators import (
    Scheme,
    averaged_estimate,
    drift_from_space_section,
    drift_from_time_section,
    joint_drift_volatility2,
    volatility2_from_space_section,
    volatility2_from_time_section,
)
from .grids import DomainError, PathSample, UniformGrid, uniform_grid
from .spectral import Domain, FixedTimeSampler, HeatModel, sample_space_time, sample_time_section

_FAST_OVERRIDES = dict(modes=2000, replications=100)


@dataclass(frozen=True)
class ExperimentConfig:
    """Flat experiment description (parseable from key=value text).

    scheme "fixed_time" sweeps space-grid sizes at one time instant;
    "fixed_space" sweeps time-grid sizes at one space point; "joint" and the
    averaged schemes combine sections as in the corresponding figures.
    """

    scheme: str = "fixed_time"
    target: str = "drift"
    theta: float = 0.1
    sigma: float = 0.2
    modes: int = 15000
    x: float = np.pi / 2
    t: float = 1.0
    c: float = 0.25
    d: float = 1.0
    a: float = 0.0
    b: float = np.pi
    grid_sizes: tuple = (50, 100, 200, 400, 700, 1000, 1400, 2000)
    n_avg: int = 100
    replications: int = 1000
    base_seed: int = 1
    threads: int = 1
    out_dir: str = "."

    def __post_init__(self):
        if self.scheme not in ("fixed_time", "fixed_space", "joint",
                               "averaged_fixed_time", "averaged_fixed_space"):
            raise DomainError(f"unknown scheme {self.scheme!r}")
        if self.target not in ("drift", "volatility2"):
            raise DomainError(f"unknown target {self.target!r}")
        if self.replications < 1:
            raise DomainError("need replications >= 1")
        if not 0 < self.c < self.d:
            raise DomainError("need 0 < c < d")
        if not (0 <= self.a < self.b <= np.pi):
            raise DomainError("need 0 <= a < b <= pi")
        if not 0 < self.x < np.pi:
            raise DomainError("need x inside (0, pi)")
        if not self.t > 0:
            raise DomainError("need t > 0")
        if len(self.grid_sizes) < 1 or any(g < 1 for g in self.grid_sizes):
            raise DomainError("grid_sizes must be positive")
        if sorted(self.grid_sizes) != list(self.grid_sizes):
            raise DomainError("grid_sizes must be increasing")

    @property
    def model(self) -> HeatModel:
        return HeatModel(self.theta, self.sigma, Domain.BOUNDED_0_PI, self.modes)


_CONFIG_TYPES = {
    "scheme": str, "target": str, "theta": float, "sigma": float, "modes": int,
    "x": float, "t": float, "c": float, "d": float, "a": float, "b": float,
    "n_avg": int, "replications": int, "base_seed": int, "threads": int,
    "out_dir": str,
}


def parse_config(text: str) -> dict:
    """Parse flat key=value text with '#' comments into typed values."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise DomainError(f"config line {lineno}: expected key=value, got {raw!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        if key == "grid_sizes":
            values[key] = tuple(int(v) for v in val.split(",") if v.strip())
        elif key in _CONFIG_TYPES:
            values[key] = _CONFIG_TYPES[key](val)
        else:
            raise DomainError(f"config line {lineno}: unknown key {key!r}")
    return values


def load_config(path: str, **overrides) -> ExperimentConfig:
    with open(path) as fh:
        values = parse_config(fh.read())
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ExperimentConfig(**values)


def apply_fast_preset(config: ExperimentConfig) -> ExperimentConfig:
    """CI-speed preset: fewer modes and replications, capped sweep sizes."""
    sizes = tuple(g for g in config.grid_sizes if g <= 1000) or config.grid_sizes[:1]
    return replace(config, modes=_FAST_OVERRIDES["modes"],
                   replications=min(config.replications, _FAST_OVERRIDES["replications"]),
                   grid_sizes=sizes)


# ---------------------------------------------------------------------------
# summaries
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class McRow:
    grid_size: int
    sample_mean: float
    sample_std: Optional[float]  # None when only one replication was run
    theoretical_std: Optional[float]  # None where no CLT is available
    bias: float
    replications: int


@dataclass(frozen=True)
class McSummary:
    """Aggregate rows, ordered by grid size, for one estimator target."""

    target: str
    true_value: float
    rows: tuple

    def to_csv(self, path_or_buf) -> None:
        buf = io.StringIO()
        buf.write("grid_size,sample_mean,sample_std,theoretical_std,bias,replications\n")
        for r in self.rows:
            std = "" if r.sample_std is None else f"{r.sample_std:.17g}"
            theo = "" if r.theoretical_std is None else f"{r.theoretical_std:.17g}"
            buf.write(
                f"{r.grid_size},{r.sample_mean:.17g},{std},"
                f"{theo},{r.bias:.17g},{r.replications}\n"
            )
        text = buf.getvalue()
        if hasattr(path_or_buf, "write"):
            path_or_buf.write(text)
        else:
            with open(path_or_buf, "w") as fh:
                fh.write(text)


def _rep_seeds(base_seed: int, count: int) -> list[int]:
    return [rng.derive_seed(base_seed, rng.TAG_REPLICATION, r) for r in range(count)]


def _parallel_map(fn, items, threads: int):
    """Index-stable map, optionally over a thread pool.

    Failures abort the whole experiment tagged with the replication index.
    """

    def wrapped(pair):
        idx, item = pair
        try:
            return fn(item)
        except Exception as exc:
            raise RuntimeError(f"replication {idx} failed: {exc}") from exc

    pairs = list(enumerate(items))
    if threads <= 1 or len(items) <= 1:
        return [wrapped(p) for p in pairs]
    with concurrent.futures.ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(wrapped, pairs))


def _summarize(estimates: np.ndarray, grid_size: int, true_value: float,
               theo_std: Optional[float]) -> McRow:
    reps = estimates.size
    mean = float(np.mean(estimates))
    std = float(np.std(estimates, ddof=1)) if reps > 1 else None
    return McRow(grid_size, mean, std, theo_std, mean - true_value, reps)


def _fixed_time_estimates(config: ExperimentConfig, sizes: Sequence[int],
                          t: float, seeds: Sequence[int]):
    """Per-size (drift, volatility2) estimate arrays for scheme fixed_time.

    Draws are batched through the sampler (one BLAS product per chunk); the
    per-replication estimates are then reduced in index order, optionally on
    a thread pool, with output independent of the worker count.
    """
    model = config.model
    out = {}
    for m in sizes:
        sampler = FixedTimeSampler(model, t, uniform_grid(config.a, config.b, m))
        rows = sampler.draw_values_many(seeds)
        grid = sampler.grid

        def one(row, _grid=grid):
            path = PathSample(_grid, row, axis="x")
            return (drift_from_space_section(path, config.sigma).estimate,
                    volatility2_from_space_section(path, config.theta).estimate)

        pairs = _parallel_map(one, list(rows), config.threads)
        arr = np.array(pairs)
        out[m] = (arr[:, 0], arr[:, 1])
    return out


def _fixed_space_estimates(config: ExperimentConfig, sizes: Sequence[int],
                           seeds: Sequence[int]):
    model = config.model
    out = {}
    for n in sizes:
        def one(seed, _n=n):
            path = sample_time_section(model, config.x, (config.c, config.d), _n, seed)
            return (drift_from_time_section(path, config.sigma).estimate,
                    volatility2_from_time_section(path, config.theta).estimate)

        pairs = _parallel_map(one, list(seeds), config.threads)
        arr = np.array(pairs)
        out[n] = (arr[:, 0], arr[:, 1])
    return out


def _averaged_fixed_time_estimates(config: ExperimentConfig, sizes: Sequence[int],
                                   seeds: Sequence[int]):
    """Per-size estimates of the section-averaged scheme (one exact coupled
    space-time field per replication, n_avg time sections averaged)."""
    model = config.model
    tg = uniform_grid(0.0, config.t, config.n_avg)
    out = {}
    for m in sizes:
        sg = uniform_grid(config.a, config.b, m)

        def one(seed, _sg=sg):
            field = sample_space_time(model, tg, _sg, seed)
            sections = [field.time_section(i) for i in range(1, config.n_avg + 1)]
            return (
                averaged_estimate(sections, Scheme.FIXED_TIME_SPACE_GRID,
                                  "drift", config.sigma).estimate,
                averaged_estimate(sections, Scheme.FIXED_TIME_SPACE_GRID,
                                  "volatility2", config.theta).estimate,
            )

        pairs = _parallel_map(one, list(seeds), config.threads)
        arr = np.array(pairs)
        out[m] = (arr[:, 0], arr[:, 1])
    return out


def run_experiment(config: ExperimentConfig, write_files: bool = True):
    """Run the replication sweep and aggregate.

    Returns {"drift": McSummary, "volatility2": McSummary} (both targets come
    from the same draws).  Writes summary.csv for the configured target, a
    summary_<other>.csv for the second one, and replications.csv holding
    every per-replication estimate, all in config.out_dir.
    """
    seeds = _rep_seeds(config.base_seed, config.replications)
    if config.scheme == "fixed_time":
        per_size = _fixed_time_estimates(config, config.grid_sizes, config.t, seeds)
        theo = {
            "drift": lambda m: theoretical_std(
                Scheme.FIXED_TIME_SPACE_GRID, "drift", m, theta=config.theta),
            "volatility2": lambda m: theoretical_std(
                Scheme.FIXED_TIME_SPACE_GRID, "volatility2", m, sigma2=config.sigma**2),
        }
    elif config.scheme == "fixed_space":
        per_size = _fixed_space_estimates(config, config.grid_sizes, seeds)
        constants = clt_variance_components(config.theta, config.x, config.d - config.c)
        theo = {
            "drift": lambda n: theoretical_std(
                Scheme.FIXED_SPACE_TIME_GRID, "drift", n,
                theta=config.theta, clt_constant=constants.total),
            "volatility2": lambda n: theoretical_std(
                Scheme.FIXED_SPACE_TIME_GRID, "volatility2", n,
                sigma2=config.sigma**2, clt_constant=constants.total),
        }
    elif config.scheme == "averaged_fixed_time":
        per_size = _averaged_fixed_time_estimates(config, config.grid_sizes, seeds)
        # no closed-form asymptotics for the averaged estimators
        theo = {"drift": lambda m: None, "volatility2": lambda m: None}
    else:
        raise DomainError(
            f"run_experiment does not sweep scheme {config.scheme!r}; joint and "
            "space-averaged estimation run through the figure pipeline or the "
            "estimator API")

    true_vals = {"drift": config.theta, "volatility2": config.sigma**2}
    summaries = {}
    for ti, target in enumerate(("drift", "volatility2")):
        rows = tuple(
            _summarize(per_size[g][ti], g, true_vals[target], theo[target](g))
            for g in config.grid_sizes
        )
        summaries[target] = McSummary(target, true_vals[target], rows)

    if write_files:
        os.makedirs(config.out_dir, exist_ok=True)
        other = "volatility2" if config.target == "drift" else "drift"
        summaries[config.target].to_csv(os.path.join(config.out_dir, "summary.csv"))
        summaries[other].to_csv(os.path.join(config.out_dir, f"summary_{other}.csv"))
        with open(os.path.join(config.out_dir, "replications.csv"), "w") as fh:
            fh.write("grid_size,replication,drift,volatility2\n")
            for g in config.grid_sizes:
                dr, vo = per_size[g]
                for r in range(config.replications):
                    fh.write(f"{g},{r},{dr[r]:.17g},{vo[r]:.17g}\n")
    return summaries


# ---------------------------------------------------------------------------
# figure data
# ---------------------------------------------------------------------------


def _subsample(path: PathSample, m_sub: int) -> PathSample:
    step, rem = divmod(path.grid.m, m_sub)
    if rem:
        raise DomainError(f"{m_sub} does not divide the fine grid size {path.grid.m}")
    return PathSample(UniformGrid(path.grid.a, path.grid.b, m_sub),
                      path.values[::step], axis=path.axis)


def _divisor_sweep(m_max: int, lo: int) -> list[int]:
    return [m for m in range(lo, m_max + 1) if m_max % m == 0]


def _write_table(path: str, header: list[str], columns: list[np.ndarray]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in zip(*columns):
            fh.write(",".join(_cell(v) for v in row) + "\n")


def _cell(v) -> str:
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return f"{float(v):.17g}"


def fig1_data(config: ExperimentConfig) -> tuple[list[str], list[np.ndarray]]:
    """Single-path estimator traces vs space-grid size, one series per time.

    One solution per time instant, observed on the finest grid and estimated
    on every divisor subgrid (the same realization at refining resolutions).
    """
    m_max = max(config.grid_sizes)
    ms = _divisor_sweep(m_max, min(config.grid_sizes))
    times = (0.4, config.t)
    cols = [np.array(ms, dtype=np.int64)]
    header = ["grid_size"]
    for ti, t in enumerate(times):
        sampler = FixedTimeSampler(config.model, t, uniform_grid(config.a, config.b, m_max))
        path = sampler.draw(rng.derive_seed(config.base_seed, rng.TAG_REPLICATION, ti))
        drift = [drift_from_space_section(_subsample(path, m), config.sigma).estimate
                 for m in ms]
        vol = [volatility2_from_space_section(_subsample(path, m), config.theta).estimate
               for m in ms]
        header += [f"drift_t{t:g}", f"volatility2_t{t:g}"]
        cols += [np.array(drift), np.array(vol)]
    return header, cols


def fig2_fig3_data(config: ExperimentConfig):
    """Sample mean (figure 2) and sample std vs theory (figure 3) over the
    replication set, one series per time instant."""
    seeds = _rep_seeds(config.base_seed, config.replications)
    times = (0.4, config.t)
    sizes = list(config.grid_sizes)
    mean_cols, std_cols = [], []
    header2, header3 = ["grid_size"], ["grid_size"]
    for t in times:
        per_size = _fixed_time_estimates(config, sizes, t, seeds)
        for ti, target in enumerate(("drift", "volatility2")):
            means = np.array([np.mean(per_size[m][ti]) for m in sizes])
            stds = np.array([np.std(per_size[m][ti], ddof=1) for m in sizes])
            mean_cols.append(means)
            std_cols.append(stds)
            header2.append(f"mean_{target}_t{t:g}")
            header3.append(f"std_{target}_t{t:g}")
    marr = np.array(sizes, dtype=np.float64)
    theory = [config.theta * np.sqrt(2.0 / marr), config.sigma**2 * np.sqrt(2.0 / marr)]
    header3 += ["theory_drift", "theory_volatility2"]
    cols2 = [np.array(sizes, dtype=np.int64)] + mean_cols
    cols3 = [np.array(sizes, dtype=np.int64)] + std_cols + theory
    return (header2, cols2), (header3, cols3)


def fig4_data(config: ExperimentConfig):
    """Space-time averaged estimator traces vs m for two averaging depths."""
    m_max = max(config.grid_sizes)
    ms = _divisor_sweep(m_max, min(config.grid_sizes))
    header = ["grid_size"]
    cols = [np.array(ms, dtype=np.int64)]
    for ni, n_avg in enumerate((config.n_avg, 5 * config.n_avg)):
        tg = uniform_grid(0.0, config.t, n_avg)
        field = sample_space_time(
            config.model, tg, uniform_grid(config.a, config.b, m_max),
            rng.derive_seed(config.base_seed, rng.TAG_REPLICATION, ni))
        drift_col, vol_col = [], []
        for m in ms:
            sections = [_subsample(field.time_section(i), m) for i in range(1, n_avg + 1)]
            drift_col.append(averaged_estimate(
                sections, Scheme.FIXED_TIME_SPACE_GRID, "drift", config.sigma).estimate)
            vol_col.append(averaged_estimate(
                sections, Scheme.FIXED_TIME_SPACE_GRID, "volatility2", config.theta).estimate)
        header += [f"drift_n{n_avg}", f"volatility2_n{n_avg}"]
        cols += [np.array(drift_col), np.array(vol_col)]
    return header, cols


def fig5_data(config: ExperimentConfig):
    """Joint estimates vs m for several time-section sizes n."""
    m_max = max(config.grid_sizes)
    ms = _divisor_sweep(m_max, min(config.grid_sizes))
    n_values = (100, 400, 500)
    header = ["grid_size"]
    cols = [np.array(ms, dtype=np.int64)]
    sampler = FixedTimeSampler(config.model, config.t,
                               uniform_grid(config.a, config.b, m_max))
    for ni, n in enumerate(n_values):
        tsec = sample_time_section(
            config.model, config.x, (config.c, config.d), n,
            rng.derive_seed(config.base_seed, rng.TAG_REPLICATION, 2 * ni))
        ssec = sampler.draw(
            rng.derive_seed(config.base_seed, rng.TAG_REPLICATION, 2 * ni + 1))
        drift_col, vol_col = [], []
        for m in ms:
            th, s2 = joint_drift_volatility2(tsec, _subsample(ssec, m))
            drift_col.append(th.estimate)
            vol_col.append(s2.estimate)
        header += [f"drift_n{n}", f"volatility2_n{n}"]
        cols += [np.array(drift_col), np.array(vol_col)]
    return header, cols


def write_figure_data(config: ExperimentConfig, figure: int) -> str:
    """Generate and write figN.csv; returns the CSV path."""
    os.makedirs(config.out_dir, exist_ok=True)
    if figure == 1:
        header, cols = fig1_data(config)
    elif figure in (2, 3):
        (h2, c2), (h3, c3) = fig2_fig3_data(config)
        header, cols = (h2, c2) if figure == 2 else (h3, c3)
    elif figure == 4:
        header, cols = fig4_data(config)
    elif figure == 5:
        header, cols = fig5_data(config)
    else:
        raise DomainError(f"unknown figure {figure}")
    path = os.path.join(config.out_dir, f"fig{figure}.csv")
    _write_table(path, header, cols)
    return path


def render_figure(data_csv: str, figure: int, out_svg: str,
                  theta: float = 0.1, sigma: float = 0.2) -> str:
    """Render figN.svg from a figN.csv data file.

    Two panels (drift left, squared volatility right), one polyline per
    series column, horizontal rule at the true parameter value; figure 3 is
    drawn log-log with the theoretical-decay series included.
    """
    if not os.path.exists(data_csv):
        raise DomainError(f"data file {data_csv} does not exist")
    with open(data_csv) as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if len(lines) < 3:
        raise DomainError(f"data file {data_csv} too short to plot")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in ln.split(",")] for ln in lines[1:]])
    xs = data[:, 0]
    panels = []
    logplot = figure == 3
    for target, label, true_val in (
        ("drift", "drift estimate", theta),
        ("volatility2", "volatility estimate", sigma**2),
    ):
        series = []
        for j, name in enumerate(header):
            if name.startswith(("mean_", "std_")):
                stem = name.split("_", 1)[1]
            else:
                stem = name
            if stem.startswith(target):
                series.append((name, xs.tolist(), data[:, j].tolist()))
            elif name == f"theory_{target}":
                series.append((name, xs.tolist(), data[:, j].tolist()))
        if not series:
            raise DomainError(f"no {target} columns in {data_csv}")
        panels.append(svg.Panel(
            title=f"figure {figure}: {label}",
            xlabel="grid size",
            ylabel=label,
            series=series,
            hline=None if logplot else true_val,
            logx=logplot, logy=logplot,
        ))
    doc = svg.render_svg(panels)
    with open(out_svg, "w") as fh:
        fh.write(doc)
    return out_svg


def reproduce_figure(config: ExperimentConfig, figure: int) -> tuple[str, str]:
    """figN.csv + figN.svg in config.out_dir; returns both paths."""
    csv_path = write_figure_data(config, figure)
    svg_path = os.path.join(config.out_dir, f"fig{figure}.svg")
    render_figure(csv_path, figure, svg_path, theta=config.theta, sigma=config.sigma)
    return csv_path, svg_path
