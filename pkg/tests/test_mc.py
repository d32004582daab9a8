import os
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from heatvar import cli, rng
from heatvar.estimators import Scheme, averaged_estimate, drift_from_space_section
from heatvar.grids import DomainError, PathSample, uniform_grid
from heatvar.mc import (
    ExperimentConfig,
    apply_fast_preset,
    load_config,
    parse_config,
    render_figure,
    reproduce_figure,
    run_experiment,
    write_figure_data,
)
from heatvar.spectral import HeatModel, sample_space_time

SMALL = dict(theta=0.1, sigma=0.2, modes=200, replications=12,
             grid_sizes=(40, 80), base_seed=5)


def test_parse_config_round_trip():
    text = """
    # comment line
    scheme = fixed_time
    theta = 0.25   # trailing comment
    grid_sizes = 10, 20, 40
    replications = 3
    """
    values = parse_config(text)
    assert values == {"scheme": "fixed_time", "theta": 0.25,
                      "grid_sizes": (10, 20, 40), "replications": 3}
    with pytest.raises(DomainError):
        parse_config("nonsense line without equals")
    with pytest.raises(DomainError):
        parse_config("unknown_key = 1")


def test_config_validation():
    with pytest.raises(DomainError):
        ExperimentConfig(scheme="bogus")
    with pytest.raises(DomainError):
        ExperimentConfig(replications=0)
    with pytest.raises(DomainError):
        ExperimentConfig(c=0.0)  # time interval must start after 0
    with pytest.raises(DomainError):
        ExperimentConfig(a=-0.5)
    with pytest.raises(DomainError):
        ExperimentConfig(grid_sizes=(100, 50))
    with pytest.raises(DomainError):
        ExperimentConfig(x=0.0)


def test_fast_preset():
    fast = apply_fast_preset(ExperimentConfig(**SMALL))
    assert fast.modes == 2000 and fast.replications == 12
    big = apply_fast_preset(ExperimentConfig(replications=1000))
    assert big.replications == 100


def test_run_experiment_fixed_time_aggregation(tmp_path):
    config = ExperimentConfig(scheme="fixed_time", out_dir=str(tmp_path), **SMALL)
    summaries = run_experiment(config)
    drift = summaries["drift"]
    assert [r.grid_size for r in drift.rows] == [40, 80]
    # theoretical std column decays exactly like m^{-1/2}
    assert drift.rows[0].theoretical_std / drift.rows[1].theoretical_std \
        == pytest.approx(np.sqrt(80 / 40), rel=1e-14)
    # aggregation matches a sequential recomputation from replications.csv
    reps_file = os.path.join(str(tmp_path), "replications.csv")
    with open(reps_file) as fh:
        lines = fh.read().splitlines()
    assert lines[0] == "grid_size,replication,drift,volatility2"
    per = {}
    for ln in lines[1:]:
        g, r, d, v = ln.split(",")
        per.setdefault(int(g), []).append(float(d))
    for row in drift.rows:
        arr = np.array(per[row.grid_size])
        assert row.sample_mean == pytest.approx(arr.mean(), rel=1e-15)
        assert row.sample_std == pytest.approx(arr.std(ddof=1), rel=1e-12)
        assert row.bias == pytest.approx(arr.mean() - 0.1, abs=1e-15)
    # summary.csv format
    with open(os.path.join(str(tmp_path), "summary.csv")) as fh:
        header = fh.readline().strip()
    assert header == "grid_size,sample_mean,sample_std,theoretical_std,bias,replications"
    assert os.path.exists(os.path.join(str(tmp_path), "summary_volatility2.csv"))


def test_run_experiment_single_replication_has_no_std(tmp_path):
    config = ExperimentConfig(scheme="fixed_time", out_dir=str(tmp_path),
                              theta=0.1, sigma=0.2, modes=100,
                              replications=1, grid_sizes=(30,), base_seed=3)
    summaries = run_experiment(config)
    row = summaries["drift"].rows[0]
    assert row.sample_std is None
    with open(os.path.join(str(tmp_path), "summary.csv")) as fh:
        fh.readline()
        fields = fh.readline().strip().split(",")
    assert fields[2] == ""  # absent, not zero


def test_run_experiment_fixed_space(tmp_path):
    config = ExperimentConfig(scheme="fixed_space", out_dir=str(tmp_path),
                              theta=0.1, sigma=0.2, modes=100,
                              replications=6, grid_sizes=(64, 128), base_seed=9)
    summaries = run_experiment(config)
    for target in ("drift", "volatility2"):
        rows = summaries[target].rows
        assert rows[0].theoretical_std / rows[1].theoretical_std \
            == pytest.approx(np.sqrt(2.0), rel=1e-12)
        assert all(np.isfinite(r.sample_mean) for r in rows)


def test_run_experiment_thread_count_invariance(tmp_path):
    outs = {}
    for threads in (1, 4):
        sub = tmp_path / f"t{threads}"
        config = ExperimentConfig(scheme="fixed_time", out_dir=str(sub),
                                  threads=threads, **SMALL)
        run_experiment(config)
        outs[threads] = (sub / "summary.csv").read_bytes()
    assert outs[1] == outs[4]


def test_fixed_time_estimator_std_tracks_theory():
    # sample std within 20% of the theoretical curve for moderate grids
    config = ExperimentConfig(scheme="fixed_time", theta=0.1, sigma=0.2,
                              modes=1500, replications=250,
                              grid_sizes=(200, 400, 800), base_seed=77)
    summaries = run_experiment(config, write_files=False)
    for row in summaries["drift"].rows:
        assert abs(row.sample_std - row.theoretical_std) < 0.2 * row.theoretical_std


def test_run_experiment_averaged_scheme(tmp_path):
    config = ExperimentConfig(scheme="averaged_fixed_time", out_dir=str(tmp_path),
                              theta=0.1, sigma=0.2, n_avg=15,
                              replications=5, grid_sizes=(24, 48), base_seed=8)
    summaries = run_experiment(config)
    rows = summaries["drift"].rows
    assert all(r.theoretical_std is None for r in rows)
    with open(os.path.join(str(tmp_path), "summary.csv")) as fh:
        fh.readline()
        assert fh.readline().split(",")[3] == ""  # empty theoretical_std cell
    with pytest.raises(DomainError):
        run_experiment(ExperimentConfig(scheme="joint", **SMALL), write_files=False)


def test_averaged_sections_reduce_variance():
    # averaging over many time sections beats a single section by >= 5x
    model = HeatModel(0.1, 0.2)
    n_avg, m, reps = 500, 200, 30
    sg = uniform_grid(0.0, np.pi, m)
    single = np.empty(reps)
    averaged = np.empty(reps)
    for r in range(reps):
        field = sample_space_time(model, uniform_grid(0.0, 1.0, n_avg), sg,
                                  rng.derive_seed(31, rng.TAG_REPLICATION, r))
        sections = [field.time_section(i) for i in range(1, n_avg + 1)]
        averaged[r] = averaged_estimate(
            sections, Scheme.FIXED_TIME_SPACE_GRID, "drift", 0.2).estimate
        single[r] = drift_from_space_section(sections[-1], 0.2).estimate
    assert single.var(ddof=1) / averaged.var(ddof=1) >= 5.0
    assert abs(averaged.mean() - 0.1) < abs(single.mean() - 0.1) + 0.01


def _tiny_fig_config(tmp_path, **kw):
    base = dict(theta=0.1, sigma=0.2, modes=150, replications=8,
                grid_sizes=(25, 50, 100), base_seed=11, out_dir=str(tmp_path),
                n_avg=20)
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.mark.parametrize("figure", [1, 2, 3, 4, 5])
def test_figure_files_render(tmp_path, figure):
    config = _tiny_fig_config(tmp_path)
    csv_path, svg_path = reproduce_figure(config, figure)
    assert os.path.exists(csv_path) and os.path.exists(svg_path)
    with open(csv_path) as fh:
        header = fh.readline().strip().split(",")
        assert header[0] == "grid_size"
        assert any(c.startswith(("drift", "mean_drift", "std_drift")) for c in header)
    ET.parse(svg_path)  # well-formed XML


def test_figure_outputs_are_byte_deterministic(tmp_path):
    a = _tiny_fig_config(tmp_path / "a")
    b = _tiny_fig_config(tmp_path / "b")
    csv_a, svg_a = reproduce_figure(a, 2)
    csv_b, svg_b = reproduce_figure(b, 2)
    assert open(csv_a, "rb").read() == open(csv_b, "rb").read()
    assert open(svg_a, "rb").read() == open(svg_b, "rb").read()


def test_render_figure_error_cases(tmp_path):
    with pytest.raises(DomainError):
        render_figure(str(tmp_path / "missing.csv"), 1, str(tmp_path / "o.svg"))
    short = tmp_path / "short.csv"
    short.write_text("grid_size,drift_t1\n10,0.1\n")
    with pytest.raises(DomainError):
        render_figure(str(short), 1, str(tmp_path / "o.svg"))
    config = _tiny_fig_config(tmp_path)
    with pytest.raises(DomainError):
        write_figure_data(config, 9)


def test_subsample_requires_divisor(tmp_path):
    config = _tiny_fig_config(tmp_path, grid_sizes=(30, 45))
    from heatvar.mc import _subsample
    path = PathSample(uniform_grid(0, 1, 45), np.zeros(46))
    with pytest.raises(DomainError):
        _subsample(path, 7)


def test_load_config_with_overrides(tmp_path):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("scheme = fixed_time\nreplications = 5\nmodes = 64\n"
                   "grid_sizes = 16, 32\n")
    config = load_config(str(cfg), base_seed=123, out_dir=str(tmp_path))
    assert config.replications == 5 and config.base_seed == 123


# --- command-line interface --------------------------------------------------


def test_cli_simulate_and_estimate(tmp_path, capsys):
    rc = cli.main(["simulate", "--theta", "0.1", "--sigma", "0.2",
                   "--modes", "16", "--steps", "32", "--x", "1.5708",
                   "--seed", "4", "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].endswith("state.csv") and out[1].endswith("path.csv")
    rc = cli.main(["estimate", "--scheme", "fixed-space",
                   "--input", os.path.join(str(tmp_path), "path.csv"),
                   "--sigma", "0.2"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "scheme,n_or_m,estimate,theoretical_std,known_parameter"
    assert lines[1].startswith("fixed_space_time_grid,32,")

    space = tmp_path / "space.csv"
    model = HeatModel(0.1, 0.2, modes=300)
    from heatvar.spectral import sample_fixed_time
    sample_fixed_time(model, 1.0, uniform_grid(0, np.pi, 200), 3).to_csv(str(space))
    rc = cli.main(["estimate", "--scheme", "fixed-time", "--input", str(space),
                   "--sigma", "0.2"])
    assert rc == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[1].startswith("fixed_time_space_grid,200,")


def test_cli_estimate_requires_known_parameter(tmp_path, capsys):
    p = tmp_path / "p.csv"
    PathSample(uniform_grid(0, 1, 2), np.array([0.0, 1.0, 0.5])).to_csv(str(p))
    rc = cli.main(["estimate", "--scheme", "fixed-time", "--input", str(p)])
    assert rc == 2
    assert "error" in capsys.readouterr().err


def test_cli_asymptotics_header(capsys):
    rc = cli.main(["asymptotics", "--n-sequence", "128,256"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "constant_name,value,error_estimate,truncation_params"
    names = {ln.split(",")[0] for ln in out[1:]}
    assert "bounded_clt_variance_total" in names
    assert "fbm_quartic_clt_constant" in names


def test_cli_mc_with_config(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("scheme = fixed_time\nreplications = 4\nmodes = 64\n"
                   "grid_sizes = 16, 32\nbase_seed = 2\n")
    rc = cli.main(["mc", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 0
    assert os.path.exists(tmp_path / "summary.csv")
    assert "summary.csv" in capsys.readouterr().out


def test_cli_reproduce_figures_and_threads_env(tmp_path, capsys, monkeypatch):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("replications = 6\nmodes = 100\ngrid_sizes = 20, 40\n")
    rc = cli.main(["reproduce-figures", "--figure", "1", "--config", str(cfg),
                   "--seed", "42", "--out", str(tmp_path), "--threads", "2"])
    assert rc == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].endswith("fig1.csv") and out[1].endswith("fig1.svg")
    monkeypatch.setenv("HEATVAR_THREADS", "3")
    assert cli._resolve_threads(8) == 3  # env overrides the flag
    monkeypatch.delenv("HEATVAR_THREADS")
    assert cli._resolve_threads(8) == 8


def test_cli_selftest_fast_smoke(capsys):
    rc = cli.main(["selftest", "--fast", "--criteria", "7,8"])
    out = capsys.readouterr().out
    assert rc == 0
    assert "AC7" in out and "AC8" in out and "PASS" in out


def test_cli_error_paths(tmp_path, capsys):
    rc = cli.main(["mc", "--config", str(tmp_path / "missing.cfg")])
    assert rc == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense\n")
    rc = cli.main(["mc", "--config", str(bad)])
    assert rc == 2
    with pytest.raises(SystemExit):
        cli.main(["reproduce-figures", "--figure", "9"])
