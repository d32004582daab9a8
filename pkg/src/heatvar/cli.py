"""Command-line interface.

Subcommands: simulate (write a spectral state), estimate (run one estimator
on a path CSV), asymptotics (print the closed-form constants), mc (run a
configured Monte Carlo sweep), reproduce-figures (figN.csv + figN.svg), and
selftest (run the acceptance criteria).

Thread count resolution: the HEATVAR_THREADS environment variable overrides
--threads, which overrides the config file value.
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import acceptance, mc
from .estimators import (
    EstimateReport,
    drift_from_space_section,
    drift_from_time_section,
    volatility2_from_space_section,
    volatility2_from_time_section,
)
from .asymptotics import (
    clt_variance_components,
    fbm_quartic_clt_constant,
    scaled_mode_sum_report,
)
from .grids import DomainError, PathSample, uniform_grid
from .spectral import Domain, HeatModel, evaluate_at_x, save_state_csv, simulate_modes


def _resolve_threads(flag_value) -> int:
    env = os.environ.get("HEATVAR_THREADS", "").strip()
    if env:
        return max(1, int(env))
    if flag_value is not None:
        return max(1, int(flag_value))
    return 1


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key=value config file ('#' comments)")
    p.add_argument("--seed", type=int, help="base seed override")
    p.add_argument("--out", help="output directory (default '.')")
    p.add_argument("--threads", type=int, help="worker threads "
                   "(HEATVAR_THREADS overrides this flag)")
    p.add_argument("--fast", action="store_true",
                   help="CI-speed preset: fewer modes/replications")


def _build_config(args) -> mc.ExperimentConfig:
    overrides = dict(base_seed=args.seed, out_dir=args.out)
    overrides["threads"] = _resolve_threads(args.threads)
    if args.config:
        config = mc.load_config(args.config, **overrides)
    else:
        config = mc.ExperimentConfig(
            **{k: v for k, v in overrides.items() if v is not None})
    if args.fast:
        config = mc.apply_fast_preset(config)
    return config


def _cmd_simulate(args) -> int:
    model = HeatModel(args.theta, args.sigma, Domain.BOUNDED_0_PI, args.modes)
    grid = uniform_grid(0.0, args.t_max, args.steps)
    state = simulate_modes(model, grid, args.seed if args.seed is not None else 1)
    out_dir = args.out or "."
    os.makedirs(out_dir, exist_ok=True)
    state_path = os.path.join(out_dir, "state.csv")
    save_state_csv(state, state_path)
    print(state_path)
    if args.x is not None:
        path = evaluate_at_x(state, args.x)
        path_file = os.path.join(out_dir, "path.csv")
        path.to_csv(path_file)
        print(path_file)
    return 0


def _cmd_estimate(args) -> int:
    sample = PathSample.from_csv(args.input)
    if args.scheme == "fixed-time":
        if args.sigma is not None:
            report = drift_from_space_section(sample, args.sigma)
        elif args.theta is not None:
            report = volatility2_from_space_section(sample, args.theta)
        else:
            raise DomainError("fixed-time estimation needs --sigma (drift) or --theta")
    elif args.scheme == "fixed-space":
        if args.sigma is not None:
            report = drift_from_time_section(sample, args.sigma)
        elif args.theta is not None:
            report = volatility2_from_time_section(sample, args.theta)
        else:
            raise DomainError("fixed-space estimation needs --sigma (drift) or --theta")
    else:
        raise DomainError(f"unknown scheme {args.scheme!r}")
    print(EstimateReport.csv_header())
    print(report.csv_row())
    return 0


def _cmd_asymptotics(args) -> int:
    theta, x, length = args.theta, args.x, args.length
    n_seq = tuple(int(v) for v in args.n_sequence.split(","))
    bounded = clt_variance_components(theta, x, length, n_seq)
    whole = fbm_quartic_clt_constant()
    key = scaled_mode_sum_report(theta, x, n_seq[-1])
    trunc = f"n_seq={'/'.join(str(n) for n in n_seq)};K={bounded.K_series}"
    rows = [
        ("increment_variance", bounded.sigma_n2, 5e-16 * bounded.sigma_n2, trunc),
        ("chaos2_variance_component", bounded.sigma_bar2_sq, bounded.error2, trunc),
        ("chaos4_variance_component", bounded.sigma_bar4_sq, bounded.error4, trunc),
        ("bounded_clt_variance_total", bounded.total,
         bounded.error2 + bounded.error4, trunc),
        ("fbm_quartic_c2", whole.c_check2_sq, whole.error2,
         f"n_seq={'/'.join(str(n) for n in whole.n_sequence)}"),
        ("fbm_quartic_c4", whole.c_check4_sq, whole.error4,
         f"n_seq={'/'.join(str(n) for n in whole.n_sequence)}"),
        ("fbm_quartic_clt_constant", whole.c_check_sq,
         72 * whole.error2 + 24 * whole.error4,
         f"n_seq={'/'.join(str(n) for n in whole.n_sequence)}"),
        ("scaled_mode_sum", key.value, abs(key.value - key.limit),
         f"n={key.n}"),
    ]
    print("constant_name,value,error_estimate,truncation_params")
    for name, value, err, params in rows:
        print(f"{name},{value:.17g},{err:.3g},{params}")
    return 0


def _cmd_mc(args) -> int:
    config = _build_config(args)
    summaries = mc.run_experiment(config)
    row = summaries[config.target].rows[-1]
    print(f"wrote {os.path.join(config.out_dir, 'summary.csv')}")
    print(f"largest grid: mean={row.sample_mean:.6g} bias={row.bias:.3g} "
          f"theoretical_std={row.theoretical_std:.3g}")
    return 0


def _cmd_reproduce(args) -> int:
    config = _build_config(args)
    csv_path, svg_path = mc.reproduce_figure(config, args.figure)
    print(csv_path)
    print(svg_path)
    return 0


def _cmd_selftest(args) -> int:
    criteria = None
    if args.criteria:
        criteria = [int(v) for v in args.criteria.split(",")]
    results = acceptance.run_all(fast=args.fast, criteria=criteria)
    for res in results:
        print(res.line())
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heatvar",
        description="Simulation and power-variation inference for the 1D "
                    "stochastic heat equation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="simulate Fourier modes, write state.csv")
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--sigma", type=float, default=0.2)
    p.add_argument("--modes", type=int, default=100)
    p.add_argument("--steps", type=int, default=1000)
    p.add_argument("--t-max", type=float, default=1.0)
    p.add_argument("--x", type=float, help="also evaluate the mode sum at x")
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="run one estimator on a path CSV")
    p.add_argument("--scheme", required=True, choices=["fixed-time", "fixed-space"])
    p.add_argument("--input", required=True)
    p.add_argument("--sigma", type=float, help="known volatility (estimates the drift)")
    p.add_argument("--theta", type=float, help="known drift (estimates the volatility)")
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("asymptotics", help="print the closed-form constants as CSV")
    p.add_argument("--theta", type=float, default=0.1)
    p.add_argument("--x", type=float, default=float(np.pi / 2))
    p.add_argument("--length", type=float, default=0.75)
    p.add_argument("--n-sequence", default="256,1024,4096")
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("mc", help="run a configured Monte Carlo sweep")
    _add_common(p)
    p.set_defaults(func=_cmd_mc)

    p = sub.add_parser("reproduce-figures", help="write figN.csv and figN.svg")
    p.add_argument("--figure", type=int, required=True, choices=[1, 2, 3, 4, 5])
    _add_common(p)
    p.set_defaults(func=_cmd_reproduce)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--fast", action="store_true",
                   help="smoke sizes (verdict lines are indicative only)")
    p.add_argument("--criteria", help="comma list, e.g. 1,2,7")
    p.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DomainError, OSError, ValueError) as exc:
        print(f"heatvar: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
