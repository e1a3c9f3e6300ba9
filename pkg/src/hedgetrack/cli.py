"""Command line front end.

Three subcommands:
  bench     Monte Carlo comparison of the trackers over an outlier-fraction grid.
  simulate  Export a per-step trace: true state, every tracker's estimate, and
            diagnostics (optionally the full measurement frames).
  sweep     Re-run the hedge tracker across values of its resampling variance
            or discount factor, reusing the same traces per trial.
"""

from __future__ import annotations

import argparse
import sys

from .bench import ExperimentSpec, TrialError, emit_results, export_step_trace, run_experiment

DEFAULT_RHO_LIST = "0,0.01,0.05,0.10,0.15,0.20"
DEFAULT_TRACKERS = "nh,bayes,pf"


def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must be an unsigned 64-bit integer, got {text}")
    return value


def _float_list(text: str) -> tuple[float, ...]:
    values = tuple(float(tok) for tok in text.split(",") if tok.strip())
    if not values:
        raise argparse.ArgumentTypeError(f"expected a comma-separated list, got {text!r}")
    return values


def _name_list(text: str) -> tuple[str, ...]:
    return tuple(tok.strip() for tok in text.split(",") if tok.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hedgetrack")
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="run the tracker comparison grid")
    bench.add_argument("--sigma-o", type=float, required=True, help="measurement noise std")
    bench.add_argument("--rho-list", type=_float_list, default=_float_list(DEFAULT_RHO_LIST),
                       help="comma-separated outlier fractions")
    bench.add_argument("--trackers", type=_name_list, default=_name_list(DEFAULT_TRACKERS),
                       help="comma-separated subset of nh,bayes,pf")
    bench.add_argument("--trials", type=int, default=100)
    bench.add_argument("--seed", type=_u64, default=0)
    bench.add_argument("--out", required=True, help="output directory")
    bench.add_argument("--format", choices=("csv", "md"), default="csv")
    bench.add_argument("--workers", type=int, default=None)

    sim = sub.add_parser("simulate", help="export one run's per-step tracker trace as CSV")
    sim.add_argument("--sigma-o", type=float, required=True)
    sim.add_argument("--rho", type=float, required=True)
    sim.add_argument("--seed", type=_u64, default=0)
    sim.add_argument("--out", required=True, help="output CSV path")
    sim.add_argument("--frames", action="store_true",
                     help="include the full per-cell measurement frames")

    sweep = sub.add_parser("sweep", help="sweep a hedge-tracker parameter")
    sweep.add_argument("--param", choices=("sigma-star", "alpha"), required=True)
    sweep.add_argument("--values", type=_float_list, required=True)
    sweep.add_argument("--sigma-o", type=float, required=True)
    sweep.add_argument("--rho", type=float, required=True)
    sweep.add_argument("--trials", type=int, default=100)
    sweep.add_argument("--seed", type=_u64, default=0)
    sweep.add_argument("--out", required=True, help="output directory")
    return parser


def _cmd_bench(args) -> int:
    spec = ExperimentSpec(
        sigma_o=args.sigma_o,
        rho_list=args.rho_list,
        trackers=args.trackers,
        trials=args.trials,
        base_seed=args.seed,
    )
    result = run_experiment(spec, workers=args.workers)
    for path in emit_results(result, args.out, fmt=args.format):
        print(f"wrote {path}")
    return 0


def _cmd_simulate(args) -> int:
    path = export_step_trace(
        args.out,
        sigma_o=args.sigma_o,
        rho=args.rho,
        seed=args.seed,
        include_frames=args.frames,
    )
    print(f"wrote {path}")
    return 0


def _cmd_sweep(args) -> int:
    spec = ExperimentSpec(
        sigma_o=args.sigma_o,
        rho_list=(args.rho,),
        trackers=("nh",),
        trials=args.trials,
        base_seed=args.seed,
        sweep_param=args.param,
        sweep_values=args.values,
    )
    result = run_experiment(spec)
    for path in emit_results(result, args.out, fmt="csv"):
        print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"bench": _cmd_bench, "simulate": _cmd_simulate, "sweep": _cmd_sweep}[args.command]
    try:
        return handler(args)
    except (TrialError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
