"""Seeded Monte Carlo benchmark harness.

Runs the three trackers over many simulated traces, aggregates per-trial RMSE
into mean and sample std per (tracker, noise level, outlier fraction) cell,
and emits long-form plus summary CSV (or a markdown grid). Trials are
independent tasks keyed by (base_seed, trial_index), so results are identical
for any worker count and any execution order.

Within a trial every tracker consumes the same trace (paired comparison), and
parameter sweeps reuse the trial's trace across swept values.
"""

from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .normalhedge import LengthMismatchError
from .trackers import BootstrapParticleFilter, GridBayesFilter, HedgeTracker
from .world import Trace, WorldConfig, derive_rng, simulate

TRACKER_ORDER = ("nh", "bayes", "pf")
SWEEP_PARAMS = ("sigma-star", "alpha")

# substream ids under (base_seed, trial_index); world and tracker draws never mix
STREAM_WORLD = 0
STREAM_NH = 1
STREAM_PF = 2

SUMMARY_HEADER = ("tracker", "sigma_o", "rho", "mean_rmse", "std_rmse", "trials")
LONG_HEADER = ("tracker", "sigma_o", "rho", "sweep_param", "sweep_value", "trial", "rmse")
SWEEP_SUMMARY_HEADER = (
    "tracker", "sigma_o", "rho", "sweep_param", "sweep_value",
    "mean_rmse", "std_rmse", "trials",
)


class TrialError(RuntimeError):
    """A trial failed; carries the trial index and tracker in the message."""


def rmse(estimates, truths) -> float:
    """Root mean squared error between two equal-length sequences."""
    est = np.asarray(estimates, dtype=float)
    tru = np.asarray(truths, dtype=float)
    if est.ndim != 1 or est.shape != tru.shape:
        raise LengthMismatchError(
            f"estimates shape {est.shape} does not match truths shape {tru.shape}"
        )
    if est.size == 0:
        raise LengthMismatchError("rmse needs at least one sample")
    return float(np.sqrt(np.mean(np.square(est - tru))))


@dataclass(frozen=True)
class ExperimentSpec:
    """Full description of a benchmark run; every field participates in hashing
    so a spec can serve as a cache key."""

    sigma_o: float
    rho_list: tuple[float, ...]
    trackers: tuple[str, ...] = TRACKER_ORDER
    trials: int = 100
    base_seed: int = 0
    half_width: int = 50
    horizon: int = 200
    grid_min: int = -500
    grid_max: int = 500
    n_actions: int = 100
    discount: float = 0.02
    resample_var: float = 400.0
    sigma_d: float = 2.0
    n_particles: int = 100
    sweep_param: str | None = None
    sweep_values: tuple[float, ...] = ()

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if not self.rho_list:
            raise ValueError("rho_list must be nonempty")
        for rho in self.rho_list:
            if not 0.0 <= rho <= 1.0:
                raise ValueError(f"rho values must lie in [0, 1], got {rho}")
        for name in self.trackers:
            if name not in TRACKER_ORDER:
                raise ValueError(f"unknown tracker {name!r}, expected one of {TRACKER_ORDER}")
        if self.sweep_param is not None:
            if self.sweep_param not in SWEEP_PARAMS:
                raise ValueError(f"sweep_param must be one of {SWEEP_PARAMS}")
            if not self.sweep_values:
                raise ValueError("sweep_values must be nonempty when sweep_param is set")

    def world_config(self, rho: float) -> WorldConfig:
        return WorldConfig(
            noise_scale=self.sigma_o,
            outlier_frac=rho,
            seed=self.base_seed,
            half_width=self.half_width,
            horizon=self.horizon,
            grid_min=self.grid_min,
            grid_max=self.grid_max,
        )


@dataclass(frozen=True)
class TrialRecord:
    tracker: str
    sigma_o: float
    rho: float
    sweep_param: str | None
    sweep_value: float | None
    trial: int
    rmse: float


@dataclass(frozen=True)
class CellStats:
    tracker: str
    sigma_o: float
    rho: float
    sweep_param: str | None
    sweep_value: float | None
    mean_rmse: float
    std_rmse: float
    trials: int


def _record_key(rec: TrialRecord):
    sweep = rec.sweep_value if rec.sweep_value is not None else -math.inf
    return (TRACKER_ORDER.index(rec.tracker), rec.sigma_o, rec.rho, sweep, rec.trial)


@dataclass(frozen=True)
class AggregateResult:
    """Per-trial RMSE records in canonical order plus derived per-cell stats."""

    records: tuple[TrialRecord, ...]

    def cells(self) -> tuple[CellStats, ...]:
        groups: dict[tuple, list[TrialRecord]] = {}
        for rec in self.records:
            key = (rec.tracker, rec.sigma_o, rec.rho, rec.sweep_param, rec.sweep_value)
            groups.setdefault(key, []).append(rec)
        out = []
        for (tracker, sigma_o, rho, sparam, sval), recs in groups.items():
            vals = np.array([r.rmse for r in recs])
            std = float(np.std(vals, ddof=1)) if vals.size > 1 else 0.0
            out.append(CellStats(
                tracker=tracker, sigma_o=sigma_o, rho=rho,
                sweep_param=sparam, sweep_value=sval,
                mean_rmse=float(vals.mean()), std_rmse=std, trials=int(vals.size),
            ))
        out.sort(key=lambda c: (
            TRACKER_ORDER.index(c.tracker), c.sigma_o, c.rho,
            c.sweep_value if c.sweep_value is not None else -math.inf,
        ))
        return tuple(out)

    def cell(self, tracker: str, rho: float, sigma_o: float | None = None,
             sweep_value: float | None = None) -> CellStats:
        """Look up one cell's stats; sigma_o may be omitted when unambiguous."""
        matches = [
            c for c in self.cells()
            if c.tracker == tracker
            and math.isclose(c.rho, rho, abs_tol=1e-12)
            and (sigma_o is None or math.isclose(c.sigma_o, sigma_o, abs_tol=1e-12))
            and (sweep_value is None
                 or (c.sweep_value is not None
                     and math.isclose(c.sweep_value, sweep_value, abs_tol=1e-12)))
        ]
        if len(matches) != 1:
            raise KeyError(
                f"cell lookup ({tracker}, rho={rho}, sigma_o={sigma_o}, "
                f"sweep_value={sweep_value}) matched {len(matches)} cells"
            )
        return matches[0]

    def merged(self, other: "AggregateResult") -> "AggregateResult":
        recs = sorted(self.records + other.records, key=_record_key)
        return AggregateResult(records=tuple(recs))


def _tracker_rmse(name: str, spec: ExperimentSpec, trial_index: int, trace: Trace,
                  resample_var: float | None = None,
                  discount: float | None = None) -> float:
    cfg = spec.world_config(0.0).loss_config()
    if name == "nh":
        tracker = HedgeTracker(
            cfg,
            rng=derive_rng(spec.base_seed, trial_index, STREAM_NH),
            n_actions=spec.n_actions,
            discount=spec.discount if discount is None else discount,
            resample_var=spec.resample_var if resample_var is None else resample_var,
        )
    elif name == "bayes":
        tracker = GridBayesFilter(cfg, sigma_d=spec.sigma_d)
    elif name == "pf":
        tracker = BootstrapParticleFilter(
            cfg,
            rng=derive_rng(spec.base_seed, trial_index, STREAM_PF),
            sigma_d=spec.sigma_d,
            n_particles=spec.n_particles,
        )
    else:
        raise ValueError(f"unknown tracker {name!r}")
    estimates = [tracker.step(frame) for frame in trace.frames]
    return rmse(estimates, trace.true_states)


def run_trial(spec: ExperimentSpec, trial_index: int, rho: float) -> dict[str, float]:
    """One simulation consumed by every requested tracker; returns name -> RMSE.

    Deterministic given (base_seed, trial_index): world and tracker draws come
    from separate derived streams, so adding or removing trackers never
    changes the trace or the other trackers' results.
    """
    if not 0 <= trial_index < spec.trials:
        raise ValueError(f"trial_index {trial_index} outside [0, {spec.trials})")
    trace = simulate(spec.world_config(rho),
                     derive_rng(spec.base_seed, trial_index, STREAM_WORLD))
    out = {}
    for name in spec.trackers:
        try:
            out[name] = _tracker_rmse(name, spec, trial_index, trace)
        except Exception as exc:
            raise TrialError(
                f"trial {trial_index} (rho={rho}, tracker={name}) failed: {exc}"
            ) from exc
    return out


def run_sweep_trial(spec: ExperimentSpec, trial_index: int, rho: float) -> dict[float, float]:
    """One simulation reused across all swept parameter values (hedge tracker only)."""
    if spec.sweep_param is None:
        raise ValueError("spec has no sweep_param")
    trace = simulate(spec.world_config(rho),
                     derive_rng(spec.base_seed, trial_index, STREAM_WORLD))
    out = {}
    for value in spec.sweep_values:
        override = {"resample_var": value} if spec.sweep_param == "sigma-star" else {"discount": value}
        try:
            out[value] = _tracker_rmse("nh", spec, trial_index, trace, **override)
        except Exception as exc:
            raise TrialError(
                f"trial {trial_index} (rho={rho}, {spec.sweep_param}={value}) failed: {exc}"
            ) from exc
    return out


def _run_task(args) -> tuple[float, int, dict]:
    spec, rho, trial_index = args
    runner = run_sweep_trial if spec.sweep_param is not None else run_trial
    return rho, trial_index, runner(spec, trial_index, rho)


def run_experiment(spec: ExperimentSpec, workers: int | None = None) -> AggregateResult:
    """Run the whole (rho x trial) grid, optionally across processes.

    The per-trial results are reassembled in canonical order, so the output is
    identical for any worker count. A failed trial aborts the experiment.
    """
    tasks = [(spec, rho, t) for rho in spec.rho_list for t in range(spec.trials)]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            raw = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        raw = [_run_task(t) for t in tasks]

    records = []
    for rho, trial_index, result in raw:
        for key, value in result.items():
            if spec.sweep_param is not None:
                records.append(TrialRecord(
                    tracker="nh", sigma_o=spec.sigma_o, rho=rho,
                    sweep_param=spec.sweep_param, sweep_value=key,
                    trial=trial_index, rmse=value,
                ))
            else:
                records.append(TrialRecord(
                    tracker=key, sigma_o=spec.sigma_o, rho=rho,
                    sweep_param=None, sweep_value=None,
                    trial=trial_index, rmse=value,
                ))
    records.sort(key=_record_key)
    return AggregateResult(records=tuple(records))


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------

def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    # repr round-trips doubles exactly, keeping files byte-stable
    return repr(float(value))


def _write_csv(path: Path, header, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _render_markdown(cells: tuple[CellStats, ...]) -> str:
    lines = []
    for sigma_o in sorted({c.sigma_o for c in cells}):
        group = [c for c in cells if c.sigma_o == sigma_o]
        trackers = [t for t in TRACKER_ORDER if any(c.tracker == t for c in group)]
        lines.append(f"## sigma_o = {sigma_o:g}")
        lines.append("")
        lines.append("| rho | " + " | ".join(trackers) + " |")
        lines.append("|---" * (len(trackers) + 1) + "|")
        for rho in sorted({c.rho for c in group}):
            row = [f"{rho:.2f}"]
            for t in trackers:
                match = [c for c in group if c.tracker == t and c.rho == rho]
                row.append(
                    f"{match[0].mean_rmse:.2f} ± {match[0].std_rmse:.2f}" if match else ""
                )
            lines.append("| " + " | ".join(row) + " |")
        lines.append("")
    return "\n".join(lines)


def emit_results(result: AggregateResult, out_dir, fmt: str = "csv") -> list[Path]:
    """Write trials.csv plus a summary (CSV or markdown grid) under out_dir.

    Emission is deterministic: canonical row order and exact float reprs, so
    re-emitting the same result gives byte-identical files.
    """
    if fmt not in ("csv", "md"):
        raise ValueError(f"format must be 'csv' or 'md', got {fmt!r}")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    long_path = out_dir / "trials.csv"
    _write_csv(long_path, LONG_HEADER, (
        (rec.tracker, _fmt(rec.sigma_o), _fmt(rec.rho), _fmt(rec.sweep_param),
         _fmt(rec.sweep_value), _fmt(rec.trial), _fmt(rec.rmse))
        for rec in result.records
    ))
    written.append(long_path)

    cells = result.cells()
    swept = any(c.sweep_param is not None for c in cells)
    if fmt == "csv":
        summary_path = out_dir / "summary.csv"
        if swept:
            # swept cells need the extra key columns to stay one-row-per-cell
            _write_csv(summary_path, SWEEP_SUMMARY_HEADER, (
                (c.tracker, _fmt(c.sigma_o), _fmt(c.rho), _fmt(c.sweep_param),
                 _fmt(c.sweep_value), _fmt(c.mean_rmse), _fmt(c.std_rmse), _fmt(c.trials))
                for c in cells
            ))
        else:
            _write_csv(summary_path, SUMMARY_HEADER, (
                (c.tracker, _fmt(c.sigma_o), _fmt(c.rho), _fmt(c.mean_rmse),
                 _fmt(c.std_rmse), _fmt(c.trials))
                for c in cells
            ))
    else:
        summary_path = out_dir / "summary.md"
        summary_path.write_text(_render_markdown(cells), encoding="utf-8")
    written.append(summary_path)
    return written


def export_step_trace(path, sigma_o: float, rho: float, seed: int = 0,
                      include_frames: bool = False) -> Path:
    """Run all three trackers over one simulated trace; write one row per step.

    Columns: t, true_state, each tracker's estimate, and the diagnostics that
    explain it (hedge: deletions this step and the weight scale c; particle
    filter: effective sample size). With include_frames, the raw measurement
    cells follow as m_<cell> columns. The trace and tracker draws use the same
    derived streams as trial 0 of a benchmark run with base_seed=seed, so an
    exported trace shows exactly what that trial's trackers saw.
    """
    cfg = WorldConfig(noise_scale=sigma_o, outlier_frac=rho, seed=seed)
    trace = simulate(cfg, derive_rng(seed, 0, STREAM_WORLD))
    loss_cfg = cfg.loss_config()
    nh = HedgeTracker(loss_cfg, rng=derive_rng(seed, 0, STREAM_NH))
    bayes = GridBayesFilter(loss_cfg)
    pf = BootstrapParticleFilter(loss_cfg, rng=derive_rng(seed, 0, STREAM_PF))

    header = ["t", "true_state", "nh_estimate", "nh_deleted", "nh_c",
              "bayes_estimate", "pf_estimate", "pf_ess"]
    if include_frames:
        header += [f"m_{c}" for c in range(cfg.grid_min, cfg.grid_max + 1)]
    rows = []
    for t, (true_state, frame) in enumerate(zip(trace.true_states, trace.frames), start=1):
        row = [
            _fmt(t), _fmt(true_state),
            _fmt(nh.step(frame)), _fmt(nh.last_n_deleted), _fmt(nh.last_scale),
            _fmt(bayes.step(frame)),
            _fmt(pf.step(frame)), _fmt(pf.last_ess),
        ]
        if include_frames:
            row += [_fmt(v) for v in frame]
        rows.append(row)

    path = Path(path)
    if str(path.parent) not in ("", "."):
        path.parent.mkdir(parents=True, exist_ok=True)
    _write_csv(path, header, rows)
    return path
