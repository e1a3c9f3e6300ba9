"""Robust 1D tracking via online learning over an action pool, with exact
grid-Bayes and bootstrap particle-filter baselines and a seeded benchmark
harness."""

from .bench import (
    AggregateResult,
    CellStats,
    ExperimentSpec,
    TrialError,
    TrialRecord,
    emit_results,
    export_step_trace,
    rmse,
    run_experiment,
    run_sweep_trial,
    run_trial,
)
from .losses import LossConfig, clip, dynamics_loss, identity, nearest_cell, observation_loss, observation_loss_field
from .normalhedge import (
    AllNonPositiveError,
    EmptyActionsError,
    HedgeState,
    LengthMismatchError,
    PotentialSolution,
    hedge_round,
    regret_to_quantile,
    solve_potential,
    weights_from_regrets,
    weights_with_scale,
)
from .trackers import (
    BootstrapParticleFilter,
    DegenerateFrameError,
    GridBayesFilter,
    HedgeTracker,
    loglik_field,
    predict_mass,
    resample_actions,
    systematic_resample,
    transition_kernel,
)
from .world import (
    Trace,
    WorldConfig,
    derive_rng,
    export_trace_csv,
    gen_measurements,
    gen_trajectory,
    pulse,
    sample_noise,
    simulate,
)

__version__ = "0.1.0"

__all__ = [
    "AggregateResult",
    "AllNonPositiveError",
    "BootstrapParticleFilter",
    "CellStats",
    "DegenerateFrameError",
    "EmptyActionsError",
    "ExperimentSpec",
    "GridBayesFilter",
    "HedgeState",
    "HedgeTracker",
    "LengthMismatchError",
    "LossConfig",
    "PotentialSolution",
    "Trace",
    "TrialError",
    "TrialRecord",
    "WorldConfig",
    "clip",
    "derive_rng",
    "dynamics_loss",
    "emit_results",
    "export_step_trace",
    "export_trace_csv",
    "gen_measurements",
    "gen_trajectory",
    "hedge_round",
    "identity",
    "loglik_field",
    "nearest_cell",
    "observation_loss",
    "observation_loss_field",
    "predict_mass",
    "pulse",
    "regret_to_quantile",
    "resample_actions",
    "rmse",
    "run_experiment",
    "run_sweep_trial",
    "run_trial",
    "sample_noise",
    "simulate",
    "solve_potential",
    "systematic_resample",
    "transition_kernel",
    "weights_from_regrets",
    "weights_with_scale",
]
