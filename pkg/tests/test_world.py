"""World tests: pulse geometry, mixture-noise moments, trajectory-law
invariants, stream determinism, and the raw trace CSV export."""

import csv

import numpy as np
import pytest

import hedgetrack.world as world
from hedgetrack import (
    Trace,
    WorldConfig,
    derive_rng,
    export_trace_csv,
    gen_trajectory,
    pulse,
    sample_noise,
    simulate,
)


def test_pulse_window_is_inclusive():
    z, w = 10.0, 50
    assert pulse(z - w, z, w) == 1.0
    assert pulse(z + w, z, w) == 1.0
    assert pulse(z - w - 1, z, w) == 0.0
    assert pulse(z + w + 0.001, z, w) == 0.0
    x = np.arange(-100, 101)
    assert pulse(x, 0.0, w).sum() == 2 * w + 1


def test_noise_core_std():
    rng = np.random.default_rng(11)
    draws = sample_noise(rng, 1.0, 0.0, size=1_000_000)
    assert abs(draws.mean()) < 0.01
    assert draws.std() == pytest.approx(1.0, rel=0.01)


def test_noise_mixture_variance():
    # var = (1 - rho) sigma^2 + rho (10 sigma)^2 = 20.8 at sigma=1, rho=0.2
    rng = np.random.default_rng(12)
    draws = sample_noise(rng, 1.0, 0.2, size=2_000_000)
    assert draws.var() == pytest.approx(20.8, rel=0.03)
    assert abs(draws.mean()) < 0.02


def test_noise_scalar_and_validation():
    rng = np.random.default_rng(13)
    assert isinstance(sample_noise(rng, 1.0, 0.0), float)
    with pytest.raises(ValueError):
        sample_noise(rng, -1.0, 0.0)


def test_trajectory_invariants():
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0)
    bound = cfg.grid_max - cfg.half_width
    levels = set()
    for seed in range(300):
        z = gen_trajectory(cfg, derive_rng(seed))
        assert z.shape == (cfg.horizon,)
        assert z[0] == 0.0
        steps = np.diff(z)
        assert np.all(np.abs(steps) <= 1.0 + 1e-12)  # speed limit holds everywhere
        assert np.all(np.abs(z) <= bound + 1e-12)
        # away from the walls each step is one of the five velocities
        interior = np.abs(z[1:]) < bound - 1.0
        levels.update(np.round(np.abs(steps[interior]), 6))
    # nothing but the three speeds, and all of them show up across 300 paths
    assert levels == {0.0, 0.5, 1.0}


def test_trajectory_reflects_instead_of_sticking():
    # with a tight bound the path must bounce; it may never sit outside
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0, horizon=2000,
                      grid_min=-60, grid_max=60)
    z = gen_trajectory(cfg, derive_rng(99))
    bound = cfg.grid_max - cfg.half_width
    assert np.max(np.abs(z)) <= bound
    assert np.max(np.abs(z)) > bound * 0.5  # the path actually reaches the walls


def test_frame_noise_moments():
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0)
    trace = simulate(cfg, derive_rng(0, 0, 0))
    signal = np.stack([pulse(cfg.loss_config().cells().astype(float), z, cfg.half_width)
                       for z in trace.true_states])
    noise = trace.frames - signal
    flat = noise.ravel()
    assert abs(flat.mean()) < 0.01
    assert flat.std() == pytest.approx(1.0, rel=0.01)
    # adjacent cells are independent draws
    r = np.corrcoef(flat[:-1], flat[1:])[0, 1]
    assert abs(r) < 0.02


def test_simulate_is_deterministic_per_stream():
    cfg = WorldConfig(noise_scale=8.0, outlier_frac=0.1)
    a = simulate(cfg, derive_rng(7, 3, 0))
    b = simulate(cfg, derive_rng(7, 3, 0))
    c = simulate(cfg, derive_rng(7, 4, 0))
    assert np.array_equal(a.true_states, b.true_states)
    assert np.array_equal(a.frames, b.frames)
    assert not np.array_equal(a.frames, c.frames)


def test_simulate_uses_config_seed_by_default():
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0, seed=42, horizon=20)
    assert np.array_equal(simulate(cfg).frames, simulate(cfg).frames)


def test_config_validation():
    with pytest.raises(ValueError):
        WorldConfig(noise_scale=1.0, outlier_frac=1.5)
    with pytest.raises(ValueError):
        WorldConfig(noise_scale=1.0, outlier_frac=0.0, horizon=0)


def test_export_trace_csv(tmp_path):
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0, horizon=12)
    trace = simulate(cfg, derive_rng(1))
    path = tmp_path / "trace.csv"
    export_trace_csv(trace, path, cfg)
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "z_t"]
    assert len(rows) == 13
    assert float(rows[1][1]) == trace.true_states[0]

    wide = tmp_path / "wide.csv"
    export_trace_csv(trace, wide, cfg, include_frames=True)
    rows = list(csv.reader(wide.open()))
    assert len(rows[0]) == 2 + cfg.loss_config().n_cells
    assert float(rows[3][2]) == trace.frames[2][0]


def test_trace_is_frozen():
    cfg = WorldConfig(noise_scale=1.0, outlier_frac=0.0, horizon=5)
    trace = simulate(cfg)
    assert isinstance(trace, Trace)
    with pytest.raises(AttributeError):
        trace.true_states = np.zeros(5)
