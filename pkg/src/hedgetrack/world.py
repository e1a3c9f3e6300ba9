"""Synthetic 1D world: slow bounded target, square-pulse signal, mixture noise.

Each time step emits one frame: the pulse indicator around the true position
plus i.i.d. noise per cell, where a cell's noise is Gaussian at scale
`noise_scale` with probability (1 - outlier_frac) and at 10x that scale
otherwise. Frames are what the trackers see; the true path is kept for
scoring only.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .losses import LossConfig

OUTLIER_SCALE = 10.0  # outlier component's std multiplier

# velocities for the piecewise-constant-velocity path; the target holds one
# for a geometric-length segment (mean TRAJECTORY_MEAN_SEGMENT steps). The
# segment mean is long relative to the horizon so a typical path sustains a
# drift: short segments mostly cancel and leave the root-mean-square
# excursion of a 200-step path under 50 cells, too small to separate a
# tracker that follows the target from one that has lost it outright.
TRAJECTORY_VELOCITIES = (-1.0, -0.5, 0.0, 0.5, 1.0)
TRAJECTORY_MEAN_SEGMENT = 150


def derive_rng(*key: int) -> np.random.Generator:
    """Independent counter-based stream for a composite integer key.

    Streams derived from distinct keys are statistically independent, so
    trials can run in any order or thread layout without changing results.
    """
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


@dataclass(frozen=True)
class WorldConfig:
    """Full description of one simulated world."""

    noise_scale: float
    outlier_frac: float
    seed: int = 0
    half_width: int = 50
    horizon: int = 200
    grid_min: int = -500
    grid_max: int = 500

    def __post_init__(self):
        if not 0.0 <= self.outlier_frac <= 1.0:
            raise ValueError(f"outlier_frac must be in [0, 1], got {self.outlier_frac}")
        if self.horizon < 1:
            raise ValueError(f"horizon must be >= 1, got {self.horizon}")

    def loss_config(self) -> LossConfig:
        """Matching loss/grid geometry; one noise_scale drives both noise and clipping."""
        return LossConfig(
            half_width=self.half_width,
            noise_scale=self.noise_scale,
            grid_min=self.grid_min,
            grid_max=self.grid_max,
        )


@dataclass(frozen=True)
class Trace:
    """One simulated run: true positions and the frames the trackers see."""

    true_states: np.ndarray  # (horizon,)
    frames: np.ndarray  # (horizon, n_cells)


def pulse(x, z, half_width: int):
    """Square-pulse indicator: 1 where |x - z| <= half_width (inclusive), else 0."""
    return (np.abs(np.asarray(x, dtype=float) - z) <= half_width).astype(float)


def sample_noise(rng: np.random.Generator, noise_scale: float, outlier_frac: float, size=None):
    """Zero-mean Gaussian mixture draw(s): scale noise_scale, or 10x with prob outlier_frac."""
    if noise_scale < 0:
        raise ValueError(f"noise_scale must be >= 0, got {noise_scale}")
    outlier = rng.random(size) < outlier_frac
    scale = np.where(outlier, OUTLIER_SCALE * noise_scale, noise_scale)
    draws = rng.standard_normal(size) * scale
    return float(draws) if size is None else draws


def gen_trajectory(cfg: WorldConfig, rng: np.random.Generator) -> np.ndarray:
    """Bounded piecewise-constant-velocity path, starting at 0.

    Velocity is drawn uniformly from TRAJECTORY_VELOCITIES and held for a
    geometric-length segment; the path reflects off +-(grid_max - half_width)
    so the pulse stays inside the grid. Steps never exceed 1 in magnitude.
    """
    bound = float(cfg.grid_max - cfg.half_width)
    z = np.zeros(cfg.horizon)
    velocity = 0.0
    remaining = 0
    for t in range(1, cfg.horizon):
        if remaining == 0:
            velocity = rng.choice(TRAJECTORY_VELOCITIES)
            remaining = int(rng.geometric(1.0 / TRAJECTORY_MEAN_SEGMENT))
        nxt = z[t - 1] + velocity
        if nxt > bound:
            nxt = 2.0 * bound - nxt
            velocity = -velocity
        elif nxt < -bound:
            nxt = -2.0 * bound - nxt
            velocity = -velocity
        z[t] = nxt
        remaining -= 1
    return z


def gen_measurements(z: float, cfg: WorldConfig, rng: np.random.Generator) -> np.ndarray:
    """One frame: pulse around the true position plus independent mixture noise per cell."""
    cells = np.arange(cfg.grid_min, cfg.grid_max + 1)
    return pulse(cells, z, cfg.half_width) + sample_noise(
        rng, cfg.noise_scale, cfg.outlier_frac, size=cells.size
    )


def simulate(cfg: WorldConfig, rng: np.random.Generator | None = None) -> Trace:
    """Draw a full trace from one seeded stream; same config, same trace."""
    if rng is None:
        rng = derive_rng(cfg.seed)
    true_states = gen_trajectory(cfg, rng)
    frames = np.stack([gen_measurements(z, cfg, rng) for z in true_states])
    return Trace(true_states=true_states, frames=frames)


def export_trace_csv(trace: Trace, path, cfg: WorldConfig, include_frames: bool = False) -> None:
    """Write t, z_t (and optionally every frame cell) as CSV."""
    path = Path(path)
    header = ["t", "z_t"]
    if include_frames:
        header += [f"m_{c}" for c in range(cfg.grid_min, cfg.grid_max + 1)]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for t, z in enumerate(trace.true_states, start=1):
            row = [t, repr(float(z))]
            if include_frames:
                row += [repr(float(v)) for v in trace.frames[t - 1]]
            writer.writerow(row)
