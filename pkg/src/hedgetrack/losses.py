"""Losses that score a candidate state against a measurement frame.

A frame is one real value per integer grid cell. The observation loss of a
state is the negative sum of clipped frame values inside a +-half_width
window around the state; clipping caps what any single cell (outlier or not)
can contribute. A squared-error dynamics loss is provided for completeness;
the hedge tracker never evaluates it (resampling plays that role).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

# dynamics map: current state(s) -> predicted next state(s)
DynamicsFn = Callable[[np.ndarray], np.ndarray]


def identity(x):
    """The trivial dynamics: next state equals current state."""
    return x


@dataclass(frozen=True)
class LossConfig:
    """Window half-width, clip scale, and the integer grid the frames live on."""

    half_width: int
    noise_scale: float
    grid_min: int = -500
    grid_max: int = 500

    def __post_init__(self):
        if self.grid_min >= self.grid_max:
            raise ValueError(f"grid_min {self.grid_min} must be < grid_max {self.grid_max}")
        if self.half_width < 1:
            raise ValueError(f"half_width must be >= 1, got {self.half_width}")
        if self.half_width > (self.grid_max - self.grid_min) / 2:
            raise ValueError(
                f"half_width {self.half_width} exceeds half the grid span "
                f"{(self.grid_max - self.grid_min) / 2}"
            )
        if self.noise_scale < 0:
            raise ValueError(f"noise_scale must be >= 0, got {self.noise_scale}")

    @property
    def n_cells(self) -> int:
        return self.grid_max - self.grid_min + 1

    def cells(self) -> np.ndarray:
        """All grid cells, grid_min..grid_max inclusive."""
        return np.arange(self.grid_min, self.grid_max + 1)


def clip(y, noise_scale: float):
    """Clamp measurement values to [-noise_scale, 1 + noise_scale]."""
    return np.minimum(1.0 + noise_scale, np.maximum(y, -noise_scale))


def nearest_cell(x, cfg: LossConfig) -> np.ndarray:
    """Nearest integer grid cell(s) for continuous state(s), clamped to the grid.

    Continuous states are scored at their nearest cell because frames only
    exist on integer cells; all estimators share this rounding rule.
    """
    return np.clip(np.rint(x), cfg.grid_min, cfg.grid_max).astype(int)


def _window_prefix(frame: np.ndarray, cfg: LossConfig) -> np.ndarray:
    """Prefix sums of the clipped frame; shared by batch and per-state paths.

    Both paths must subtract the same prefix-sum entries, otherwise float
    summation order would break their exact agreement.
    """
    if frame.shape != (cfg.n_cells,):
        raise ValueError(f"frame has shape {frame.shape}, expected ({cfg.n_cells},)")
    prefix = np.zeros(cfg.n_cells + 1)
    np.cumsum(clip(frame, cfg.noise_scale), out=prefix[1:])
    return prefix


def _window_bounds(idx: np.ndarray, cfg: LossConfig) -> tuple[np.ndarray, np.ndarray]:
    lo = np.maximum(idx - cfg.half_width, 0)
    hi = np.minimum(idx + cfg.half_width, cfg.n_cells - 1)
    return lo, hi


def observation_loss(x, frame, cfg: LossConfig) -> float:
    """Negative clipped frame sum over the window around x, truncated at grid edges."""
    frame = np.asarray(frame, dtype=float)
    prefix = _window_prefix(frame, cfg)
    idx = nearest_cell(x, cfg) - cfg.grid_min
    lo, hi = _window_bounds(np.asarray(idx), cfg)
    return float(-(prefix[hi + 1] - prefix[lo]))


def observation_loss_field(frame, cfg: LossConfig) -> np.ndarray:
    """Observation loss at every grid cell in one O(n_cells) pass."""
    frame = np.asarray(frame, dtype=float)
    prefix = _window_prefix(frame, cfg)
    idx = np.arange(cfg.n_cells)
    lo, hi = _window_bounds(idx, cfg)
    return -(prefix[hi + 1] - prefix[lo])


def dynamics_loss(x_t, x_prev, f: DynamicsFn = identity) -> float:
    """Squared distance between x_t and the dynamics prediction f(x_prev)."""
    d = np.asarray(x_t, dtype=float) - np.asarray(f(np.asarray(x_prev, dtype=float)))
    return float(np.sum(np.square(d)))
