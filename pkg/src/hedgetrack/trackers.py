"""Three streaming state estimators behind one `step(frame) -> estimate` contract.

* HedgeTracker: a pool of candidate states weighted by discounted regret;
  poorly performing candidates are deleted and resampled near the current
  high-weight region, so the pool follows whatever explains the frames well.
* GridBayesFilter: exact recursive posterior over the integer grid for the
  pulse-plus-Gaussian measurement model (predict by a truncated Gaussian
  transition, update by likelihood, estimate by posterior mean).
* BootstrapParticleFilter: sampling approximation of the same posterior.

The generative-model pair (Bayes, PF) shares one log-likelihood field; the
hedge tracker never sees that model, only the clipped-window loss.
"""

from __future__ import annotations

import logging

import numpy as np

from .losses import (
    DynamicsFn,
    LossConfig,
    _window_bounds,
    identity,
    nearest_cell,
    observation_loss_field,
)
from .normalhedge import weights_with_scale

logger = logging.getLogger(__name__)
logger.addHandler(logging.NullHandler())


class DegenerateFrameError(ValueError):
    """Posterior renormalization lost all mass (impossible for finite frames)."""


def loglik_field(frame, cfg: LossConfig, sigma_o: float) -> np.ndarray:
    """Relative log-likelihood of every candidate cell under the pulse model.

    For frames modeled as N(pulse(x, s), sigma_o^2) per cell, only the window
    terms depend on the candidate s, and they reduce to a window sum of
    (2*frame - 1); prefix sums give all cells in O(n_cells). The dropped
    constant is common to all candidates.
    """
    if sigma_o <= 0:
        raise ValueError(f"sigma_o must be > 0, got {sigma_o}")
    frame = np.asarray(frame, dtype=float)
    if frame.shape != (cfg.n_cells,):
        raise ValueError(f"frame has shape {frame.shape}, expected ({cfg.n_cells},)")
    prefix = np.zeros(cfg.n_cells + 1)
    np.cumsum(2.0 * frame - 1.0, out=prefix[1:])
    idx = np.arange(cfg.n_cells)
    lo, hi = _window_bounds(idx, cfg)
    return (prefix[hi + 1] - prefix[lo]) / (2.0 * sigma_o**2)


# ---------------------------------------------------------------------------
# hedge tracker
# ---------------------------------------------------------------------------

def resample_actions(
    n_children: int,
    states: np.ndarray,
    prev_regrets: np.ndarray,
    prev_weights: np.ndarray,
    updated_regrets: np.ndarray,
    loss_field: np.ndarray,
    cfg: LossConfig,
    resample_std: float,
    discount: float,
    alg_loss: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw replacement actions near the current high-weight region.

    Sources are drawn proportionally to the previous round's weights,
    restricted to actions whose updated regret is positive; if no action has
    positive regret, sources are uniform over the whole previous pool. Each
    child perturbs its source by N(0, resample_std^2), inherits the source's
    discounted previous regret, and is charged its own loss at its new state.
    Children keep whatever regret results; they are not re-resampled.
    """
    ahead = updated_regrets > 0.0
    if not np.any(ahead):
        source_p = np.full(states.size, 1.0 / states.size)
    else:
        source_p = np.where(ahead, prev_weights, 0.0)
        total = source_p.sum()
        if total > 0.0:
            source_p = source_p / total
        else:
            # every positive-regret action carried zero weight last round
            # (possible for freshly resampled children); fall back to uniform
            # over the positive-regret set
            source_p = ahead / ahead.sum()
    sources = rng.choice(states.size, size=n_children, p=source_p)
    child_states = states[sources] + resample_std * rng.standard_normal(n_children)
    child_states = np.clip(child_states, cfg.grid_min, cfg.grid_max)
    child_losses = loss_field[nearest_cell(child_states, cfg) - cfg.grid_min]
    child_regrets = (1.0 - discount) * prev_regrets[sources] + (alg_loss - child_losses)
    return child_states, child_regrets


class HedgeTracker:
    """Action-pool tracker driven by discounted regrets and the clipped-window loss.

    Each action is a candidate state advanced by the dynamics map; its regret
    compares the tracker's own (weight-averaged) loss to the action's loss.
    Per step: score all actions, update regrets, delete the nonpositive-regret
    actions, refill the pool by resampling, reweight, and report the
    weighted-mean state.
    """

    def __init__(
        self,
        cfg: LossConfig,
        rng: np.random.Generator,
        n_actions: int = 100,
        discount: float = 0.02,
        resample_var: float = 400.0,
        dynamics: DynamicsFn = identity,
        init_states=None,
        init_regrets=None,
        init_weights=None,
    ):
        if n_actions < 1:
            raise ValueError(f"n_actions must be >= 1, got {n_actions}")
        if resample_var <= 0:
            raise ValueError(f"resample_var must be > 0, got {resample_var}")
        self.cfg = cfg
        self.rng = rng
        self.n_actions = n_actions
        self.discount = discount
        self.resample_std = float(np.sqrt(resample_var))
        self.dynamics = dynamics
        # fresh pool: states uniform over the grid, no regret, uniform weights
        if init_states is None:
            init_states = rng.uniform(cfg.grid_min, cfg.grid_max, n_actions)
        self.states = np.asarray(init_states, dtype=float).copy()
        if self.states.shape != (n_actions,):
            raise ValueError(f"init_states must have shape ({n_actions},)")
        self.regrets = (
            np.zeros(n_actions) if init_regrets is None
            else np.asarray(init_regrets, dtype=float).copy()
        )
        self.weights = (
            np.full(n_actions, 1.0 / n_actions) if init_weights is None
            else np.asarray(init_weights, dtype=float).copy()
        )
        # per-step diagnostics
        self.last_n_deleted = 0
        self.last_scale = float("nan")

    def step(self, frame) -> float:
        loss_field = observation_loss_field(frame, self.cfg)
        losses = loss_field[nearest_cell(self.states, self.cfg) - self.cfg.grid_min]
        alg_loss = float(self.weights @ losses)
        prev_regrets = self.regrets
        updated = (1.0 - self.discount) * prev_regrets + (alg_loss - losses)

        alive = updated > 0.0
        n_deleted = int(self.n_actions - alive.sum())
        if n_deleted > 0:
            child_states, child_regrets = resample_actions(
                n_deleted,
                states=self.states,
                prev_regrets=prev_regrets,
                prev_weights=self.weights,
                updated_regrets=updated,
                loss_field=loss_field,
                cfg=self.cfg,
                resample_std=self.resample_std,
                discount=self.discount,
                alg_loss=alg_loss,
                rng=self.rng,
            )
            self.states = np.concatenate([self.states[alive], child_states])
            self.regrets = np.concatenate([updated[alive], child_regrets])
        else:
            self.regrets = updated

        self.weights, self.last_scale = weights_with_scale(self.regrets)
        self.last_n_deleted = n_deleted
        estimate = float(self.weights @ self.states)
        self.states = np.asarray(self.dynamics(self.states), dtype=float)
        return estimate


# ---------------------------------------------------------------------------
# exact grid filter
# ---------------------------------------------------------------------------

def transition_kernel(sigma_d: float) -> np.ndarray:
    """Discretized N(0, sigma_d^2) step kernel, truncated at +-6 sigma, sum 1."""
    if sigma_d <= 0:
        raise ValueError(f"sigma_d must be > 0, got {sigma_d}")
    reach = int(np.ceil(6.0 * sigma_d))
    offsets = np.arange(-reach, reach + 1)
    k = np.exp(-np.square(offsets) / (2.0 * sigma_d**2))
    return k / k.sum()


def predict_mass(mass: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Push mass through the kernel, renormalizing per source cell at the edges.

    Renormalizing each source's out-kernel over its in-grid targets keeps
    total mass exactly on the grid (no leakage past the boundary).
    """
    n = mass.size
    reach = kernel.size // 2
    padded = np.zeros(n + 2 * reach)
    padded[reach:reach + n] = 1.0
    norm = np.convolve(padded, kernel, mode="valid")
    padded[reach:reach + n] = mass / norm
    return np.convolve(padded, kernel, mode="valid")


class GridBayesFilter:
    """Exact Bayesian filter on the integer grid, reporting the posterior mean.

    Transition: nearest-cell random walk N(0, sigma_d^2), truncated and edge-
    renormalized. Likelihood: frames as N(pulse, sigma_o^2) per cell. The
    first frame only updates the prior; transitions apply between frames.
    """

    def __init__(
        self,
        cfg: LossConfig,
        sigma_d: float = 2.0,
        init_state: float = 0.0,
        init_mass=None,
    ):
        self.cfg = cfg
        self.sigma_o = cfg.noise_scale
        if self.sigma_o <= 0:
            raise ValueError("GridBayesFilter needs noise_scale > 0")
        self.sigma_d = sigma_d
        self.kernel = transition_kernel(sigma_d)
        self._cells = cfg.cells().astype(float)
        if init_mass is None:
            mass = np.zeros(cfg.n_cells)
            mass[int(nearest_cell(init_state, cfg)) - cfg.grid_min] = 1.0
        else:
            mass = np.asarray(init_mass, dtype=float).copy()
            if mass.shape != (cfg.n_cells,) or np.any(mass < 0) or mass.sum() <= 0:
                raise ValueError("init_mass must be a nonnegative distribution over the grid")
            mass /= mass.sum()
        self.mass = mass
        self._stepped = False

    @property
    def posterior(self) -> np.ndarray:
        return self.mass.copy()

    def step(self, frame) -> float:
        if self._stepped:
            self.mass = predict_mass(self.mass, self.kernel)
        loglik = loglik_field(frame, self.cfg, self.sigma_o)
        with np.errstate(divide="ignore"):
            log_post = np.log(self.mass) + loglik
        peak = np.max(log_post)
        if not np.isfinite(peak):
            raise DegenerateFrameError("posterior lost all mass")
        post = np.exp(log_post - peak)
        self.mass = post / post.sum()
        self._stepped = True
        return float(self._cells @ self.mass)


# ---------------------------------------------------------------------------
# bootstrap particle filter
# ---------------------------------------------------------------------------

def systematic_resample(weights: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Low-variance systematic resampling: one uniform offset, N evenly spaced points."""
    n = weights.size
    positions = (rng.random() + np.arange(n)) / n
    cum = np.cumsum(weights)
    cum[-1] = 1.0  # guard against cumulative round-off
    return np.searchsorted(cum, positions)


class BootstrapParticleFilter:
    """Bootstrap SIR filter for the same pulse-plus-Gaussian model as the grid filter.

    Propagate particles by the transition noise, weight by the full
    likelihood at each particle's nearest cell, estimate by the weighted
    mean, then systematically resample back to uniform weights every step.
    Like the grid filter, the first frame skips propagation.

    Weights live in linear space, exp of the full log-likelihood, as a plain
    SIR implementation would compute them. With heavy outlier contamination
    the likelihood of every particle can underflow to zero; the filter then
    resets to uniform weights for that step (counted in `collapses`), which
    leaves it blind to the frame. The exact grid filter normalizes in log
    space and is immune to this, which is precisely the robustness gap the
    benchmark measures.
    """

    def __init__(
        self,
        cfg: LossConfig,
        rng: np.random.Generator,
        sigma_d: float = 2.0,
        n_particles: int = 100,
        init_state: float = 0.0,
    ):
        if n_particles < 1:
            raise ValueError(f"n_particles must be >= 1, got {n_particles}")
        self.cfg = cfg
        self.sigma_o = cfg.noise_scale
        if self.sigma_o <= 0:
            raise ValueError("BootstrapParticleFilter needs noise_scale > 0")
        self.sigma_d = sigma_d
        self.rng = rng
        self.n_particles = n_particles
        self.positions = np.full(n_particles, float(init_state))
        self.weights = np.full(n_particles, 1.0 / n_particles)
        self.last_ess = float(n_particles)
        self.collapses = 0
        self._stepped = False

    def step(self, frame) -> float:
        if self._stepped:
            self.positions = self.positions + self.rng.normal(0.0, self.sigma_d, self.n_particles)
            self.positions = np.clip(self.positions, self.cfg.grid_min, self.cfg.grid_max)
        # full per-particle log-likelihood: the shared relative field plus the
        # frame-wide constant the grid filter drops during log-space
        # normalization; a linear-space filter has to carry it
        frame = np.asarray(frame, dtype=float)
        loglik = loglik_field(frame, self.cfg, self.sigma_o)
        loglik = loglik - np.sum(np.square(frame)) / (2.0 * self.sigma_o**2)
        logw = loglik[nearest_cell(self.positions, self.cfg) - self.cfg.grid_min]
        with np.errstate(under="ignore"):
            w = np.exp(logw)
        total = w.sum()
        if not np.isfinite(total) or total <= 0.0:
            # weight collapse: every particle's likelihood underflowed
            if self.collapses == 0:
                logger.warning(
                    "particle weights collapsed; resetting to uniform "
                    "(later collapses counted on .collapses without logging)"
                )
            self.collapses += 1
            w = np.full(self.n_particles, 1.0 / self.n_particles)
        else:
            w = w / total
        self.last_ess = float(1.0 / np.sum(np.square(w)))
        estimate = float(w @ self.positions)
        idx = systematic_resample(w, self.rng)
        self.positions = self.positions[idx]
        self.weights = np.full(self.n_particles, 1.0 / self.n_particles)
        self._stepped = True
        return estimate
