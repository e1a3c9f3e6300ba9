"""Parameter-free weighted-majority learner over a pool of actions.

The learner keeps one (possibly discounted) regret per action and turns
regrets into a probability distribution through the NormalHedge potential:
actions whose regret is nonpositive receive weight zero whenever any action
is ahead of the learner, so the support can shrink to the handful of actions
that are actually doing well.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

E = float(np.e)

# exp() overflows just above 709; cap exponents during bracket search so the
# potential saturates instead of overflowing (only the sign vs. e matters).
_EXP_CAP = 700.0


class AllNonPositiveError(ValueError):
    """No action has positive regret, so the potential equation has no root."""


class LengthMismatchError(ValueError):
    """A per-action vector does not match the number of actions."""


class EmptyActionsError(ValueError):
    """An operation over actions received an empty action set."""


@dataclass(frozen=True)
class PotentialSolution:
    """Root of the potential equation mean(exp([R]+^2 / 2c)) = e."""

    c: float
    residual: float


@dataclass(frozen=True)
class HedgeState:
    """Learner state: one regret and one weight per action.

    Treat instances as immutable; every update returns a new state.
    `discount` geometrically down-weights old regret (0 disables discounting).
    """

    regrets: np.ndarray
    weights: np.ndarray
    discount: float = 0.0

    def __post_init__(self):
        regrets = np.asarray(self.regrets, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "regrets", regrets)
        object.__setattr__(self, "weights", weights)
        if regrets.shape != weights.shape or regrets.ndim != 1:
            raise LengthMismatchError(
                f"regrets shape {regrets.shape} != weights shape {weights.shape}"
            )
        if not 0.0 <= self.discount < 1.0:
            raise ValueError(f"discount must be in [0, 1), got {self.discount}")

    @property
    def n_actions(self) -> int:
        return self.regrets.shape[0]

    @classmethod
    def initial(cls, n_actions: int, discount: float = 0.0) -> "HedgeState":
        """Fresh state: zero regrets, uniform weights."""
        if n_actions < 1:
            raise EmptyActionsError("need at least one action")
        return cls(
            regrets=np.zeros(n_actions),
            weights=np.full(n_actions, 1.0 / n_actions),
            discount=discount,
        )


def _potential(sq_gains: np.ndarray, c: float) -> float:
    """mean(exp(sq_gains / 2c)), saturating instead of overflowing."""
    return float(np.mean(np.exp(np.minimum(sq_gains / (2.0 * c), _EXP_CAP))))


def solve_potential(regrets) -> PotentialSolution:
    """Solve mean_i exp(([R_i]+)^2 / 2c) = e for the unique c > 0.

    The left side is strictly decreasing in c (it tends to +inf as c -> 0
    and to 1 as c -> inf), so bisection on a doubling/halving bracket is
    unconditionally convergent.

    Raises
    ------
    AllNonPositiveError
        If every regret is <= 0: the left side is identically 1 < e.
    """
    r = np.asarray(regrets, dtype=float)
    if r.size == 0:
        raise EmptyActionsError("empty regret vector")
    sq = np.square(np.maximum(r, 0.0))
    top = float(sq.max())
    if top <= 0.0:
        raise AllNonPositiveError("all regrets are nonpositive")

    # At c0 = max([R]+)^2 / 2 the largest exponent is exactly 1, so the
    # potential is <= e there; expand outward until both sides bracket e.
    hi = top / 2.0
    while _potential(sq, hi) > E:
        hi *= 2.0
    lo = hi
    while _potential(sq, lo) < E:
        lo /= 2.0

    # converge one order past the documented 1e-9 residual guarantee so
    # downstream checks against that bound keep a real margin
    c = hi
    residual = _potential(sq, c) - E
    for _ in range(200):
        if abs(residual) <= 1e-10:
            break
        c = 0.5 * (lo + hi)
        residual = _potential(sq, c) - E
        if residual > 0.0:
            lo = c
        else:
            hi = c
    return PotentialSolution(c=c, residual=abs(residual))


def weights_with_scale(regrets) -> tuple[np.ndarray, float]:
    """Weights plus the potential scale c (NaN on the uniform fallback).

    With some positive regret: w_i proportional to ([R_i]+/c) exp(([R_i]+)^2/2c);
    actions at or behind the learner get weight exactly 0. With no positive
    regret the weight formula degenerates (all numerators vanish), so the
    distribution falls back to uniform.
    """
    r = np.asarray(regrets, dtype=float)
    if r.size == 0:
        raise EmptyActionsError("empty regret vector")
    gains = np.maximum(r, 0.0)
    # keyed on the squared gain, matching solve_potential: a regret so small
    # that its square underflows to 0 cannot anchor a representable scale
    if not np.any(np.square(gains) > 0.0):
        return np.full(r.size, 1.0 / r.size), float("nan")
    c = solve_potential(r).c
    w = (gains / c) * np.exp(np.square(gains) / (2.0 * c))
    w /= w.sum()
    return w, c


def weights_from_regrets(regrets) -> np.ndarray:
    """Weight distribution for a regret vector (uniform if none positive)."""
    return weights_with_scale(regrets)[0]


def hedge_round(state: HedgeState, losses) -> tuple[HedgeState, float]:
    """Play one round: incur the weighted loss, update regrets and weights.

    The learner's loss is sum_i p_i * loss_i under the weights held *before*
    the update. Each regret becomes (1 - discount) * R_i + (loss_A - loss_i);
    with discount 0 this is the plain cumulative-regret update.

    Returns the new state and the learner's loss this round.
    """
    losses = np.asarray(losses, dtype=float)
    if losses.shape != (state.n_actions,):
        raise LengthMismatchError(
            f"got {losses.shape[0] if losses.ndim == 1 else losses.shape} losses "
            f"for {state.n_actions} actions"
        )
    if not np.all(np.isfinite(losses)):
        raise ValueError("losses must be finite")
    alg_loss = float(state.weights @ losses)
    regrets = (1.0 - state.discount) * state.regrets + (alg_loss - losses)
    weights = weights_from_regrets(regrets)
    return HedgeState(regrets=regrets, weights=weights, discount=state.discount), alg_loss


def regret_to_quantile(action_cum_losses, algorithm_cum_loss: float, epsilon: float) -> float:
    """Learner's regret to the worst action inside the best epsilon-fraction.

    Uses the ceil(eps*N)-th smallest cumulative loss, so the comparison set is
    never empty; epsilon = 1/N recovers regret to the single best action.
    """
    losses = np.asarray(action_cum_losses, dtype=float)
    if losses.size == 0:
        raise EmptyActionsError("empty cumulative-loss vector")
    if not 0.0 < epsilon <= 1.0:
        raise ValueError(f"epsilon must be in (0, 1], got {epsilon}")
    n = losses.size
    # tiny slack: (1/N)*N can land just above 1.0 in floats
    k = int(np.ceil(epsilon * n - 1e-12))
    k = min(max(k, 1), n)
    kth_best = np.partition(losses, k - 1)[k - 1]
    return float(algorithm_cum_loss - kth_best)
