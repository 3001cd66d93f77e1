"""Fixed-temperature Metropolis moves applied to every particle."""

from __future__ import annotations

import enum

import numpy as np

from .objective import ObjectiveError, ObjectiveSpec
from .randomness import cauchy_step, gaussian_step
from .state import SwarmState

__all__ = [
    "ProposalKind",
    "propose",
    "accept_probability",
    "explore_step",
]


class ProposalKind(str, enum.Enum):
    """Proposal noise. Cauchy uses scale ``T`` directly; Gaussian uses
    ``sqrt(2T)`` times a unit normal."""

    CAUCHY = "cauchy"
    GAUSSIAN = "gaussian"


def _increments(T, d, kind, rng):
    if ProposalKind(kind) is ProposalKind.CAUCHY:
        return cauchy_step(T, d, rng)
    return gaussian_step(T, d, rng)


def propose(x, T: float, kind, rng: np.random.Generator) -> np.ndarray:
    """Candidate ``x + eta(T) * xi`` for a single point."""
    x = np.asarray(x, dtype=float)
    return x + _increments(T, x.shape[-1], kind, rng)


def accept_probability(f_current: float, f_candidate: float, T: float) -> float:
    if f_candidate < f_current:
        return 1.0
    if T <= 0:
        return 0.0
    return float(np.exp(-(f_candidate - f_current) / T))


def _accept_probabilities(f_cur, f_new, T):
    gap = f_new - f_cur
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        p = np.exp(-gap / T)
    p = np.where(T > 0, p, 0.0)
    return np.where(gap < 0, 1.0, p)


def explore_step(
    state: SwarmState,
    spec: ObjectiveSpec,
    kind,
    rng: np.random.Generator,
) -> SwarmState:
    """One proposal plus accept/reject per particle.

    Costs exactly ``N`` objective evaluations. Temperatures are left alone and
    rejected particles keep their coordinates bit for bit.
    """
    T = state.temperatures
    candidates = state.positions + _increments(T, state.dimension, kind, rng)
    try:
        f_new = spec.eval_batch(candidates)
    except ObjectiveError as exc:
        raise ObjectiveError(f"step {state.step + 1}: {exc}") from exc
    u = rng.random(state.n_particles)
    accepted = u < _accept_probabilities(state.values, f_new, T)
    return SwarmState(
        positions=np.where(accepted[:, None], candidates, state.positions),
        temperatures=T.copy(),
        values=np.where(accepted, f_new, state.values),
        step=state.step,
    )
