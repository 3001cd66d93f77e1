"""Pairwise temperature exchange between particles.

Pairs are drawn as uniform random matchings (direct-simulation style) and
each pair updates its two temperatures with an alignment term gated by the
interaction indicator plus multiplicative bounded noise.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .randomness import iround, uniform_symmetric
from .state import SwarmState

__all__ = [
    "CastParams",
    "chi",
    "interact_pair",
    "interact_pairs",
    "select_pairs",
    "exchange_step",
]

# post-update negatives larger than this (relative to t_bar) are a bug, not rounding
_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class CastParams:
    """Hyperparameters of the collective temperature dynamics.

    Parameters
    ----------
    mu, lambda_ : float
        Warming and cooling rates, ``0 <= mu <= lambda_ <= 1``.
    kappa : float
        Fraction of the positivity bound ``1 - lambda_`` used as noise support.
    gamma : float
        Expected number of interactions per particle and step.
    t_var : float
        Initial temperatures are uniform on ``[t_var, 2 t_bar - t_var]``.
    t_bar : float
        Mean initial temperature.
    noise_gated : bool
        Apply interaction noise only to pairs whose indicator fired.
    """

    mu: float
    lambda_: float
    kappa: float
    gamma: float
    t_var: float
    t_bar: float = 0.05
    noise_gated: bool = False

    def __post_init__(self):
        if not 0.0 <= self.lambda_ <= 1.0:
            raise ValueError(f"lambda must lie in [0, 1], got {self.lambda_}")
        if not 0.0 <= self.mu <= 1.0:
            raise ValueError(f"mu must lie in [0, 1], got {self.mu}")
        if self.mu > self.lambda_:
            raise ValueError(f"mu ({self.mu}) must not exceed lambda ({self.lambda_})")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError(f"kappa must lie in [0, 1], got {self.kappa}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma}")
        if not self.t_bar > 0:
            raise ValueError(f"t_bar must be positive, got {self.t_bar}")
        if not 0.0 < self.t_var < self.t_bar:
            raise ValueError(
                f"t_var must satisfy 0 < t_var < t_bar = {self.t_bar}, got {self.t_var}"
            )

    @property
    def noise_support(self) -> float:
        """Half-width ``a = kappa (1 - lambda)`` of the interaction noise."""
        return self.kappa * (1.0 - self.lambda_)

    @property
    def t_high(self) -> float:
        return 2.0 * self.t_bar - self.t_var

    @property
    def t_low(self) -> float:
        return self.t_var


def chi(f_x, f_xstar, T, T_star):
    """1 iff the first particle is strictly better placed and strictly hotter."""
    return int(f_x < f_xstar and T_star < T)


def interact_pairs(T, T_star, f_x, f_xstar, params: CastParams, rng):
    """Vectorised pair update; arrays of equal length, one entry per pair.

    Noise is drawn for every pair (two uniforms each) even when gated off, so
    the random stream does not depend on the indicator outcomes.
    """
    T = np.asarray(T, dtype=float)
    T_star = np.asarray(T_star, dtype=float)
    f_x = np.asarray(f_x, dtype=float)
    f_xstar = np.asarray(f_xstar, dtype=float)
    lam, mu = params.lambda_, params.mu

    chi_1 = (f_x < f_xstar) & (T_star < T)
    chi_2 = (f_xstar < f_x) & (T < T_star)
    diff = T - T_star

    xi = uniform_symmetric(params.noise_support, rng, size=(T.shape[0], 2))
    noise = xi[:, 0] * T
    noise_star = xi[:, 1] * T_star
    if params.noise_gated:
        fired = chi_1 | chi_2
        noise = np.where(fired, noise, 0.0)
        noise_star = np.where(fired, noise_star, 0.0)

    T_new = T - lam * diff * chi_1 - mu * diff * chi_2 + noise
    T_star_new = T_star + lam * diff * chi_2 + mu * diff * chi_1 + noise_star
    return _clamp(T_new, params), _clamp(T_star_new, params)


def _clamp(T, params):
    low = T.min(initial=0.0)
    if low < -_CLAMP_TOL * params.t_bar:
        raise FloatingPointError(
            f"temperature update went negative by {low!r}; noise support exceeds bound"
        )
    return np.maximum(T, 0.0)


def interact_pair(x, x_star, T, T_star, f_x, f_xstar, params: CastParams, rng):
    """Post-interaction temperatures ``(T', T_star')`` of a single pair.

    Positions only enter through the cached values ``f_x`` and ``f_xstar``.
    """
    a, b = interact_pairs([T], [T_star], [f_x], [f_xstar], params, rng)
    return float(a[0]), float(b[0])


def select_pairs(N: int, gamma: float, rng: np.random.Generator) -> list[np.ndarray]:
    """Rounds of disjoint index pairs, each an ``(m, 2)`` integer array.

    ``gamma = K + r`` yields ``K`` full random matchings of ``N // 2`` pairs and
    one partial round of ``iround(r N / 2)`` pairs from a fresh shuffle. An odd
    particle out sits the round out.
    """
    if N < 2:
        raise ValueError(f"pair selection needs at least 2 particles, got {N}")
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    full = int(np.floor(gamma))
    half = N // 2
    rounds = []
    for _ in range(full):
        perm = rng.permutation(N)
        rounds.append(perm[: 2 * half].reshape(half, 2))
    n_partial = min(iround((gamma - full) * N / 2.0, rng), half)
    perm = rng.permutation(N)
    rounds.append(perm[: 2 * n_partial].reshape(n_partial, 2))
    return rounds


def exchange_step(state: SwarmState, params: CastParams, rng) -> SwarmState:
    """Apply every selected pair interaction; later rounds see earlier updates."""
    T = state.temperatures.copy()
    f = state.values
    for pairs in select_pairs(state.n_particles, params.gamma, rng):
        if len(pairs) == 0:
            continue
        i, j = pairs[:, 0], pairs[:, 1]
        T[i], T[j] = interact_pairs(T[i], T[j], f[i], f[j], params, rng)
    return SwarmState(state.positions, T, state.values, state.step)
