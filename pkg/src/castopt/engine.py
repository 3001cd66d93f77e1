"""Run orchestration: initialisation, the explore/exchange loop, diagnostics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from .analysis import admissible_average, best_particle, mse
from .cooling import Schedule, apply_schedule
from .exchange import CastParams, exchange_step
from .explorer import ProposalKind, explore_step
from .objective import ObjectiveSpec, get_objective
from .randomness import derive_stream
from .state import SwarmState

__all__ = [
    "SwarmState",
    "RunConfig",
    "RunTrace",
    "init_state",
    "iterate",
    "run",
    "run_batch",
    "pool_map",
]

GEO_MEAN_EPS = 1e-30


@dataclass(frozen=True)
class RunConfig:
    """Everything needed to reproduce one optimisation run.

    ``mode`` is either :class:`CastParams` (collective temperature exchange)
    or a :class:`Schedule` (classic SA baseline with one shared temperature).
    """

    objective: str
    d: int
    n_particles: int
    n_steps: int
    mode: CastParams | Schedule
    proposal: ProposalKind = ProposalKind.CAUCHY
    seed: int = 0
    hist_bins: int = 50
    stride: int = 1

    def __post_init__(self):
        object.__setattr__(self, "proposal", ProposalKind(self.proposal))
        if self.d < 1:
            raise ValueError(f"dimension must be positive, got {self.d}")
        if self.n_steps < 1:
            raise ValueError(f"n_steps must be at least 1, got {self.n_steps}")
        if self.stride < 1:
            raise ValueError(f"stride must be at least 1, got {self.stride}")
        if self.hist_bins < 0:
            raise ValueError("hist_bins must be nonnegative")
        min_n = 2 if self.is_cast else 1
        if self.n_particles < min_n:
            raise ValueError(f"need at least {min_n} particles, got {self.n_particles}")
        get_objective(self.objective, self.d)

    @property
    def is_cast(self) -> bool:
        return isinstance(self.mode, CastParams)

    @property
    def t_bar(self) -> float:
        return self.mode.t_bar if self.is_cast else self.mode.t0

    @property
    def spec(self) -> ObjectiveSpec:
        return get_objective(self.objective, self.d)

    def n_records(self) -> int:
        return -(-self.n_steps // self.stride)


@dataclass
class RunTrace:
    """Diagnostics at every recorded step (arrays share a leading axis)."""

    steps: np.ndarray
    best_index: np.ndarray
    best_value: np.ndarray
    best_T: np.ndarray
    best_position: np.ndarray
    best_mse: np.ndarray
    avg_mse: np.ndarray  # NaN where no particle is admissible
    m1: np.ndarray
    m2: np.ndarray
    var: np.ndarray
    geo_mean: np.ndarray
    histogram: np.ndarray  # (records, bins)
    bin_edges: np.ndarray
    initial: dict = field(default_factory=dict)
    final_state: SwarmState | None = None

    def __len__(self) -> int:
        return len(self.steps)


def init_state(config: RunConfig, rng: np.random.Generator) -> SwarmState:
    spec = config.spec
    N = config.n_particles
    positions = rng.uniform(-1.0, 1.0, size=(N, config.d))
    if config.is_cast:
        p = config.mode
        temperatures = rng.uniform(p.t_low, p.t_high, size=N)
    else:
        temperatures = np.full(N, config.mode.t0)
    return SwarmState.from_positions(spec, positions, temperatures, step=0)


def iterate(config: RunConfig, rng: np.random.Generator,
            state: SwarmState | None = None) -> Iterator[SwarmState]:
    """Yield the swarm after each of ``config.n_steps`` steps.

    The generator may be abandoned early; draws already made are unaffected.
    """
    spec = config.spec
    if state is None:
        state = init_state(config, rng)
    mode = config.mode
    for n in range(state.step + 1, state.step + config.n_steps + 1):
        state = explore_step(state, spec, config.proposal, rng)
        if config.is_cast:
            state = exchange_step(state, mode, rng)
        else:
            state = apply_schedule(state, mode, n)
        state.step = n
        yield state


def _temperature_moments(T, edges):
    m1 = float(np.mean(T))
    m2 = float(np.mean(T * T))
    out = {
        "m1": m1,
        "m2": m2,
        "var": float(np.var(T)),
        "geo_mean": float(np.exp(np.mean(np.log(T + GEO_MEAN_EPS)))),
    }
    if edges is not None:
        top = np.nextafter(edges[-1], edges[0])
        out["histogram"] = np.histogram(np.minimum(T, top), bins=edges)[0]
    return out


def run(config: RunConfig, rng: np.random.Generator | None = None) -> RunTrace:
    """Execute one run and record diagnostics every ``stride`` steps.

    With ``rng=None`` the stream is derived from ``config.seed``.
    """
    if rng is None:
        rng = derive_stream(config.seed, "run", 0)
    spec = config.spec
    x_star = spec.global_min
    R, d, bins = config.n_records(), config.d, config.hist_bins
    edges = np.linspace(0.0, 2.0 * config.t_bar, bins + 1) if bins else None

    steps = np.empty(R, dtype=np.int64)
    best_index = np.empty(R, dtype=np.int64)
    best_value, best_T = np.empty(R), np.empty(R)
    best_pos = np.empty((R, d))
    best_mse, avg_mse = np.empty(R), np.empty(R)
    m1, m2, var, geo = np.empty(R), np.empty(R), np.empty(R), np.empty(R)
    hist = np.zeros((R, bins), dtype=np.int64)

    state = init_state(config, rng)
    initial = _temperature_moments(state.temperatures, edges)
    k = 0
    for state in iterate(config, rng, state):
        if state.step % config.stride and state.step != config.n_steps:
            continue
        i, pos, T_i, f_i = best_particle(state)
        steps[k] = state.step
        best_index[k], best_value[k], best_T[k] = i, f_i, T_i
        best_pos[k] = pos
        best_mse[k] = mse(pos, x_star)
        avg = admissible_average(state)
        avg_mse[k] = np.nan if avg is None else mse(avg, x_star)
        mom = _temperature_moments(state.temperatures, edges)
        m1[k], m2[k], var[k], geo[k] = mom["m1"], mom["m2"], mom["var"], mom["geo_mean"]
        if bins:
            hist[k] = mom["histogram"]
        k += 1
    return RunTrace(
        steps=steps,
        best_index=best_index,
        best_value=best_value,
        best_T=best_T,
        best_position=best_pos,
        best_mse=best_mse,
        avg_mse=avg_mse,
        m1=m1,
        m2=m2,
        var=var,
        geo_mean=geo,
        histogram=hist,
        bin_edges=edges if edges is not None else np.empty(0),
        initial=initial,
        final_state=state,
    )


def pool_map(fn: Callable, tasks: Sequence, jobs: int = 1) -> list:
    """``[fn(t) for t in tasks]``, optionally over a process pool.

    Results come back in task order, so output never depends on ``jobs``.
    """
    if jobs <= 1 or len(tasks) <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        chunk = max(1, math.ceil(len(tasks) / (4 * jobs)))
        return list(pool.map(fn, tasks, chunksize=chunk))


def _run_task(task):
    config, master_seed, tag, index = task
    return run(config, derive_stream(master_seed, tag, index))


def run_batch(config: RunConfig, n_runs: int, master_seed: int | None = None,
              jobs: int = 1, tag: str = "run") -> list[RunTrace]:
    """``n_runs`` independent runs on streams ``(master_seed, tag, k)``."""
    if n_runs < 1:
        raise ValueError(f"n_runs must be at least 1, got {n_runs}")
    seed = config.seed if master_seed is None else master_seed
    tasks = [(config, seed, tag, k) for k in range(n_runs)]
    return pool_map(_run_task, tasks, jobs)
