"""Collective annealing by switching temperatures, plus classic SA baselines."""

__version__ = "0.1.0"

from .analysis import (
    RunSummary,
    SweepCell,
    admissible_average,
    best_particle,
    expected_log_mse,
    marginalize,
    mse,
    normalized_weighted_steps,
    success_and_steps,
    summarize,
)
from .cooling import Schedule, apply_schedule, schedule_temperature
from .engine import RunConfig, RunTrace, init_state, iterate, run, run_batch
from .exchange import CastParams, chi, exchange_step, interact_pair, select_pairs
from .explorer import ProposalKind, accept_probability, explore_step, propose
from .objective import ObjectiveError, ObjectiveSpec, ackley, get_objective, rastrigin, register_objective
from .randomness import cauchy_step, derive_stream, gaussian_step, iround, uniform_symmetric
from .state import SwarmState
from .sweep import SweepPlan, expand_grid, run_sweep, spacing
