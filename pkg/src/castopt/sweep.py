"""Full-factorial hyperparameter sweeps with success-rate bookkeeping."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .analysis import SweepCell, best_particle, normalized_weighted_steps
from .exchange import CastParams
from .engine import RunConfig, iterate, pool_map
from .explorer import ProposalKind
from .randomness import derive_stream

__all__ = ["PARAM_AXES", "spacing", "SweepPlan", "expand_grid", "run_sweep"]

PARAM_AXES = ("mu", "lambda", "kappa", "gamma", "t_var")


def spacing(a: float, b: float, count: int, kind: str = "lin") -> list[float]:
    """Endpoint-inclusive ``count`` values from ``a`` to ``b``.

    ``kind="log"`` spaces them geometrically and needs ``a, b > 0``.
    """
    if count < 1:
        raise ValueError("count must be positive")
    if count == 1 and a != b:
        raise ValueError("count must be at least 2 when a != b")
    if kind == "lin":
        values = np.linspace(a, b, count)
    elif kind == "log":
        if a <= 0 or b <= 0:
            raise ValueError("log spacing needs positive endpoints")
        values = np.geomspace(a, b, count)
    else:
        raise ValueError(f"unknown spacing kind {kind!r}")
    return [float(v) for v in values]


@dataclass(frozen=True)
class SweepPlan:
    objective: str
    d: int
    n_particles: int
    max_steps: int
    axes: dict  # swept parameter -> list of values
    fixed: dict = field(default_factory=dict)
    runs_per_cell: int = 20
    t_bar: float = 0.05
    proposal: ProposalKind = ProposalKind.CAUCHY
    noise_gated: bool = False
    shrink: float = 0.5
    seed: int = 0

    def __post_init__(self):
        for name, values in self.axes.items():
            if name not in PARAM_AXES:
                raise ValueError(f"unknown sweep axis {name!r}")
            if len(values) == 0:
                raise ValueError(f"sweep axis {name!r} has no values")
        for name in self.fixed:
            if name not in PARAM_AXES:
                raise ValueError(f"unknown fixed parameter {name!r}")
        missing = [p for p in PARAM_AXES if p not in self.axes and p not in self.fixed]
        if missing:
            raise ValueError(f"parameters neither swept nor fixed: {missing}")
        if self.runs_per_cell < 1:
            raise ValueError("runs_per_cell must be at least 1")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    @property
    def swept(self) -> tuple[str, ...]:
        return tuple(p for p in PARAM_AXES if p in self.axes)

    def cast_params(self, params: dict) -> CastParams:
        return CastParams(
            mu=params["mu"],
            lambda_=params["lambda"],
            kappa=params["kappa"],
            gamma=params["gamma"],
            t_var=params["t_var"],
            t_bar=self.t_bar,
            noise_gated=self.noise_gated,
        )

    def run_config(self, params: dict) -> RunConfig:
        return RunConfig(
            objective=self.objective,
            d=self.d,
            n_particles=self.n_particles,
            n_steps=self.max_steps,
            mode=self.cast_params(params),
            proposal=self.proposal,
            seed=self.seed,
            hist_bins=0,
        )


def expand_grid(plan: SweepPlan) -> list[tuple[dict, bool]]:
    """Cartesian product of the swept axes as ``(params, valid)`` pairs.

    Tuples with ``mu > lambda`` are kept but flagged invalid; any other
    constraint violation is an error in the plan itself.
    """
    names = plan.swept
    grid = []
    for combo in itertools.product(*(plan.axes[n] for n in names)):
        params = {p: plan.fixed.get(p) for p in PARAM_AXES}
        params.update(zip(names, (float(v) for v in combo)))
        valid = params["mu"] <= params["lambda"]
        # validate everything except the mu/lambda ordering
        plan.cast_params({**params, "mu": min(params["mu"], params["lambda"])})
        grid.append((params, valid))
    return grid


def _steps_to_basin(task):
    """Run until the best particle enters the shrunken basin or steps run out."""
    plan, params, ordinal, run_index = task
    config = plan.run_config(params)
    spec = config.spec
    radius = plan.shrink * spec.basin_radius_rescaled
    rng = derive_stream(plan.seed, f"sweep:{ordinal}", run_index)
    for state in iterate(config, rng):
        _, pos, _, _ = best_particle(state)
        if np.max(np.abs(pos - spec.global_min)) < radius:
            return state.step
    return None


def run_sweep(plan: SweepPlan, jobs: int = 1) -> list[SweepCell]:
    """Success rate and mean steps-to-basin for every grid cell.

    Runs stop as soon as the best particle reaches the basin, which leaves
    both metrics unchanged. Invalid cells cost nothing.
    """
    grid = expand_grid(plan)
    tasks = [
        (plan, params, ordinal, r)
        for ordinal, (params, valid) in enumerate(grid)
        if valid
        for r in range(plan.runs_per_cell)
    ]
    results = iter(pool_map(_steps_to_basin, tasks, jobs))
    cells = []
    for params, valid in grid:
        if not valid:
            cells.append(SweepCell(params=params, valid=False))
            continue
        outcomes = [next(results) for _ in range(plan.runs_per_cell)]
        hits = [s for s in outcomes if s is not None]
        cells.append(
            SweepCell(
                params=params,
                valid=True,
                success_rate=len(hits) / len(outcomes),
                mean_steps_to_basin=float(np.mean(hits)) if hits else None,
                n_runs=len(outcomes),
            )
        )
    if any(c.success_rate for c in cells):
        cells = normalized_weighted_steps(cells)
    return cells
