"""Error metrics, success detection and sweep post-processing."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

__all__ = [
    "LOG_FLOOR",
    "RunSummary",
    "SweepCell",
    "mse",
    "best_particle",
    "admissible_average",
    "success_and_steps",
    "summarize",
    "expected_log_mse",
    "normalized_weighted_steps",
    "marginalize",
]

# stand-in for MSE == 0 before taking log10
LOG_FLOOR = 1e-30


def mse(y, x_star) -> float:
    y = np.asarray(y, dtype=float)
    x_star = np.asarray(x_star, dtype=float)
    if y.shape != x_star.shape:
        raise ValueError(f"dimension mismatch: {y.shape} vs {x_star.shape}")
    return float(np.mean((y - x_star) ** 2))


def best_particle(state):
    """``(index, position, temperature, value)`` of the lowest cached value.

    ``np.argmin`` returns the first minimiser, so ties go to the lowest index.
    """
    i = int(np.argmin(state.values))
    return i, state.positions[i], float(state.temperatures[i]), float(state.values[i])


def admissible_average(state):
    """Mean position of the particles still inside ``[-1, 1]^d``, or None."""
    inside = np.max(np.abs(state.positions), axis=1) <= 1.0
    if not inside.any():
        return None
    return state.positions[inside].mean(axis=0)


@dataclass(frozen=True)
class RunSummary:
    success: bool
    steps_to_basin: int | None
    final_best_mse: float
    final_avg_mse: float | None

    def to_dict(self) -> dict:
        return {
            "success": self.success,
            "steps_to_basin": self.steps_to_basin,
            "final_best_mse": self.final_best_mse,
            "final_avg_mse": self.final_avg_mse,
        }


def success_and_steps(trace, spec, shrink: float = 0.5):
    """First recorded step at which the best particle is inside the shrunken basin.

    Returns ``(True, step)`` or ``(False, None)``.
    """
    radius = shrink * spec.basin_radius_rescaled
    if not 0.0 < shrink <= 1.0:
        raise ValueError(f"shrink must lie in (0, 1], got {shrink}")
    dist = np.max(np.abs(trace.best_position - spec.global_min), axis=1)
    hits = np.flatnonzero(dist < radius)
    if hits.size == 0:
        return False, None
    return True, int(trace.steps[hits[0]])


def summarize(trace, spec, shrink: float = 0.5) -> RunSummary:
    ok, steps = success_and_steps(trace, spec, shrink)
    avg = float(trace.avg_mse[-1])
    return RunSummary(ok, steps, float(trace.best_mse[-1]), None if math.isnan(avg) else avg)


def expected_log_mse(traces: Sequence, which: str = "best") -> np.ndarray:
    """Per-step mean over runs of ``log10(MSE)``.

    For ``which="average"`` runs with no admissible particle at a step are
    left out of that step's mean (NaN if every run is left out).
    """
    if not traces:
        raise ValueError("need at least one trace")
    if which not in ("best", "average"):
        raise ValueError(f"which must be 'best' or 'average', got {which!r}")
    attr = "best_mse" if which == "best" else "avg_mse"
    lengths = {len(t) for t in traces}
    if len(lengths) != 1:
        raise ValueError(f"traces differ in length: {sorted(lengths)}")
    data = np.vstack([getattr(t, attr) for t in traces])
    logs = np.log10(np.where(data > 0, data, LOG_FLOOR))
    if which == "best":
        return logs.mean(axis=0)
    mask = ~np.isnan(data)
    counts = mask.sum(axis=0)
    total = np.where(mask, logs, 0.0).sum(axis=0)
    with np.errstate(invalid="ignore", divide="ignore"):
        return np.where(counts > 0, total / np.maximum(counts, 1), np.nan)


@dataclass(frozen=True)
class SweepCell:
    """Outcome of one grid point; ``params`` maps axis name to value."""

    params: dict
    valid: bool
    success_rate: float | None = None
    mean_steps_to_basin: float | None = None
    normalized_weighted_steps: float | None = None
    n_runs: int = 0

    @property
    def weighted_steps(self) -> float | None:
        if not self.valid or not self.success_rate or self.mean_steps_to_basin is None:
            return None
        return self.mean_steps_to_basin / self.success_rate


def normalized_weighted_steps(cells: Sequence[SweepCell]) -> list[SweepCell]:
    """Divide mean steps by success rate, then min-max scale over defined cells."""
    weights = [c.weighted_steps for c in cells]
    defined = [w for w in weights if w is not None]
    if not defined:
        raise ValueError("no cell has a positive success rate")
    lo, hi = min(defined), max(defined)
    span = hi - lo
    out = []
    for c, w in zip(cells, weights):
        if w is None:
            value = None
        else:
            value = 0.0 if span == 0 else (w - lo) / span
        out.append(replace(c, normalized_weighted_steps=value))
    return out


def marginalize(cells: Sequence[SweepCell], metric: str, keep) -> dict:
    """Average ``metric`` over every axis not in ``keep``.

    ``keep`` is one axis name or a tuple of them. Returns a dict from the kept
    value(s) to the mean, with None where every contributing cell is
    undefined.
    """
    if isinstance(keep, str):
        keep = (keep,)
    keep = tuple(keep)
    groups: dict = {}
    for c in cells:
        missing = [k for k in keep if k not in c.params]
        if missing:
            raise KeyError(f"axis {missing[0]!r} not in grid")
        key = tuple(c.params[k] for k in keep)
        value = getattr(c, metric) if c.valid else None
        groups.setdefault(key, []).append(value)
    result = {}
    for key, values in groups.items():
        vals = [v for v in values if v is not None]
        key = key[0] if len(keep) == 1 else key
        result[key] = sum(vals) / len(vals) if vals else None
    return result
