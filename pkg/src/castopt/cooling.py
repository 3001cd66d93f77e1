"""Prescribed cooling schedules for the classic multi-particle SA baseline."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .state import SwarmState

__all__ = ["Schedule", "schedule_temperature", "apply_schedule", "parse_cooling"]


@dataclass(frozen=True)
class Schedule:
    kind: str  # "log" | "geometric" | "fixed"
    t0: float
    alpha: float | None = None

    def __post_init__(self):
        if self.kind not in ("log", "geometric", "fixed"):
            raise ValueError(f"unknown schedule kind {self.kind!r}")
        if not self.t0 > 0:
            raise ValueError(f"initial temperature must be positive, got {self.t0}")
        if self.kind == "geometric":
            if self.alpha is None or not 0.0 < self.alpha < 1.0:
                raise ValueError(f"geometric alpha must lie in (0, 1), got {self.alpha}")

    @property
    def label(self) -> str:
        return f"geometric:{self.alpha!r}" if self.kind == "geometric" else self.kind


def schedule_temperature(s: Schedule, n: int) -> float:
    if n < 0:
        raise ValueError("step index must be nonnegative")
    if s.kind == "log":
        return s.t0 / math.log(n + math.e)
    if s.kind == "geometric":
        return s.t0 * s.alpha**n
    return s.t0


def apply_schedule(state: SwarmState, s: Schedule, n: int) -> SwarmState:
    """Broadcast the schedule temperature for step ``n`` to every particle."""
    T = np.full(state.n_particles, schedule_temperature(s, n))
    return SwarmState(state.positions, T, state.values, state.step)


def parse_cooling(text: str, t0: float) -> Schedule:
    """Parse ``"log"``, ``"fixed"`` or ``"geometric:<alpha>"``."""
    text = text.strip().lower()
    if text.startswith("geometric"):
        _, _, alpha = text.partition(":")
        return Schedule("geometric", t0, float(alpha) if alpha else 0.999)
    if text in ("log", "logarithmic"):
        return Schedule("log", t0)
    if text == "fixed":
        return Schedule("fixed", t0)
    raise ValueError(f"unknown cooling schedule {text!r}")
