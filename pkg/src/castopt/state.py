from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .objective import ObjectiveSpec


@dataclass
class SwarmState:
    """Positions, temperatures and cached objective values of ``N`` particles.

    ``values[i]`` always equals the objective at ``positions[i]``; the solver
    steps keep it in sync so that no step evaluates the objective twice.
    """

    positions: np.ndarray  # (N, d), rescaled coordinates
    temperatures: np.ndarray  # (N,)
    values: np.ndarray  # (N,)
    step: int = 0

    @classmethod
    def from_positions(cls, spec: ObjectiveSpec, positions, temperatures, step=0):
        positions = np.array(positions, dtype=float, ndmin=2)
        temperatures = np.array(temperatures, dtype=float, ndmin=1)
        if temperatures.shape != (positions.shape[0],):
            raise ValueError("need one temperature per particle")
        if np.any(temperatures < 0):
            raise ValueError("temperatures must be nonnegative")
        return cls(positions, temperatures, spec.eval_batch(positions), step)

    @property
    def n_particles(self) -> int:
        return self.positions.shape[0]

    @property
    def dimension(self) -> int:
        return self.positions.shape[1]

    def copy(self) -> "SwarmState":
        return replace(
            self,
            positions=self.positions.copy(),
            temperatures=self.temperatures.copy(),
            values=self.values.copy(),
        )
