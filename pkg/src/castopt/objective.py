"""Benchmark objectives on the rescaled hypercube [-1, 1]^d.

Every objective is evaluated as ``F(s * x)`` where ``s`` is the physical
half-width of the classic search domain. Particles may leave the hypercube;
the formulas are defined everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

__all__ = [
    "ObjectiveError",
    "ObjectiveSpec",
    "ackley",
    "rastrigin",
    "get_objective",
    "register_objective",
    "available_objectives",
]


class ObjectiveError(ValueError):
    """Raised when an objective cannot be evaluated at a point."""


def _ackley(z: np.ndarray) -> np.ndarray:
    d = z.shape[-1]
    r = np.sqrt(np.sum(z * z, axis=-1) / d)
    c = np.sum(np.cos(2.0 * np.pi * z), axis=-1) / d
    return -20.0 * np.exp(-0.2 * r) - np.exp(c) + 20.0 + np.e


def _rastrigin(z: np.ndarray) -> np.ndarray:
    d = z.shape[-1]
    return 10.0 * d + np.sum(z * z - 10.0 * np.cos(2.0 * np.pi * z), axis=-1)


@dataclass(frozen=True)
class ObjectiveSpec:
    """A benchmark function together with its basin geometry.

    Parameters
    ----------
    id : str
        Registry key, e.g. ``"ackley"``.
    dimension : int
        Search-space dimension ``d``.
    domain_scale : float
        Physical half-width ``s``; rescaled ``x`` maps to ``s * x``.
    basin_radius_rescaled : float
        Radius of the open infinity-norm basin ball in rescaled coordinates.
    func : callable
        Physical-domain formula acting on the last axis of an array.
    """

    id: str
    dimension: int
    domain_scale: float
    basin_radius_rescaled: float
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False, compare=False)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")
        if not self.domain_scale > 0:
            raise ValueError("domain_scale must be positive")
        if not self.basin_radius_rescaled > 0:
            raise ValueError("basin_radius_rescaled must be positive")

    @property
    def global_min(self) -> np.ndarray:
        return np.zeros(self.dimension)

    def eval(self, x) -> float:
        """Objective value at a single rescaled point."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dimension,):
            raise ObjectiveError(
                f"expected a point of shape ({self.dimension},), got {x.shape}"
            )
        if not np.all(np.isfinite(x)):
            raise ObjectiveError(f"non-finite coordinate in {x!r}")
        return float(self.func(self.domain_scale * x))

    def eval_batch(self, X: np.ndarray) -> np.ndarray:
        """Vectorised evaluation over the rows of an ``(N, d)`` array.

        Raises ``ObjectiveError`` naming the first offending row if any row
        holds a non-finite coordinate.
        """
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dimension:
            raise ObjectiveError(
                f"expected an array of shape (N, {self.dimension}), got {X.shape}"
            )
        bad = ~np.all(np.isfinite(X), axis=1)
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            raise ObjectiveError(f"non-finite coordinate for particle {i}: {X[i]!r}")
        return self.func(self.domain_scale * X)

    def in_basin(self, x, shrink: float = 0.5) -> bool:
        """True iff ``x`` lies in the open inf-norm ball of radius
        ``shrink * basin_radius_rescaled`` around the global minimiser."""
        if not 0.0 < shrink <= 1.0:
            raise ValueError(f"shrink must lie in (0, 1], got {shrink}")
        dist = np.max(np.abs(np.asarray(x, dtype=float) - self.global_min))
        return bool(dist < shrink * self.basin_radius_rescaled)


def ackley(d: int) -> ObjectiveSpec:
    # physical basin radius 0.67 on [-32.768, 32.768]^d
    return ObjectiveSpec("ackley", d, 32.768, 0.67 / 32.768, _ackley)


def rastrigin(d: int) -> ObjectiveSpec:
    # physical basin radius 0.5 on [-5.12, 5.12]^d
    return ObjectiveSpec("rastrigin", d, 5.12, 0.5 / 5.12, _rastrigin)


_REGISTRY: dict[str, Callable[[int], ObjectiveSpec]] = {
    "ackley": ackley,
    "rastrigin": rastrigin,
}


def register_objective(name: str, factory: Callable[[int], ObjectiveSpec]) -> None:
    """Make ``factory(d)`` available under ``name`` for configs and the CLI."""
    if name in _REGISTRY:
        raise ValueError(f"objective {name!r} is already registered")
    _REGISTRY[name] = factory


def available_objectives() -> list[str]:
    return sorted(_REGISTRY)


def get_objective(name: str, d: int) -> ObjectiveSpec:
    try:
        factory = _REGISTRY[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown objective {name!r}; choose from {available_objectives()}"
        ) from None
    return factory(d)
