"""Seeded random streams and the stochastic primitives used by the solvers.

All samplers take an explicit ``numpy.random.Generator``. Streams are derived
from ``(master_seed, tag, index)`` by hashing, so independent tasks never share
state and any task can be replayed in isolation.
"""

from __future__ import annotations

import hashlib

import numpy as np

__all__ = [
    "derive_stream",
    "cauchy_step",
    "gaussian_step",
    "uniform_symmetric",
    "iround",
]


def derive_stream(master_seed: int, tag: str, index: int = 0) -> np.random.Generator:
    """Return a Philox-backed generator keyed on ``(master_seed, tag, index)``.

    The triple is hashed with SHA-256 so that neighbouring seeds or indices give
    unrelated keys.
    """
    payload = f"{int(master_seed)}\x1f{tag}\x1f{int(index)}".encode()
    digest = hashlib.sha256(payload).digest()
    entropy = int.from_bytes(digest, "little")
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def cauchy_step(T, d: int, rng: np.random.Generator) -> np.ndarray:
    """Cauchy(0, T) increments by the inverse-CDF tangent method.

    ``T`` may be a scalar (returns shape ``(d,)``) or an array of ``N``
    temperatures (returns shape ``(N, d)``, one scale per row). Zero
    temperature gives exactly zero increments.
    """
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ValueError("temperature must be nonnegative")
    if T.ndim == 0:
        u = rng.random(d)
        return float(T) * np.tan(np.pi * (u - 0.5))
    u = rng.random((T.shape[0], d))
    return T[:, None] * np.tan(np.pi * (u - 0.5))


def gaussian_step(T, d: int, rng: np.random.Generator) -> np.ndarray:
    """Increments ``sqrt(2 T) * z`` with ``z`` standard normal.

    Shapes follow :func:`cauchy_step`.
    """
    T = np.asarray(T, dtype=float)
    if np.any(T < 0):
        raise ValueError("temperature must be nonnegative")
    if T.ndim == 0:
        return np.sqrt(2.0 * float(T)) * rng.standard_normal(d)
    z = rng.standard_normal((T.shape[0], d))
    return np.sqrt(2.0 * T)[:, None] * z


def uniform_symmetric(a: float, rng: np.random.Generator, size=None):
    """Uniform draw(s) on ``[-a, a]``."""
    if a < 0:
        raise ValueError("support half-width must be nonnegative")
    u = rng.random(size)
    return a * (2.0 * u - 1.0)


def iround(x: float, rng: np.random.Generator) -> int:
    """Stochastic rounding: ``floor(x) + 1`` with probability ``x - floor(x)``.

    Unbiased, ``E[iround(x)] == x``.
    """
    if x < 0:
        raise ValueError(f"iround needs a nonnegative argument, got {x}")
    base = int(np.floor(x))
    frac = x - base
    return base + int(rng.random() < frac)
