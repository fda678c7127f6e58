"""Shared vocabulary: capability space, vectors, tasks, agents and outcomes."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DimensionMismatch, OutOfRange


@dataclass(frozen=True)
class CapabilitySpace:
    """The unit hypercube [0, 1]^n sampled on a regular grid.

    ``grid_resolution`` counts points per dimension with both endpoints
    included, so the step between neighbours is ``1 / (G - 1)``.
    """

    n: int
    grid_resolution: int = 101

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n!r}")
        if int(self.grid_resolution) != self.grid_resolution or self.grid_resolution < 2:
            raise ValueError(f"grid_resolution must be >= 2, got {self.grid_resolution!r}")

    @property
    def step(self) -> float:
        return 1.0 / (self.grid_resolution - 1)

    def grid(self) -> np.ndarray:
        # k / (G - 1) computed by division so every point is exact-as-possible
        return np.arange(self.grid_resolution, dtype=float) / (self.grid_resolution - 1)

    @property
    def n_cells(self) -> int:
        return self.grid_resolution ** self.n


class CapabilityVector(tuple):
    """Immutable tuple of capability magnitudes, each in [0, 1]."""

    def __new__(cls, values: Sequence[float]):
        return super().__new__(cls, (float(v) for v in values))

    def as_array(self) -> np.ndarray:
        return np.asarray(self, dtype=float)

    def __repr__(self):
        return f"CapabilityVector({list(self)!r})"


def validate_vector(values, space: CapabilitySpace) -> CapabilityVector:
    """Check length and range of ``values`` against ``space``."""
    vals = np.asarray(values, dtype=float).ravel()
    if vals.shape[0] != space.n:
        raise DimensionMismatch(f"expected {space.n} components, got {vals.shape[0]}")
    if not np.all(np.isfinite(vals)):
        raise OutOfRange(f"non-finite capability value in {vals.tolist()!r}")
    bad = np.flatnonzero((vals < 0.0) | (vals > 1.0))
    if bad.size:
        i = int(bad[0])
        raise OutOfRange(f"component {i} = {float(vals[i])!r} is outside [0, 1]")
    return CapabilityVector(vals.tolist())


class AgentKind(str, enum.Enum):
    HUMAN = "human"
    ROBOT = "robot"


class Outcome(str, enum.Enum):
    SUCCESS = "S"
    FAILURE = "F"

    @property
    def succeeded(self) -> bool:
        return self is Outcome.SUCCESS


@dataclass(frozen=True)
class Task:
    id: str
    requirements: CapabilityVector


@dataclass(frozen=True)
class Observation:
    """A task requirement vector paired with the outcome seen when it was executed."""

    requirements: CapabilityVector
    outcome: Outcome
