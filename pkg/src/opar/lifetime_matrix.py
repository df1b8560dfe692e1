"""Network-wide lifetime matrix and the directed graph snapshot it induces."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence, Tuple

import numpy as np

from ._backend import kernels
from .errors import InvalidInputError
from .kinematics import (DEFAULT_MARCH_STEP, DEFAULT_TAU_MAX, DEFAULT_TIME_TOL,
                         KinematicState)


@dataclass(frozen=True, eq=False)
class LifetimeMatrix:
    entries: np.ndarray
    tau_max: float = DEFAULT_TAU_MAX

    def __post_init__(self):
        self.entries.setflags(write=False)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __getitem__(self, ij):
        return self.entries[ij]


def build_matrix(states: Sequence[KinematicState], radius: float,
                 tau_max: float = DEFAULT_TAU_MAX, step: float = DEFAULT_MARCH_STEP,
                 tol: float = DEFAULT_TIME_TOL) -> LifetimeMatrix:
    if len(states) < 2:
        raise InvalidInputError(f"need at least 2 nodes, got {len(states)}")
    if radius <= 0 or tau_max <= 0:
        raise InvalidInputError("range and horizon must be positive")
    pos = np.array([s.position for s in states], dtype=np.float64)
    heading = np.array([s.heading for s in states], dtype=np.float64)
    speed = np.array([s.speed for s in states], dtype=np.float64)
    accel = np.array([s.accel for s in states], dtype=np.float64)
    entries = kernels.lifetime_matrix(pos, heading, speed, accel, float(radius),
                                      float(tau_max), float(step), float(tol))
    return LifetimeMatrix(entries, float(tau_max))


@dataclass(frozen=True, eq=False)
class NetGraph:
    """Directed graph snapshot; ``succ[i]`` lists successors of i in ascending order.

    ``lifetime`` is the (read-only) matrix the graph was derived from, so
    paths can report their bottleneck without carrying the matrix around.
    """

    n: int
    succ: Tuple[Tuple[int, ...], ...]
    lifetime: np.ndarray = field(repr=False)

    @property
    def edges(self):
        return [(i, j) for i in range(self.n) for j in self.succ[i]]

    @property
    def n_edges(self) -> int:
        return sum(len(s) for s in self.succ)

    def has_edge(self, i: int, j: int) -> bool:
        return j in self.succ[i]


def _graph_above(lifetime: np.ndarray, threshold: float, base=None) -> NetGraph:
    n = lifetime.shape[0]
    if base is None:
        succ = tuple(tuple(int(j) for j in np.flatnonzero(lifetime[i] > threshold) if j != i)
                     for i in range(n))
    else:
        succ = tuple(tuple(j for j in base[i] if lifetime[i, j] > threshold)
                     for i in range(n))
    return NetGraph(n, succ, lifetime)


def to_graph(matrix: LifetimeMatrix) -> NetGraph:
    return _graph_above(matrix.entries, 0.0)
