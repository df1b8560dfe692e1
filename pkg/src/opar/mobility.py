"""3D Random Waypoint and Gauss-Markov mobility inside a bounded box."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .errors import InvalidInputError

RWP = "rwp"
GAUSS_MARKOV = "gauss_markov"
MODELS = (RWP, GAUSS_MARKOV)


@dataclass(frozen=True)
class Volume:
    x_max: float = 300.0
    y_max: float = 2000.0
    z_max: float = 50.0

    def __post_init__(self):
        if min(self.x_max, self.y_max, self.z_max) <= 0:
            raise InvalidInputError(f"volume dimensions must be positive: {self}")

    @property
    def upper(self) -> np.ndarray:
        return np.array([self.x_max, self.y_max, self.z_max])

    def contains(self, p) -> bool:
        return bool(np.all(np.asarray(p) >= 0.0) and np.all(np.asarray(p) <= self.upper))

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return rng.uniform(0.0, 1.0, 3) * self.upper


@dataclass(frozen=True)
class MobilityConfig:
    """Mobility parameters.

    ``gm_mean_speed`` defaults to the middle of the speed range and
    ``gm_speed_std`` to a sixth of its width.
    """

    model: str = RWP
    speed_min: float = 0.0
    speed_max: float = 50.0
    gm_memory: float = 0.85
    gm_angle_jitter: float = 0.05
    gm_mean_speed: Optional[float] = None
    gm_speed_std: Optional[float] = None
    pause_time: float = 0.0
    step_dt: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.model not in MODELS:
            raise InvalidInputError(f"unknown mobility model {self.model!r}; expected one of {MODELS}")
        if not (0.0 <= self.speed_min <= self.speed_max):
            raise InvalidInputError(
                f"need 0 <= speed_min <= speed_max, got {self.speed_min}, {self.speed_max}")
        if not (0.0 <= self.gm_memory <= 1.0):
            raise InvalidInputError(f"gm_memory must be in [0, 1], got {self.gm_memory}")
        if self.gm_angle_jitter < 0:
            raise InvalidInputError(f"gm_angle_jitter must be >= 0, got {self.gm_angle_jitter}")
        if self.pause_time < 0 or self.step_dt <= 0:
            raise InvalidInputError("pause_time must be >= 0 and step_dt > 0")

    @property
    def mean_speed(self) -> float:
        if self.gm_mean_speed is not None:
            return self.gm_mean_speed
        return 0.5 * (self.speed_min + self.speed_max)

    @property
    def speed_std(self) -> float:
        if self.gm_speed_std is not None:
            return self.gm_speed_std
        return (self.speed_max - self.speed_min) / 6.0


@dataclass
class NodeState:
    node_id: int
    position: np.ndarray
    speed: float
    volume: Volume
    rng: np.random.Generator
    # random waypoint
    waypoint: Optional[np.ndarray] = None
    pause_left: float = 0.0
    # gauss-markov
    alpha: float = 0.0
    theta: float = math.pi / 2
    mean_alpha: float = 0.0
    mean_theta: float = math.pi / 2
    last_turn: float = 0.0


def node_rng(seed: int, node_id: int) -> np.random.Generator:
    return np.random.default_rng([int(seed), int(node_id)])


def init_node(node_id: int, cfg: MobilityConfig, volume: Volume,
              position=None, seed: Optional[int] = None) -> NodeState:
    rng = node_rng(cfg.seed if seed is None else seed, node_id)
    pos = volume.sample(rng)
    if position is not None:
        pos = np.array(position, dtype=np.float64)
    node = NodeState(node_id, pos, float(rng.uniform(cfg.speed_min, cfg.speed_max)),
                     volume, rng)
    if cfg.model == RWP:
        node.waypoint = volume.sample(rng)
    else:
        node.alpha = float(rng.uniform(-math.pi, math.pi))
        node.mean_alpha = node.alpha
    return node


def rwp_advance(node: NodeState, cfg: MobilityConfig, dt: float) -> NodeState:
    """Move straight towards the waypoint; pause and redraw on arrival.

    Leftover time within the step after an arrival is dropped.
    """
    if node.pause_left > 0.0:
        node.pause_left = max(0.0, node.pause_left - dt)
        if node.pause_left > 1e-12:
            return node
        node.pause_left = 0.0
        _new_leg(node, cfg)
        return node
    delta = node.waypoint - node.position
    remaining = float(np.linalg.norm(delta))
    travel = node.speed * dt
    if remaining <= travel + 1e-9:
        node.position = node.waypoint.copy()
        if cfg.pause_time > 0.0:
            node.pause_left = cfg.pause_time
        else:
            _new_leg(node, cfg)
    elif travel > 0.0:
        node.position = node.position + delta * (travel / remaining)
    return node


def _new_leg(node: NodeState, cfg: MobilityConfig) -> None:
    node.waypoint = node.volume.sample(node.rng)
    node.speed = float(node.rng.uniform(cfg.speed_min, cfg.speed_max))


def _wrap(angle: float) -> float:
    a = math.remainder(angle, 2.0 * math.pi)
    return math.pi if a == -math.pi else a


def _bounded_noise(rng: np.random.Generator, sigma: float) -> float:
    if sigma == 0.0:
        return 0.0
    return float(np.clip(rng.normal(0.0, sigma), -sigma, sigma))


def gm_advance(node: NodeState, cfg: MobilityConfig, dt: float) -> NodeState:
    """One Gauss-Markov step: AR(1) speed and heading, reflecting at walls.

    Per-step heading change (azimuth and polar) is clipped to
    ``gm_angle_jitter``.
    """
    a = cfg.gm_memory
    mix = math.sqrt(max(0.0, 1.0 - a * a))
    jitter = cfg.gm_angle_jitter
    rng = node.rng

    speed = a * node.speed + (1.0 - a) * cfg.mean_speed + mix * cfg.speed_std * float(rng.normal())
    node.speed = min(cfg.speed_max, max(cfg.speed_min, speed))

    turn = (1.0 - a) * _wrap(node.mean_alpha - node.alpha) + mix * _bounded_noise(rng, jitter)
    turn = max(-jitter, min(jitter, turn))
    node.alpha = _wrap(node.alpha + turn)
    node.last_turn = turn

    tilt = (1.0 - a) * (node.mean_theta - node.theta) + mix * _bounded_noise(rng, jitter)
    tilt = max(-jitter, min(jitter, tilt))
    node.theta = min(math.pi, max(0.0, node.theta + tilt))

    st = math.sin(node.theta)
    step = node.speed * dt
    p = node.position + step * np.array(
        [st * math.cos(node.alpha), st * math.sin(node.alpha), math.cos(node.theta)])

    upper = node.volume.upper
    for axis in range(3):
        if p[axis] < 0.0:
            p[axis] = -p[axis]
        elif p[axis] > upper[axis]:
            p[axis] = 2.0 * upper[axis] - p[axis]
        else:
            continue
        if axis == 0:
            node.alpha = _wrap(math.pi - node.alpha)
            node.mean_alpha = _wrap(math.pi - node.mean_alpha)
        elif axis == 1:
            node.alpha = _wrap(-node.alpha)
            node.mean_alpha = _wrap(-node.mean_alpha)
        else:
            node.theta = math.pi - node.theta
            node.mean_theta = math.pi - node.mean_theta
    node.position = np.clip(p, 0.0, upper)
    return node


def advance(node: NodeState, cfg: MobilityConfig, dt: Optional[float] = None) -> NodeState:
    dt = cfg.step_dt if dt is None else dt
    if cfg.model == RWP:
        return rwp_advance(node, cfg, dt)
    return gm_advance(node, cfg, dt)


def write_trajectory_csv(rows: Iterable, fh) -> None:
    """Write ``(time, node_id, x, y, z)`` rows as ``time,node_id,x,y,z`` CSV."""
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["time", "node_id", "x", "y", "z"])
    for t, nid, x, y, z in rows:
        writer.writerow([f"{t:.6f}", int(nid), f"{x:.6f}", f"{y:.6f}", f"{z:.6f}"])
