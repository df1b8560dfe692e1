"""Kinematic state estimation and link-lifetime prediction.

A node's heading, speed and acceleration are estimated from three
consecutive timestamped positions. Positions are extrapolated along the
estimated heading with a constant-acceleration displacement, and the link
lifetime of a pair is the first time their predicted distance exceeds the
transmission range.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Optional, Tuple

from ._backend import kernels
from .errors import InvalidInputError

DEFAULT_TAU_MAX = 500.0
DEFAULT_MARCH_STEP = 0.1
DEFAULT_TIME_TOL = 1e-3


class Position3D(NamedTuple):
    x: float
    y: float
    z: float


class PositionSample(NamedTuple):
    position: Position3D
    time: float


def _check_sample(s: PositionSample) -> None:
    if not (math.isfinite(s.time) and all(math.isfinite(c) for c in s.position)):
        raise InvalidInputError(f"non-finite position sample {s!r}")


def _displacement(p1: PositionSample, p2: PositionSample) -> Tuple[float, float, float]:
    _check_sample(p1)
    _check_sample(p2)
    if not p2.time > p1.time:
        raise InvalidInputError(
            f"timestamps must be strictly increasing, got {p1.time} then {p2.time}")
    a, b = p1.position, p2.position
    return b.x - a.x, b.y - a.y, b.z - a.z


def direction_angles(p1: PositionSample, p2: PositionSample) -> Tuple[float, float]:
    """Azimuthal and polar angle of the displacement from ``p1`` to ``p2``.

    The azimuth uses atan2 so it covers the full circle (-pi, pi]. Zero
    displacement yields (0, 0).
    """
    dx, dy, dz = _displacement(p1, p2)
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if norm == 0.0:
        return 0.0, 0.0
    alpha = math.atan2(dy, dx)
    if alpha == -math.pi:
        alpha = math.pi
    theta = math.acos(max(-1.0, min(1.0, dz / norm)))
    return alpha, theta


def speed(p1: PositionSample, p2: PositionSample) -> float:
    dx, dy, dz = _displacement(p1, p2)
    return math.sqrt(dx * dx + dy * dy + dz * dz) / (p2.time - p1.time)


def acceleration(v1: float, v2: float, t0: float, t2: float) -> float:
    """Speed change over the full three-sample window, ``(v2 - v1) / (t2 - t0)``."""
    if not t2 > t0:
        raise InvalidInputError(f"need t2 > t0, got t0={t0}, t2={t2}")
    return (v2 - v1) / (t2 - t0)


@dataclass(frozen=True)
class KinematicState:
    """Motion estimate of one node, anchored at its newest sample.

    ``samples`` holds the three source samples when the state was derived
    with :meth:`from_samples`; synthetic states built by
    :meth:`from_motion` leave it as ``None``.
    """

    position: Position3D
    time: float
    alpha: float
    theta: float
    speed: float
    accel: float
    stationary: bool = False
    samples: Optional[Tuple[PositionSample, PositionSample, PositionSample]] = None

    def __post_init__(self):
        if self.speed < 0 or not math.isfinite(self.speed):
            raise InvalidInputError(f"speed must be finite and >= 0, got {self.speed}")
        if not (-math.pi < self.alpha <= math.pi):
            raise InvalidInputError(f"azimuth {self.alpha} outside (-pi, pi]")
        if not (0.0 <= self.theta <= math.pi):
            raise InvalidInputError(f"polar angle {self.theta} outside [0, pi]")
        if not all(math.isfinite(c) for c in self.position):
            raise InvalidInputError(f"non-finite position {self.position!r}")

    @classmethod
    def from_samples(cls, s0: PositionSample, s1: PositionSample,
                     s2: PositionSample) -> "KinematicState":
        v1 = speed(s0, s1)
        v2 = speed(s1, s2)
        alpha, theta = direction_angles(s1, s2)
        if v2 == 0.0:
            return cls(Position3D(*s2.position), s2.time, 0.0, 0.0, 0.0, 0.0,
                       stationary=True, samples=(s0, s1, s2))
        accel = acceleration(v1, v2, s0.time, s2.time)
        return cls(Position3D(*s2.position), s2.time, alpha, theta, v2, accel,
                   samples=(s0, s1, s2))

    @classmethod
    def from_motion(cls, position, alpha: float = 0.0, theta: float = 0.0,
                    speed: float = 0.0, accel: float = 0.0,
                    time: float = 0.0) -> "KinematicState":
        return cls(Position3D(*map(float, position)), float(time), float(alpha),
                   float(theta), float(speed), float(accel),
                   stationary=(speed == 0.0 and accel == 0.0))

    @property
    def heading(self) -> Tuple[float, float, float]:
        st = math.sin(self.theta)
        return (st * math.cos(self.alpha), st * math.sin(self.alpha), math.cos(self.theta))


def extrapolate(state: KinematicState, dt: float) -> Position3D:
    if dt < 0:
        raise InvalidInputError(f"dt must be >= 0, got {dt}")
    s = state.speed * dt + 0.5 * state.accel * dt * dt
    ux, uy, uz = state.heading
    p = state.position
    return Position3D(p.x + s * ux, p.y + s * uy, p.z + s * uz)


def predicted_distance(si: KinematicState, sj: KinematicState, dt: float) -> float:
    a = extrapolate(si, dt)
    b = extrapolate(sj, dt)
    return math.sqrt((a.x - b.x) ** 2 + (a.y - b.y) ** 2 + (a.z - b.z) ** 2)


def link_lifetime(si: KinematicState, sj: KinematicState, radius: float,
                  tau_max: float = DEFAULT_TAU_MAX, step: float = DEFAULT_MARCH_STEP,
                  tol: float = DEFAULT_TIME_TOL) -> float:
    """Predicted lifetime of the link between two nodes, in seconds.

    Marches forward in ``step`` increments until the predicted distance
    first exceeds ``radius``, then bisects that bracket to ``tol``. Returns
    0 for pairs already out of range and ``tau_max`` when the pair stays
    in range over the whole horizon.
    """
    if radius <= 0:
        raise InvalidInputError(f"range must be positive, got {radius}")
    if tau_max <= 0:
        raise InvalidInputError(f"horizon must be positive, got {tau_max}")
    return kernels.pair_lifetime(si.position, si.heading, si.speed, si.accel,
                                 sj.position, sj.heading, sj.speed, sj.accel,
                                 float(radius), float(tau_max), float(step), float(tol))
