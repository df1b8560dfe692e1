import math

import numpy as np
import pytest

from opar.kinematics import KinematicState, predicted_distance


def stepping_lifetime(si, sj, radius, tau_max, dt=1e-3):
    """Time-stepping oracle: first multiple of ``dt`` where the gap exceeds ``radius``."""
    if predicted_distance(si, sj, 0.0) > radius:
        return 0.0
    n = int(math.ceil(tau_max / dt))
    for k in range(1, n + 1):
        t = min(k * dt, tau_max)
        if predicted_distance(si, sj, t) > radius:
            return t
    return tau_max


def receding_pair(d0=100.0, rel_speed=50.0):
    """Node A parked at the origin, node B moving away along +x."""
    a = KinematicState.from_motion((0.0, 0.0, 0.0))
    b = KinematicState.from_motion((d0, 0.0, 0.0), alpha=0.0, theta=math.pi / 2, speed=rel_speed)
    return a, b


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
