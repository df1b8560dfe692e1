import math

import numpy as np
import pytest

from opar.errors import InvalidInputError
from opar.kinematics import KinematicState
from opar.lifetime_matrix import LifetimeMatrix, build_matrix, to_graph

from conftest import stepping_lifetime


def parked(x, y=0.0, z=0.0):
    return KinematicState.from_motion((x, y, z))


def test_two_stationary_in_range():
    m = build_matrix([parked(0), parked(100)], 250.0, 500.0)
    assert m.entries.tolist() == [[0.0, 500.0], [500.0, 0.0]]
    g = to_graph(m)
    assert g.edges == [(0, 1), (1, 0)]


def test_two_out_of_range():
    m = build_matrix([parked(0), parked(300)], 250.0, 500.0)
    assert m.entries.tolist() == [[0.0, 0.0], [0.0, 0.0]]
    assert to_graph(m).n_edges == 0


def test_three_node_receding():
    a, b = parked(0), parked(0)
    c = KinematicState.from_motion((100, 0, 0), alpha=0.0, theta=math.pi / 2, speed=50.0)
    m = build_matrix([a, b, c], 250.0, 500.0)
    expected = stepping_lifetime(a, c, 250.0, 500.0)
    assert m[0, 1] == m[1, 0] == 500.0
    for i, j in [(0, 2), (2, 0), (1, 2), (2, 1)]:
        assert m[i, j] == pytest.approx(expected, abs=2e-3)
        assert m[i, j] == pytest.approx(3.0, abs=1e-3)
    assert to_graph(m).n_edges == 6


def test_needs_two_nodes():
    with pytest.raises(InvalidInputError):
        build_matrix([parked(0)], 250.0)


def test_matrix_is_read_only():
    m = build_matrix([parked(0), parked(10)], 250.0)
    with pytest.raises(ValueError):
        m.entries[0, 1] = 3.0


def test_all_zero_matrix_has_no_edges():
    assert to_graph(LifetimeMatrix(np.zeros((4, 4)))).n_edges == 0


def _random_states(rng, n):
    return [KinematicState.from_motion(rng.uniform(0, [300, 800, 50]),
                                       rng.uniform(-math.pi, math.pi), rng.uniform(0, math.pi),
                                       rng.uniform(0, 50), rng.uniform(-3, 3))
            for _ in range(n)]


def test_edge_count_matches_positive_entries(rng):
    for _ in range(20):
        m = build_matrix(_random_states(rng, 12), 250.0, 200.0)
        g = to_graph(m)
        assert g.n_edges == int((m.entries > 0).sum())
        assert all(i != j for i, j in g.edges)
        assert all(list(s) == sorted(s) for s in g.succ)


def test_matrix_invariants_and_determinism(rng):
    states = _random_states(rng, 15)
    m1 = build_matrix(states, 250.0, 200.0)
    m2 = build_matrix(states, 250.0, 200.0)
    assert m1.entries.tobytes() == m2.entries.tobytes()
    e = m1.entries
    assert np.all(np.diag(e) == 0.0)
    assert np.all((e >= 0.0) & (e <= 200.0))
    assert np.array_equal(e, e.T)
