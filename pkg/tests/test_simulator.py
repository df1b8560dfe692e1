import dataclasses
import math

import numpy as np
import pytest

from opar.errors import ConfigError, InvalidInputError
from opar.kinematics import KinematicState
from opar.lifetime_matrix import LifetimeMatrix, build_matrix, to_graph
from opar.mobility import GAUSS_MARKOV, MobilityConfig, Volume
from opar.optimizer import Weights, bfs_shortest_path
from opar.simulator import (REPORT_BYTES, SHORTEST, FlowRecord, ScenarioConfig,
                            compute_metrics, install_bytes, needs_reroute, report_count,
                            reroute, run_scenario, select_route)

STILL = MobilityConfig(speed_min=0.0, speed_max=0.0)


def parked_scenario(positions, **kw):
    base = dict(n_uavs=len(positions), mobility=STILL, initial_positions=tuple(positions),
                flows=((0, 1),), n_flows=1)
    base.update(kw)
    return ScenarioConfig(**base)


def test_report_encoding_is_52_bytes():
    assert REPORT_BYTES == 52
    assert install_bytes(3) == 4 + 1 + 12


def test_single_hop_transfer_time():
    cfg = parked_scenario([(10, 10, 10), (110, 10, 10)], file_size=1_000_000, link_rate=1e6)
    rep = run_scenario(cfg)
    f = rep.per_flow[0]
    assert f.completed and f.bytes_delivered == 1_000_000
    assert f.finish_time == pytest.approx(8.0, abs=1e-9)
    assert f.reroute_count == 0 and f.installed_hops == [1]
    assert rep.success_rate == 1.0
    assert rep.mean_fct == pytest.approx(8.0, abs=1e-9)


def test_uncontended_5mb_at_2mbps():
    cfg = parked_scenario([(10, 10, 10), (110, 10, 10)], link_rate=2e6)
    rep = run_scenario(cfg)
    assert rep.mean_fct == pytest.approx(20.0, abs=1e-9)
    assert rep.weighted_throughput == pytest.approx(2.0, rel=1e-9)


def test_unreachable_destination_fails_at_horizon():
    cfg = parked_scenario([(10, 10, 10), (10, 1900, 10), (200, 900, 40)], sim_time=30.0)
    rep = run_scenario(cfg)
    f = rep.per_flow[0]
    assert not f.completed and f.bytes_delivered == 0.0
    assert rep.success_rate == 0.0
    assert rep.mean_fct == 30.0
    assert rep.weighted_throughput == 0.0


def test_shared_link_splits_capacity():
    # two flows over the same single link, opposite directions
    cfg = parked_scenario([(10, 10, 10), (110, 10, 10)], n_flows=2, flows=((0, 1), (1, 0)),
                          file_size=1_000_000, link_rate=1e6)
    rep = run_scenario(cfg)
    assert [f.finish_time for f in rep.per_flow] == pytest.approx([16.0, 16.0], abs=1e-9)


def test_relay_chain_routes_through_middle():
    cfg = parked_scenario([(10, 10, 10), (10, 410, 10), (10, 210, 10)], file_size=250_000,
                          link_rate=1e6)
    rep = run_scenario(cfg)
    assert rep.per_flow[0].installed_hops == [2]
    assert rep.per_flow[0].finish_time == pytest.approx(2.0, abs=1e-9)


def test_determinism_and_conservation():
    cfg = ScenarioConfig(n_uavs=15, volume=Volume(300, 800, 50), n_flows=3, sim_time=60.0,
                         seed=4, mobility=MobilityConfig(model=GAUSS_MARKOV))
    a, b = run_scenario(cfg), run_scenario(cfg)
    assert a == b
    for f in a.per_flow:
        assert 0.0 <= f.bytes_delivered <= f.file_size
        assert not f.completed or f.finish_time <= cfg.sim_time


def test_seed_changes_flows():
    cfg = ScenarioConfig(n_uavs=20, n_flows=5, sim_time=1.8)
    pairs = lambda c: [(f.source, f.destination) for f in run_scenario(c).per_flow]
    p0, p1 = pairs(cfg), pairs(dataclasses.replace(cfg, seed=1))
    assert p0 != p1
    assert len(set(p0)) == 5 and all(s != d for s, d in p0)


def make_flow(**kw):
    return FlowRecord(0, 0, 2, 1000, **kw)


def line_graph(lt01, lt12, lt02=0.0):
    m = np.array([[0, lt01, lt02], [lt01, 0, lt12], [lt02, lt12, 0]], dtype=float)
    matrix = LifetimeMatrix(m, 500.0)
    return to_graph(matrix), matrix


def test_intact_path_is_not_rerouted():
    cfg = ScenarioConfig(n_uavs=3)
    g, m = line_graph(50.0, 60.0)
    f = make_flow()
    reroute(f, g, m, cfg)
    assert f.path.nodes == (0, 1, 2) and f.reroute_count == 0
    assert not needs_reroute(f, g, m, cfg)


def test_broken_link_triggers_reroute():
    cfg = ScenarioConfig(n_uavs=3)
    g, m = line_graph(50.0, 60.0)
    f = make_flow()
    reroute(f, g, m, cfg)
    g2, m2 = line_graph(0.0, 60.0, lt02=30.0)
    assert needs_reroute(f, g2, m2, cfg)
    reroute(f, g2, m2, cfg)
    assert f.path.nodes == (0, 2) and f.reroute_count == 1
    assert f.installed_hops == [2, 1]


def test_predictive_trigger_only_for_opar():
    g, m = line_graph(0.5, 60.0)
    opar_cfg = ScenarioConfig(n_uavs=3)
    base_cfg = ScenarioConfig(n_uavs=3, algorithm=SHORTEST)
    for cfg, expect in [(opar_cfg, True), (base_cfg, False)]:
        f = make_flow()
        reroute(f, g, m, cfg)
        assert needs_reroute(f, g, m, cfg) is expect


def test_partition_stalls_then_fails():
    cfg = ScenarioConfig(n_uavs=3)
    g, m = line_graph(50.0, 60.0)
    f = make_flow()
    reroute(f, g, m, cfg)
    dead, dm = line_graph(0.0, 0.0)
    assert reroute(f, dead, dm, cfg) is None
    assert f.path is None and f.reroute_count == 0
    reroute(f, g, m, cfg)
    assert f.reroute_count == 1


def drifting_relay(monkeypatch):
    """Relay 2 flies +x at 10 m/s from t=-0.6 s and leaves range after t=14.4 s; relay 3 stays."""
    import opar.simulator as sim

    real = sim.init_node

    def init(node_id, cfg, volume, position=None, seed=None):
        node = real(node_id, cfg, volume, position=position, seed=seed)
        if node_id == 2:
            node.speed = 10.0
            node.waypoint = np.array([290.0, 210.0, 25.0])
        return node

    monkeypatch.setattr(sim, "init_node", init)
    return parked_scenario([(10, 10, 25), (10, 410, 25), (10, 210, 25), (40, 210, 25)],
                           file_size=50_000_000, sim_time=30.0, link_rate=1e6)


def test_bottleneck_leaving_range_reroutes_at_next_snapshot(monkeypatch):
    cfg = dataclasses.replace(drifting_relay(monkeypatch), algorithm=SHORTEST)
    f = run_scenario(cfg).per_flow[0]
    assert f.reroute_count == 1
    assert f.installed_hops == [2, 2]
    # broken from the t=14.5 tick until the snapshot at t=15.3
    assert f.bytes_delivered == pytest.approx((30.0 - 0.8) * 1e6 / 8, abs=1.0)


def test_opar_avoids_the_short_lived_relay(monkeypatch):
    f = run_scenario(drifting_relay(monkeypatch)).per_flow[0]
    assert f.reroute_count == 0
    assert f.bytes_delivered == pytest.approx(30.0 * 1e6 / 8, abs=1.0)


def test_shortest_and_unit_weight_opar_pick_same_hops(rng):
    for _ in range(20):
        states = [KinematicState.from_motion(rng.uniform(0, [300, 1000, 50]),
                                             rng.uniform(-math.pi, math.pi),
                                             rng.uniform(0, math.pi), rng.uniform(0, 50))
                  for _ in range(20)]
        m = build_matrix(states, 250.0, 500.0)
        g = to_graph(m)
        a = ScenarioConfig(n_uavs=20, algorithm=SHORTEST)
        b = ScenarioConfig(n_uavs=20, weights=Weights(1.0, 0.0))
        for s, d in [(0, 19), (3, 7), (11, 2)]:
            pa, pb = select_route(g, m, s, d, a), select_route(g, m, s, d, b)
            assert (pa is None) == (pb is None)
            if pa is not None:
                assert pa.hop_count == pb.hop_count


def test_compute_metrics_examples():
    cfg = ScenarioConfig(n_uavs=10, n_flows=10, sim_time=100.0)
    flows = []
    for i in range(10):
        f = FlowRecord(i, 0, 1, 1000)
        if i < 5:
            f.completed, f.finish_time, f.bytes_delivered = True, 10.0, 1000.0
        flows.append(f)
    rep = compute_metrics(flows, cfg)
    assert rep.success_rate == 0.5
    assert rep.mean_fct == pytest.approx((5 * 10 + 5 * 100) / 10)
    assert rep.weighted_throughput == pytest.approx(0.5 * (5 * 8000 / 10 / 1e6) / 10)
    with pytest.raises(InvalidInputError):
        compute_metrics([], cfg)


def test_overhead_closed_form():
    cfg = ScenarioConfig(n_uavs=50)
    assert report_count(cfg) == 556
    rep = compute_metrics([FlowRecord(0, 0, 1, 10, installed_hops=[2, 3])], cfg)
    assert rep.report_bytes == 50 * 556 * 52
    assert rep.install_bytes == (5 + 8) + (5 + 12)
    assert rep.routing_overhead_bytes == rep.report_bytes + rep.install_bytes


@pytest.mark.parametrize("kw, key", [
    (dict(n_uavs=1), "n_uavs"),
    (dict(n_flows=0), "n_flows"),
    (dict(sim_time=0.0), "sim_time"),
    (dict(link_rate=0.0), "link_rate"),
    (dict(report_interval=0.95), "report_interval"),
    (dict(algorithm="aodv"), "algorithm"),
    (dict(n_uavs=2, n_flows=3), "n_flows"),
])
def test_config_invariants(kw, key):
    with pytest.raises(ConfigError) as exc:
        ScenarioConfig(**kw)
    assert exc.value.key == key
