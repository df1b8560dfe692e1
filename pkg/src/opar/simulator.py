"""Flow-level simulation of ground-station routing over a mobile UAV swarm.

Time advances in mobility ticks of ``mobility.step_dt``. Every node
samples its position each ``sample_interval``; every ``report_interval``
the ground station rebuilds the lifetime matrix from the last three
samples, checks every flow's route and reroutes where needed. Between
snapshots each flow moves bytes along its route at the fair share of its
most loaded link. A route whose link physically leaves range stalls until
the next snapshot.
"""
from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import ConfigError, InvalidInputError
from .kinematics import KinematicState, Position3D, PositionSample
from .lifetime_matrix import LifetimeMatrix, NetGraph, build_matrix, to_graph
from .mobility import MobilityConfig, Volume, advance, init_node
from .optimizer import RoutePath, Weights, bfs_shortest_path, opar_solve

OPAR = "opar"
SHORTEST = "shortest"
ALGORITHMS = (OPAR, SHORTEST)
PREDICTIVE = "predictive"
BREAK = "break"
TRIGGERS = (PREDICTIVE, BREAK)

# overhead encoding, in bytes
REPORT_BYTES = 4 + 3 * (3 * 4 + 4)
INSTALL_HEADER_BYTES = 4 + 1
INSTALL_PER_HOP_BYTES = 4


def _ticks(interval: float, dt: float, key: str) -> int:
    n = round(interval / dt)
    if n < 1 or abs(n * dt - interval) > 1e-9 * max(1.0, interval):
        raise ConfigError(key, f"{interval} is not a positive multiple of step_dt={dt}")
    return n


@dataclass(frozen=True)
class ScenarioConfig:
    n_uavs: int = 50
    volume: Volume = Volume()
    mobility: MobilityConfig = MobilityConfig()
    tx_range: float = 250.0
    n_flows: int = 1
    file_size: int = 5_000_000
    sim_time: float = 500.0
    report_interval: float = 0.9
    sample_interval: float = 0.3
    weights: Weights = Weights()
    algorithm: str = OPAR
    reroute_trigger: Optional[str] = None
    link_rate: float = 2e6
    seed: int = 0
    tau_max: Optional[float] = None
    lifetime_step: float = 0.1
    lifetime_tol: float = 1e-3
    initial_positions: Optional[Tuple[Tuple[float, float, float], ...]] = None
    flows: Optional[Tuple[Tuple[int, int], ...]] = None

    def __post_init__(self):
        if self.n_uavs < 2:
            raise ConfigError("n_uavs", f"need at least 2 UAVs, got {self.n_uavs}")
        if self.n_flows < 1:
            raise ConfigError("n_flows", f"need at least 1 flow, got {self.n_flows}")
        if self.n_flows > self.n_uavs * (self.n_uavs - 1):
            raise ConfigError("n_flows", "more flows than distinct source/destination pairs")
        if not self.sim_time > 0:
            raise ConfigError("sim_time", f"must be > 0, got {self.sim_time}")
        if not self.link_rate > 0:
            raise ConfigError("link_rate", f"must be > 0, got {self.link_rate}")
        if not self.tx_range > 0:
            raise ConfigError("tx_range", f"must be > 0, got {self.tx_range}")
        if not self.file_size > 0:
            raise ConfigError("file_size", f"must be > 0, got {self.file_size}")
        if self.algorithm not in ALGORITHMS:
            raise ConfigError("algorithm", f"expected one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.reroute_trigger is not None and self.reroute_trigger not in TRIGGERS:
            raise ConfigError("reroute_trigger",
                              f"expected one of {TRIGGERS}, got {self.reroute_trigger!r}")
        if self.tau_max is not None and not self.tau_max > 0:
            raise ConfigError("tau_max", f"must be > 0, got {self.tau_max}")
        dt = self.mobility.step_dt
        sample = _ticks(self.sample_interval, dt, "sample_interval")
        report = _ticks(self.report_interval, dt, "report_interval")
        if report % sample:
            raise ConfigError("report_interval", "must be a multiple of sample_interval")
        _ticks(self.sim_time, dt, "sim_time")
        if self.initial_positions is not None:
            if len(self.initial_positions) != self.n_uavs:
                raise ConfigError("initial_positions", "need one position per UAV")
            for p in self.initial_positions:
                if len(p) != 3 or not self.volume.contains(p):
                    raise ConfigError("initial_positions", f"{p!r} is not inside the volume")
        if self.flows is not None:
            if len(self.flows) != self.n_flows:
                raise ConfigError("flows", "need exactly n_flows source/destination pairs")
            for s, d in self.flows:
                if s == d or not (0 <= s < self.n_uavs and 0 <= d < self.n_uavs):
                    raise ConfigError("flows", f"invalid pair ({s}, {d})")

    @property
    def trigger(self) -> str:
        if self.reroute_trigger is not None:
            return self.reroute_trigger
        return PREDICTIVE if self.algorithm == OPAR else BREAK

    @property
    def horizon(self) -> float:
        return self.sim_time if self.tau_max is None else self.tau_max


@dataclass
class FlowRecord:
    flow_id: int
    source: int
    destination: int
    file_size: int
    bytes_delivered: float = 0.0
    start_time: float = 0.0
    finish_time: Optional[float] = None
    completed: bool = False
    reroute_count: int = 0
    installed_hops: List[int] = field(default_factory=list)
    path: Optional[RoutePath] = field(default=None, repr=False)
    broken: bool = False

    @property
    def had_route(self) -> bool:
        return bool(self.installed_hops)


@dataclass
class MetricsReport:
    success_rate: float
    weighted_throughput: float
    mean_fct: float
    routing_overhead_bytes: int
    report_bytes: int
    install_bytes: int
    mean_reroutes: float
    per_flow: List[FlowRecord]


def report_count(cfg: ScenarioConfig) -> int:
    """Number of position reports each node sends over the run."""
    dt = cfg.mobility.step_dt
    sim_ticks = _ticks(cfg.sim_time, dt, "sim_time")
    return (sim_ticks - 1) // _ticks(cfg.report_interval, dt, "report_interval") + 1


def install_bytes(hop_count: int) -> int:
    return INSTALL_HEADER_BYTES + INSTALL_PER_HOP_BYTES * hop_count


def select_route(graph: NetGraph, matrix: LifetimeMatrix, s: int, d: int,
                 cfg: ScenarioConfig) -> Optional[RoutePath]:
    if cfg.algorithm == SHORTEST:
        return bfs_shortest_path(graph, s, d)
    return opar_solve(graph, matrix, s, d, cfg.weights)


def needs_reroute(flow: FlowRecord, graph: NetGraph, matrix: LifetimeMatrix,
                  cfg: ScenarioConfig) -> bool:
    if flow.path is None or not flow.path.is_valid_on(graph):
        return True
    if cfg.trigger == PREDICTIVE:
        remaining = min(float(matrix.entries[a, b]) for a, b in flow.path.links)
        return remaining < cfg.report_interval
    return False


def reroute(flow: FlowRecord, graph: NetGraph, matrix: LifetimeMatrix,
            cfg: ScenarioConfig) -> Optional[RoutePath]:
    """Recompute the flow's route on the current snapshot and install it.

    Installing a route that differs from the one a flow already had counts
    as a reroute; the very first install does not. No route leaves the
    flow stalled.
    """
    path = select_route(graph, matrix, flow.source, flow.destination, cfg)
    if path is not None and (flow.path is None or path.nodes != flow.path.nodes):
        if flow.had_route:
            flow.reroute_count += 1
        flow.installed_hops.append(path.hop_count)
    flow.path = path
    flow.broken = False
    return path


def compute_metrics(flows: Sequence[FlowRecord], cfg: ScenarioConfig) -> MetricsReport:
    if not flows:
        raise InvalidInputError("no flows to summarise")
    n = len(flows)
    done = sum(1 for f in flows if f.completed)
    success = done / n
    rates = []
    fcts = []
    for f in flows:
        end = f.finish_time if f.completed else cfg.sim_time
        span = end - f.start_time
        rates.append(f.bytes_delivered * 8.0 / span / 1e6 if span > 0 else 0.0)
        fcts.append(end - f.start_time)
    reports = cfg.n_uavs * report_count(cfg) * REPORT_BYTES
    installs = sum(install_bytes(h) for f in flows for h in f.installed_hops)
    return MetricsReport(
        success_rate=success,
        weighted_throughput=sum(rates) / n * success,
        mean_fct=sum(fcts) / n,
        routing_overhead_bytes=reports + installs,
        report_bytes=reports,
        install_bytes=installs,
        mean_reroutes=sum(f.reroute_count for f in flows) / n,
        per_flow=list(flows),
    )


def _draw_flows(cfg: ScenarioConfig) -> List[FlowRecord]:
    if cfg.flows is not None:
        pairs = list(cfg.flows)
    else:
        n = cfg.n_uavs
        rng = np.random.default_rng([int(cfg.seed), n, 0xF10])
        picks = rng.choice(n * (n - 1), size=cfg.n_flows, replace=False)
        pairs = []
        for p in picks.tolist():
            s, r = divmod(p, n - 1)
            pairs.append((s, r if r < s else r + 1))
    return [FlowRecord(i, int(s), int(d), cfg.file_size) for i, (s, d) in enumerate(pairs)]


def _snapshot(history, cfg: ScenarioConfig) -> Tuple[LifetimeMatrix, NetGraph]:
    (t0, p0), (t1, p1), (t2, p2) = history
    states = []
    for i in range(cfg.n_uavs):
        states.append(KinematicState.from_samples(
            PositionSample(Position3D(*p0[i]), t0),
            PositionSample(Position3D(*p1[i]), t1),
            PositionSample(Position3D(*p2[i]), t2)))
    matrix = build_matrix(states, cfg.tx_range, cfg.horizon,
                          cfg.lifetime_step, cfg.lifetime_tol)
    return matrix, to_graph(matrix)


def _transfer(flows: List[FlowRecord], pos: np.ndarray, t: float, dt: float,
              cfg: ScenarioConfig) -> None:
    moving = []
    r2 = cfg.tx_range * cfg.tx_range
    for f in flows:
        if f.completed or f.path is None or f.broken:
            continue
        for a, b in f.path.links:
            d = pos[a] - pos[b]
            if float(d @ d) > r2:
                f.broken = True
                break
        else:
            moving.append(f)
    load = Counter()
    for f in moving:
        for a, b in f.path.links:
            load[(a, b) if a < b else (b, a)] += 1
    for f in moving:
        share = min(cfg.link_rate / load[(a, b) if a < b else (b, a)]
                    for a, b in f.path.links)
        chunk = share * dt / 8.0
        remaining = f.file_size - f.bytes_delivered
        if chunk >= remaining:
            f.bytes_delivered = float(f.file_size)
            f.finish_time = t + remaining * 8.0 / share
            f.completed = True
        else:
            f.bytes_delivered += chunk


def run_scenario(cfg: ScenarioConfig, trajectory: Optional[list] = None) -> MetricsReport:
    """Simulate one scenario; ``trajectory`` collects ``(t, id, x, y, z)`` per sample."""
    dt = cfg.mobility.step_dt
    sample_ticks = _ticks(cfg.sample_interval, dt, "sample_interval")
    report_ticks = _ticks(cfg.report_interval, dt, "report_interval")
    sim_ticks = _ticks(cfg.sim_time, dt, "sim_time")

    init = cfg.initial_positions or [None] * cfg.n_uavs
    nodes = [init_node(i, cfg.mobility, cfg.volume, position=init[i], seed=cfg.seed)
             for i in range(cfg.n_uavs)]
    flows = _draw_flows(cfg)
    history = deque(maxlen=3)

    # two samples of warm-up so the first snapshot at t=0 has three samples
    k = -2 * sample_ticks
    while k < sim_ticks:
        t = k * dt
        pos = np.array([node.position for node in nodes])
        if k % sample_ticks == 0:
            history.append((t, pos))
            if trajectory is not None:
                trajectory.extend((t, i, *pos[i]) for i in range(cfg.n_uavs))
        if k >= 0:
            if k % report_ticks == 0:
                matrix, graph = _snapshot(history, cfg)
                for f in flows:
                    if not f.completed and needs_reroute(f, graph, matrix, cfg):
                        reroute(f, graph, matrix, cfg)
                    elif not f.completed:
                        f.broken = False
            _transfer(flows, pos, t, dt, cfg)
            if all(f.completed for f in flows):
                break
        for node in nodes:
            advance(node, cfg.mobility, dt)
        k += 1

    return compute_metrics(flows, cfg)
