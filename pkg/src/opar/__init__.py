"""Lifetime-aware optimal path selection for highly dynamic UAV networks."""
from ._backend import BACKEND
from .kinematics import (KinematicState, Position3D, PositionSample, acceleration,
                         direction_angles, extrapolate, link_lifetime,
                         predicted_distance, speed)
from .lifetime_matrix import LifetimeMatrix, NetGraph, build_matrix, to_graph
from .optimizer import (RoutePath, Weights, bfs_shortest_path, brute_force_optimal,
                        objective, opar_solve, opar_solve_traced, prune_edges)
from .mobility import MobilityConfig, Volume, gm_advance, rwp_advance
from .simulator import (FlowRecord, MetricsReport, ScenarioConfig, compute_metrics,
                        reroute, run_scenario)
from .config import parse_config

__version__ = "0.1.0"
