"""Random instances for auditing the solver against exhaustive search."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lifetime_matrix import LifetimeMatrix, NetGraph, to_graph
from .optimizer import (Weights, brute_force_optimal, objective, opar_solve_traced)


def random_instance(rng: np.random.Generator, n_nodes: int, density: float):
    """Random directed graph with lifetimes in (0, 100] and random valid weights."""
    mask = rng.uniform(size=(n_nodes, n_nodes)) < density
    np.fill_diagonal(mask, False)
    lifetimes = 100.0 - rng.uniform(0.0, 100.0, size=(n_nodes, n_nodes))
    matrix = LifetimeMatrix(np.where(mask, lifetimes, 0.0), tau_max=100.0)
    s, d = (int(x) for x in rng.choice(n_nodes, size=2, replace=False))
    w = Weights.from_w1(1.0 - float(rng.uniform()))
    return to_graph(matrix), matrix, s, d, w


@dataclass
class AuditResult:
    trials: int = 0
    mismatches: int = 0
    bound_violations: int = 0
    threshold_violations: int = 0
    max_gap: float = 0.0

    @property
    def ok(self) -> bool:
        return not (self.mismatches or self.bound_violations or self.threshold_violations)


def audit(trials: int, max_nodes: int = 10, seed: int = 0, tol: float = 1e-12) -> AuditResult:
    rng = np.random.default_rng(seed)
    result = AuditResult()
    for _ in range(trials):
        n = int(rng.integers(3, max_nodes + 1))
        graph, matrix, s, d, w = random_instance(rng, n, float(rng.uniform(0.2, 0.8)))
        trace = opar_solve_traced(graph, matrix, s, d, w)
        ref = brute_force_optimal(graph, matrix, s, d, w)
        result.trials += 1
        if (trace.best is None) != (ref is None):
            result.mismatches += 1
        elif ref is not None:
            gap = abs(objective(trace.best, w) - objective(ref, w))
            result.max_gap = max(result.max_gap, gap)
            if gap > tol:
                result.mismatches += 1
        if trace.bfs_calls > graph.n_edges + 1:
            result.bound_violations += 1
        if any(b <= a for a, b in zip(trace.thresholds, trace.thresholds[1:])):
            result.threshold_violations += 1
    return result
