"""Lifetime-aware path selection.

The route cost of a path is ``w1 * hops + w2 / bottleneck`` where the
bottleneck is the smallest link lifetime on the path. :func:`opar_solve`
finds the minimum-cost simple path by repeated BFS on a graph whose
weakest links are pruned after every iteration; :func:`brute_force_optimal`
enumerates every simple path and is kept as an independent check.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .errors import InvalidInputError
from .lifetime_matrix import LifetimeMatrix, NetGraph, _graph_above


@dataclass(frozen=True)
class Weights:
    w1: float = 0.6
    w2: float = 0.4

    def __post_init__(self):
        if not (0.0 < self.w1 <= 1.0):
            raise InvalidInputError(f"w1 must satisfy 0 < w1 <= 1, got {self.w1}")
        if not (0.0 <= self.w2 <= 1.0):
            raise InvalidInputError(f"w2 must satisfy 0 <= w2 <= 1, got {self.w2}")
        if not math.isclose(self.w1 + self.w2, 1.0, rel_tol=0.0, abs_tol=1e-9):
            raise InvalidInputError(f"w1 + w2 must equal 1, got {self.w1} + {self.w2}")

    @classmethod
    def from_w1(cls, w1: float) -> "Weights":
        return cls(w1, 1.0 - w1)


@dataclass(frozen=True)
class RoutePath:
    nodes: Tuple[int, ...]
    hop_count: int
    min_lifetime: float

    @classmethod
    def along(cls, nodes: Sequence[int], graph: NetGraph) -> "RoutePath":
        nodes = tuple(nodes)
        lt = graph.lifetime
        bottleneck = min(float(lt[a, b]) for a, b in zip(nodes, nodes[1:]))
        return cls(nodes, len(nodes) - 1, bottleneck)

    @property
    def links(self):
        return list(zip(self.nodes, self.nodes[1:]))

    def is_valid_on(self, graph: NetGraph) -> bool:
        return all(graph.has_edge(a, b) for a, b in self.links)


def _check_endpoints(graph: NetGraph, s: int, d: int) -> None:
    if s == d:
        raise InvalidInputError(f"source and destination must differ, got {s}")
    if not (0 <= s < graph.n and 0 <= d < graph.n):
        raise InvalidInputError(f"endpoints ({s}, {d}) not in a {graph.n}-node graph")


def _bfs_nodes(succ, s: int, d: int) -> Optional[List[int]]:
    parent = {s: s}
    queue = deque([s])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if v in parent:
                continue
            parent[v] = u
            if v == d:
                path = [d]
                while path[-1] != s:
                    path.append(parent[path[-1]])
                path.reverse()
                return path
            queue.append(v)
    return None


def bfs_shortest_path(graph: NetGraph, s: int, d: int) -> Optional[RoutePath]:
    """Minimum-hop path, expanding neighbours in ascending id order."""
    _check_endpoints(graph, s, d)
    nodes = _bfs_nodes(graph.succ, s, d)
    return None if nodes is None else RoutePath.along(nodes, graph)


def objective(path: RoutePath, w: Weights) -> float:
    return w.w1 * path.hop_count + w.w2 / path.min_lifetime


def prune_edges(graph: NetGraph, matrix: LifetimeMatrix, threshold: float) -> NetGraph:
    """Keep only the edges whose lifetime is strictly above ``threshold``."""
    if threshold < 0:
        raise InvalidInputError(f"threshold must be >= 0, got {threshold}")
    return _graph_above(matrix.entries, threshold, base=graph.succ)


@dataclass
class SolveTrace:
    best: Optional[RoutePath]
    bfs_calls: int = 0
    thresholds: List[float] = field(default_factory=list)
    candidates: List[RoutePath] = field(default_factory=list)


def opar_solve_traced(graph: NetGraph, matrix: LifetimeMatrix, s: int, d: int,
                      w: Weights) -> SolveTrace:
    _check_endpoints(graph, s, d)
    trace = SolveTrace(best=None)
    current = graph
    best_cost = math.inf
    while True:
        trace.bfs_calls += 1
        nodes = _bfs_nodes(current.succ, s, d)
        if nodes is None:
            return trace
        path = RoutePath.along(nodes, graph)
        trace.candidates.append(path)
        cost = objective(path, w)
        if cost < best_cost:
            trace.best, best_cost = path, cost
        # prune on every iteration, improving or not, so thresholds strictly rise
        trace.thresholds.append(path.min_lifetime)
        current = prune_edges(current, matrix, path.min_lifetime)


def opar_solve(graph: NetGraph, matrix: LifetimeMatrix, s: int, d: int,
               w: Weights) -> Optional[RoutePath]:
    return opar_solve_traced(graph, matrix, s, d, w).best


def brute_force_optimal(graph: NetGraph, matrix: LifetimeMatrix, s: int, d: int,
                        w: Weights) -> Optional[RoutePath]:
    """Exhaustive search over simple s->d paths (exponential; small graphs only).

    Ties go to fewer hops, then the lexicographically smallest node list;
    the DFS visits paths in lexicographic order, so the first one found on
    an exact tie is kept.
    """
    _check_endpoints(graph, s, d)
    lt = matrix.entries.tolist()
    succ = graph.succ
    w1, w2 = w.w1, w.w2
    best = [math.inf, 0, None]
    stack = [s]
    on_path = [False] * graph.n
    on_path[s] = True

    def dfs(u, bottleneck):
        for v in succ[u]:
            if on_path[v]:
                continue
            b = min(bottleneck, lt[u][v])
            if v == d:
                hops = len(stack)
                cost = w1 * hops + w2 / b
                if cost < best[0] or (cost == best[0] and hops < best[1]):
                    best[0], best[1] = cost, hops
                    best[2] = (tuple(stack) + (d,), b)
                continue
            on_path[v] = True
            stack.append(v)
            dfs(v, b)
            stack.pop()
            on_path[v] = False

    dfs(s, math.inf)
    if best[2] is None:
        return None
    nodes, b = best[2]
    return RoutePath(nodes, len(nodes) - 1, b)
