"""Best-first multi-objective search with pluggable frontier backends.

One loop serves four algorithm configurations that differ only in how the
per-vertex frontiers are stored:

* ``emoa``        -- AVL-tree frontiers (scalar frontiers when M == 2);
* ``toa``         -- tri-objective only: AVL trees with the single-descent
                     2-key dominance check;
* ``ext-boa``     -- unsorted flat-list frontiers;
* ``ext-boa-lex`` -- lexicographically sorted flat-list frontiers.

Labels are popped from OPEN in lexicographic order of their f-vectors (ties
broken FIFO by insertion ordinal), checked lazily against the frontier at
their vertex and against the destination frontier, and only then retained
and expanded. Frontiers store projected vectors: with consistent heuristics
and lexicographic expansion order the first cost component can be dropped
from all dominance checks.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from heapq import heappop, heappush
from operator import add

from .core import (
    ACCUM_MAX,
    Graph,
    InstanceTooLargeError,
    InvalidInstanceError,
    Label,
    PathResult,
    leq,
)
from .frontier import NdList, NdTree, ScalarFrontier, ToaTree

ALGORITHMS = ("emoa", "toa", "ext-boa", "ext-boa-lex", "namoa-dr")

#: Algorithms implemented directly by :func:`solve`.
FRAMEWORK_ALGORITHMS = ("emoa", "toa", "ext-boa", "ext-boa-lex")


@dataclass
class SolverConfig:
    algorithm: str = "emoa"
    time_limit: float | None = 600.0
    debug_invariants: bool = False

    def validate(self, m: int) -> None:
        if self.algorithm not in ALGORITHMS:
            raise InvalidInstanceError(f"unknown algorithm {self.algorithm!r}")
        if self.algorithm == "toa" and m != 3:
            raise InvalidInstanceError(
                f"toa handles exactly 3 objectives, instance has {m}"
            )
        if self.time_limit is not None and self.time_limit <= 0:
            raise InvalidInstanceError("time limit must be positive")


@dataclass
class SearchStats:
    n_expanded: int = 0
    n_generated: int = 0
    n_dominance_checks: int = 0
    n_solutions: int = 0
    wall_time: float = 0.0
    heuristic_time: float = 0.0
    timed_out: bool = False
    n_debug_checks: int = 0


@dataclass
class SearchResult:
    solutions: list
    stats: SearchStats


class LabelPool:
    """Append-only label storage addressed by ordinal.

    Labels must outlive OPEN so solution paths can be rebuilt after the
    search finishes; parent references are ordinals into the same pool.
    """

    __slots__ = ("vertex", "g", "f", "parent")

    def __init__(self):
        self.vertex: list = []
        self.g: list = []
        self.f: list = []
        self.parent: list = []

    def __len__(self) -> int:
        return len(self.vertex)

    def add(self, vertex, g, f, parent) -> int:
        self.vertex.append(vertex)
        self.g.append(g)
        self.f.append(f)
        self.parent.append(parent)
        return len(self.vertex) - 1

    def view(self, lid: int) -> Label:
        parent = self.parent[lid]
        return Label(lid, self.vertex[lid], self.g[lid], self.f[lid],
                     None if parent < 0 else parent)

    def path(self, lid: int) -> tuple:
        """Vertex sequence from the initial label to lid."""
        out = []
        while lid >= 0:
            out.append(self.vertex[lid])
            lid = self.parent[lid]
        out.reverse()
        return tuple(out)


def reconstruct_path(pool: LabelPool, lid: int) -> PathResult:
    """Rebuild the solution path a retained label represents."""
    return PathResult(vertices=pool.path(lid), cost=pool.g[lid])


def compute_heuristics(graph: Graph, v_d: int) -> list:
    """Per-vertex componentwise lower bounds on the cost to reach v_d.

    Runs one backward Dijkstra per objective over the reversed graph, so
    h[v][m] is the exact single-objective shortest distance from v to v_d
    under cost component m. Vertices that cannot reach v_d get None.
    """
    if not (0 <= v_d < graph.n_vertices):
        raise InvalidInstanceError(f"destination {v_d} out of range")
    n = graph.n_vertices
    rev: list[list] = [[] for _ in range(n)]
    for u, v, cost in graph.arcs():
        rev[v].append((u, cost))

    per_objective = []
    inf = float("inf")
    for ci in range(graph.m):
        dist = [inf] * n
        dist[v_d] = 0
        heap = [(0, v_d)]
        while heap:
            d, v = heappop(heap)
            if d > dist[v]:
                continue
            for u, cost in rev[v]:
                nd = d + cost[ci]
                if nd < dist[u]:
                    dist[u] = nd
                    heappush(heap, (nd, u))
        per_objective.append(dist)

    h: list = [None] * n
    for v in range(n):
        if per_objective[0][v] != inf:
            h[v] = tuple(per_objective[ci][v] for ci in range(graph.m))
    return h


def _make_frontier_factory(algorithm: str, m: int):
    k = m - 1
    if algorithm == "toa":
        return lambda: ToaTree(2)
    if algorithm == "emoa":
        if m == 2:
            return ScalarFrontier
        return lambda: NdTree(k)
    if algorithm == "ext-boa":
        return lambda: NdList(k, lex_sorted=False)
    if algorithm == "ext-boa-lex":
        return lambda: NdList(k, lex_sorted=True)
    raise InvalidInstanceError(f"{algorithm!r} is not a frontier-framework algorithm")


def solve(graph: Graph, v_o: int, v_d: int, config: SolverConfig,
          heuristics: list | None = None) -> SearchResult:
    """Enumerate the cost-unique Pareto-optimal paths from v_o to v_d.

    Returns one solution per distinct Pareto-optimal cost vector, in the
    order found (lexicographic by cost). On timeout the solutions found so
    far are returned with ``stats.timed_out`` set.
    """
    if config.algorithm not in FRAMEWORK_ALGORITHMS:
        raise InvalidInstanceError(
            f"solve() does not handle {config.algorithm!r}; "
            "use the dedicated solver"
        )
    config.validate(graph.m)
    if not (0 <= v_o < graph.n_vertices):
        raise InvalidInstanceError(f"start vertex {v_o} out of range")

    stats = SearchStats()
    t0 = time.perf_counter()
    h = compute_heuristics(graph, v_d) if heuristics is None else heuristics
    stats.heuristic_time = time.perf_counter() - t0

    pool = LabelPool()
    solutions: list[int] = []
    debug = config.debug_invariants

    t_start = time.perf_counter()
    deadline = None if config.time_limit is None else t_start + config.time_limit

    frontiers: list = [None] * graph.n_vertices
    if h[v_o] is not None:
        make_frontier = _make_frontier_factory(config.algorithm, graph.m)
        adj = graph._adj
        monotonic = time.perf_counter
        zero = (0,) * graph.m
        f0 = h[v_o]
        heap = [(f0, 0, pool.add(v_o, zero, f0, -1))]
        ordinal = 1
        pool_v, pool_g, pool_f, pool_par = pool.vertex, pool.g, pool.f, pool.parent
        sol_fr = None
        n_generated = 0
        n_expanded = 0

        if debug:
            last_pop_f1 = 0
            vertex_f1: dict = {}
            vertex_g1: dict = {}
            full_by_proj: dict = {}

        while heap:
            if deadline is not None and monotonic() > deadline:
                stats.timed_out = True
                break
            f, _, lid = heappop(heap)
            v = pool_v[lid]
            g = pool_g[lid]
            b = g[1:]

            if debug:
                # popped f1 values never decrease
                assert f[0] >= last_pop_f1, "pop order: f1 decreased"
                last_pop_f1 = f[0]
                # projected dominance agrees with full dominance against
                # every label currently retained at this vertex
                for proj, full in full_by_proj.get(v, {}).items():
                    assert leq(full, g) == leq(proj, b), \
                        "projected/full dominance disagree at pop"
                    stats.n_debug_checks += 1
                stats.n_debug_checks += 1

            fr = frontiers[v]
            if fr is not None and fr.check(b):
                continue
            if v != v_d and sol_fr is not None and sol_fr.check(f[1:]):
                continue

            if fr is None:
                fr = frontiers[v] = make_frontier()
                if v == v_d:
                    sol_fr = fr
            removed = fr.update(b)

            if debug:
                # retained labels at one vertex have non-decreasing f1, g1
                assert f[0] >= vertex_f1.get(v, 0), "retention order: f1 decreased"
                assert g[0] >= vertex_g1.get(v, 0), "retention order: g1 decreased"
                vertex_f1[v] = f[0]
                vertex_g1[v] = g[0]
                stats.n_debug_checks += 2
                per_v = full_by_proj.setdefault(v, {})
                for r in removed:
                    del per_v[r]
                per_v[b] = g

            if v == v_d:
                solutions.append(lid)
                continue

            n_expanded += 1
            for u, c in adj[v]:
                hu = h[u]
                if hu is None:
                    continue
                g2 = tuple(map(add, g, c))
                f2 = tuple(map(add, g2, hu))
                if max(f2) > ACCUM_MAX:
                    raise InstanceTooLargeError(
                        "accumulated cost exceeds 64-bit width"
                    )
                n_generated += 1
                if debug:
                    assert f2[0] >= f[0], "successor f1 below parent f1"
                    stats.n_debug_checks += 1
                fru = frontiers[u]
                if fru is not None and fru.check(g2[1:]):
                    continue
                if sol_fr is not None and sol_fr.check(f2[1:]):
                    continue
                pool_v.append(u)
                pool_g.append(g2)
                pool_f.append(f2)
                pool_par.append(lid)
                heappush(heap, (f2, ordinal, len(pool_v) - 1))
                ordinal += 1

        stats.n_expanded = n_expanded
        stats.n_generated = n_generated
        stats.n_dominance_checks = sum(
            fr.ndc for fr in frontiers if fr is not None
        )

    stats.wall_time = time.perf_counter() - t_start
    stats.n_solutions = len(solutions)
    return SearchResult(
        solutions=[reconstruct_path(pool, lid) for lid in solutions],
        stats=stats,
    )
