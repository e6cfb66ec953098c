"""Eager-check multi-objective search over dual open/closed frontier sets.

Where the frontier-framework solvers defer dominance tests until a label is
popped, this solver prunes at generation time: a new label is discarded if
anything known dominates it, and labels it dominates are struck from OPEN
immediately. Each vertex keeps two sets: the open set (cost vectors of this
vertex's labels currently queued, compared in full) and the closed set
(projected vectors of labels already expanded here). Comparisons against
closed sets and against solution costs drop the first component, which is
sound because labels leave OPEN in lexicographic f-order under consistent
heuristics; comparisons between queued labels keep all components, since no
expansion-order argument applies to them.

Both sets use lexicographically sorted lists. Striking a label from OPEN
tombstones it rather than touching the heap; tombstoned labels are skipped
when popped.
"""

from __future__ import annotations

import time
from bisect import bisect_left, insort
from heapq import heappop, heappush
from operator import add

from .core import ACCUM_MAX, Graph, InstanceTooLargeError, InvalidInstanceError
from .frontier import NdList
from .search import (
    LabelPool,
    SearchResult,
    SearchStats,
    SolverConfig,
    compute_heuristics,
    reconstruct_path,
)


class DualFrontier:
    """Open and closed non-dominated sets for one vertex.

    ``open`` holds (cost vector, label id) pairs sorted lexicographically,
    one per label of this vertex currently in OPEN. ``closed`` holds the
    projected vectors of labels expanded here. Dominance comparisons against
    the open pairs are counted in ``ndc``; the closed list counts its own.
    """

    __slots__ = ("open", "closed", "ndc")

    def __init__(self, proj_dim: int):
        self.open: list = []
        self.closed = NdList(proj_dim, lex_sorted=True)
        self.ndc = 0

    def open_dominates(self, g) -> bool:
        """True iff some queued cost vector here is componentwise <= g."""
        seen = 0
        dim = len(g)
        for k, _ in self.open:
            seen += 1
            j = 0
            while j < dim:
                if k[j] > g[j]:
                    break
                j += 1
            if j == dim:
                self.ndc += seen
                return True
        self.ndc += seen
        return False

    def prune_open(self, g) -> list:
        """Remove queued pairs whose cost vector g dominates; return their ids.

        Dominated vectors order lexicographically after g, so only that
        suffix is tested.
        """
        entries = self.open
        pos = bisect_left(entries, (g, -1))
        tail = len(entries) - pos
        self.ndc += tail
        if not tail:
            return []
        dim = len(g)
        hit_ids = []
        kept = []
        for k, lid in entries[pos:]:
            j = 0
            while j < dim:
                if g[j] > k[j]:
                    break
                j += 1
            if j == dim:
                hit_ids.append(lid)
            else:
                kept.append((k, lid))
        if hit_ids:
            del entries[pos:]
            entries.extend(kept)
        return hit_ids

    def add_open(self, g, lid: int) -> None:
        insort(self.open, (g, lid))

    def remove_open(self, g, lid: int) -> None:
        idx = bisect_left(self.open, (g, lid))
        assert idx < len(self.open) and self.open[idx] == (g, lid), \
            "open-set entry missing"
        del self.open[idx]

    def close(self, g_proj) -> None:
        self.closed.update(g_proj)

    def audit_open_nondominated(self) -> None:
        """Debug-mode invariant: queued labels here are pairwise non-dominated."""
        from .core import leq

        pairs = self.open
        for i in range(len(pairs)):
            for j in range(len(pairs)):
                if i != j:
                    assert not leq(pairs[i][0], pairs[j][0]), \
                        f"open labels comparable: {pairs[i][0]} <= {pairs[j][0]}"


def solve_namoa_dr(graph: Graph, v_o: int, v_d: int, config: SolverConfig,
                   heuristics: list | None = None) -> SearchResult:
    """Enumerate cost-unique Pareto-optimal paths with eager pruning.

    Produces the same solution cost set as the frontier-framework solvers;
    only the pruning schedule differs.
    """
    if config.algorithm != "namoa-dr":
        raise InvalidInstanceError(
            f"solve_namoa_dr() got algorithm {config.algorithm!r}"
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

    m = graph.m
    fronts: list = [None] * graph.n_vertices
    sol_front = NdList(m - 1, lex_sorted=True)
    filter_ndc = 0

    if h[v_o] is not None:
        adj = graph._adj
        monotonic = time.perf_counter
        zero = (0,) * m
        f0 = h[v_o]
        lid0 = pool.add(v_o, zero, f0, -1)
        alive = [True]
        heap = [(f0, 0, lid0)]
        ordinal = 1
        fronts[v_o] = DualFrontier(m - 1)
        fronts[v_o].add_open(zero, lid0)
        pool_v, pool_g, pool_f, pool_par = pool.vertex, pool.g, pool.f, pool.parent

        while heap:
            if deadline is not None and monotonic() > deadline:
                stats.timed_out = True
                break
            f, _, lid = heappop(heap)
            if not alive[lid]:
                continue
            v = pool_v[lid]
            g = pool_g[lid]
            fronts[v].remove_open(g, lid)

            if v == v_d:
                solutions.append(lid)
                gp = g[1:]
                sol_front.update(gp)
                # a new solution invalidates queued labels it dominates,
                # anywhere in the graph; the first f component can be
                # dropped because nothing with smaller f1 is still queued
                for f_e, _, lid_e in heap:
                    if not alive[lid_e]:
                        continue
                    filter_ndc += 1
                    je = 1
                    while je < m:
                        if gp[je - 1] > f_e[je]:
                            break
                        je += 1
                    if je == m:
                        alive[lid_e] = False
                        fronts[pool_v[lid_e]].remove_open(pool_g[lid_e], lid_e)
                continue

            fronts[v].close(g[1:])
            stats.n_expanded += 1
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
                stats.n_generated += 1
                fr_u = fronts[u]
                if fr_u is None:
                    fr_u = fronts[u] = DualFrontier(m - 1)
                if fr_u.open_dominates(g2):
                    continue
                if fr_u.closed.check(g2[1:]):
                    continue
                if sol_front.check(f2[1:]):
                    continue
                for dead_lid in fr_u.prune_open(g2):
                    alive[dead_lid] = False
                lid2 = pool.add(u, g2, f2, lid)
                alive.append(True)
                fr_u.add_open(g2, lid2)
                heappush(heap, (f2, ordinal, lid2))
                ordinal += 1
                if debug:
                    fr_u.audit_open_nondominated()
                    stats.n_debug_checks += 1

        stats.n_dominance_checks = filter_ndc + sol_front.ndc + sum(
            fr.ndc + fr.closed.ndc for fr in fronts if fr is not None
        )

    stats.wall_time = time.perf_counter() - t_start
    stats.n_solutions = len(solutions)
    return SearchResult(
        solutions=[reconstruct_path(pool, lid) for lid in solutions],
        stats=stats,
    )
