"""Ground-truth reference computations for validating the solvers.

``nd_subset`` extracts the non-dominated subset of an arbitrary vector set:
sorted sweep for 2 components, sort-and-divide for 3, quadratic pairwise
scan above that. ``brute_force_pareto`` enumerates the exact cost-unique
Pareto front of a small graph by exhaustive label correcting with
full-vector dominance, no heuristic and no lazy checks, so it shares no
machinery with the solvers it judges.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from collections import deque

from .core import Graph, InvalidInstanceError, OracleInfeasibleError, PathResult, leq


def nd_subset(vectors) -> list:
    """Maximal subset with no member dominated by another member.

    Duplicates collapse to one representative. Returns lexicographically
    sorted tuples.
    """
    vs = [tuple(v) for v in vectors]
    if not vs:
        return []
    dim = len(vs[0])
    assert all(len(v) == dim for v in vs), "mixed vector dimensions"
    uniq = sorted(set(vs))
    if len(uniq) == 1:
        return uniq
    if dim == 1:
        return [uniq[0]]
    if dim == 2:
        return _sweep_2d(uniq)
    if dim == 3:
        return _kung_3d(uniq)
    return _quadratic(uniq)


def _sweep_2d(pts: list) -> list:
    # lex order makes the second component the only question: a point
    # survives iff it improves on everything seen before it
    out = []
    best = None
    for x, y in pts:
        if best is None or y < best:
            out.append((x, y))
            best = y
    return out


class _Staircase:
    """Mutually non-dominated 2-vectors: xs strictly rise, ys strictly fall."""

    __slots__ = ("xs", "ys")

    def __init__(self):
        self.xs: list = []
        self.ys: list = []

    def dominated(self, x, y) -> bool:
        i = bisect_right(self.xs, x) - 1
        return i >= 0 and self.ys[i] <= y

    def add(self, x, y) -> None:
        xs, ys = self.xs, self.ys
        i = bisect_left(xs, x)
        j = i
        while j < len(xs) and ys[j] >= y:
            j += 1
        del xs[i:j]
        del ys[i:j]
        xs.insert(i, x)
        ys.insert(i, y)


def _kung_3d(pts: list) -> list:
    """Sort-and-divide: split the lex-sorted points, solve each half, then
    discard rear points whose last two components fall under the front
    half's staircase (lex order already settles the first component)."""
    if len(pts) == 1:
        return pts
    mid = len(pts) // 2
    front = _kung_3d(pts[:mid])
    rear = _kung_3d(pts[mid:])
    stair = _Staircase()
    for _, y, z in front:
        if not stair.dominated(y, z):
            stair.add(y, z)
    return front + [p for p in rear if not stair.dominated(p[1], p[2])]


def _quadratic(pts: list) -> list:
    # only lexicographic predecessors can dominate
    out = []
    for i, v in enumerate(pts):
        if not any(leq(pts[j], v) for j in range(i)):
            out.append(v)
    return out


def brute_force_pareto(graph: Graph, v_o: int, v_d: int,
                       label_budget: int = 2_000_000) -> list:
    """Exact cost-unique Pareto front with one witness path per cost.

    Exhaustive label correcting: every vertex keeps all mutually
    non-dominated full cost vectors seen so far and every surviving label is
    re-queued for expansion, heuristics and projections deliberately absent.
    Raises OracleInfeasibleError past ``label_budget`` created labels.
    """
    if not (0 <= v_o < graph.n_vertices and 0 <= v_d < graph.n_vertices):
        raise InvalidInstanceError("endpoint out of vertex range")
    m = graph.m
    adj = graph._adj

    vert = [v_o]
    gvec = [(0,) * m]
    parent = [-1]
    alive = [True]
    bags: list = [None] * graph.n_vertices
    bags[v_o] = [((0,) * m, 0)]
    queue = deque([0])
    created = 1

    while queue:
        lid = queue.popleft()
        if not alive[lid]:
            continue
        g = gvec[lid]
        for u, c in adj[vert[lid]]:
            g2 = tuple(x + y for x, y in zip(g, c))
            bag = bags[u]
            if bag is None:
                bag = bags[u] = []
            covered = False
            for k, _ in bag:
                j = 0
                while j < m:
                    if k[j] > g2[j]:
                        break
                    j += 1
                if j == m:
                    covered = True
                    break
            if covered:
                continue
            shrunk = None
            for idx, (k, kl) in enumerate(bag):
                j = 0
                while j < m:
                    if g2[j] > k[j]:
                        break
                    j += 1
                if j == m:
                    alive[kl] = False
                    if shrunk is None:
                        shrunk = bag[:idx]
                elif shrunk is not None:
                    shrunk.append((k, kl))
            if shrunk is not None:
                bags[u] = bag = shrunk
            created += 1
            if created > label_budget:
                raise OracleInfeasibleError(
                    f"oracle label budget {label_budget} exceeded"
                )
            vert.append(u)
            gvec.append(g2)
            parent.append(lid)
            alive.append(True)
            bag.append((g2, created - 1))
            queue.append(created - 1)

    front = bags[v_d] or []
    results = []
    for g, lid in sorted(front):
        path = []
        cur = lid
        while cur >= 0:
            path.append(vert[cur])
            cur = parent[cur]
        path.reverse()
        results.append(PathResult(vertices=tuple(path), cost=g))
    return results
