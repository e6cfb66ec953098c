"""Shared domain types and integer vector primitives.

Cost vectors are plain tuples of non-negative ints. All comparisons used by
the solvers (componentwise and lexicographic) live here so that every module
agrees on one definition of dominance.
"""

from __future__ import annotations

from dataclasses import dataclass

# Per-edge cost components are 32-bit; accumulation along paths runs at
# 64-bit and is a checked error when exceeded.
COMPONENT_MAX = 2**32 - 1
ACCUM_MAX = 2**64 - 1


class MosppError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInstanceError(MosppError):
    """Problem instance violates a structural requirement (bad M, ids, ...)."""


class InstanceTooLargeError(MosppError):
    """Accumulated path cost exceeded the 64-bit arithmetic width."""


class DataInconsistencyError(MosppError):
    """Input files disagree with each other (e.g. mismatched arc sets)."""


class OracleInfeasibleError(MosppError):
    """The brute-force oracle exceeded its label budget."""


class ParseError(MosppError):
    """Malformed input file."""

    def __init__(self, message: str, line_no: int | None = None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


def dominates(a, b) -> bool:
    """True iff a(m) <= b(m) for all m with strict inequality somewhere.

    Equal vectors do not dominate each other.
    """
    assert len(a) == len(b), "vector length mismatch"
    if a == b:
        return False
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def leq(a, b) -> bool:
    """Componentwise a <= b, i.e. a dominates b or equals it."""
    assert len(a) == len(b), "vector length mismatch"
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def lex_less(a, b) -> bool:
    """Strict lexicographic order: the first differing component decides."""
    assert len(a) == len(b), "vector length mismatch"
    return a < b


def project(v):
    """Drop the first component of a cost vector."""
    if len(v) < 2:
        raise InvalidInstanceError("projection needs at least two objectives")
    return v[1:]


def vec_add(a, b):
    """Componentwise sum, checked against the 64-bit accumulation limit."""
    assert len(a) == len(b), "vector length mismatch"
    s = tuple(x + y for x, y in zip(a, b))
    if max(s) > ACCUM_MAX:
        raise InstanceTooLargeError("path cost exceeds 64-bit accumulation width")
    return s


@dataclass(frozen=True)
class Label:
    """One partial solution path: a vertex plus the accumulated cost vector.

    ``f`` is ``g`` plus the heuristic at ``vertex``; ``parent`` is the id of
    the label this one extends (None for the initial label).
    """

    id: int
    vertex: int
    g: tuple
    f: tuple
    parent: int | None


@dataclass(frozen=True)
class PathResult:
    """A full solution path and its cost vector."""

    vertices: tuple
    cost: tuple


class Graph:
    """Directed graph with an M-component non-negative cost vector per arc.

    Vertex ids are dense ints in [0, n_vertices). Parallel arcs and
    self-loops are allowed; zero-cost components are allowed.
    """

    __slots__ = ("n_vertices", "m", "n_arcs", "_adj")

    def __init__(self, n_vertices: int, m: int):
        if m < 2:
            raise InvalidInstanceError(f"need at least 2 objectives, got {m}")
        if n_vertices <= 0:
            raise InvalidInstanceError(f"need at least 1 vertex, got {n_vertices}")
        self.n_vertices = n_vertices
        self.m = m
        self.n_arcs = 0
        self._adj: list[list] = [[] for _ in range(n_vertices)]

    def add_arc(self, u: int, v: int, cost) -> None:
        if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
            raise InvalidInstanceError(f"arc ({u},{v}) out of vertex range")
        cost = tuple(cost)
        if len(cost) != self.m:
            raise InvalidInstanceError(
                f"arc ({u},{v}): cost has {len(cost)} components, expected {self.m}"
            )
        for c in cost:
            if not (0 <= c <= COMPONENT_MAX):
                raise InvalidInstanceError(
                    f"arc ({u},{v}): component {c} outside [0, 2^32-1]"
                )
        self._adj[u].append((v, cost))
        self.n_arcs += 1

    def successors(self, u: int):
        """List of (v, cost) pairs for arcs leaving u."""
        return self._adj[u]

    def arcs(self):
        """Iterate over all arcs as (u, v, cost)."""
        for u, out in enumerate(self._adj):
            for v, cost in out:
                yield u, v, cost

    def path_cost(self, vertices) -> tuple:
        """Sum arc costs along a vertex sequence; raises if an arc is missing."""
        total = (0,) * self.m
        for u, v in zip(vertices, vertices[1:]):
            for w, cost in self._adj[u]:
                if w == v:
                    total = vec_add(total, cost)
                    break
            else:
                raise InvalidInstanceError(f"no arc ({u},{v}) in graph")
        return total
