"""Data ingestion and result emission.

Covers grid-map files (movingAI-style), DIMACS ``.gr`` road networks,
deterministic random cost synthesis, line-oriented instance files, and the
results CSV / solution path dumps produced by the CLI.
"""

from __future__ import annotations

import csv
import io as _stringio
import os
from dataclasses import dataclass

from .core import (
    DataInconsistencyError,
    Graph,
    InvalidInstanceError,
    ParseError,
)


class SplitMix64:
    """Seedable 64-bit generator with identical output on every platform.

    State update and output mixing (all arithmetic mod 2**64):

        state += 0x9E3779B97F4A7C15
        z = state
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
        z = (z ^ (z >> 27)) * 0x94D049BB133111EB
        output = z ^ (z >> 31)

    ``randint(lo, hi)`` maps an output to lo + output % (hi - lo + 1); the
    modulo bias is below 2**-59 for the cost ranges used here.
    """

    __slots__ = ("state",)

    MASK = 2**64 - 1

    def __init__(self, seed: int):
        self.state = seed & self.MASK

    def next(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & self.MASK
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & self.MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & self.MASK
        return z ^ (z >> 31)

    def randint(self, lo: int, hi: int) -> int:
        assert lo <= hi
        return lo + self.next() % (hi - lo + 1)


PASSABLE_CELLS = frozenset(".G")
BLOCKED_CELLS = frozenset("@OTW")


@dataclass(frozen=True)
class GridMap:
    """Rectangular grid; cell (r, c) maps to vertex id r*width + c."""

    width: int
    height: int
    passable: tuple

    def cell_id(self, r: int, c: int) -> int:
        return r * self.width + c

    def is_passable(self, r: int, c: int) -> bool:
        return self.passable[r * self.width + c]

    def adjacencies(self):
        """Undirected four-connected neighbour pairs between passable cells,
        in row-major cell order, east neighbour before south neighbour."""
        w, h = self.width, self.height
        passable = self.passable
        for r in range(h):
            base = r * w
            for c in range(w):
                i = base + c
                if not passable[i]:
                    continue
                if c + 1 < w and passable[i + 1]:
                    yield i, i + 1
                if r + 1 < h and passable[i + w]:
                    yield i, i + w


def empty_grid(width: int, height: int) -> GridMap:
    if width <= 0 or height <= 0:
        raise InvalidInstanceError("grid dimensions must be positive")
    return GridMap(width, height, (True,) * (width * height))


def parse_grid_map(text: str) -> GridMap:
    """Parse a grid map: 'type', 'height H', 'width W', 'map' header lines
    followed by height rows of width cells."""
    lines = text.splitlines()

    def want(idx, prefix):
        if idx >= len(lines):
            raise ParseError(f"missing {prefix!r} header line", idx + 1)
        parts = lines[idx].split()
        if not parts or parts[0] != prefix:
            raise ParseError(f"expected {prefix!r} header", idx + 1)
        return parts

    want(0, "type")
    h_parts = want(1, "height")
    w_parts = want(2, "width")
    want(3, "map")
    try:
        height = int(h_parts[1])
        width = int(w_parts[1])
    except (IndexError, ValueError):
        raise ParseError("height/width headers need one integer", 2) from None
    if height <= 0 or width <= 0:
        raise ParseError("grid dimensions must be positive", 2)
    if len(lines) < 4 + height:
        raise ParseError(f"expected {height} map rows", len(lines) + 1)

    passable = []
    for r in range(height):
        row = lines[4 + r].rstrip("\r")
        if len(row) != width:
            raise ParseError(
                f"row has {len(row)} cells, expected {width}", 5 + r
            )
        for ch in row:
            if ch in PASSABLE_CELLS:
                passable.append(True)
            elif ch in BLOCKED_CELLS:
                passable.append(False)
            else:
                raise ParseError(f"unknown cell {ch!r}", 5 + r)
    return GridMap(width, height, tuple(passable))


def format_grid_map(grid: GridMap) -> str:
    rows = [
        "".join(
            "." if grid.passable[r * grid.width + c] else "@"
            for c in range(grid.width)
        )
        for r in range(grid.height)
    ]
    header = ["type octile", f"height {grid.height}", f"width {grid.width}", "map"]
    return "\n".join(header + rows) + "\n"


def synthesize_random_costs(source, m: int, seed: int, cost_range=(1, 10),
                            n_vertices: int | None = None) -> Graph:
    """Build a directed graph whose undirected adjacencies each get one
    random cost vector shared by both directions.

    ``source`` is a GridMap or an iterable of undirected vertex pairs (the
    latter needs ``n_vertices``). Components are sampled uniformly from
    [lo, hi] in adjacency order, one vector per adjacency, so the seed fully
    determines the instance.
    """
    lo, hi = cost_range
    if lo < 1 or hi < lo:
        raise InvalidInstanceError(f"bad cost range [{lo}, {hi}]")
    if isinstance(source, GridMap):
        pairs = source.adjacencies()
        n = source.width * source.height
    else:
        pairs = source
        if n_vertices is None:
            raise InvalidInstanceError("n_vertices required for explicit pairs")
        n = n_vertices
    rng = SplitMix64(seed)
    graph = Graph(n, m)
    for a, b in pairs:
        cost = tuple(rng.randint(lo, hi) for _ in range(m))
        graph.add_arc(a, b, cost)
        graph.add_arc(b, a, cost)
    return graph


def parse_dimacs_gr(text: str):
    """Parse a DIMACS shortest-path ``.gr`` file.

    Returns (n_vertices, arcs) with arcs as (u, v, weight) and vertex ids
    shifted to 0-based.
    """
    n = None
    declared = None
    arcs = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("duplicate problem line", idx)
            if len(parts) != 4 or parts[1] != "sp":
                raise ParseError("problem line must read 'p sp <n> <m>'", idx)
            try:
                n, declared = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer problem sizes", idx) from None
        elif parts[0] == "a":
            if n is None:
                raise ParseError("arc before problem line", idx)
            if len(parts) != 4:
                raise ParseError("arc line must read 'a <u> <v> <w>'", idx)
            try:
                u, v, w = int(parts[1]), int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError("non-integer arc fields", idx) from None
            if not (1 <= u <= n and 1 <= v <= n):
                raise ParseError(f"vertex id outside 1..{n}", idx)
            arcs.append((u - 1, v - 1, w))
        else:
            raise ParseError(f"unknown record type {parts[0]!r}", idx)
    if n is None:
        raise ParseError("no problem line found")
    if len(arcs) != declared:
        raise ParseError(
            f"problem line declares {declared} arcs, file has {len(arcs)}"
        )
    return n, arcs


def merge_cost_files(parsed) -> Graph:
    """Stack per-file scalar weights into one vector-costed graph.

    Every parsed (n_vertices, arcs) must cover the same (u, v) arc multiset;
    parallel arcs pair up in file order.
    """
    parsed = list(parsed)
    if not parsed:
        raise DataInconsistencyError("no arc files to merge")
    n = parsed[0][0]
    for nv, _ in parsed[1:]:
        if nv != n:
            raise DataInconsistencyError(
                f"vertex counts differ: {n} vs {nv}"
            )
    grouped = []
    for _, arcs in parsed:
        by_pair: dict = {}
        for u, v, w in arcs:
            by_pair.setdefault((u, v), []).append(w)
        grouped.append(by_pair)
    base = grouped[0]
    for gi, other in enumerate(grouped[1:], start=2):
        for pair in base:
            if len(other.get(pair, ())) != len(base[pair]):
                raise DataInconsistencyError(
                    f"arc {pair} missing or duplicated in file {gi}"
                )
        for pair in other:
            if pair not in base:
                raise DataInconsistencyError(
                    f"arc {pair} in file {gi} absent from file 1"
                )
    graph = Graph(n, len(parsed))
    for u, v in sorted(base):
        for dup in range(len(base[(u, v)])):
            graph.add_arc(u, v, tuple(g[(u, v)][dup] for g in grouped))
    return graph


def derive_degree_cost(graph: Graph) -> Graph:
    """Append a busy-road cost component: 2 on arcs whose mean endpoint
    degree is at least 4, else 1.

    Degrees count distinct undirected neighbours; the half in the mean is
    avoided by comparing deg(u) + deg(v) against 8.
    """
    neighbours: list = [set() for _ in range(graph.n_vertices)]
    for u, v, _ in graph.arcs():
        neighbours[u].add(v)
        neighbours[v].add(u)
    deg = [len(s) for s in neighbours]
    out = Graph(graph.n_vertices, graph.m + 1)
    for u, v, cost in graph.arcs():
        risk = 2 if deg[u] + deg[v] >= 8 else 1
        out.add_arc(u, v, cost + (risk,))
    return out


# -- instance files -----------------------------------------------------------


@dataclass(frozen=True)
class Instance:
    id: int
    v_o: int
    v_d: int
    m: int
    seed: int
    lo: int
    hi: int


@dataclass(frozen=True)
class GraphSpec:
    """Where the graph of an instance set comes from.

    kind 'empty-grid' carries width/height; 'map' carries one file path;
    'dimacs' carries one path per cost component plus the degree-cost flag.
    Relative paths resolve against the instance file's directory.
    """

    kind: str
    width: int = 0
    height: int = 0
    paths: tuple = ()
    degree_cost: bool = False
    base_dir: str = "."

    def resolved_paths(self):
        return [
            p if os.path.isabs(p) else os.path.join(self.base_dir, p)
            for p in self.paths
        ]


def format_instances(spec: GraphSpec, instances) -> str:
    if spec.kind == "empty-grid":
        head = f"graph empty-grid {spec.width} {spec.height}"
    elif spec.kind == "map":
        head = f"graph map {spec.paths[0]}"
    elif spec.kind == "dimacs":
        head = "graph dimacs " + " ".join(spec.paths)
        if spec.degree_cost:
            head += " degree-cost"
    else:
        raise InvalidInstanceError(f"unknown graph kind {spec.kind!r}")
    lines = [head]
    for inst in instances:
        lines.append(
            f"instance {inst.id} {inst.v_o} {inst.v_d} {inst.m} "
            f"{inst.seed} {inst.lo} {inst.hi}"
        )
    return "\n".join(lines) + "\n"


def parse_instances(text: str, base_dir: str = "."):
    spec = None
    instances = []
    for idx, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if parts[0] == "graph":
            if spec is not None:
                raise ParseError("duplicate graph line", idx)
            if len(parts) < 2:
                raise ParseError("graph line needs a kind", idx)
            kind = parts[1]
            if kind == "empty-grid":
                if len(parts) != 4:
                    raise ParseError("expected 'graph empty-grid <W> <H>'", idx)
                spec = GraphSpec(kind, width=int(parts[2]), height=int(parts[3]),
                                 base_dir=base_dir)
            elif kind == "map":
                if len(parts) != 3:
                    raise ParseError("expected 'graph map <path>'", idx)
                spec = GraphSpec(kind, paths=(parts[2],), base_dir=base_dir)
            elif kind == "dimacs":
                tail = parts[2:]
                degree = tail and tail[-1] == "degree-cost"
                paths = tuple(tail[:-1] if degree else tail)
                if not paths:
                    raise ParseError("dimacs graph needs at least one file", idx)
                spec = GraphSpec(kind, paths=paths, degree_cost=bool(degree),
                                 base_dir=base_dir)
            else:
                raise ParseError(f"unknown graph kind {kind!r}", idx)
        elif parts[0] == "instance":
            if len(parts) != 8:
                raise ParseError(
                    "expected 'instance <id> <vo> <vd> <M> <seed> <lo> <hi>'", idx
                )
            try:
                vals = [int(p) for p in parts[1:]]
            except ValueError:
                raise ParseError("non-integer instance field", idx) from None
            instances.append(Instance(*vals))
        else:
            raise ParseError(f"unknown record {parts[0]!r}", idx)
    if spec is None:
        raise ParseError("no graph line found")
    return spec, instances


def load_instances(path: str):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    return parse_instances(text, base_dir=os.path.dirname(os.path.abspath(path)))


def build_graph(spec: GraphSpec, instance: Instance, cache: dict | None = None) -> Graph:
    """Materialise the graph an instance runs on.

    Grid kinds synthesize costs from the instance seed; the dimacs kind has
    fixed costs, so its graph is shared and cached across instances.
    """
    if cache is None:
        cache = {}
    if spec.kind == "empty-grid":
        key = ("empty", spec.width, spec.height)
        grid = cache.get(key)
        if grid is None:
            grid = cache[key] = empty_grid(spec.width, spec.height)
        return synthesize_random_costs(grid, instance.m, instance.seed,
                                       (instance.lo, instance.hi))
    if spec.kind == "map":
        path = spec.resolved_paths()[0]
        key = ("map", path)
        grid = cache.get(key)
        if grid is None:
            with open(path, encoding="utf-8") as fh:
                grid = cache[key] = parse_grid_map(fh.read())
        return synthesize_random_costs(grid, instance.m, instance.seed,
                                       (instance.lo, instance.hi))
    if spec.kind == "dimacs":
        key = ("dimacs", spec.paths, spec.degree_cost)
        graph = cache.get(key)
        if graph is None:
            parsed = []
            for path in spec.resolved_paths():
                with open(path, encoding="utf-8") as fh:
                    parsed.append(parse_dimacs_gr(fh.read()))
            graph = merge_cost_files(parsed)
            if spec.degree_cost:
                graph = derive_degree_cost(graph)
            cache[key] = graph
        if graph.m != instance.m:
            raise InvalidInstanceError(
                f"instance {instance.id} wants M={instance.m}, graph has M={graph.m}"
            )
        return graph
    raise InvalidInstanceError(f"unknown graph kind {spec.kind!r}")


# -- results ------------------------------------------------------------------


RESULT_COLUMNS = (
    "instance", "algo", "M", "runtime_ms", "n_solutions",
    "n_expanded", "n_generated", "n_dominance_checks", "timed_out",
)


@dataclass(frozen=True)
class ResultRecord:
    instance: int
    algo: str
    m: int
    runtime_ms: float
    n_solutions: int
    n_expanded: int
    n_generated: int
    n_dominance_checks: int
    timed_out: bool


def format_results(records) -> str:
    buf = _stringio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for r in records:
        writer.writerow([
            r.instance, r.algo, r.m, f"{r.runtime_ms:.3f}", r.n_solutions,
            r.n_expanded, r.n_generated, r.n_dominance_checks, int(r.timed_out),
        ])
    return buf.getvalue()


def parse_results(text: str) -> list:
    reader = csv.reader(_stringio.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != RESULT_COLUMNS:
        raise ParseError("unexpected results CSV header", 1)
    out = []
    for row in reader:
        out.append(ResultRecord(
            instance=int(row[0]), algo=row[1], m=int(row[2]),
            runtime_ms=float(row[3]), n_solutions=int(row[4]),
            n_expanded=int(row[5]), n_generated=int(row[6]),
            n_dominance_checks=int(row[7]), timed_out=bool(int(row[8])),
        ))
    return out


def format_solution_paths(paths) -> str:
    """One line per solution: cost components, ' ; ', space-separated vertices."""
    lines = []
    for p in paths:
        cost = ",".join(str(c) for c in p.cost)
        verts = " ".join(str(v) for v in p.vertices)
        lines.append(f"{cost} ; {verts}")
    return "\n".join(lines) + ("\n" if lines else "")
