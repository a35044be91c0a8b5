"""Small undirected graphs, their text format, and exhaustive property oracles."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product
from pathlib import Path

from .errors import CapacityError, InputError

MAX_ORACLE_VERTICES = 16


@dataclass(frozen=True)
class Graph:
    """Vertices ``0..order-1``; ``parts`` optionally partitions them into
    consecutive blocks (two blocks for a bipartite graph ``L, R``)."""

    order: int
    edges: frozenset[tuple[int, int]]
    parts: tuple[tuple[int, ...], ...] | None = None

    def __post_init__(self):
        if self.order < 0:
            raise InputError("vertex count must be nonnegative")
        norm = set()
        for u, v in self.edges:
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            if not (0 <= u < self.order and 0 <= v < self.order):
                raise InputError(f"edge ({u}, {v}) outside 0..{self.order - 1}")
            norm.add((min(u, v), max(u, v)))
        object.__setattr__(self, "edges", frozenset(norm))
        if self.parts is not None:
            parts = tuple(tuple(p) for p in self.parts)
            flat = [v for p in parts for v in p]
            if sorted(flat) != list(range(self.order)):
                raise InputError("parts must partition the vertex set")
            where = {v: k for k, p in enumerate(parts) for v in p}
            for u, v in norm:
                if where[u] == where[v]:
                    raise InputError(f"edge ({u}, {v}) inside part {where[u]}")
            object.__setattr__(self, "parts", parts)

    @classmethod
    def with_part_sizes(cls, sizes, edges) -> "Graph":
        parts, start = [], 0
        for s in sizes:
            parts.append(tuple(range(start, start + s)))
            start += s
        return cls(start, frozenset(edges), tuple(parts))

    def adjacent(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbors(self, v: int) -> set[int]:
        return {b if a == v else a for a, b in self.edges if v in (a, b)}

    def max_degree(self) -> int:
        return max((len(self.neighbors(v)) for v in range(self.order)), default=0)


def parse_graph(text: str) -> Graph:
    """Parse ``"order edges [s1,s2,...]"`` followed by one 1-based ``u v`` line per edge."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise InputError("graph file is empty")
    head = lines[0].split()
    if len(head) not in (2, 3):
        raise InputError("line 1: expected 'vertices edges [part sizes]'")
    try:
        order, count = int(head[0]), int(head[1])
        sizes = [int(x) for x in head[2].split(",")] if len(head) == 3 else None
    except ValueError:
        raise InputError(f"line 1: non-integer header {lines[0]!r}") from None
    if len(lines) - 1 != count:
        raise InputError(f"header declares {count} edges, found {len(lines) - 1}")
    edges = []
    for k, ln in enumerate(lines[1:], start=2):
        parts = ln.split()
        if len(parts) != 2:
            raise InputError(f"line {k}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise InputError(f"line {k}: non-integer vertex") from None
        if not (1 <= u <= order and 1 <= v <= order):
            raise InputError(f"line {k}: vertex outside 1..{order}")
        edges.append((u - 1, v - 1))
    if sizes is not None:
        if sum(sizes) != order:
            raise InputError(f"line 1: part sizes sum to {sum(sizes)}, expected {order}")
        return Graph.with_part_sizes(sizes, edges)
    return Graph(order, frozenset(edges))


def load_graph(path) -> Graph:
    return parse_graph(Path(path).read_text())


def format_graph(g: Graph) -> str:
    head = f"{g.order} {len(g.edges)}"
    if g.parts is not None:
        head += " " + ",".join(str(len(p)) for p in g.parts)
    body = [f"{u + 1} {v + 1}" for u, v in sorted(g.edges)]
    return "\n".join([head, *body]) + "\n"


def _check_size(g: Graph) -> None:
    if g.order > MAX_ORACLE_VERTICES:
        raise CapacityError(f"exhaustive graph oracle limited to {MAX_ORACLE_VERTICES} vertices")


def has_clique(g: Graph, size: int) -> bool:
    _check_size(g)
    if size <= 0:
        return True
    return any(
        all(g.adjacent(u, v) for u, v in combinations(c, 2))
        for c in combinations(range(g.order), size)
    )


def has_independent_set(g: Graph, size: int) -> bool:
    _check_size(g)
    if size <= 0:
        return True
    return any(
        not any(g.adjacent(u, v) for u, v in combinations(c, 2))
        for c in combinations(range(g.order), size)
    )


def max_biclique_edges(g: Graph) -> int:
    """Largest ``|L'| * |R'|`` with every ``L'``-``R'`` pair adjacent."""
    _check_size(g)
    if g.parts is None or len(g.parts) != 2:
        raise InputError("biclique oracle needs a bipartite graph with parts (L, R)")
    left, right = g.parts
    best = 0
    for r in range(1, len(left) + 1):
        for sub in combinations(left, r):
            common = [u for u in right if all(g.adjacent(v, u) for v in sub)]
            best = max(best, r * len(common))
    return best


def has_multicolored_clique(g: Graph) -> bool:
    _check_size(g)
    if g.parts is None:
        raise InputError("multicolored clique oracle needs declared parts")
    return any(
        all(g.adjacent(u, v) for u, v in combinations(pick, 2)) for pick in product(*g.parts)
    )


def graph_oracle(g: Graph, prop: str, parameter: int) -> bool:
    """Exact decision by exhaustive search for ``clique``, ``independent-set``,
    ``biclique`` (at least ``parameter`` edges) and ``multicolored-clique``."""
    if prop == "clique":
        return has_clique(g, parameter)
    if prop == "independent-set":
        return has_independent_set(g, parameter)
    if prop == "biclique":
        return max_biclique_edges(g) >= parameter
    if prop == "multicolored-clique":
        return has_multicolored_clique(g)
    raise InputError(f"unknown graph property {prop!r}")
