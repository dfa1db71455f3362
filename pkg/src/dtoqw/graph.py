"""
Simple graphs and the directed-with-loops graph the walk runs on.

Vertices are the integers ``0 .. n-1``; the same integers label the coin
basis, so a vertex index doubles as a basis index everywhere else in the
package.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from pathlib import Path
from typing import Iterable


class GraphError(ValueError):
    """Raised for malformed graph input."""


Edge = tuple[int, int]
Arc = tuple[int, int]


@dataclass(frozen=True)
class Graph:
    """Finite simple undirected graph.

    Edges are stored as sorted pairs ``(u, v)`` with ``u < v``.
    """

    n: int
    edges: frozenset[Edge] = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise GraphError(f"vertex count must be a positive integer, got {self.n!r}")
        for u, v in self.edges:
            if u == v:
                raise GraphError(f"self-loop ({u}, {v}) is not allowed in a simple graph")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={self.n}")
            if u > v:
                raise GraphError(f"edge ({u}, {v}) is not normalized")

    @property
    def m(self) -> int:
        return len(self.edges)

    def neighbors(self, u: int) -> list[int]:
        out = [b if a == u else a for a, b in self.edges if u in (a, b)]
        return sorted(out)

    def degree(self, u: int) -> int:
        return sum(1 for e in self.edges if u in e)

    def degrees(self) -> list[int]:
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)


@dataclass(frozen=True)
class DirectedWalkGraph:
    """Both orientations of every edge plus one loop per vertex."""

    n: int
    arcs: tuple[Arc, ...]

    def out_neighbors(self, u: int) -> list[int]:
        """Targets of non-loop arcs leaving ``u``, ascending."""
        return [v for a, v in self.arcs if a == u and v != u]

    def in_sources(self, v: int) -> list[int]:
        """Sources of all arcs entering ``v`` (loop included), ascending."""
        return [u for u, b in self.arcs if b == v]

    def outdegree(self, u: int) -> int:
        # counts the loop
        return sum(1 for a, _ in self.arcs if a == u)

    def edge_degree(self, u: int) -> int:
        """Outdegree with the loop excluded (the simple-graph degree)."""
        return self.outdegree(u) - 1


def _normalize(pairs: Iterable[tuple[int, int]], n: int) -> frozenset[Edge]:
    out = set()
    for pair in pairs:
        u, v = (int(x) for x in pair)
        if u == v:
            raise GraphError(f"self-loop ({u}, {v}) in edge list")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphError(f"vertex index out of range in edge ({u}, {v}) for n={n}")
        out.add((min(u, v), max(u, v)))
    return frozenset(out)


def from_edge_list(n: int, pairs: Iterable[tuple[int, int]]) -> Graph:
    """Build a graph from an explicit edge list, dropping duplicates."""
    if n < 1:
        raise GraphError(f"vertex count must be >= 1, got {n}")
    return Graph(n, _normalize(pairs, n))


def path(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"path needs n >= 1, got {n}")
    return from_edge_list(n, [(i, i + 1) for i in range(n - 1)])


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError(f"cycle needs n >= 3, got {n}")
    return from_edge_list(n, [(i, (i + 1) % n) for i in range(n)])


def star(n: int) -> Graph:
    """Star with center 0 and leaves ``1 .. n-1``."""
    if n < 2:
        raise GraphError(f"star needs n >= 2, got {n}")
    return from_edge_list(n, [(0, k) for k in range(1, n)])


def complete(n: int) -> Graph:
    if n < 1:
        raise GraphError(f"complete graph needs n >= 1, got {n}")
    return from_edge_list(n, combinations(range(n), 2))


def complete_bipartite(a: int, b: int) -> Graph:
    """K_{a,b}; vertices ``0 .. a-1`` form the first part, ``a .. a+b-1`` the second."""
    if a < 1 or b < 1:
        raise GraphError(f"complete bipartite graph needs a, b >= 1, got ({a}, {b})")
    return from_edge_list(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def to_walk_graph(g: Graph) -> DirectedWalkGraph:
    arcs = set((u, u) for u in range(g.n))
    for u, v in g.edges:
        arcs.add((u, v))
        arcs.add((v, u))
    return DirectedWalkGraph(g.n, tuple(sorted(arcs)))


FAMILIES = {
    "path": path,
    "cycle": cycle,
    "star": star,
    "complete": complete,
}


def parse_graph_spec(spec: str) -> Graph:
    """Parse ``family:n``, ``bipartite:a,b`` or ``file:PATH``."""
    family, sep, arg = spec.partition(":")
    if not sep or not arg:
        raise GraphError(f"malformed graph spec {spec!r}; expected family:params")
    family = family.strip().lower()
    if family == "file":
        return load_graph(arg)
    try:
        if family == "bipartite":
            a, b = (int(x) for x in arg.split(","))
            return complete_bipartite(a, b)
        if family in FAMILIES:
            return FAMILIES[family](int(arg))
    except ValueError as exc:
        if isinstance(exc, GraphError):
            raise
        raise GraphError(f"malformed graph parameters in {spec!r}") from exc
    raise GraphError(f"unknown graph family {family!r}")


def load_graph(path_like: str | Path) -> Graph:
    """Read a graph file.

    Two formats are accepted. JSON: ``{"n": int, "edges": [[u, v], ...]}``.
    Plain text: first non-comment line is ``n``, then one ``u v`` pair per
    line; ``#`` starts a comment.
    """
    p = Path(path_like)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphError(f"cannot read graph file {str(p)!r}: {exc}") from exc

    if p.suffix.lower() == ".json" or text.lstrip().startswith("{"):
        try:
            data = json.loads(text)
            return from_edge_list(int(data["n"]), [tuple(e) for e in data.get("edges", [])])
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise GraphError(f"invalid JSON graph file {str(p)!r}: {exc}") from exc

    lines = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append(line)
    if not lines:
        raise GraphError(f"graph file {str(p)!r} is empty")
    try:
        n = int(lines[0])
        pairs = []
        for line in lines[1:]:
            u, v = line.split()
            pairs.append((int(u), int(v)))
    except ValueError as exc:
        raise GraphError(f"malformed graph file {str(p)!r}: {exc}") from exc
    return from_edge_list(n, pairs)
