"""Proper path families on subdivision graphs and the separation oracle."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .graph_core import GraphError
from .subdivision import SubdivisionGraph

CONNECTING = "connecting"
SEPARATING = "separating"


class EmptyFamily(Exception):
    """The path family has no member."""


@dataclass(frozen=True)
class Family:
    kind: str
    a: str
    b: str

    @classmethod
    def connecting(cls, a: str, b: str) -> "Family":
        return cls(CONNECTING, a, b)

    @classmethod
    def separating(cls, a: str, b: str) -> "Family":
        return cls(SEPARATING, a, b)

    def validate(self, sg: SubdivisionGraph) -> None:
        if self.kind not in (CONNECTING, SEPARATING):
            raise GraphError(f"unknown family kind {self.kind!r}")
        for v in (self.a, self.b):
            if not sg.is_boundary(v):
                raise GraphError(f"{v!r} is not a boundary vertex")
        if self.a == self.b or sg.graph.has_edge(self.a, self.b):
            raise GraphError(f"{self.a!r} and {self.b!r} must be distinct and nonadjacent")

    def ends(self, sg: SubdivisionGraph) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """Allowed first and last vertices of family members."""
        if self.kind == CONNECTING:
            return (self.a,), (self.b,)
        return sg.arcs(self.a, self.b)

    def dual(self) -> "Family":
        return Family(SEPARATING if self.kind == CONNECTING else CONNECTING, self.a, self.b)

    def label(self) -> str:
        return f"{self.kind}({self.a},{self.b})"


def path_length(metric: Mapping[str, float], path: Sequence[str]) -> float:
    """Sum of the metric over every vertex of the path, endpoints included."""
    total = 0.0
    for v in path:
        if v not in metric:
            raise GraphError(f"vertex {v!r} not in metric")
        total += metric[v]
    return total


def shortest_proper_path(
    sg: SubdivisionGraph, metric: Mapping[str, float], family: Family
) -> tuple[tuple[str, ...], float]:
    """Minimum-length member of the family.

    Dijkstra on vertex weights (entering a vertex costs its weight), keyed
    by ``(length, vertex sequence)`` so ties go to the lexicographically
    smallest sequence. Raises :class:`EmptyFamily` if nothing connects.
    """
    sources, targets = family.ends(sg)
    targets = set(targets)
    g = sg.graph
    heap = [(metric[s], (s,)) for s in sorted(sources)]
    heapq.heapify(heap)
    settled = set()
    while heap:
        dist, path = heapq.heappop(heap)
        v = path[-1]
        if v in settled:
            continue
        settled.add(v)
        if v in targets:
            return path, dist
        for u in g.neighbours(v):
            if u in settled:
                continue
            if u in targets or not sg.is_boundary(u):
                heapq.heappush(heap, (dist + metric[u], path + (u,)))
    raise EmptyFamily(family.label())


def proper_distances(
    sg: SubdivisionGraph, metric: Mapping[str, float], targets: Sequence[str], exclude: str | None = None
) -> tuple[dict[str, float], dict[str, str | None]]:
    """Distance from every vertex to the target set along paths whose other
    vertices are interior, both end weights included.

    Boundary vertices outside ``targets`` get ``inf``. Also returns a
    shortest-path parent map (towards the targets).
    """
    g = sg.graph
    dist = {v: math.inf for v in g.vertices}
    parent: dict[str, str | None] = {}
    heap = []
    for t in sorted(targets):
        dist[t] = metric[t]
        parent[t] = None
        heap.append((dist[t], t))
    heapq.heapify(heap)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        for u in g.neighbours(v):
            if u == exclude or sg.is_boundary(u) or u in done:
                continue
            nd = d + metric[u]
            if nd < dist[u] or (nd == dist[u] and v < parent.get(u, "￿")):
                dist[u] = nd
                parent[u] = v
                heapq.heappush(heap, (nd, u))
    return dist, parent


def enumerate_proper_paths(sg: SubdivisionGraph, family: Family, limit: int = 2_000_000) -> Iterator[tuple[str, ...]]:
    """All simple members of the family, by depth-first search."""
    sources, targets = family.ends(sg)
    targets = set(targets)
    g = sg.graph
    count = 0
    for s in sorted(sources):
        stack = [(s, iter(g.neighbours(s)))]
        on_path = {s}
        path = [s]
        while stack:
            v, it = stack[-1]
            advanced = False
            for u in it:
                if u in on_path:
                    continue
                if u in targets:
                    count += 1
                    if count > limit:
                        raise RuntimeError("path enumeration limit exceeded")
                    yield tuple(path) + (u,)
                elif not sg.is_boundary(u):
                    on_path.add(u)
                    path.append(u)
                    stack.append((u, iter(g.neighbours(u))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                on_path.discard(path.pop())
