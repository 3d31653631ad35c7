"""Polygonal subdivision graphs and their hub triangulation."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .coxeter import CoxeterGraph, FaceKind, Witness, angle, cone_into_face
from .graph_core import Edge, Face, GraphError, PlaneGraph, edge_key


@dataclass(frozen=True)
class SubdivisionGraph:
    """A plane graph with a distinguished outer boundary cycle.

    ``boundary`` is stored in the order of the outer face walk. Instances
    built directly skip validation; use :func:`make_subdivision` for input.
    """

    graph: PlaneGraph
    boundary: tuple[str, ...]
    weights: Mapping[Edge, int] | None = None
    _bset: frozenset = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "_bset", frozenset(self.boundary))

    @property
    def boundary_set(self) -> frozenset[str]:
        return self._bset

    def is_boundary(self, v: str) -> bool:
        return v in self._bset

    def interior_vertices(self) -> list[str]:
        return [v for v in self.graph.vertices if v not in self._bset]

    def outer_face(self) -> Face:
        f = self.graph.find_face(self.boundary)
        if f is None:
            raise GraphError("boundary is not a face")
        return f

    def interior_faces(self) -> list[Face]:
        outer = self.outer_face()
        faces = self.graph.faces()
        faces.remove(outer)
        return faces

    @property
    def complexity(self) -> int:
        return max(f.side_count for f in self.interior_faces())

    def is_triangulation(self) -> bool:
        return self.complexity == 3

    def arcs(self, a: str, b: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
        """The two components of the boundary minus ``{a, b}``, each in walk order
        starting after ``a`` and after ``b`` respectively."""
        bd = self.boundary
        n = len(bd)
        i, j = bd.index(a), bd.index(b)
        arc1 = tuple(bd[(i + k) % n] for k in range(1, (j - i) % n))
        arc2 = tuple(bd[(j + k) % n] for k in range(1, (i - j) % n))
        return arc1, arc2

    def weight(self, u: str, v: str) -> int:
        if self.weights is None:
            return 0
        return self.weights.get(edge_key(u, v), 0)

    def with_graph(self, graph: PlaneGraph, weights=None) -> "SubdivisionGraph":
        return SubdivisionGraph(graph, self.boundary, weights)

    def to_doc(self) -> dict:
        doc = self.graph.to_doc()
        if self.weights is not None:
            doc["weights"] = [[u, v, n] for (u, v), n in sorted(self.weights.items())]
        doc["outer_face"] = list(self.boundary)
        return doc


def make_subdivision(g: PlaneGraph, outer: Sequence[str], weights: Mapping[Edge, int] | None = None) -> SubdivisionGraph:
    outer = tuple(outer)
    if len(outer) < 3:
        raise GraphError("outer boundary needs at least 3 vertices")
    if len(set(outer)) != len(outer):
        raise GraphError("outer boundary is not a simple cycle")
    face = g.find_face(outer)
    if face is None:
        raise GraphError("outer boundary is not a face of the graph")
    faces = g.faces()
    if len(faces) - 1 < 2:
        raise GraphError("subdivision needs at least 2 interior cells")
    for f in faces:
        if f is not face and not f.is_jordan():
            raise GraphError(f"interior face {f.boundary} is not a polygon")
    if weights is not None:
        weights = {edge_key(u, v): n for (u, v), n in weights.items()}
    walk = face.boundary
    i = walk.index(outer[0])
    return SubdivisionGraph(g, walk[i:] + walk[:i], weights)


def subdivision_from_face(cg: CoxeterGraph, face: Face | Sequence[str]) -> SubdivisionGraph:
    """The subdivision of the complement of a hyperbolic face."""
    if not isinstance(face, Face):
        found = cg.graph.find_face(face)
        if found is None:
            raise GraphError("not a face")
        face = found
    if cg.classify(face).kind != FaceKind.HYPERBOLIC:
        raise GraphError("face is not hyperbolic")
    for f in cg.faces():
        if not f.is_jordan():
            raise GraphError(f"face {f.boundary} is not a Jordan domain")
    return make_subdivision(cg.graph, face.boundary, cg.weights)


def proper_path_exists(sg: SubdivisionGraph, sources: Iterable[str], targets: Iterable[str]) -> bool:
    """Is there a path from a source to a target whose interior avoids the boundary?"""
    targets = set(targets)
    g = sg.graph
    seen = set()
    queue = deque()
    for s in sources:
        for u in g.neighbours(s):
            if u in targets:
                return True
            if not sg.is_boundary(u) and u not in seen:
                seen.add(u)
                queue.append(u)
    while queue:
        v = queue.popleft()
        for u in g.neighbours(v):
            if u in targets:
                return True
            if not sg.is_boundary(u) and u not in seen:
                seen.add(u)
                queue.append(u)
    return False


def is_acylindrical_subdivision(sg: SubdivisionGraph, weights: Mapping[Edge, int] | None = None):
    """Every nonadjacent boundary pair admits a separating proper path, and no
    interior vertex sees both at total angle >= pi."""
    if weights is None:
        weights = sg.weights or {}
    w = lambda u, v: angle(weights.get(edge_key(u, v), 0))
    g = sg.graph
    bd = sg.boundary
    for i, v in enumerate(bd):
        for u in bd[i + 1 :]:
            if g.has_edge(u, v):
                continue
            arc1, arc2 = sg.arcs(v, u)
            if not proper_path_exists(sg, arc1, arc2):
                return False, Witness("no separating path", (v, u))
            for x in sorted(set(g.neighbours(v)) & set(g.neighbours(u))):
                if sg.is_boundary(x):
                    continue
                if w(x, v) + w(x, u) >= 1:
                    return False, Witness("angle sum >= pi", (v, x, u))
    return True, None


def pairs_unlinked(p: Sequence[str], q: Sequence[str], boundary: Sequence[str]) -> bool:
    """True iff the chords ``p`` and ``q`` do not interleave on the boundary."""
    pos = {v: i for i, v in enumerate(boundary)}
    for v in (*p, *q):
        if v not in pos:
            raise GraphError(f"{v!r} is not a boundary vertex")
    a, b = sorted(pos[v] for v in p)
    c, d = sorted(pos[v] for v in q)
    if len({a, b, c, d}) < 4:
        return True
    inside = lambda x: a < x < b
    return inside(c) == inside(d)


# ----------------------------------------------------------------------
# hub triangulation


@dataclass(frozen=True)
class TriangulatedExtension:
    graph: SubdivisionGraph
    original: SubdivisionGraph
    added_vertices: dict[tuple[str, ...], str]  # face boundary -> hub
    hub_weight: int = 0

    def hub_of(self, face: Face) -> str | None:
        return self.added_vertices.get(face.boundary)

    def quotient(self, vertex: str, origin: Mapping[str, str] | None = None) -> str:
        """Image of a vertex of a staged graph; ``origin`` maps staged
        vertices to their hub."""
        if origin is not None and vertex in origin:
            return origin[vertex]
        return vertex


def triangulate(sg: SubdivisionGraph, hub_weight: int = 0) -> TriangulatedExtension:
    g = sg.graph
    rot = {v: list(g.neighbours(v)) for v in g.vertices}
    verts = list(g.vertices)
    taken = set(verts)
    added = {}
    weights = None if sg.weights is None else dict(sg.weights)
    k = 0
    for f in sorted(sg.interior_faces(), key=lambda f: f.boundary):
        if f.side_count == 3:
            continue
        hub = f"w{k}"
        while hub in taken:
            hub += "'"
        k += 1
        taken.add(hub)
        verts.append(hub)
        rot[hub] = cone_into_face(rot, f, hub)
        added[f.boundary] = hub
        if weights is not None:
            for u in f.boundary:
                weights[edge_key(hub, u)] = hub_weight
    tg = SubdivisionGraph(PlaneGraph(verts, rot), sg.boundary, weights)
    return TriangulatedExtension(tg, sg, added, hub_weight)
