"""Plane graphs given by rotation systems.

A plane graph is stored as a map from each vertex to the counterclockwise
cyclic list of its neighbours. Faces are recovered by the usual next-edge
rule: arriving at ``w`` along ``(v, w)`` we leave along the neighbour that
precedes ``v`` in the rotation at ``w``. With counterclockwise rotations
this walks every bounded face counterclockwise.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Mapping, Sequence

Edge = tuple[str, str]

DOCUMENT_FIELDS = {"vertices", "rotation", "weights", "outer_face"}


class GraphError(ValueError):
    """Raised for malformed or invalid graph input."""


def edge_key(u: str, v: str) -> Edge:
    return (u, v) if u <= v else (v, u)


@dataclass(frozen=True)
class Face:
    """A face given by its boundary walk.

    The walk may repeat vertices when the face is not a Jordan domain.
    """

    boundary: tuple[str, ...]

    @property
    def side_count(self) -> int:
        return len(self.boundary)

    def directed_edges(self) -> list[tuple[str, str]]:
        b = self.boundary
        return [(b[i], b[(i + 1) % len(b)]) for i in range(len(b))]

    def edges(self) -> list[Edge]:
        return [edge_key(u, v) for u, v in self.directed_edges()]

    def is_jordan(self) -> bool:
        return len(set(self.boundary)) == len(self.boundary)

    def vertex_set(self) -> frozenset[str]:
        return frozenset(self.boundary)

    def neighbours_on_boundary(self, v: str) -> tuple[str, str]:
        """Previous and next vertex of ``v`` along the walk (first occurrence)."""
        b = self.boundary
        i = b.index(v)
        return b[i - 1], b[(i + 1) % len(b)]

    def consecutive(self, u: str, v: str) -> bool:
        """True if ``u`` and ``v`` are joined by a side of this face."""
        return any({x, y} == {u, v} for x, y in self.directed_edges())

    def same_cycle(self, cycle: Sequence[str]) -> bool:
        """Compare with a cyclic vertex sequence, in either direction."""
        return _cyclic_equal(self.boundary, tuple(cycle)) or _cyclic_equal(
            self.boundary, tuple(reversed(cycle))
        )


def _cyclic_equal(a: tuple, b: tuple) -> bool:
    if len(a) != len(b):
        return False
    if not a:
        return True
    n = len(a)
    return any(all(a[(s + i) % n] == b[i] for i in range(n)) for s in range(n) if a[s] == b[0])


class PlaneGraph:
    """A connected simple plane graph described by a rotation system."""

    __slots__ = ("_vertices", "_rotation", "_edges", "_faces", "_index", "_dart_face")

    def __init__(self, vertices: Iterable[str], rotation: Mapping[str, Sequence[str]]):
        verts = tuple(str(v) for v in vertices)
        if len(set(verts)) != len(verts):
            raise GraphError("duplicate vertex identifiers")
        if set(rotation) != set(verts):
            extra = set(rotation) ^ set(verts)
            raise GraphError(f"rotation keys do not match vertices: {sorted(extra)}")
        rot = {v: tuple(str(u) for u in rotation[v]) for v in verts}
        vset = set(verts)
        for v, nbrs in rot.items():
            if v in nbrs:
                raise GraphError(f"self-loop at {v!r}")
            if len(set(nbrs)) != len(nbrs):
                raise GraphError(f"duplicate neighbour in rotation of {v!r}")
            for u in nbrs:
                if u not in vset:
                    raise GraphError(f"unknown neighbour {u!r} in rotation of {v!r}")
                if v not in rotation[u]:
                    raise GraphError(f"asymmetric rotation: {u!r} at {v!r} but not {v!r} at {u!r}")
        self._vertices = verts
        self._rotation = rot
        self._edges = frozenset(edge_key(v, u) for v in verts for u in rot[v])
        self._index = {v: {u: i for i, u in enumerate(rot[v])} for v in verts}
        self._faces = None
        self._dart_face = None
        if not _connected(verts, rot, set()):
            raise GraphError("graph is not connected")
        faces = self.faces()
        if len(verts) - len(self._edges) + len(faces) != 2:
            raise GraphError("rotation system is not planar (Euler characteristic != 2)")

    # basic accessors
    @property
    def vertices(self) -> tuple[str, ...]:
        return self._vertices

    @property
    def rotation(self) -> dict[str, tuple[str, ...]]:
        return dict(self._rotation)

    @property
    def edges(self) -> frozenset[Edge]:
        return self._edges

    def neighbours(self, v: str) -> tuple[str, ...]:
        return self._rotation[v]

    def degree(self, v: str) -> int:
        return len(self._rotation[v])

    def has_vertex(self, v: str) -> bool:
        return v in self._rotation

    def has_edge(self, u: str, v: str) -> bool:
        return edge_key(u, v) in self._edges

    def next_in_face(self, v: str, w: str) -> str:
        """Vertex following ``w`` on the face walk through the dart ``(v, w)``."""
        rw = self._rotation[w]
        return rw[self._index[w][v] - 1]

    def faces(self) -> list[Face]:
        if self._faces is None:
            self._faces = _trace(self._vertices, self._rotation, self.next_in_face)
            self._dart_face = {d: f for f in self._faces for d in f.directed_edges()}
        return list(self._faces)

    def face_of_dart(self, v: str, w: str) -> Face:
        """The face whose walk traverses ``v -> w``."""
        self.faces()
        try:
            return self._dart_face[(v, w)]
        except KeyError:
            raise GraphError(f"{v!r}-{w!r} is not an edge") from None

    def corner_face(self, x: str, u: str) -> Face:
        """Face at the corner of ``x`` between ``u`` and its ccw successor."""
        return self.face_of_dart(x, u)

    def find_face(self, cycle: Sequence[str]) -> Face | None:
        for f in self.faces():
            if f.same_cycle(cycle):
                return f
        return None

    def connected_without(self, removed: Iterable[str]) -> bool:
        return _connected(self._vertices, self._rotation, set(removed))

    def to_doc(self) -> dict:
        return {"vertices": list(self._vertices), "rotation": {v: list(self._rotation[v]) for v in self._vertices}}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PlaneGraph) and self._vertices == other._vertices and self._rotation == other._rotation

    def __hash__(self) -> int:
        return hash((self._vertices, tuple(self._rotation[v] for v in self._vertices)))

    def __repr__(self) -> str:
        return f"PlaneGraph(V={len(self._vertices)}, E={len(self._edges)})"


def _connected(verts: Sequence[str], rot: Mapping[str, Sequence[str]], removed: set[str]) -> bool:
    remaining = [v for v in verts if v not in removed]
    if not remaining:
        return True
    seen = {remaining[0]}
    queue = deque([remaining[0]])
    while queue:
        v = queue.popleft()
        for u in rot[v]:
            if u not in removed and u not in seen:
                seen.add(u)
                queue.append(u)
    return len(seen) == len(remaining)


def _trace(verts, rot, step) -> list[Face]:
    used: set[tuple[str, str]] = set()
    faces = []
    for v in verts:
        for w in rot[v]:
            if (v, w) in used:
                continue
            walk = []
            a, b = v, w
            while (a, b) not in used:
                used.add((a, b))
                walk.append(a)
                a, b = b, step(a, b)
            faces.append(Face(tuple(walk)))
    return faces


def trace_faces(g: PlaneGraph) -> list[Face]:
    return g.faces()


def is_k_connected(g: PlaneGraph, k: int) -> bool:
    """True iff removing any ``k - 1`` vertices leaves ``g`` connected."""
    if k not in (2, 3):
        raise GraphError("only k in {2, 3} is supported")
    if len(g.vertices) <= k:
        raise GraphError(f"need more than {k} vertices")
    return cut_set(g, k) is None


def cut_set(g: PlaneGraph, k: int) -> tuple[str, ...] | None:
    """A separating set of fewer than ``k`` vertices, or None."""
    for size in range(0, k):
        for removed in combinations(g.vertices, size):
            if not g.connected_without(removed):
                return removed
    return None


# ----------------------------------------------------------------------
# construction helpers


def graph_from_positions(positions: Mapping[str, tuple[float, float]], edges: Iterable[Sequence[str]]) -> PlaneGraph:
    """Build the rotation system of a straight-line drawing."""
    nbrs: dict[str, list[str]] = {v: [] for v in positions}
    for u, v in edges:
        nbrs[u].append(v)
        nbrs[v].append(u)
    rotation = {}
    for v, ns in nbrs.items():
        x0, y0 = positions[v]
        rotation[v] = sorted(ns, key=lambda u: math.atan2(positions[u][1] - y0, positions[u][0] - x0))
    return PlaneGraph(list(positions), rotation)


# ----------------------------------------------------------------------
# documents


@dataclass(frozen=True)
class GraphDocument:
    graph: PlaneGraph
    weights: dict[Edge, int] | None = None
    outer_face: tuple[str, ...] | None = None


def parse_document(doc: str | bytes | Mapping) -> GraphDocument:
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from exc
    if not isinstance(doc, Mapping):
        raise GraphError("graph document must be a JSON object")
    unknown = set(doc) - DOCUMENT_FIELDS
    if unknown:
        raise GraphError(f"unknown fields: {sorted(unknown)}")
    if "vertices" not in doc or "rotation" not in doc:
        raise GraphError("document needs 'vertices' and 'rotation'")
    vertices = doc["vertices"]
    rotation = doc["rotation"]
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        raise GraphError("'vertices' must be an array of strings")
    if not isinstance(rotation, Mapping) or not all(
        isinstance(r, list) and all(isinstance(u, str) for u in r) for r in rotation.values()
    ):
        raise GraphError("'rotation' must map vertices to arrays of strings")
    graph = PlaneGraph(vertices, rotation)

    weights = None
    if "weights" in doc:
        weights = {}
        raw = doc["weights"]
        if not isinstance(raw, list):
            raise GraphError("'weights' must be an array")
        for item in raw:
            if not (isinstance(item, list) and len(item) == 3):
                raise GraphError(f"bad weight entry {item!r}")
            u, v, n = item
            if not (isinstance(n, int) and not isinstance(n, bool)) or n == 1 or n < 0:
                raise GraphError(f"weight code must be 0 or an integer >= 2, got {n!r}")
            if not graph.has_edge(u, v):
                raise GraphError(f"weight given for non-edge {u!r}-{v!r}")
            key = edge_key(u, v)
            if key in weights:
                raise GraphError(f"duplicate weight for {key}")
            weights[key] = n

    outer = None
    if "outer_face" in doc:
        raw = doc["outer_face"]
        if not isinstance(raw, list) or not all(isinstance(v, str) for v in raw):
            raise GraphError("'outer_face' must be an array of strings")
        outer = tuple(raw)
    return GraphDocument(graph, weights, outer)


def parse_plane_graph(doc: str | bytes | Mapping) -> PlaneGraph:
    return parse_document(doc).graph


def serialize_document(
    graph: PlaneGraph, weights: Mapping[Edge, int] | None = None, outer_face: Sequence[str] | None = None
) -> dict:
    """Canonical document: weights sorted by edge key."""
    doc = graph.to_doc()
    if weights is not None:
        doc["weights"] = [[u, v, int(weights[(u, v)])] for u, v in sorted(weights)]
    if outer_face is not None:
        doc["outer_face"] = list(outer_face)
    return doc


def check_path(g: PlaneGraph, path: Sequence[str], simple: bool = True) -> None:
    if len(path) < 2:
        raise GraphError("a path has at least two vertices")
    for v in path:
        if not g.has_vertex(v):
            raise GraphError(f"vertex {v!r} not in graph")
    for u, v in zip(path, path[1:]):
        if not g.has_edge(u, v):
            raise GraphError(f"{u!r}-{v!r} is not an edge")
    if simple and len(set(path)) != len(path):
        raise GraphError("path is not simple")
