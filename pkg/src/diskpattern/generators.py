"""Fixture graphs: the two worked examples and seeded random subdivisions."""

from __future__ import annotations

import random
from itertools import combinations

from .graph_core import PlaneGraph, edge_key, graph_from_positions
from .subdivision import SubdivisionGraph, make_subdivision, proper_path_exists


def example_a() -> SubdivisionGraph:
    """Quadrilateral ABCD with interior a, b, c.

    The minimal proper paths are {a,b}, {a,c} from A to C and {a}, {b,c}
    from B to D.
    """
    pos = {"A": (-3, 0), "B": (0, 3), "C": (3, 0), "D": (0, -3), "a": (-1, 0), "b": (1, 1), "c": (1, -1)}
    edges = [
        ("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"),
        ("A", "a"), ("a", "b"), ("a", "c"), ("b", "c"),
        ("B", "a"), ("B", "b"), ("D", "a"), ("D", "c"), ("C", "b"), ("C", "c"),
    ]  # fmt: skip
    return make_subdivision(graph_from_positions(pos, edges), ["A", "B", "C", "D"])


def example_b(n: int) -> SubdivisionGraph:
    """Quadrilateral ABCD with the interior path a0 ... a(2n).

    A sees a0..an, C sees an..a(2n), B sees only a0 and D only a(2n); the
    two large faces have n + 3 sides.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    names = [f"a{i}" for i in range(2 * n + 1)]
    pos = {"A": (-3.0, 0.0), "B": (0.0, 3.0), "C": (3.0, 0.0), "D": (0.0, -3.0)}
    for i, v in enumerate(names):
        pos[v] = (0.0, 2.0 - 2.0 * i / n)
    edges = [("A", "B"), ("B", "C"), ("C", "D"), ("D", "A"), ("B", names[0]), ("D", names[-1])]
    edges += list(zip(names, names[1:]))
    edges += [("A", names[i]) for i in range(n + 1)]
    edges += [("C", names[i]) for i in range(n, 2 * n + 1)]
    return make_subdivision(graph_from_positions(pos, edges), ["A", "B", "C", "D"])


def wheel(k: int, hub: str = "x", prefix: str = "v") -> SubdivisionGraph:
    """A k-gon with one interior vertex joined to every corner."""
    import math

    pos = {f"{prefix}{i}": (math.cos(2 * math.pi * i / k), math.sin(2 * math.pi * i / k)) for i in range(k)}
    pos[hub] = (0.0, 0.0)
    ring = [f"{prefix}{i}" for i in range(k)]
    edges = list(zip(ring, ring[1:] + ring[:1])) + [(hub, v) for v in ring]
    return make_subdivision(graph_from_positions(pos, edges), ring)


# ----------------------------------------------------------------------
# random subdivisions


class _Builder:
    """Mutable rotation system used while growing a random triangulation."""

    def __init__(self, k: int):
        self.boundary = [f"b{i:02d}" for i in range(k)]
        hub = "v00"
        self.rot = {}
        for i, v in enumerate(self.boundary):
            prev_, next_ = self.boundary[i - 1], self.boundary[(i + 1) % k]
            # ccw: polygon listed ccw, hub inside
            self.rot[v] = [next_, hub, prev_]
        self.rot[hub] = list(self.boundary)
        self.n_interior = 1

    def faces(self):
        return PlaneGraph(list(self.rot), self.rot).faces()

    def interior_faces(self):
        outer = set(self.boundary)
        return [f for f in self.faces() if not (f.vertex_set() == outer and f.side_count == len(self.boundary))]

    def insert_vertex(self, face):
        v = f"v{self.n_interior:02d}"
        self.n_interior += 1
        b = face.boundary
        for i, u in enumerate(b):
            nxt, prv = b[(i + 1) % len(b)], b[i - 1]
            r = self.rot[u]
            j = r.index(nxt)
            r.insert(j + 1, v)
        self.rot[v] = list(b)

    def edge_faces(self, u, v):
        rot = self.rot
        # face containing dart u->v: walk
        def third(a, b):
            r = rot[b]
            return r[r.index(a) - 1]

        return third(u, v), third(v, u)

    def flip(self, u, v) -> bool:
        if u in self.boundary and v in self.boundary and self._on_boundary(u, v):
            return False
        p, q = self.edge_faces(u, v)  # faces (u, v, p) and (v, u, q)
        if p == q or q in self.rot[p]:
            return False
        if len(self.rot[u]) <= 2 or len(self.rot[v]) <= 2:
            return False
        # must both be triangles
        if self.edge_faces(v, p)[0] != u or self.edge_faces(u, q)[0] != v:
            return False
        self.rot[u].remove(v)
        self.rot[v].remove(u)
        rp = self.rot[p]
        rp.insert(rp.index(v), q)
        rq = self.rot[q]
        rq.insert(rq.index(u), p)
        return True

    def _on_boundary(self, u, v):
        i, j = self.boundary.index(u), self.boundary.index(v)
        return (i - j) % len(self.boundary) in (1, len(self.boundary) - 1)

    def edges(self):
        return sorted({edge_key(u, v) for u in self.rot for v in self.rot[u]})

    def remove_edge(self, u, v):
        self.rot[u].remove(v)
        self.rot[v].remove(u)


def random_triangulation(rng: random.Random, n_boundary: int | None = None, n_interior: int | None = None, flips: int | None = None) -> SubdivisionGraph:
    k = n_boundary if n_boundary is not None else rng.randint(4, 8)
    m = n_interior if n_interior is not None else rng.randint(1, 30 - k)
    b = _Builder(k)
    while b.n_interior < m:
        faces = sorted(b.interior_faces(), key=lambda f: f.boundary)
        b.insert_vertex(rng.choice(faces))
    nflips = flips if flips is not None else 3 * len(b.rot)
    for _ in range(nflips):
        u, v = rng.choice(b.edges())
        b.flip(u, v)
    g = PlaneGraph(sorted(b.rot), b.rot)
    return make_subdivision(g, b.boundary)


def random_subdivision(rng: random.Random, max_side: int = 8, removals: int | None = None, **kw) -> SubdivisionGraph:
    """Random triangulation with interior edges removed while every interior
    face stays a simple polygon with at most ``max_side`` sides."""
    sg = random_triangulation(rng, **kw)
    rot = {v: list(sg.graph.neighbours(v)) for v in sg.graph.vertices}
    bset = set(sg.boundary)
    tries = removals if removals is not None else rng.randint(1, len(rot))
    for _ in range(tries):
        g = PlaneGraph(sorted(rot), rot)
        outer = g.find_face(sg.boundary)
        interior = [f for f in g.faces() if f is not outer]
        if len(interior) <= 2:
            break
        u, v = rng.choice(sorted(g.edges))
        if u in bset and v in bset and outer.consecutive(u, v):
            continue
        f1, f2 = g.face_of_dart(u, v), g.face_of_dart(v, u)
        if f1 is outer or f2 is outer:
            continue
        if f1.vertex_set() & f2.vertex_set() != {u, v}:
            continue
        if f1.side_count + f2.side_count - 2 > max_side:
            continue
        rot[u].remove(v)
        rot[v].remove(u)
    g = PlaneGraph(sorted(rot), rot)
    return make_subdivision(g, sg.boundary)


def valid_pairs(sg: SubdivisionGraph) -> list[tuple[str, str]]:
    """Nonadjacent boundary pairs for which both path families are nonempty
    and neither contains a zero-length chord."""
    g = sg.graph
    out = []
    for a, b in combinations(sg.boundary, 2):
        if g.has_edge(a, b):
            continue
        if not proper_path_exists(sg, [a], [b]):
            continue
        arc1, arc2 = sg.arcs(a, b)
        if any(g.has_edge(u, w) for u in arc1 for w in arc2):
            continue
        if not proper_path_exists(sg, arc1, arc2):
            continue
        out.append((a, b))
    return out


def random_instance(rng: random.Random, triangulated: bool = True, max_vertices: int = 30, max_side: int = 8):
    """A random subdivision together with a valid boundary pair."""
    while True:
        k = rng.randint(4, 8)
        m = rng.randint(1, max_vertices - k)
        if triangulated:
            sg = random_triangulation(rng, k, m)
        else:
            sg = random_subdivision(rng, max_side=max_side, n_boundary=k, n_interior=m)
        pairs = valid_pairs(sg)
        if pairs:
            return sg, rng.choice(pairs)


def flower(k: int, hub_code: int = 0, rim_code: int = 0) -> SubdivisionGraph:
    """Wheel with weight codes on the spokes and on the rim."""
    sg = wheel(k)
    weights = {}
    for u, v in sg.graph.edges:
        weights[(u, v)] = hub_code if "x" in (u, v) else rim_code
    return make_subdivision(sg.graph, sg.boundary, weights)


def quad_hub(hub_code: int = 0, rim_code: int = 0) -> SubdivisionGraph:
    """Quadrilateral ABCD with one interior vertex x joined to every corner."""
    pos = {"A": (-1.0, 0.0), "B": (0.0, 1.0), "C": (1.0, 0.0), "D": (0.0, -1.0), "x": (0.0, 0.0)}
    ring = ["A", "B", "C", "D"]
    edges = list(zip(ring, ring[1:] + ring[:1])) + [("x", v) for v in ring]
    weights = {edge_key(u, v): (hub_code if "x" in (u, v) else rim_code) for u, v in edges}
    return make_subdivision(graph_from_positions(pos, edges), ring, weights)


# ----------------------------------------------------------------------
# Coxeter graph fixtures


def elliptic_connection_fixture(chord_code: int) -> "CoxeterGraph":
    """Pentagon with one chord; every other edge at angle pi/4.

    The outer pentagon is hyperbolic and the chord joins two of its
    nonconsecutive vertices, so the chord is an elliptic connection
    exactly when its weight is nonzero.
    """
    from .coxeter import CoxeterGraph
    import math

    ring = [f"p{i}" for i in range(5)]
    pos = {v: (math.cos(2 * math.pi * i / 5), math.sin(2 * math.pi * i / 5)) for i, v in enumerate(ring)}
    edges = list(zip(ring, ring[1:] + ring[:1])) + [("p0", "p2")]
    g = graph_from_positions(pos, edges)
    weights = {edge_key(u, v): 4 for u, v in edges}
    weights[edge_key("p0", "p2")] = chord_code
    return CoxeterGraph(g, weights)


def right_angled_fixture() -> "CoxeterGraph":
    """Four-spoke wheel whose hub meets two opposite rim vertices at pi/2."""
    from .coxeter import CoxeterGraph

    sg = wheel(4)
    weights = {e: 0 for e in sg.graph.edges}
    weights[edge_key("x", "v1")] = 2
    weights[edge_key("x", "v3")] = 2
    return CoxeterGraph(sg.graph, weights)


def tetrahedron(apex_codes: tuple[int, int, int], base_codes: tuple[int, int, int] = (0, 0, 0)) -> "CoxeterGraph":
    """K4 with apex ``d`` over the base triangle ``a b c``."""
    from .coxeter import CoxeterGraph

    pos = {"a": (0.0, 0.0), "b": (4.0, 0.0), "c": (2.0, 3.0), "d": (2.0, 1.0)}
    base = [("a", "b"), ("b", "c"), ("c", "a")]
    apex = [("d", "a"), ("d", "b"), ("d", "c")]
    g = graph_from_positions(pos, base + apex)
    weights = {edge_key(u, v): n for (u, v), n in zip(base, base_codes)}
    weights.update({edge_key(u, v): n for (u, v), n in zip(apex, apex_codes)})
    return CoxeterGraph(g, weights, check_normalization=False)
