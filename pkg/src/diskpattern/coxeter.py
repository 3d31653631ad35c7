"""Coxeter graphs: weighted plane graphs encoding intersection angles.

Weights are integer codes: ``0`` is the angle 0 and ``n >= 2`` is the angle
pi/n. Angle sums are handled as exact fractions of pi, so the parabolic
test ``sum == (k - 2) * pi`` never depends on a floating tolerance.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Mapping, Sequence

from .graph_core import Edge, Face, GraphError, PlaneGraph, cut_set, edge_key


class FaceKind(str, enum.Enum):
    ELLIPTIC = "elliptic"
    PARABOLIC = "parabolic"
    HYPERBOLIC = "hyperbolic"


class NormalizationError(GraphError):
    """Two triangular parabolic faces share a weight-0 edge.

    ``suggestion`` holds the graph with that edge removed (the two triangles
    merged into one quadrilateral parabolic face).
    """

    def __init__(self, msg, edge, suggestion):
        super().__init__(msg)
        self.edge = edge
        self.suggestion = suggestion


def angle(code: int) -> Fraction:
    """Angle of a weight code as a fraction of pi."""
    return Fraction(0) if code == 0 else Fraction(1, code)


@dataclass(frozen=True)
class FaceClass:
    kind: FaceKind
    weight_sum: Fraction  # in units of pi


class CoxeterGraph:
    def __init__(self, graph: PlaneGraph, weights: Mapping[Edge, int], *, check_normalization: bool = True):
        w = {}
        for (u, v), n in weights.items():
            if not graph.has_edge(u, v):
                raise GraphError(f"weight on non-edge {u}-{v}")
            if not isinstance(n, int) or n == 1 or n < 0:
                raise GraphError(f"invalid weight code {n!r}")
            w[edge_key(u, v)] = int(n)
        missing = graph.edges - set(w)
        if missing:
            raise GraphError(f"edges without weight: {sorted(missing)[:5]}")
        self.graph = graph
        self.weights = w
        self._classes = None
        if check_normalization:
            self._check_normalization()

    def weight(self, u: str, v: str) -> int:
        return self.weights[edge_key(u, v)]

    def angle(self, u: str, v: str) -> Fraction:
        return angle(self.weight(u, v))

    def faces(self) -> list[Face]:
        return self.graph.faces()

    def face_sum(self, face: Face) -> Fraction:
        return sum((angle(self.weights[e]) for e in face.edges()), Fraction(0))

    def classify(self, face: Face) -> FaceClass:
        s = self.face_sum(face)
        k = face.side_count
        if k == 3 and s > 1:
            kind = FaceKind.ELLIPTIC
        elif s == k - 2:
            kind = FaceKind.PARABOLIC
        else:
            kind = FaceKind.HYPERBOLIC
        return FaceClass(kind, s)

    def classes(self) -> dict[Face, FaceClass]:
        if self._classes is None:
            self._classes = {f: self.classify(f) for f in self.faces()}
        return dict(self._classes)

    def faces_of_kind(self, kind: FaceKind) -> list[Face]:
        return [f for f, c in self.classes().items() if c.kind == kind]

    def _check_normalization(self):
        classes = self.classes()
        tri_par = [f for f, c in classes.items() if c.kind == FaceKind.PARABOLIC and f.side_count == 3]
        for f1, f2 in combinations(tri_par, 2):
            shared = set(f1.edges()) & set(f2.edges())
            for e in sorted(shared):
                if self.weights[e] == 0:
                    raise NormalizationError(
                        f"triangular parabolic faces {f1.boundary} and {f2.boundary} share the weight-0 edge {e}; "
                        "remove it to merge them into one quadrilateral parabolic face",
                        e,
                        _merge_suggestion(self, e),
                    )

    def to_doc(self) -> dict:
        doc = self.graph.to_doc()
        doc["weights"] = [[u, v, n] for (u, v), n in sorted(self.weights.items())]
        return doc


def _merge_suggestion(cg: CoxeterGraph, e: Edge) -> dict:
    u, v = e
    rot = {x: [y for y in cg.graph.neighbours(x) if {x, y} != {u, v}] for x in cg.graph.vertices}
    weights = [[a, b, n] for (a, b), n in sorted(cg.weights.items()) if (a, b) != e]
    return {"vertices": list(cg.graph.vertices), "rotation": rot, "weights": weights}


def classify_faces(cg: CoxeterGraph) -> dict[Face, FaceClass]:
    return cg.classes()


# ----------------------------------------------------------------------
# completion


@dataclass(frozen=True)
class ExtraEdge:
    u: str
    v: str
    face: Face


@dataclass(frozen=True)
class CompletedCoxeterGraph:
    base: CoxeterGraph
    extra_edges: tuple[ExtraEdge, ...] = ()
    extraneous_faces: tuple[tuple[str, str, str], ...] = ()
    completed_faces: tuple[Face, ...] = field(default=())

    def edge_list(self) -> list[tuple[str, str, int, str]]:
        """All edges as ``(u, v, code, tag)``; diagonals may parallel graph edges."""
        out = [(u, v, n, "graph") for (u, v), n in sorted(self.base.weights.items())]
        out += [(*edge_key(e.u, e.v), 0, "diagonal") for e in self.extra_edges]
        return out


def _is_quad_cycle_right_angled(cg: CoxeterGraph) -> bool:
    g = cg.graph
    return (
        len(g.vertices) == 4
        and len(g.edges) == 4
        and all(g.degree(v) == 2 for v in g.vertices)
        and all(n == 2 for n in cg.weights.values())
    )


def completion(cg: CoxeterGraph) -> CompletedCoxeterGraph:
    quads = [f for f in cg.faces_of_kind(FaceKind.PARABOLIC) if f.side_count == 4]
    if _is_quad_cycle_right_angled(cg):
        quads = quads[:1]
    elif len(cg.graph.vertices) < 5:
        quads = []
    extra = []
    triangles = []
    for f in quads:
        v1, v2, v3, v4 = f.boundary
        extra.append(ExtraEdge(v1, v3, f))
        extra.append(ExtraEdge(v2, v4, f))
        triangles += [(v1, v2, v3), (v1, v3, v4), (v2, v3, v4), (v1, v2, v4)]
    return CompletedCoxeterGraph(cg, tuple(extra), tuple(triangles), tuple(quads))


# ----------------------------------------------------------------------
# realizability


@dataclass(frozen=True)
class RealizabilityReport:
    verdict: str  # "realizable" | "not realizable" | "undecided"
    route: str  # "cycles" | "prism" | "none"
    triangles_ok: bool  # heavy 3-cycles bound elliptic or parabolic faces
    quads_ok: bool  # 4-cycles of sum 2 pi bound a parabolic face or two elliptic ones
    violation: dict | None = None
    prism: dict | None = None

    @property
    def realizable(self) -> bool | None:
        return {"realizable": True, "not realizable": False}.get(self.verdict)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "route": self.route,
            "heavy_triangles_bound_faces": self.triangles_ok,
            "right_quadrilaterals_bound_faces": self.quads_ok,
            "violation": self.violation,
            "prism": self.prism,
        }


def frac_doc(q: Fraction) -> dict:
    return {"num": q.numerator, "den": q.denominator}


def _completion_cycles(comp: CompletedCoxeterGraph):
    """Enumerate 3- and 4-cycles of the completion as lists of edge ids."""
    edges = comp.edge_list()
    adj: dict[str, list[tuple[str, int]]] = {}
    for i, (u, v, _, _) in enumerate(edges):
        adj.setdefault(u, []).append((v, i))
        adj.setdefault(v, []).append((u, i))
    verts = sorted(adj)
    order = {v: i for i, v in enumerate(verts)}
    tri, quad = [], []
    for s in verts:
        # cycles whose smallest vertex is s
        def walk(path, eids):
            last = path[-1]
            for w, eid in adj[last]:
                if eid in eids:
                    continue
                if w == s and len(path) in (3, 4):
                    cyc = (tuple(path), tuple(eids + [eid]))
                    (tri if len(path) == 3 else quad).append(cyc)
                elif order[w] > order[s] and w not in path and len(path) < 4:
                    walk(path + [w], eids + [eid])

        walk([s], [])
    # each cycle is found twice (two directions); keep one per edge set
    def dedup(cycles):
        seen, out = set(), []
        for verts_, eids in cycles:
            key = frozenset(eids)
            if key not in seen:
                seen.add(key)
                out.append((verts_, eids))
        return out

    return edges, dedup(tri), dedup(quad)


def cycle_conditions(cg: CoxeterGraph):
    """Check the short-cycle conditions on the completion: every 3-cycle of
    angle sum at least pi bounds an elliptic or parabolic face (or an
    extraneous triangle), and every 4-cycle of sum 2 pi bounds a parabolic
    face or a pair of adjacent elliptic triangles.

    Returns ``(a_ok, b_ok, violation)`` where the violation describes the
    first offending cycle found.
    """
    comp = completion(cg)
    edges, tris, quads = _completion_cycles(comp)
    classes = cg.classes()
    face_edge_sets = {}
    for f, c in classes.items():
        face_edge_sets.setdefault(frozenset(f.edges()), []).append((f, c))

    id_of = {}
    for i, (u, v, _, tag) in enumerate(edges):
        if tag == "graph":
            id_of[(u, v)] = i
    diag_id = {}
    for i, (u, v, _, tag) in enumerate(edges):
        if tag == "diagonal":
            diag_id[(i)] = (u, v)
    # extraneous triangles as edge-id sets
    extraneous = set()
    k = 0
    for f in comp.completed_faces:
        v1, v2, v3, v4 = f.boundary
        base = len(cg.weights) + 2 * k
        d13, d24 = base, base + 1
        g = lambda a, b: id_of[edge_key(a, b)]
        extraneous.add(frozenset({g(v1, v2), g(v2, v3), d13}))
        extraneous.add(frozenset({g(v3, v4), g(v4, v1), d13}))
        extraneous.add(frozenset({g(v2, v3), g(v3, v4), d24}))
        extraneous.add(frozenset({g(v4, v1), g(v1, v2), d24}))
        k += 1
    parabolic_quads = {frozenset(id_of[e] for e in f.edges()) for f in comp.completed_faces}
    for f, c in classes.items():
        if c.kind == FaceKind.PARABOLIC and f.side_count == 4:
            parabolic_quads.add(frozenset(id_of[e] for e in f.edges()))

    def cyc_sum(eids):
        return sum((angle(edges[i][2]) for i in eids), Fraction(0))

    a_ok, b_ok, violation = True, True, None
    for verts, eids in tris:
        s = cyc_sum(eids)
        if s < 1:
            continue
        key = frozenset(eids)
        ok = key in extraneous
        if not ok and all(edges[i][3] == "graph" for i in eids):
            vk = frozenset(edge_key(edges[i][0], edges[i][1]) for i in eids)
            ok = any(c.kind in (FaceKind.ELLIPTIC, FaceKind.PARABOLIC) for _, c in face_edge_sets.get(vk, []))
        if not ok:
            a_ok = False
            if violation is None:
                violation = {"condition": "heavy triangle", "cycle": list(verts), "weight_sum": frac_doc(s)}
    elliptic_tris = [frozenset(id_of[e] for e in f.edges()) for f in cg.faces_of_kind(FaceKind.ELLIPTIC)]
    for verts, eids in quads:
        s = cyc_sum(eids)
        if s != 2:
            continue
        key = frozenset(eids)
        ok = key in parabolic_quads
        if not ok:
            for t1, t2 in combinations(elliptic_tris, 2):
                shared = t1 & t2
                if len(shared) == 1 and (t1 | t2) - shared == key:
                    ok = True
                    break
        if not ok:
            b_ok = False
            if violation is None:
                violation = {"condition": "right quadrilateral", "cycle": list(verts), "weight_sum": frac_doc(s)}
    return a_ok, b_ok, violation


def prism_labels(cg: CoxeterGraph):
    """Identify the graph of the prism criterion: a triangle v1v2v3 with two
    further vertices a, b each joined to v1, v2, v3. Returns (a, b, (v1, v2, v3))
    or None."""
    g = cg.graph
    if len(g.vertices) != 5 or len(g.edges) != 9:
        return None
    deg3 = sorted(v for v in g.vertices if g.degree(v) == 3)
    deg4 = sorted(v for v in g.vertices if g.degree(v) == 4)
    if len(deg3) != 2 or len(deg4) != 3:
        return None
    a, b = deg3
    if g.has_edge(a, b):
        return None
    if not all(g.has_edge(x, y) for x, y in combinations(deg4, 2)):
        return None
    return a, b, tuple(deg4)


def prism_conditions(cg: CoxeterGraph, labels) -> dict:
    a, b, vs = labels
    w = cg.angle
    s1 = w(vs[0], vs[1]) + w(vs[1], vs[2]) + w(vs[2], vs[0])
    cond1 = s1 < 1
    failures = []
    for i, j, k in [(0, 1, 2), (0, 2, 1), (1, 2, 0), (1, 0, 2), (2, 0, 1), (2, 1, 0)]:
        vi, vj, vk = vs[i], vs[j], vs[k]
        core = w(a, vi) + w(vi, b) + w(b, vj) + w(vj, a)
        t1 = core + w(a, vk) + w(vk, b)
        t2 = core + w(vi, vk) + w(vk, vj)
        if not t1 < 3:
            failures.append({"triple": [vi, vj, vk], "sum": frac_doc(t1), "kind": "apices"})
        if not t2 < 3:
            failures.append({"triple": [vi, vj, vk], "sum": frac_doc(t2), "kind": "triangle"})
    return {
        "a": a,
        "b": b,
        "triangle": list(vs),
        "triangle_below_pi": cond1,
        "triangle_sum": frac_doc(s1),
        "paths_below_3pi": not failures,
        "path_failures": failures,
    }


def check_realizable(cg: CoxeterGraph) -> RealizabilityReport:
    a_ok, b_ok, violation = cycle_conditions(cg)
    has_hyp = bool(cg.faces_of_kind(FaceKind.HYPERBOLIC))
    if has_hyp or len(cg.graph.vertices) >= 6:
        verdict = "realizable" if a_ok and b_ok else "not realizable"
        return RealizabilityReport(verdict, "cycles", a_ok, b_ok, violation)
    labels = prism_labels(cg)
    if labels is not None:
        pc = prism_conditions(cg, labels)
        ok = pc["triangle_below_pi"] and pc["paths_below_3pi"]
        return RealizabilityReport("realizable" if ok else "not realizable", "prism", a_ok, b_ok, None, pc)
    return RealizabilityReport("undecided", "none", a_ok, b_ok, violation)


# ----------------------------------------------------------------------
# connection predicates


@dataclass(frozen=True)
class Witness:
    kind: str
    vertices: tuple[str, ...]
    face: tuple[str, ...] | None = None

    def to_dict(self) -> dict:
        return {"kind": self.kind, "vertices": list(self.vertices), "face": None if self.face is None else list(self.face)}


def elliptic_connections(cg: CoxeterGraph) -> list[Witness]:
    out = []
    seen = set()
    for f in cg.faces_of_kind(FaceKind.HYPERBOLIC):
        on_face = f.vertex_set()
        for e in sorted(cg.weights):
            u, v = e
            if cg.weights[e] == 0 or u not in on_face or v not in on_face:
                continue
            if f.consecutive(u, v) or e in seen:
                continue
            seen.add(e)
            out.append(Witness("elliptic connection", e, f.boundary))
    return out


def right_angled_2_connections(cg: CoxeterGraph) -> list[Witness]:
    g = cg.graph
    out = []
    seen = set()
    for f in cg.faces_of_kind(FaceKind.HYPERBOLIC):
        on_face = f.vertex_set()
        for x in g.vertices:
            if x in on_face:
                continue
            right = sorted(u for u in g.neighbours(x) if u in on_face and cg.weight(x, u) == 2)
            for v, w in combinations(right, 2):
                if f.consecutive(v, w):
                    continue
                key = (v, x, w, f.boundary)
                if key not in seen:
                    seen.add(key)
                    out.append(Witness("right-angled 2-connection", (v, x, w), f.boundary))
    return out


def limit_set_connected(cg: CoxeterGraph) -> tuple[bool, Witness | None]:
    g = cg.graph
    if len(g.vertices) > 2:
        cut = cut_set(g, 2)
        if cut is not None:
            return False, Witness("cut vertex", tuple(cut))
    conns = elliptic_connections(cg)
    if conns:
        return False, conns[0]
    return True, None


def _is_tetrahedron(g: PlaneGraph) -> bool:
    return len(g.vertices) == 4 and len(g.edges) == 6


def apex_weight_test(cg: CoxeterGraph, face: Face) -> tuple[bool, Fraction, tuple[str, ...]]:
    """Strict test ``sum of the three apex edge angles < pi`` for a tetrahedron
    whose hyperbolic face is ``face``."""
    (apex,) = set(cg.graph.vertices) - face.vertex_set()
    s = sum((cg.angle(apex, v) for v in face.boundary), Fraction(0))
    return s < 1, s, (apex, *face.boundary)


def is_acylindrical(cg: CoxeterGraph) -> tuple[bool, Witness | None]:
    g = cg.graph
    if len(g.vertices) < 4:
        raise GraphError("acylindricity needs at least 4 vertices")
    hyp = cg.faces_of_kind(FaceKind.HYPERBOLIC)
    if _is_tetrahedron(g) and len(hyp) == 1:
        ok, s, verts = apex_weight_test(cg, hyp[0])
        return ok, None if ok else Witness("apex weight sum >= pi", verts, hyp[0].boundary)
    cut = cut_set(g, 3)
    if cut is not None:
        return False, Witness("separating set", tuple(cut))
    conns = right_angled_2_connections(cg)
    if conns:
        return False, conns[0]
    return True, None


def _fresh(name: str, taken: set[str]) -> str:
    out, k = name, 1
    while out in taken:
        out = f"{name}_{k}"
        k += 1
    taken.add(out)
    return out


def hat_graph(cg: CoxeterGraph) -> CoxeterGraph:
    """Cone off every hyperbolic face with a new vertex joined at angle pi/2."""
    g = cg.graph
    hyp = cg.faces_of_kind(FaceKind.HYPERBOLIC)
    if not hyp:
        return cg
    rot = {v: list(g.neighbours(v)) for v in g.vertices}
    weights = dict(cg.weights)
    taken = set(g.vertices)
    verts = list(g.vertices)
    for idx, f in enumerate(sorted(hyp, key=lambda f: f.boundary)):
        if not f.is_jordan():
            raise GraphError(f"hyperbolic face {f.boundary} is not a Jordan domain")
        hub = _fresh(f"hat{idx}", taken)
        verts.append(hub)
        rot[hub] = cone_into_face(rot, f, hub)
        for u in f.boundary:
            weights[edge_key(hub, u)] = 2
    out = CoxeterGraph(PlaneGraph(verts, rot), weights, check_normalization=False)
    if out.faces_of_kind(FaceKind.HYPERBOLIC):
        raise AssertionError("hat graph still has a hyperbolic face")
    return out


def cone_into_face(rot: dict[str, list[str]], face: Face, hub: str) -> list[str]:
    """Insert ``hub`` into the rotations of the vertices of ``face``.

    Mutates ``rot`` and returns the rotation of the hub. The face must be
    a simple cycle.
    """
    b = face.boundary
    n = len(b)
    for i, u in enumerate(b):
        prev_, next_ = b[i - 1], b[(i + 1) % n]
        r = rot[u]
        # corner of the face at u lies between next_ and prev_ (ccw)
        j = r.index(next_)
        r.insert(j + 1, hub)
        assert r[(j + 2) % len(r)] == prev_, "face corner mismatch"
    return list(b)


def topological_complexity(cg: CoxeterGraph) -> int:
    hyp = cg.faces_of_kind(FaceKind.HYPERBOLIC)
    if not hyp:
        raise GraphError("no hyperbolic face")
    return max(f.side_count for f in hyp)
