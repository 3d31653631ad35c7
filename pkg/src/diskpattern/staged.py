"""Staged metric extension from a subdivision to its hub triangulation.

Starting from an admissible metric on the subdivision graph, interior
vertices are processed one at a time. Processing ``x`` drops a new vertex
into every non-triangular face at ``x``, joined to ``x`` and to the two
neighbours of ``x`` on that face, and gives it a weight computed from the
distance profile of the neighbours of ``x`` to the ``a`` side. Collapsing
all the new vertices of a face onto its hub pushes the final metric onto
the triangulation, where its area is at most ``4N + 1`` times the original.

Boundary vertices carry weight zero, so they are not processed as stages;
a closing step gives them zero-weight vertices so that the quotient onto
the triangulation is surjective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

from .extremal import ADMISSIBILITY_SLACK, EWResult, extremal_width
from .families import CONNECTING, Family, proper_distances, shortest_proper_path
from .graph_core import GraphError, PlaneGraph
from .subdivision import SubdivisionGraph, TriangulatedExtension, triangulate

CERTIFICATE_SLACK = 1e-12


class InadmissibleMetric(ValueError):
    pass


class IncompleteTrace(ValueError):
    pass


# ----------------------------------------------------------------------
# the index sequences on a single fan


@dataclass
class FanProfile:
    """Weights for one processed vertex, in fan coordinates.

    Neighbours are indexed ``0 .. s-1`` counterclockwise with the fan
    occupying ``0 .. l-1``; face ``i`` lies between neighbours ``i`` and
    ``i + 1 (mod s)``.
    """

    sequence: dict[int, int]  # n -> j_n
    weights: dict[int, float]  # face index -> weight
    f: list[float]
    p: int
    q: int


def index_sequence(reduced: Sequence[float], l: int) -> dict[int, int]:
    """Running minima of ``reduced`` over ``0 .. l-1`` outward from the
    leftmost global minimizer; keys run from ``p <= 0`` to ``q >= 0``."""
    if l < 1:
        raise ValueError("empty fan")

    def argmin(lo, hi, last):
        best = min(reduced[lo:hi])
        hits = [i for i in range(lo, hi) if reduced[i] == best]
        return hits[-1] if last else hits[0]

    seq = {0: argmin(0, l, last=False)}
    n = 0
    while seq[n] < l - 1:
        seq[n + 1] = argmin(seq[n] + 1, l, last=False)
        n += 1
    n = 0
    while seq[n] > 0:
        seq[n - 1] = argmin(0, seq[n], last=True)
        n -= 1
    return seq


def fan_weights(
    reduced: Sequence[float], full: Sequence[float], d: float, l: int, s: int, open_faces: set[int] | None = None
) -> FanProfile:
    """Weights of the new vertices around one processed vertex.

    ``reduced[i]`` is the distance from neighbour ``i`` to the target side
    minus its own weight, ``full[i]`` the distance itself, ``d`` the
    distance from the processed vertex. Only faces listed in
    ``open_faces`` (the non-triangular ones) receive weight; ``None``
    means all faces.
    """
    seq = index_sequence(reduced, l)
    p, q = min(seq), max(seq)
    red = lambda n: d if n in (q + 1, p - 1) else reduced[seq[n]]
    weights: dict[int, float] = {}

    def put(face, w):
        face %= s
        if open_faces is None or face in open_faces:
            weights[face] = weights.get(face, 0.0) + w

    for n in range(0, q + 1):
        put(seq[n], max(0.0, red(n + 1) - full[seq[n]]))
    for n in range(p - 1, 0):
        put(seq[n + 1] - 1, max(0.0, red(n) - full[seq[n + 1]]))

    f = [d] * s
    for n in range(p, 0):
        for i in range(seq[n], seq[n + 1]):
            f[i] = reduced[seq[n]]
    f[seq[0]] = reduced[seq[0]]
    for n in range(0, q):
        for i in range(seq[n] + 1, seq[n + 1] + 1):
            f[i] = reduced[seq[n + 1]]
    return FanProfile(seq, weights, f, p, q)


# ----------------------------------------------------------------------
# trace


@dataclass(frozen=True)
class StageRecord:
    vertex: str
    neighbours: tuple[str, ...]  # relabelled counterclockwise, fan first
    fan_size: int  # l
    m: float
    d: float
    e: float
    neighbour_m: tuple[float, ...]
    neighbour_d: tuple[float, ...]
    neighbour_e: tuple[float, ...]
    sequence: dict[int, int]
    f: tuple[float, ...]
    new_vertices: dict[str, float]  # staged vertex -> weight
    restriction_ok: bool  # old vertices keep their weights
    shortest: float  # shortest member length after the stage
    admissible: bool
    weight_sum: float  # total new weight, at most twice the vertex weight
    weight_bound_ok: bool
    f_below_reduced: bool
    monotone: bool
    closing: bool = False

    @property
    def d_reduced(self) -> float:
        return self.d - self.m

    @property
    def e_reduced(self) -> float:
        return self.e - self.m

    @property
    def neighbour_d_reduced(self) -> tuple[float, ...]:
        return tuple(d - m for d, m in zip(self.neighbour_d, self.neighbour_m))

    @property
    def neighbour_e_reduced(self) -> tuple[float, ...]:
        return tuple(e - m for e, m in zip(self.neighbour_e, self.neighbour_m))

    @property
    def properties_hold(self) -> bool:
        return self.restriction_ok and self.weight_bound_ok and (self.closing or self.admissible)

    def to_dict(self) -> dict:
        num = lambda x: None if math.isinf(x) else x
        return {
            "vertex": self.vertex,
            "closing": self.closing,
            "neighbours": list(self.neighbours),
            "fan_size": self.fan_size,
            "m": self.m,
            "d": num(self.d),
            "e": num(self.e),
            "d_reduced": num(self.d_reduced),
            "e_reduced": num(self.e_reduced),
            "neighbour_m": list(self.neighbour_m),
            "neighbour_d": [num(x) for x in self.neighbour_d],
            "neighbour_e": [num(x) for x in self.neighbour_e],
            "sequence": {str(n): j for n, j in sorted(self.sequence.items())},
            "f": [num(x) for x in self.f],
            "new_vertices": dict(self.new_vertices),
            "checks": {
                "restriction": self.restriction_ok,
                "admissible": self.admissible,
                "shortest": self.shortest,
                "weight_sum": self.weight_sum,
                "weight_bound": self.weight_bound_ok,
                "f_below_reduced": self.f_below_reduced,
                "monotone": self.monotone,
            },
        }


@dataclass(frozen=True)
class StagedMetricTrace:
    """Immutable snapshot of the staged construction after some stages."""

    original: SubdivisionGraph
    family: Family
    extension: TriangulatedExtension
    graph: SubdivisionGraph  # current staged graph
    metric: dict[str, float]
    base_metric: dict[str, float]
    origin: dict[str, str]  # staged vertex -> hub of its face
    residual: dict[str, tuple[str, ...]]  # hub -> remaining polygon, walk order
    records: tuple[StageRecord, ...] = ()
    processed: frozenset[str] = frozenset()
    closed: bool = False

    @property
    def complete(self) -> bool:
        return self.closed

    def jsonl(self) -> str:
        import json

        return "\n".join(json.dumps(r.to_dict(), sort_keys=True) for r in self.records)


def _targets(sg: SubdivisionGraph, family: Family) -> tuple[tuple[str, ...], tuple[str, ...]]:
    if family.kind == CONNECTING:
        return (family.a,), (family.b,)
    return sg.arcs(family.a, family.b)


def _shortest(sg: SubdivisionGraph, metric: Mapping[str, float], family: Family) -> float:
    return shortest_proper_path(sg, metric, family)[1]


def start_trace(sg: SubdivisionGraph, family: Family, metric: Mapping[str, float]) -> StagedMetricTrace:
    family.validate(sg)
    metric = {v: float(metric.get(v, 0.0)) for v in sg.graph.vertices}
    if any(x < 0 for x in metric.values()):
        raise InadmissibleMetric("metric has negative values")
    if any(metric[v] != 0.0 for v in sg.boundary):
        raise InadmissibleMetric("metric is not zero on the boundary")
    length = _shortest(sg, metric, family)
    if length < 1 - ADMISSIBILITY_SLACK:
        raise InadmissibleMetric(f"shortest member has length {length}")
    ext = triangulate(sg)
    residual = {hub: face for face, hub in ext.added_vertices.items()}
    return StagedMetricTrace(sg, family, ext, sg, metric, dict(metric), {}, residual)


def _insert(rot: dict[str, list[str]], walk_prev: str, x: str, walk_next: str, y: str, nxt_of_next: str):
    """Drop ``y`` into the face corner ``walk_prev -> x -> walk_next``."""
    r = rot[x]
    r.insert(r.index(walk_next) + 1, y)
    r = rot[walk_next]
    r.insert(r.index(nxt_of_next) + 1, y)
    r = rot[walk_prev]
    r.insert(r.index(x) + 1, y)
    rot[y] = [walk_prev, x, walk_next]


def _add_vertices(trace: StagedMetricTrace, x: str, weights: Mapping[str, float]) -> tuple[SubdivisionGraph, dict, dict, dict, dict[str, float]]:
    """Give ``x`` a new vertex in every residual polygon through it."""
    g = trace.graph.graph
    rot = {v: list(g.neighbours(v)) for v in g.vertices}
    verts = list(g.vertices)
    taken = set(verts)
    origin = dict(trace.origin)
    residual = dict(trace.residual)
    metric = dict(trace.metric)
    added = {}
    for hub in sorted(residual):
        cyc = residual[hub]
        if x not in cyc:
            continue
        i = cyc.index(x)
        prev_, next_ = cyc[i - 1], cyc[(i + 1) % len(cyc)]
        after_next = cyc[(i + 2) % len(cyc)]
        y = f"{hub}:{x}"
        while y in taken:
            y += "'"
        taken.add(y)
        verts.append(y)
        _insert(rot, prev_, x, next_, y, after_next)
        origin[y] = hub
        residual[hub] = cyc[:i] + (y,) + cyc[i + 1 :]
        metric[y] = float(weights.get(hub, 0.0))
        added[y] = metric[y]
    new = SubdivisionGraph(PlaneGraph(verts, rot), trace.graph.boundary)
    return new, origin, residual, metric, added


def _fan(sg: SubdivisionGraph, family: Family, x: str, in_fan: set[str], parent: Mapping[str, str | None]) -> int:
    """Position in ``rot(x)`` of the first fan neighbour after the outer gap."""
    g = sg.graph
    nbrs = list(g.neighbours(x))
    tree = set()
    for u in in_fan:
        v = u
        while parent.get(v) is not None:
            tree.add(frozenset((v, parent[v])))
            v = parent[v]
        tree.add(frozenset((x, u)))
    faces = g.faces()
    idx = {id(f): i for i, f in enumerate(faces)}
    uf = list(range(len(faces)))

    def find(i):
        while uf[i] != i:
            uf[i] = uf[uf[i]]
            i = uf[i]
        return i

    outer = idx[id(sg.outer_face())]
    for u, v in g.edges:
        if frozenset((u, v)) in tree:
            continue
        i, j = idx[id(g.face_of_dart(u, v))], idx[id(g.face_of_dart(v, u))]
        if family.kind != CONNECTING and outer in (i, j):
            continue
        uf[find(i)] = find(j)
    if family.kind == CONNECTING:
        special = {find(outer)}
    else:
        _, far = sg.arcs(family.a, family.b)
        special = set()
        for v in far:
            for w in g.neighbours(v):
                k = idx[id(g.face_of_dart(v, w))]
                if k != outer:
                    special.add(find(k))
    s = len(nbrs)
    fan_pos = [i for i, u in enumerate(nbrs) if u in in_fan]
    for t, i in enumerate(fan_pos):
        j = fan_pos[(t + 1) % len(fan_pos)]
        # corners i, i+1, ..., j-1 between consecutive fan neighbours
        k = i
        while True:
            if find(idx[id(g.face_of_dart(x, nbrs[k]))]) in special:
                return j
            k = (k + 1) % s
            if k == j:
                break
    raise GraphError(f"no outer gap found around {x!r}")


def extend_metric_step(trace: StagedMetricTrace, v_k: str, a: str | None = None, b: str | None = None) -> StagedMetricTrace:
    fam = trace.family
    if (a is not None and a != fam.a) or (b is not None and b != fam.b):
        raise ValueError("pair does not match the trace")
    if trace.closed:
        raise ValueError("trace already closed")
    sg = trace.graph
    if v_k in trace.processed or v_k not in trace.original.graph.vertices:
        raise ValueError(f"{v_k!r} is not an unprocessed original vertex")
    if sg.is_boundary(v_k):
        raise ValueError("boundary vertices are handled by close_trace")
    mu = trace.metric
    near, far = _targets(sg, fam)
    dist, _ = proper_distances(sg, mu, near)
    dist_x, parent = proper_distances(sg, mu, near, exclude=v_k)
    edist, _ = proper_distances(sg, mu, far)
    x = v_k
    nbrs = list(sg.graph.neighbours(x))
    s = len(nbrs)
    m = mu[x]
    d = dist[x]
    e = edist[x]
    red = lambda u: dist[u] - mu[u]
    in_fan = {u for u in nbrs if red(u) < d - 1e-12} if math.isfinite(d) else set()

    hubs_at = {}  # face index (fan coordinates) -> hub
    if in_fan:
        start = _fan(sg, fam, x, in_fan, parent)
        order = nbrs[start:] + nbrs[:start]
        l = max(i for i, u in enumerate(order) if u in in_fan) + 1
    else:
        order, l = nbrs, 0
    for hub, cyc in trace.residual.items():
        if x in cyc:
            nxt = cyc[(cyc.index(x) + 1) % len(cyc)]
            hubs_at[order.index(nxt)] = hub

    reduced = [red(u) for u in order]
    full = [dist[u] for u in order]
    if l:
        prof = fan_weights(reduced, full, d, l, s, set(hubs_at))
        seq, f = prof.sequence, prof.f
        monotone = all(
            reduced[seq[n]] <= reduced[seq[n + 1]] for n in range(0, prof.q)
        ) and all(reduced[seq[n]] <= reduced[seq[n - 1]] for n in range(0, prof.p, -1))
        f_ok = all(reduced[i] >= f[i] - 1e-12 for i in range(s))
        weights = {hubs_at[i]: w for i, w in prof.weights.items()}
    else:
        seq, f, monotone, f_ok, weights = {}, [d] * s, True, True, {}

    new, origin, residual, metric, added = _add_vertices(trace, x, weights)
    restriction = all(metric[v] == mu[v] for v in mu)
    shortest = _shortest(new, metric, fam)
    total = sum(added.values())
    rec = StageRecord(
        vertex=x,
        neighbours=tuple(order),
        fan_size=l,
        m=m,
        d=d,
        e=e,
        neighbour_m=tuple(mu[u] for u in order),
        neighbour_d=tuple(full),
        neighbour_e=tuple(edist[u] for u in order),
        sequence=dict(seq),
        f=tuple(f),
        new_vertices=added,
        restriction_ok=restriction,
        shortest=shortest,
        admissible=shortest >= 1 - ADMISSIBILITY_SLACK,
        weight_sum=total,
        weight_bound_ok=total <= 2 * m + CERTIFICATE_SLACK,
        f_below_reduced=f_ok,
        monotone=monotone,
    )
    return replace(
        trace,
        graph=new,
        metric=metric,
        origin=origin,
        residual=residual,
        records=trace.records + (rec,),
        processed=trace.processed | {x},
    )


def close_trace(trace: StagedMetricTrace) -> StagedMetricTrace:
    """Zero-weight vertices for boundary corners of non-triangular faces."""
    missing = [v for v in trace.original.interior_vertices() if v not in trace.processed]
    if missing:
        raise IncompleteTrace(f"unprocessed interior vertices: {sorted(missing)}")
    for v in sorted(trace.original.boundary):
        if not any(v in cyc for cyc in trace.residual.values()):
            continue
        mu = trace.metric
        new, origin, residual, metric, added = _add_vertices(trace, v, {})
        shortest = _shortest(new, metric, trace.family)
        rec = StageRecord(
            vertex=v, neighbours=tuple(new.graph.neighbours(v)), fan_size=0, m=0.0, d=math.nan, e=math.nan,
            neighbour_m=(), neighbour_d=(), neighbour_e=(), sequence={}, f=(), new_vertices=added,
            restriction_ok=all(metric[u] == mu[u] for u in mu), shortest=shortest,
            admissible=shortest >= 1 - ADMISSIBILITY_SLACK, weight_sum=0.0, weight_bound_ok=True,
            f_below_reduced=True, monotone=True, closing=True,
        )  # fmt: skip
        trace = replace(trace, graph=new, metric=metric, origin=origin, residual=residual, records=trace.records + (rec,))
    return replace(trace, processed=trace.processed | set(trace.original.boundary), closed=True)


def admissible_base_metric(sg: SubdivisionGraph, family: Family) -> EWResult:
    res = extremal_width(sg, family)
    if not res.finite:
        raise InadmissibleMetric(f"{family.label()} has status {res.status}")
    return res


def run_metric_extension(sg: SubdivisionGraph, family: Family, metric: Mapping[str, float] | None = None) -> StagedMetricTrace:
    """All stages in ascending vertex order, then the closing step."""
    if metric is None:
        metric = admissible_base_metric(sg, family).metric
    trace = start_trace(sg, family, metric)
    for v in sorted(sg.interior_vertices()):
        trace = extend_metric_step(trace, v)
    return close_trace(trace)


# ----------------------------------------------------------------------
# projection


@dataclass
class ProjectionCertificate:
    metric: dict[str, float]
    area: float
    base_area: float
    complexity: int
    shortest: float
    admissible: bool
    zero_on_boundary: bool

    @property
    def bound(self) -> int:
        return 4 * self.complexity + 1

    @property
    def ratio(self) -> float:
        return self.area / self.base_area if self.base_area > 0 else math.nan

    @property
    def holds(self) -> bool:
        return self.admissible and self.zero_on_boundary and self.area <= self.bound * self.base_area + CERTIFICATE_SLACK

    def to_dict(self) -> dict:
        return {
            "area": self.area,
            "base_area": self.base_area,
            "ratio": self.ratio,
            "bound": self.bound,
            "shortest": self.shortest,
            "admissible": self.admissible,
            "zero_on_boundary": self.zero_on_boundary,
            "holds": self.holds,
        }


def project_metric(trace: StagedMetricTrace, ext: TriangulatedExtension | None = None) -> ProjectionCertificate:
    if not trace.complete:
        raise IncompleteTrace("trace has not been run through every vertex")
    ext = ext if ext is not None else trace.extension
    tg = ext.graph
    out = {v: 0.0 for v in tg.graph.vertices}
    for v, x in trace.metric.items():
        out[ext.quotient(v, trace.origin)] += x
    shortest = _shortest(tg, out, trace.family)
    base = sum(x * x for x in trace.base_metric.values())
    return ProjectionCertificate(
        metric=out,
        area=sum(x * x for x in out.values()),
        base_area=base,
        complexity=trace.original.complexity,
        shortest=shortest,
        admissible=shortest >= 1 - ADMISSIBILITY_SLACK,
        zero_on_boundary=all(out[v] == 0.0 for v in tg.boundary),
    )


def preimage(trace: StagedMetricTrace, vertices) -> set[str]:
    vs = set(vertices)
    return {v for v in trace.graph.graph.vertices if trace.extension.quotient(v, trace.origin) in vs}


def induced_connected(g: PlaneGraph, vertices) -> bool:
    vs = set(vertices)
    if not vs:
        return True
    start = next(iter(vs))
    seen, stack = {start}, [start]
    while stack:
        v = stack.pop()
        for u in g.neighbours(v):
            if u in vs and u not in seen:
                seen.add(u)
                stack.append(u)
    return seen == vs


def projection_report(sg: SubdivisionGraph, a: str, b: str, *, sandwich_slack: float = 1e-7) -> dict:
    """Widths on the subdivision and its triangulation for both families,
    with the constructive certificate for each."""
    ext = triangulate(sg)
    N = sg.complexity
    report = {"pair": [a, b], "complexity": N, "factor": 4 * N + 1, "families": {}}
    ok = True
    for family in (Family.connecting(a, b), Family.separating(a, b)):
        on_g = extremal_width(sg, family)
        on_t = extremal_width(ext.graph, family)
        entry = {"ew_subdivision": on_g.width, "ew_triangulation": on_t.width, "status": [on_g.status, on_t.status]}
        if on_g.finite and on_t.finite:
            scale = max(1.0, on_t.width)
            lower = on_g.width <= on_t.width + sandwich_slack * scale
            upper = on_t.width <= (4 * N + 1) * on_g.width + sandwich_slack * scale
            trace = run_metric_extension(sg, family, on_g.metric)
            cert = project_metric(trace, ext)
            stages_ok = all(r.properties_hold for r in trace.records)
            entry.update(
                sandwich_lower=lower,
                sandwich_upper=upper,
                certificate=cert.to_dict(),
                stages=len(trace.records),
                stage_properties=stages_ok,
                staged_vertices=len(trace.origin),
            )
            ok = ok and lower and upper and cert.holds and stages_ok
        else:
            ok = False
        report["families"][family.kind] = entry
    report["holds"] = ok
    return report
