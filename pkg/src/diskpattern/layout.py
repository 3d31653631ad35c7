"""Disk pattern layouts by radius iteration, with diagnostics and SVG output."""

from __future__ import annotations

import cmath
import json
import math
from collections import deque
from dataclasses import dataclass, field
from typing import Mapping
from xml.sax.saxutils import escape

from .conformal_geom import Circle
from .coxeter import angle
from .graph_core import GraphError, edge_key
from .subdivision import SubdivisionGraph

ANGLE_TOL = 1e-12
MAX_SWEEPS = 100_000


class LayoutNonConvergence(RuntimeError):
    pass


def edge_angle(sg: SubdivisionGraph, u: str, v: str) -> float:
    """Intersection angle of the disks of an edge, in radians."""
    return float(angle(sg.weight(u, v))) * math.pi


def edge_length(ru: float, rv: float, omega: float) -> float:
    return math.sqrt(ru * ru + rv * rv + 2 * ru * rv * math.cos(omega))


def _corner(l_opp: float, l1: float, l2: float) -> float:
    c = (l1 * l1 + l2 * l2 - l_opp * l_opp) / (2 * l1 * l2)
    return math.acos(max(-1.0, min(1.0, c)))


@dataclass
class DiskPattern:
    disks: dict[str, Circle]
    source: SubdivisionGraph
    normalization: str = "boundary radii fixed; first face edge on the positive real axis"
    sweeps: int = 0

    def to_dict(self) -> dict:
        return {v: self.disks[v].to_dict() for v in sorted(self.disks)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    @property
    def radii(self) -> dict[str, float]:
        return {v: c.r for v, c in self.disks.items()}


class _Triangles:
    def __init__(self, sg: SubdivisionGraph):
        self.sg = sg
        faces = sg.interior_faces()
        for f in faces:
            if f.side_count != 3:
                raise GraphError(f"interior face {f.boundary} is not a triangle")
        self.faces = [f.boundary for f in faces]
        self.at: dict[str, list[tuple[str, str]]] = {v: [] for v in sg.graph.vertices}
        for u, v, w in self.faces:
            self.at[u].append((v, w))
            self.at[v].append((w, u))
            self.at[w].append((u, v))
        self.omega = {edge_key(u, v): edge_angle(sg, u, v) for u, v in sg.graph.edges}
        for w in self.omega.values():
            if not 0 <= w <= math.pi / 2 + 1e-15:
                raise GraphError("edge angles must lie in [0, pi/2]")

    def length(self, r, u, v):
        return edge_length(r[u], r[v], self.omega[edge_key(u, v)])

    def angle_sum(self, r, v, rv=None) -> float:
        if rv is None:
            rv = r[v]
        total = 0.0
        for p, q in self.at[v]:
            rp, rq = r[p], r[q]
            total += _corner(
                edge_length(rp, rq, self.omega[edge_key(p, q)]),
                edge_length(rv, rp, self.omega[edge_key(v, p)]),
                edge_length(rv, rq, self.omega[edge_key(v, q)]),
            )
        return total


def thurston_layout(
    sg: SubdivisionGraph,
    boundary_radii: Mapping[str, float] | None = None,
    *,
    tol: float = ANGLE_TOL,
    max_sweeps: int = MAX_SWEEPS,
) -> DiskPattern:
    tri = _Triangles(sg)
    r = {v: 1.0 for v in sg.graph.vertices}
    for v, x in (boundary_radii or {}).items():
        if not sg.is_boundary(v):
            raise GraphError(f"{v!r} is not a boundary vertex")
        if x <= 0:
            raise GraphError("boundary radii must be positive")
        r[v] = float(x)
    interior = sorted(sg.interior_vertices())
    sweeps = 0
    while True:
        worst = max((abs(tri.angle_sum(r, v) - 2 * math.pi) for v in interior), default=0.0)
        if worst < tol:
            break
        sweeps += 1
        if sweeps > max_sweeps:
            raise LayoutNonConvergence(f"angle residual {worst} after {max_sweeps} sweeps")
        for v in interior:
            r[v] = _solve_radius(tri, r, v)
    return DiskPattern(_place(sg, tri, r), sg, sweeps=sweeps)


def _solve_radius(tri: _Triangles, r, v) -> float:
    """Bracketed root of ``angle_sum = 2 pi`` in log-radius.

    The angle sum decreases as the radius grows, so the root is bracketed
    by expanding from the current radius; the bracket is then shrunk by
    regula falsi with the Illinois modification, which keeps the bracket
    like bisection but needs far fewer evaluations.
    """
    target = 2 * math.pi
    g = lambda t: tri.angle_sum(r, v, math.exp(t)) - target
    t0 = math.log(r[v])
    g0 = g(t0)
    if g0 == 0:
        return r[v]
    step = 1e-3 if g0 > 0 else -1e-3  # positive residual: radius too small
    lo, glo = t0, g0
    hi, ghi = t0 + step, g(t0 + step)
    while (ghi > 0) == (g0 > 0):
        lo, glo = hi, ghi
        step *= 2
        hi = t0 + step
        if abs(hi) > 690:
            raise LayoutNonConvergence("radius out of floating range")
        ghi = g(hi)
    side = 0
    for _ in range(200):
        mid = (lo * ghi - hi * glo) / (ghi - glo)
        if not min(lo, hi) < mid < max(lo, hi):
            mid = (lo + hi) / 2
        gm = g(mid)
        if gm == 0 or abs(hi - lo) < 1e-15 * max(1.0, abs(mid)):
            return math.exp(mid)
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
            if side == -1:
                ghi /= 2
            side = -1
        else:
            hi, ghi = mid, gm
            if side == 1:
                glo /= 2
            side = 1
        if abs(gm) < 1e-15:
            return math.exp(mid)
    return math.exp(mid)


def _place(sg: SubdivisionGraph, tri: _Triangles, r) -> dict[str, Circle]:
    faces = sorted(tri.faces)
    u, v, _ = faces[0]
    pos = {u: 0j, v: complex(tri.length(r, u, v), 0.0)}
    by_edge = {}
    for f in faces:
        for i in range(3):
            by_edge.setdefault(edge_key(f[i], f[(i + 1) % 3]), []).append(f)
    done = set()
    queue = deque([faces[0]])
    while queue:
        f = queue.popleft()
        if f in done:
            continue
        # rotate so the first two vertices are already placed
        for i in range(3):
            a, b, c = f[i], f[(i + 1) % 3], f[(i + 2) % 3]
            if a in pos and b in pos:
                break
        else:
            queue.append(f)
            continue
        if c not in pos:
            lab, lac, lbc = tri.length(r, a, b), tri.length(r, a, c), tri.length(r, b, c)
            alpha = _corner(lbc, lab, lac)
            direction = (pos[b] - pos[a]) / abs(pos[b] - pos[a])
            pos[c] = pos[a] + lac * direction * cmath.exp(1j * alpha)
        done.add(f)
        for i in range(3):
            for g in by_edge[edge_key(f[i], f[(i + 1) % 3])]:
                if g not in done:
                    queue.append(g)
    missing = set(sg.graph.vertices) - set(pos)
    if missing:
        raise GraphError(f"could not place {sorted(missing)}")
    return {v: Circle.from_center(pos[v], r[v]) for v in sg.graph.vertices}


# ----------------------------------------------------------------------
# diagnostics


@dataclass
class LayoutResiduals:
    edge: dict[tuple[str, str], float]
    angle_sum: dict[str, float]
    overlaps: list[tuple[str, str]] = field(default_factory=list)

    @property
    def max_edge(self) -> float:
        return max(self.edge.values(), default=0.0)

    @property
    def max_angle_sum(self) -> float:
        return max(self.angle_sum.values(), default=0.0)

    @property
    def max(self) -> float:
        return max(self.max_edge, self.max_angle_sum)

    def to_dict(self) -> dict:
        return {
            "max_edge_residual": self.max_edge,
            "max_angle_sum_residual": self.max_angle_sum,
            "edge": {f"{u}-{v}": x for (u, v), x in sorted(self.edge.items())},
            "angle_sum": dict(sorted(self.angle_sum.items())),
            "overlaps": [list(p) for p in self.overlaps],
        }


def layout_residuals(p: DiskPattern) -> LayoutResiduals:
    sg = p.source
    d = p.disks
    edge = {}
    for u, v in sorted(sg.graph.edges):
        om = edge_angle(sg, u, v)
        want = d[u].r ** 2 + d[v].r ** 2 + 2 * d[u].r * d[v].r * math.cos(om)
        got = abs(d[u].center - d[v].center) ** 2
        edge[(u, v)] = abs(got - want) / (d[u].r + d[v].r) ** 2
    sums = {}
    tri = _Triangles(sg)
    for v in sg.interior_vertices():
        total = 0.0
        for a, b in tri.at[v]:
            za, zb = d[a].center - d[v].center, d[b].center - d[v].center
            total += abs(cmath.phase(zb / za))
        sums[v] = abs(total - 2 * math.pi)
    overlaps = []
    verts = sorted(sg.graph.vertices)
    for i, u in enumerate(verts):
        for v in verts[i + 1 :]:
            if sg.graph.has_edge(u, v):
                continue
            gap = abs(d[u].center - d[v].center) - d[u].r - d[v].r
            if gap < -1e-8 * (d[u].r + d[v].r):
                overlaps.append((u, v))
    return LayoutResiduals(edge, sums, overlaps)


# ----------------------------------------------------------------------
# SVG


def render_svg(p: DiskPattern, *, labels: bool = False, shade_interstice: bool = False, size: int = 600, margin: float = 0.05) -> str:
    circles = p.disks
    xs = [c.cx - c.r for c in circles.values()] + [c.cx + c.r for c in circles.values()]
    ys = [c.cy - c.r for c in circles.values()] + [c.cy + c.r for c in circles.values()]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0) * (1 + 2 * margin)
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    scale = size / span
    tx = lambda x: (x - cx) * scale + size / 2
    ty = lambda y: size / 2 - (y - cy) * scale
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        "<style>.boundary{fill:#d9e6f5;stroke:#1f4e8c;stroke-width:1.5}"
        ".interior{fill:none;stroke:#333;stroke-width:1}"
        ".interstice{fill:#f4e3c1;stroke:none}"
        ".label{font:10px sans-serif;text-anchor:middle;dominant-baseline:middle}</style>",
    ]
    sg = p.source
    if shade_interstice:
        pts = " ".join(f"{tx(circles[v].cx):.6f},{ty(circles[v].cy):.6f}" for v in sg.boundary)
        out.append(f'<polygon class="interstice" points="{pts}"/>')
    for v in sorted(circles, key=lambda v: (not sg.is_boundary(v), v)):
        c = circles[v]
        cls = "boundary" if sg.is_boundary(v) else "interior"
        out.append(
            f'<circle class="{cls}" id="{escape(v, {chr(34): "&quot;"})}" cx="{tx(c.cx):.6f}" cy="{ty(c.cy):.6f}" r="{c.r * scale:.6f}"/>'
        )
    if labels:
        for v in sorted(circles):
            c = circles[v]
            out.append(f'<text class="label" x="{tx(c.cx):.6f}" y="{ty(c.cy):.6f}">{escape(v)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def parse_pattern(doc: str | Mapping, sg: SubdivisionGraph) -> DiskPattern:
    data = json.loads(doc) if isinstance(doc, str) else doc
    disks = {v: Circle(float(c["cx"]), float(c["cy"]), float(c["r"])) for v, c in data.items()}
    if set(disks) != set(sg.graph.vertices):
        raise GraphError("pattern vertices do not match the graph")
    return DiskPattern(disks, sg, normalization="loaded")
