"""Circles, Moebius normalization to a round annulus, and circular widths."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

ANGULAR_TOL = 1e-10


class GeometryError(ValueError):
    pass


@dataclass(frozen=True)
class Circle:
    cx: float
    cy: float
    r: float

    def __post_init__(self):
        if not (math.isfinite(self.cx) and math.isfinite(self.cy) and math.isfinite(self.r)):
            raise GeometryError("circle has non-finite data")
        if self.r <= 0:
            raise GeometryError(f"radius must be positive, got {self.r}")

    @property
    def center(self) -> complex:
        return complex(self.cx, self.cy)

    @classmethod
    def from_center(cls, c: complex, r: float) -> "Circle":
        return cls(float(c.real), float(c.imag), float(r))

    def points(self, n: int = 16) -> list[complex]:
        return [self.center + self.r * cmath.exp(2j * math.pi * k / n) for k in range(n)]

    def contains(self, z: complex, tol: float = 0.0) -> bool:
        return abs(z - self.center) <= self.r + tol

    def to_dict(self) -> dict:
        return {"cx": self.cx, "cy": self.cy, "r": self.r}


def circumcircle(z1: complex, z2: complex, z3: complex) -> Circle:
    a, b = z2 - z1, z3 - z1
    det = 2 * (a.real * b.imag - a.imag * b.real)
    if abs(det) < 1e-14 * max(abs(a), abs(b)) ** 2:
        raise GeometryError("points are collinear")
    aa, bb = abs(a) ** 2, abs(b) ** 2
    ux = (b.imag * aa - a.imag * bb) / det
    uy = (a.real * bb - b.real * aa) / det
    c = z1 + complex(ux, uy)
    return Circle.from_center(c, abs(c - z1))


def inversive_product(c1: Circle, c2: Circle) -> float:
    """(d^2 - r1^2 - r2^2) / (2 r1 r2); equals cos of the intersection angle
    for crossing circles and 1 for external tangency."""
    d2 = abs(c1.center - c2.center) ** 2
    return (d2 - c1.r**2 - c2.r**2) / (2 * c1.r * c2.r)


def nested(c1: Circle, c2: Circle) -> bool:
    return abs(c1.center - c2.center) < abs(c1.r - c2.r)


def inversive_distance(c1: Circle, c2: Circle) -> float:
    """Moebius-invariant separation of two circles: greater than 1 iff they
    are disjoint, the cosine of the acute crossing angle if they cross.

    The signed product depends on which side of each circle is taken as
    the disk, and a Moebius map may swap the sides, so the absolute value
    is what is invariant.
    """
    return abs(inversive_product(c1, c2))


@dataclass(frozen=True)
class MobiusMap:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        if abs(self.det) < 1e-300:
            raise GeometryError("degenerate Moebius map")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    def __call__(self, z):
        if z == math.inf or (isinstance(z, complex) and cmath.isinf(z)):
            return self.a / self.c if self.c != 0 else math.inf
        den = self.c * z + self.d
        if den == 0:
            return math.inf
        return (self.a * z + self.b) / den

    def __matmul__(self, other: "MobiusMap") -> "MobiusMap":
        return MobiusMap(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self) -> "MobiusMap":
        return MobiusMap(self.d, -self.b, -self.c, self.a)

    def image_circle(self, circle: Circle) -> tuple[Circle, bool]:
        """Image circle and whether the disk maps to its inside (False means
        the disk maps to the outside of the returned circle)."""
        pts = [self(z) for z in circle.points(3)]
        if any(p == math.inf for p in pts):
            pts = [self(z) for z in circle.points(5)[1:4]]
        img = circumcircle(*pts)
        inside = self(circle.center)
        return img, inside != math.inf and img.contains(inside)


def random_mobius(rng: np.random.Generator) -> MobiusMap:
    while True:
        a, b, c, d = (complex(*rng.normal(size=2)) for _ in range(4))
        if abs(a * d - b * c) > 0.1:
            return MobiusMap(a, b, c, d)


# ----------------------------------------------------------------------
# annulus normalization


def annulus_radius(delta: float) -> float:
    """Inner radius R of the round annulus R < |z| < R + 1 whose boundary
    circles have inversive distance ``delta``."""
    if delta <= 1:
        raise GeometryError(f"inversive distance {delta} <= 1: circles are not disjoint")
    rho = math.exp(math.acosh(delta))
    return 1.0 / (rho - 1.0)


def normalize_concentric(ca: Circle, cb: Circle, *, check: bool = True) -> tuple[MobiusMap, float]:
    """Moebius map sending ``ca`` to |z| = R and ``cb`` to |z| = R + 1."""
    delta = inversive_distance(ca, cb)
    R = annulus_radius(delta)
    c1, c2 = ca.center, cb.center
    D = abs(c2 - c1)
    if D < 1e-15 * max(ca.r, cb.r):
        m = MobiusMap(1, -c1, 0, 1)
        inner, outer = ca.r, cb.r
        if inner > outer:
            m = MobiusMap(0, 1, 1, 0) @ m
            inner, outer = 1 / inner, 1 / outer
    else:
        e = (c2 - c1) / D
        s = (D * D + ca.r**2 - cb.r**2) / D
        disc = math.sqrt(max(s * s / 4 - ca.r**2, 0.0))
        p = c1 + (s / 2 - disc) * e
        q = c1 + (s / 2 + disc) * e
        m = MobiusMap(1, -p, 1, -q)
        inner = abs(m(ca.points(1)[0]))
        outer = abs(m(cb.points(1)[0]))
        if inner > outer:
            m = MobiusMap(1, -q, 1, -p)
            inner = abs(m(ca.points(1)[0]))
    k = R / inner
    m = MobiusMap(k, 0, 0, 1) @ m
    if check:
        for circle, target in ((ca, R), (cb, R + 1)):
            for z in circle.points(16):
                w = m(z)
                if w == math.inf or abs(abs(w) - target) > 1e-9 * max(R, 1.0):
                    raise GeometryError("normalization failed to reach concentric circles")
    return m, R


# ----------------------------------------------------------------------
# circular rectangles


@dataclass(frozen=True)
class CircularRectangle:
    """{ r e^{i t} : R < r < R + 1, theta1 < t < theta2 }."""

    R: float
    theta1: float
    theta2: float

    def __post_init__(self):
        if self.R <= 0:
            raise GeometryError("R must be positive")
        span = self.theta2 - self.theta1
        if not (0 < span <= 2 * math.pi + 1e-15):
            raise GeometryError("need theta1 < theta2 <= theta1 + 2 pi")

    @property
    def span(self) -> float:
        return self.theta2 - self.theta1

    @property
    def circular_width(self) -> float:
        return self.R * self.span

    @property
    def is_annulus(self) -> bool:
        return self.span >= 2 * math.pi - 1e-15

    def contains(self, z: complex) -> bool:
        r = abs(z)
        if not self.R < r < self.R + 1:
            return False
        if self.is_annulus:
            return True
        t = (cmath.phase(z) - self.theta1) % (2 * math.pi)
        return 0 < t < self.span


def annulus_ew(R: float) -> float:
    """Extremal width of the curves joining the two boundary circles of
    R < |z| < R + 1."""
    return 2 * math.pi / math.log1p(1 / R)


def circular_rectangle_ew(rect: CircularRectangle) -> float:
    if rect.is_annulus:
        return annulus_ew(rect.R)
    return rect.circular_width / (rect.R * math.log1p(1 / rect.R))


# ----------------------------------------------------------------------
# admissible disks in the annulus


def disk_from_angles(R: float, inner: float, outer: float, phase: float = 0.0) -> Circle:
    """The disk meeting B(0, R) at angle ``inner`` and the outside of
    B(0, R + 1) at angle ``outer`` (0 means tangent)."""
    den = 2 * R * math.cos(inner) + 2 * (R + 1) * math.cos(outer)
    if den <= 1e-12 * (2 * R + 1):
        raise GeometryError("no such disk")
    r = (2 * R + 1) / den
    t = math.sqrt(R * R + r * r + 2 * r * R * math.cos(inner))
    return Circle.from_center(t * cmath.exp(1j * phase), r)


def _side_angle(cos_value: float, tol: float = 1e-9) -> float | None:
    """Intersection angle from its cosine; None when disjoint."""
    if cos_value > 1 + tol:
        return None
    if cos_value > 1 - 1e-12:
        return 0.0  # acos loses half the digits near tangency
    if cos_value < -1 + tol:
        return math.pi
    return math.acos(min(1.0, cos_value))


def _allowed(angle: float, tol: float = 1e-9, max_n: int = 64) -> bool:
    if angle < tol:
        return True
    n = round(math.pi / angle)
    return 2 <= n <= max_n and abs(angle - math.pi / n) < tol


@dataclass
class DiskDiagnostics:
    admissible: bool
    meets_annulus: bool
    inner_angle: float | None
    outer_angle: float | None
    angles_allowed: bool
    angle_sum_ok: bool
    diameter: float
    diameter_ok: bool
    expected_ok: bool = True

    def __bool__(self) -> bool:
        return self.admissible


def is_admissible_disk(d: Circle, R: float, angle_a: float | None = None, angle_b: float | None = None) -> DiskDiagnostics:
    """Admissibility of ``d`` in R < |z| < R + 1.

    ``angle_a`` and ``angle_b`` optionally give the expected intersection
    angles with the inner disk and the outer complementary disk.
    """
    inner_circle = Circle(0.0, 0.0, R)
    outer_circle = Circle(0.0, 0.0, R + 1)
    dist = abs(d.center)
    meets = max(0.0, dist - d.r) < R + 1 and dist + d.r > R
    w1 = _side_angle(inversive_product(d, inner_circle))
    w2 = _side_angle(-inversive_product(d, outer_circle))
    allowed = all(w is None or _allowed(w) for w in (w1, w2))
    both = w1 is not None and w2 is not None
    sum_ok = not both or w1 + w2 < math.pi - 1e-12
    expected = True
    for w, want in ((w1, angle_a), (w2, angle_b)):
        if want is not None:
            expected = expected and w is not None and abs(w - want) < 1e-9
    diam = 2 * d.r
    return DiskDiagnostics(
        admissible=meets and allowed and sum_ok and expected,
        meets_annulus=meets,
        inner_angle=w1,
        outer_angle=w2,
        angles_allowed=allowed,
        angle_sum_ok=sum_ok,
        diameter=diam,
        diameter_ok=diam <= 5,
        expected_ok=expected,
    )


def projection_area_ratio(d: Circle, rect: CircularRectangle, grid: int = 600) -> tuple[float, float, float]:
    """Length ``l`` of the radial projection of D meet rect onto |z| = R, the
    area of D meet rect, and l^2 / area (numerical, polar grid)."""
    R = rect.R
    c, r = d.center, d.r
    dist = abs(c)
    if dist <= r:
        t_lo, t_hi = rect.theta1, rect.theta2
    else:
        half = math.asin(min(1.0, r / dist))
        mid = cmath.phase(c)
        t_lo, t_hi = mid - half, mid + half
    rs = R + (np.arange(grid) + 0.5) / grid
    ts = t_lo + (t_hi - t_lo) * (np.arange(grid) + 0.5) / grid
    rr, tt = np.meshgrid(rs, ts, indexing="ij")
    z = rr * np.exp(1j * tt)
    inside = np.abs(z - c) <= r
    if not rect.is_annulus:
        off = np.mod(tt - rect.theta1, 2 * math.pi)
        inside &= (off > 0) & (off < rect.span)
    dr, dt = 1.0 / grid, (t_hi - t_lo) / grid
    area = float(np.sum(inside * rr) * dr * dt)
    cols = inside.any(axis=0)
    length = R * float(cols.sum()) * dt
    ratio = length**2 / area if area > 0 else (0.0 if length == 0 else math.inf)
    return length, area, ratio


# ----------------------------------------------------------------------
# arcs of a circle covered by disks


def covered_interval(R: float, disk: Circle, inside: bool = True, tangency_tol: float = 1e-8) -> tuple[float, float] | None:
    """Angular interval of |z| = R lying in the disk (or outside the circle
    when ``inside`` is False). Returns (start, length) or None if empty;
    length 2 pi means the whole circle. Circles within ``tangency_tol``
    (relative, in the cosine) of tangency give a zero-length interval."""
    dist = abs(disk.center)
    mid = cmath.phase(disk.center) if dist > 0 else 0.0
    # |R e^{it} - c|^2 <= r^2  <=>  cos(t - mid) >= (R^2 + dist^2 - r^2) / (2 R dist)
    if dist == 0:
        hit = (R <= disk.r) == inside
        return (0.0, 2 * math.pi) if hit else None
    k = (R * R + dist * dist - disk.r**2) / (2 * R * dist)
    if inside:
        if k > 1 + tangency_tol:
            return None
        if k <= -1:
            return (0.0, 2 * math.pi)
        h = math.acos(max(-1.0, min(1.0, k)))
        return ((mid - h) % (2 * math.pi), 2 * h)
    if k < -1 - tangency_tol:
        return None
    if k >= 1:
        return (0.0, 2 * math.pi)
    h = math.acos(max(-1.0, min(1.0, k)))
    return ((mid + h) % (2 * math.pi), 2 * math.pi - 2 * h)


def uncovered_arcs(intervals: Iterable[tuple[float, float]], tol: float = ANGULAR_TOL) -> list[tuple[float, float]]:
    """Complement on the circle of a union of (start, length) intervals,
    as (start, length) arcs. Zero-length intervals still cut the circle."""
    ivs = sorted((s % (2 * math.pi), l) for s, l in intervals)
    if not ivs:
        return [(0.0, 2 * math.pi)]
    if any(l >= 2 * math.pi - tol for _, l in ivs):
        return []
    # unroll from the first interval start
    base = ivs[0][0]
    spans = sorted(((s - base) % (2 * math.pi), (s - base) % (2 * math.pi) + l) for s, l in ivs)
    merged = []
    for lo, hi in spans:
        if merged and lo <= merged[-1][1] + tol:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    gaps = []
    for (lo1, hi1), (lo2, _) in zip(merged, merged[1:]):
        gaps.append((hi1, lo2 - hi1))
    last_hi = merged[-1][1]
    if last_hi < 2 * math.pi - tol:
        gaps.append((last_hi, 2 * math.pi - last_hi))
    return [((s + base) % (2 * math.pi), l) for s, l in gaps if l > tol]


def _in_arc(t: float, arc: tuple[float, float]) -> bool:
    return (t - arc[0]) % (2 * math.pi) < arc[1]


@dataclass
class SkinningEstimate:
    width: float  # W, circular length of the interstice arc on the inner circle
    R: float
    interval: tuple[float, float]
    complexity: int
    other_width: float
    arc: tuple[float, float]
    proven: bool = False  # hypothesis of the guarantee cannot be checked
    caveat: str = "guarantee requires EWW >= 25 max(N, R0) with R0 not explicit"

    def to_dict(self) -> dict:
        return {
            "W": self.width,
            "R": self.R,
            "interval": list(self.interval),
            "N": self.complexity,
            "other_arc_width": self.other_width,
            "arc": {"start": self.arc[0], "length": self.arc[1]},
            "guarantee_checked": self.proven,
            "caveat": self.caveat,
        }


def skinning_width(pattern, sg, a: str, b: str) -> SkinningEstimate:
    """Circular width of the interstice arc on the normalized inner circle."""
    if not (sg.is_boundary(a) and sg.is_boundary(b)):
        raise GeometryError("a and b must be boundary vertices")
    if a == b or sg.graph.has_edge(a, b):
        raise GeometryError("a and b must be nonadjacent")
    disks: Mapping[str, Circle] = pattern.disks
    da, db = disks[a], disks[b]
    if inversive_distance(da, db) <= 1 + 1e-12:
        raise GeometryError("the disks of a and b are not disjoint")
    m, R = normalize_concentric(da, db)
    intervals = []
    for v in sg.boundary:
        if v in (a, b):
            continue
        img, inside = m.image_circle(disks[v])
        iv = covered_interval(R, img, inside)
        if iv is not None:
            intervals.append(iv)
    arcs = uncovered_arcs(intervals)
    if not arcs:
        raise GeometryError("inner circle is covered by boundary disks")
    interior = [u for u in sg.graph.neighbours(a) if not sg.is_boundary(u)]
    score = []
    for arc in arcs:
        hits = 0
        for u in interior:
            img, inside = m.image_circle(disks[u])
            iv = covered_interval(R, img, inside)
            if iv is not None and (_in_arc(iv[0] + iv[1] / 2, arc) or _in_arc(iv[0], arc)):
                hits += 1
        score.append(hits)
    if max(score) > 0:
        pick = max(range(len(arcs)), key=lambda i: (score[i], arcs[i][1]))
    else:
        pts = [m(disks[u].center) for u in sg.interior_vertices()]
        pts = [p for p in pts if p != math.inf]
        target = cmath.phase(sum(pts)) if pts else 0.0
        pick = min(range(len(arcs)), key=lambda i: abs(cmath.phase(cmath.exp(1j * (arcs[i][0] + arcs[i][1] / 2 - target)))))
    arc = arcs[pick]
    W = R * arc[1]
    others = [R * l for i, (_, l) in enumerate(arcs) if i != pick]
    n = len(sg.boundary)
    return SkinningEstimate(W, R, (W - 25 * n, W + 25 * n), n, max(others, default=0.0), arc)
