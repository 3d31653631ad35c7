"""Vertex extremal width by cutting planes, with a brute-force cross-check.

The width of a path family relative to a vertex set ``W`` is

    inf { sum_v mu(v)^2 : mu >= 0, mu = 0 on W, every member has mu-length >= 1 }.

The cutting-plane solver keeps a growing list of path constraints, solves
the minimum-norm problem over them, and asks the separation oracle for the
shortest member under the current metric.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .families import EmptyFamily, Family, enumerate_proper_paths, path_length, shortest_proper_path
from .subdivision import SubdivisionGraph

OPTIMAL = "optimal"
EMPTY = "infeasible-family-empty"
UNBOUNDED = "unbounded-chord"

ADMISSIBILITY_SLACK = 1e-9


class NonConvergence(RuntimeError):
    pass


class SizeCapExceeded(ValueError):
    pass


@dataclass
class EWResult:
    width: float
    metric: dict[str, float]
    active_paths: list[tuple[str, ...]]
    status: str
    gap: float = 0.0
    iterations: int = 0
    shortest: float = math.nan
    witness: tuple[str, ...] | None = None

    @property
    def length(self) -> float:
        """Extremal length, the reciprocal of the width."""
        if self.width == 0:
            return math.inf
        return 1.0 / self.width

    @property
    def finite(self) -> bool:
        return self.status == OPTIMAL

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "width": "inf" if math.isinf(self.width) else self.width,
            "length": "inf" if math.isinf(self.length) else self.length,
            "gap": self.gap,
            "iterations": self.iterations,
            "shortest_length": None if math.isnan(self.shortest) else self.shortest,
            "metric": {v: x for v, x in sorted(self.metric.items()) if x != 0.0},
            "active_paths": [list(p) for p in self.active_paths],
            "witness": None if self.witness is None else list(self.witness),
        }


# ----------------------------------------------------------------------
# minimum-norm point of { x : A x >= 1 } with A >= 0


def nnls(E: np.ndarray, f: np.ndarray, tol: float | None = None, max_iter: int | None = None) -> np.ndarray:
    """Lawson-Hanson active-set solver for min ||E u - f|| subject to u >= 0."""
    m, n = E.shape
    if tol is None:
        tol = 10 * max(m, n) * np.finfo(float).eps * max(1.0, np.abs(E).max(initial=0.0))
    if max_iter is None:
        max_iter = 30 * n + 30
    u = np.zeros(n)
    passive = np.zeros(n, dtype=bool)
    w = E.T @ (f - E @ u)
    it = 0
    while (~passive).any() and w[~passive].max(initial=-np.inf) > tol:
        cand = np.where(~passive, w, -np.inf)
        passive[int(np.argmax(cand))] = True
        while True:
            it += 1
            if it > max_iter:
                raise NonConvergence("nnls iteration cap")
            z = np.zeros(n)
            idx = np.flatnonzero(passive)
            z[idx] = np.linalg.lstsq(E[:, idx], f, rcond=None)[0]
            if (z[idx] > tol).all():
                u = z
                break
            bad = idx[z[idx] <= tol]
            alpha = np.min(u[bad] / (u[bad] - z[bad]))
            u = u + alpha * (z - u)
            passive &= u > tol
            u[~passive] = 0.0
        w = E.T @ (f - E @ u)
    return u


def min_norm_point(A: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimum-norm x with A x >= 1 (A entrywise nonnegative).

    Solved as a least-distance program through NNLS, then polished by an
    equality-constrained least-norm solve on the active rows. Returns the
    point and the multipliers (x = A^T lam at the optimum).
    """
    m, n = A.shape
    E = np.vstack([A.T, np.ones((1, m))])
    f = np.zeros(n + 1)
    f[-1] = 1.0
    u = nnls(E, f)
    r = E @ u - f
    if abs(r[-1]) < 1e-14:
        raise ValueError("infeasible constraint system")
    x = -r[:n] / r[-1]
    lam = u / (1.0 - u.sum())
    # polish on the active set
    act = np.flatnonzero(lam > 1e-12)
    if act.size:
        Aa = A[act]
        sol, *_ = np.linalg.lstsq(Aa @ Aa.T, np.ones(act.size), rcond=None)
        xp = Aa.T @ sol
        if (sol >= -1e-12).all() and (A @ xp >= 1 - 1e-12).all():
            full = np.zeros(m)
            full[act] = np.maximum(sol, 0.0)
            return xp, full
    return np.maximum(x, 0.0), lam


# ----------------------------------------------------------------------
# cutting planes


def _free_vertices(sg: SubdivisionGraph, relative: Iterable[str] | None) -> tuple[set[str], list[str]]:
    W = set(sg.boundary) if relative is None else set(relative)
    free = [v for v in sorted(sg.graph.vertices) if v not in W]
    return W, free


def extremal_width(
    sg: SubdivisionGraph,
    family: Family,
    relative: Iterable[str] | None = None,
    *,
    tol: float = ADMISSIBILITY_SLACK,
    max_cuts: int = 10_000,
) -> EWResult:
    family.validate(sg)
    W, free = _free_vertices(sg, relative)
    index = {v: i for i, v in enumerate(free)}
    unit = {v: (0.0 if v in W else 1.0) for v in sg.graph.vertices}
    try:
        path, length = shortest_proper_path(sg, unit, family)
    except EmptyFamily:
        return EWResult(0.0, {v: 0.0 for v in sg.graph.vertices}, [], EMPTY)
    if length == 0:
        return EWResult(math.inf, {}, [path], UNBOUNDED, witness=path)

    cuts: list[frozenset[str]] = []
    paths: list[tuple[str, ...]] = []

    def add(path):
        key = frozenset(v for v in path if v not in W)
        for i in reversed(range(len(cuts))):
            if key <= cuts[i]:
                del cuts[i], paths[i]
            elif cuts[i] <= key:
                return False
        cuts.append(key)
        paths.append(path)
        return True

    add(path)
    it = 0
    while True:
        it += 1
        if it > max_cuts:
            raise NonConvergence(f"more than {max_cuts} cuts")
        A = np.zeros((len(cuts), len(free)))
        for r, key in enumerate(cuts):
            A[r, [index[v] for v in key]] = 1.0
        x, lam = min_norm_point(A)
        metric = {v: 0.0 for v in sg.graph.vertices}
        for v, i in index.items():
            metric[v] = float(x[i])
        path, length = shortest_proper_path(sg, metric, family)
        if length >= 1 - tol:
            break
        if not add(path):
            raise NonConvergence("oracle returned a dominated path")

    if length < 1:
        metric = {v: m / length for v, m in metric.items()}
    width = sum(m * m for m in metric.values())
    lower = 2.0 * lam.sum() - float(np.sum((A.T @ lam) ** 2))
    active = [p for p, l in zip(paths, lam) if l > 1e-12]
    return EWResult(width, metric, active, OPTIMAL, gap=max(0.0, width - lower), iterations=it, shortest=max(length, 1.0))


# ----------------------------------------------------------------------
# brute force


def minimal_sets(sets: Iterable[frozenset[str]]) -> list[frozenset[str]]:
    out: list[frozenset[str]] = []
    for s in sorted(set(sets), key=lambda s: (len(s), sorted(s))):
        if not any(t <= s for t in out):
            out.append(s)
    return out


def kkt_enumeration(A: np.ndarray, tol: float = 1e-10) -> tuple[np.ndarray, tuple[int, ...]]:
    """Minimum-norm x with A x >= 1 by trying active sets of increasing size.

    For each row subset S with independent rows, x = A_S^T lam with
    A_S A_S^T lam = 1; it is optimal iff lam >= 0 and x is feasible.
    """
    m, n = A.shape
    gram = A @ A.T
    for k in range(1, min(m, n) + 1):
        for S in itertools.combinations(range(m), k):
            G = gram[np.ix_(S, S)]
            if np.linalg.matrix_rank(G) < k:
                continue
            lam = np.linalg.solve(G, np.ones(k))
            if (lam < -tol).any():
                continue
            x = A[list(S)].T @ lam
            if (A @ x >= 1 - tol).all():
                return x, S
    raise ValueError("no KKT point found")


def extremal_width_bruteforce(
    sg: SubdivisionGraph, family: Family, relative: Iterable[str] | None = None, *, cap: int = 14
) -> EWResult:
    family.validate(sg)
    W, free = _free_vertices(sg, relative)
    if len(free) > cap:
        raise SizeCapExceeded(f"{len(free)} free vertices exceed the cap of {cap}")
    paths = {}
    for p in enumerate_proper_paths(sg, family):
        key = frozenset(v for v in p if v not in W)
        if key not in paths or p < paths[key]:
            paths[key] = p
    if not paths:
        return EWResult(0.0, {v: 0.0 for v in sg.graph.vertices}, [], EMPTY)
    sets = minimal_sets(paths)
    if sets[0] == frozenset():
        return EWResult(math.inf, {}, [paths[sets[0]]], UNBOUNDED, witness=paths[sets[0]])
    index = {v: i for i, v in enumerate(free)}
    A = np.zeros((len(sets), len(free)))
    for r, s in enumerate(sets):
        A[r, [index[v] for v in s]] = 1.0
    x, S = kkt_enumeration(A)
    metric = {v: 0.0 for v in sg.graph.vertices}
    for v, i in index.items():
        metric[v] = float(x[i])
    return EWResult(float(x @ x), metric, [paths[sets[i]] for i in S], OPTIMAL, iterations=len(sets))


# ----------------------------------------------------------------------
# duality


@dataclass
class DualityReport:
    a: str
    b: str
    complexity: int
    connecting: EWResult
    separating: EWResult
    product: float | None
    verdict: bool | None
    bounds: tuple[float, float] | None

    def to_dict(self) -> dict:
        return {
            "pair": [self.a, self.b],
            "complexity": self.complexity,
            "triangulation": self.complexity == 3,
            "connecting": self.connecting.to_dict(),
            "separating": self.separating.to_dict(),
            "product": self.product,
            "bounds": None if self.bounds is None else list(self.bounds),
            "verdict": self.verdict,
        }


def duality_report(sg: SubdivisionGraph, a: str, b: str, *, solver=extremal_width) -> DualityReport:
    con = solver(sg, Family.connecting(a, b))
    sep = solver(sg, Family.separating(a, b))
    N = sg.complexity
    if not (con.finite and sep.finite):
        return DualityReport(a, b, N, con, sep, None, None, None)
    product = con.width * sep.width
    if N == 3:
        bounds = (1 - 1e-6, 1 + 1e-6)
    else:
        bounds = (1 / (4 * N + 1) ** 2 - 1e-9, 1 + 1e-6)
    return DualityReport(a, b, N, con, sep, product, bounds[0] <= product <= bounds[1], bounds)


def verify_projection_bound(sg: SubdivisionGraph, a: str, b: str, **kw) -> dict:
    from .staged import projection_report

    return projection_report(sg, a, b, **kw)
