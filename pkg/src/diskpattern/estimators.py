"""Estimator-style wrappers around the functional API.

These exist so the computations compose with parameter grids and
``get_params``/``set_params``; the functions in :mod:`extremal`,
:mod:`staged` and :mod:`layout` remain the primary interface.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from .extremal import duality_report, extremal_width, extremal_width_bruteforce
from .families import Family
from .layout import layout_residuals, thurston_layout
from .staged import project_metric, run_metric_extension


class VertexExtremalWidth(BaseEstimator):
    """Extremal width of a proper path family.

    After ``fit(sg)``: ``width_``, ``metric_``, ``active_paths_``, ``status_``.
    """

    def __init__(self, a=None, b=None, family="connecting", oracle=False):
        self.a = a
        self.b = b
        self.family = family
        self.oracle = oracle

    def fit(self, sg, y=None):
        fam = Family(self.family, self.a, self.b)
        solver = extremal_width_bruteforce if self.oracle else extremal_width
        res = solver(sg, fam)
        self.result_ = res
        self.width_ = res.width
        self.metric_ = res.metric
        self.active_paths_ = res.active_paths
        self.status_ = res.status
        return self

    def transform(self, sg):
        """The extremal metric as a vertex-indexed dict."""
        return self.fit(sg).metric_


class DualityCertifier(BaseEstimator):
    def __init__(self, a=None, b=None):
        self.a = a
        self.b = b

    def fit(self, sg, y=None):
        self.report_ = duality_report(sg, self.a, self.b)
        self.product_ = self.report_.product
        self.verdict_ = self.report_.verdict
        return self


class MetricProjector(BaseEstimator):
    """Runs the staged extension and pushes the metric to the triangulation."""

    def __init__(self, a=None, b=None, family="connecting"):
        self.a = a
        self.b = b
        self.family = family

    def fit(self, sg, y=None):
        self.trace_ = run_metric_extension(sg, Family(self.family, self.a, self.b))
        self.certificate_ = project_metric(self.trace_)
        self.metric_ = self.certificate_.metric
        self.ratio_ = self.certificate_.ratio
        return self

    def transform(self, sg):
        return self.fit(sg).metric_


class ThurstonPacker(BaseEstimator):
    def __init__(self, boundary_radii=None, tol=1e-12, max_sweeps=100_000):
        self.boundary_radii = boundary_radii
        self.tol = tol
        self.max_sweeps = max_sweeps

    def fit(self, sg, y=None):
        self.pattern_ = thurston_layout(sg, self.boundary_radii, tol=self.tol, max_sweeps=self.max_sweeps)
        self.radii_ = self.pattern_.radii
        self.residuals_ = layout_residuals(self.pattern_)
        return self

    def transform(self, sg):
        return self.fit(sg).pattern_
