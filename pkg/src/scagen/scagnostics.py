"""The nine graph-theoretic scatterplot measures.

Points are normalized to the unit square (and hex-binned for large samples)
before measuring, so every measure is invariant to translation, positive
scaling and row order. Measures are computed from three graphs: the
Euclidean minimum spanning tree (MST), the alpha shape and the convex hull.

Measure         Definition
--------------  ---------------------------------------------------------
outlying        MST length on edges touching an outlier vertex / MST length
skewed          (q90 - q50) / (q90 - q10) of MST edge lengths
clumpy          max over long cut edges of 1 - runt max edge / cut length
sparse          q90 of MST edge lengths
striated        share of degree-2 MST vertices with a bend cosine <= -0.75
convex          area(alpha shape) / area(convex hull)
skinny          1 - sqrt(4 pi area(alpha shape)) / perimeter(alpha shape)
stringy         MST diameter / MST length
monotonic       squared Spearman correlation of x and y

Quantiles interpolate linearly between order statistics. An MST vertex is
an outlier when every edge incident to it exceeds the fence
``q75 + 1.5 (q75 - q25)``; the same fence selects the cut edges for clumpy.
The alpha radius defaults to the 90th percentile of MST edge lengths.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping

import numpy as np

from . import _kernels
from .exceptions import InsufficientPointsError, InvalidInputError, InvalidParameterError
from .geometry import (
    EdgeGraph,
    PolygonShape,
    _distinct_sorted,
    _parent_array,
    _triangulate_sorted,
    as_points,
    canonical_order,
    hex_bin,
    normalize_to_unit_square,
)

__all__ = [
    "MEASURE_NAMES",
    "Measure",
    "ScagnosticVector",
    "ScagnosticOptions",
    "prepare_points",
    "compute",
    "compute_all",
    "convex_measure",
    "skinny_measure",
    "monotonic_measure",
    "mst_edge_measures",
]

MEASURE_NAMES = (
    "outlying",
    "skewed",
    "clumpy",
    "sparse",
    "striated",
    "convex",
    "skinny",
    "stringy",
    "monotonic",
)

_TREE_MEASURES = frozenset({"outlying", "skewed", "clumpy", "sparse", "striated", "stringy"})
_SHAPE_MEASURES = frozenset({"convex", "skinny"})


class Measure(str, Enum):
    OUTLYING = "outlying"
    SKEWED = "skewed"
    CLUMPY = "clumpy"
    SPARSE = "sparse"
    STRIATED = "striated"
    CONVEX = "convex"
    SKINNY = "skinny"
    STRINGY = "stringy"
    MONOTONIC = "monotonic"

    def __str__(self):
        return self.value

    @classmethod
    def parse(cls, name) -> "Measure":
        """Case-insensitive lookup; raises ``InvalidInputError`` listing valid names."""
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        try:
            return cls(key)
        except ValueError:
            raise InvalidInputError(
                f"unknown measure {name!r}; valid names are: {', '.join(MEASURE_NAMES)}"
            ) from None


@dataclass(frozen=True)
class ScagnosticVector:
    """The nine measures, each in [0, 1], in canonical order.

    ``degenerate`` names the measures that fell back to a documented value
    because their geometry was degenerate (zero hull area, empty alpha shape,
    constant axis).
    """

    outlying: float
    skewed: float
    clumpy: float
    sparse: float
    striated: float
    convex: float
    skinny: float
    stringy: float
    monotonic: float
    degenerate: frozenset = field(default=frozenset(), compare=False)

    def __getitem__(self, name) -> float:
        return getattr(self, Measure.parse(name).value)

    def as_dict(self) -> dict[str, float]:
        return {name: getattr(self, name) for name in MEASURE_NAMES}

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, name) for name in MEASURE_NAMES])


@dataclass(frozen=True)
class ScagnosticOptions:
    """Measurement configuration.

    alpha : float, optional
        Fixed alpha radius. By default the 90th percentile of MST edge lengths.
    bin_threshold : int
        Samples with more than this many points are hex-binned first.
    grid : int
        Hexagonal grid resolution used when binning.
    small_sample_correction : bool
        Multiply convex and sparse by ``0.7 + 0.3 / (1 + (n / 500)**2)``.
    """

    alpha: float | None = None
    bin_threshold: int = 250
    grid: int = 40
    small_sample_correction: bool = False

    def __post_init__(self):
        if self.alpha is not None and not self.alpha > 0:
            raise InvalidParameterError(f"alpha must be positive, got {self.alpha!r}")
        if self.grid < 2:
            raise InvalidParameterError(f"grid must be >= 2, got {self.grid!r}")


DEFAULT_OPTIONS = ScagnosticOptions()


def _clamp(v: float) -> float:
    return min(max(float(v), 0.0), 1.0)


def prepare_points(points, options: ScagnosticOptions = DEFAULT_OPTIONS) -> np.ndarray:
    """Normalize, optionally bin, and sort points into canonical order."""
    p = np.asarray(points, dtype=np.float64)
    if p.ndim != 2 or p.shape[1] != 2:
        p = as_points(p)
    if p.shape[0] < 3:
        raise InsufficientPointsError(p.shape[0], 3, "scagnostics")
    ps, ok = _kernels.normalize_sorted(p)
    if not ok:
        raise InvalidInputError("points must have finite coordinates")
    if ps.shape[0] > options.bin_threshold:
        binned = hex_bin(ps, options.grid)
        if binned.shape[0] >= 3:
            ps = binned[canonical_order(binned)]
    return ps


def _shape_areas(ps: np.ndarray, alpha: float):
    """(alpha area, alpha perimeter, hull area) for canonical points."""
    pd = ps[_distinct_sorted(ps)]
    hull = _kernels.hull_indices(pd)
    hull_area, _ = _kernels.polygon_area_perimeter(pd, hull)
    tri = _triangulate_sorted(pd) if hull_area > 0.0 else None
    if tri is None or not alpha > 0:
        return 0.0, 0.0, float(hull_area)
    area, per, _ = _kernels.alpha_complex(pd, tri[0], tri[1], float(alpha))
    return float(area), float(per), float(hull_area)


def _convex_value(alpha_area: float, hull_area: float):
    if hull_area <= 0.0:
        return 0.0, True
    return _clamp(alpha_area / hull_area), False


def _skinny_value(alpha_area: float, alpha_perimeter: float):
    if alpha_perimeter <= 0.0:
        return 1.0, True
    return _clamp(1.0 - math.sqrt(4.0 * math.pi * alpha_area) / alpha_perimeter), False


def _select(measures) -> frozenset:
    if measures is None:
        return frozenset(MEASURE_NAMES)
    return frozenset(Measure.parse(m).value for m in measures)


def _compute_prepared(ps: np.ndarray, wanted: frozenset, options: ScagnosticOptions):
    n = ps.shape[0]
    values: dict[str, float] = {}
    degenerate = set()
    correction = 0.7 + 0.3 / (1.0 + (n / 500.0) ** 2) if options.small_sample_correction else 1.0

    if wanted & (_TREE_MEASURES | _SHAPE_MEASURES):
        parent, length = _kernels.prim_mst(ps)
        outlying, skewed, clumpy, sparse, striated, stringy, q90 = _kernels.tree_measures(ps, parent, length)
        values.update(
            outlying=_clamp(outlying),
            skewed=_clamp(skewed),
            clumpy=_clamp(clumpy),
            sparse=_clamp(correction * sparse),
            striated=_clamp(striated),
            stringy=_clamp(stringy),
        )
        if wanted & _SHAPE_MEASURES:
            alpha = options.alpha if options.alpha is not None else q90
            a_area, a_per, h_area = _shape_areas(ps, alpha)
            convex, flag = _convex_value(a_area, h_area)
            values["convex"] = _clamp(correction * convex)
            if flag:
                degenerate.add("convex")
            skinny, flag = _skinny_value(a_area, a_per)
            values["skinny"] = skinny
            if flag:
                degenerate.add("skinny")
    if "monotonic" in wanted:
        x = np.ascontiguousarray(ps[:, 0])
        y = np.ascontiguousarray(ps[:, 1])
        values["monotonic"] = float(_kernels.spearman_squared(x, y))
        if x[0] == x[-1] or np.all(y == y[0]):
            degenerate.add("monotonic")
    return {k: values[k] for k in MEASURE_NAMES if k in wanted}, degenerate


def compute(points, measures: Iterable | None = None,
            options: ScagnosticOptions = DEFAULT_OPTIONS) -> dict[str, float]:
    """Compute a subset of the measures, skipping graphs nobody needs.

    Values are bit-identical to the corresponding fields of ``compute_all``.
    """
    values, _ = _compute_prepared(prepare_points(points, options), _select(measures), options)
    return values


def compute_all(points, options: ScagnosticOptions = DEFAULT_OPTIONS) -> ScagnosticVector:
    """All nine measures of a point set with at least three points."""
    values, degenerate = _compute_prepared(
        prepare_points(points, options), frozenset(MEASURE_NAMES), options
    )
    return ScagnosticVector(**values, degenerate=frozenset(degenerate))


def convex_measure(hull: PolygonShape, alpha: PolygonShape) -> float:
    """Ratio of alpha-shape area to hull area; 0 for a zero-area hull."""
    return _convex_value(alpha.area, hull.area)[0]


def skinny_measure(alpha: PolygonShape) -> float:
    """Isoperimetric skinniness of the alpha shape; 1 for a zero perimeter."""
    return _skinny_value(alpha.area, alpha.perimeter)[0]


def monotonic_measure(points) -> float:
    """Squared Spearman rank correlation with average ranks for ties."""
    p = as_points(points, min_points=3)
    x = np.ascontiguousarray(p[:, 0])
    y = np.ascontiguousarray(p[:, 1])
    return float(_kernels.spearman_squared(x, y))


def mst_edge_measures(tree: EdgeGraph) -> dict[str, float]:
    """Outlying, skewed, clumpy, sparse, striated and stringy of a spanning tree."""
    if tree.n_edges < 2:
        raise InsufficientPointsError(tree.n_vertices, 3, "MST edge measures")
    parent, length = _parent_array(tree)
    pts = np.ascontiguousarray(tree.points, dtype=np.float64)
    outlying, skewed, clumpy, sparse, striated, stringy, _ = _kernels.tree_measures(pts, parent, length)
    return {
        "outlying": _clamp(outlying),
        "skewed": _clamp(skewed),
        "clumpy": _clamp(clumpy),
        "sparse": _clamp(sparse),
        "striated": _clamp(striated),
        "stringy": _clamp(stringy),
    }


def target_gap(values: Mapping[str, float], targets: Mapping[str, float]) -> float:
    """Mean absolute difference between measured values and targets."""
    gaps = [abs(values[k] - v) for k, v in targets.items()]
    return math.fsum(gaps) / len(gaps)
