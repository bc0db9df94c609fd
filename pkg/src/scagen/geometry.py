"""Geometric graphs behind the scagnostic measures.

Points are ``(n, 2)`` float arrays. All public functions accept anything
``numpy.asarray`` understands and never modify their input. Numeric results
(areas, lengths, diameters) do not depend on the order of the input rows:
each function works on a lexicographically sorted copy and maps vertex
indices back to the caller's order.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay

try:
    from scipy.spatial import QhullError
except ImportError:  # scipy < 1.8
    from scipy.spatial.qhull import QhullError

from . import _kernels
from .exceptions import InsufficientPointsError, InvalidInputError, InvalidParameterError

__all__ = [
    "EdgeGraph",
    "PolygonShape",
    "as_points",
    "normalize_to_unit_square",
    "canonical_order",
    "convex_hull",
    "delaunay_triangles",
    "delaunay_triangulate",
    "minimum_spanning_tree",
    "mst_diameter",
    "alpha_shape",
    "hex_bin",
]


@dataclass(frozen=True)
class EdgeGraph:
    """Undirected geometric graph over ``points``.

    ``edges`` is an ``(m, 2)`` integer array with ``i < j`` in each row and
    ``lengths`` the matching Euclidean edge lengths.
    """

    points: np.ndarray
    edges: np.ndarray
    lengths: np.ndarray

    @property
    def n_vertices(self) -> int:
        return int(self.points.shape[0])

    @property
    def n_edges(self) -> int:
        return int(self.edges.shape[0])

    @property
    def total_length(self) -> float:
        return float(np.sort(self.lengths).sum())

    def edge_set(self) -> set[tuple[int, int]]:
        return {(int(i), int(j)) for i, j in self.edges}


@dataclass(frozen=True)
class PolygonShape:
    """A (possibly multi-part) polygonal region.

    ``loops`` holds boundary cycles as arrays of vertex indices. ``perimeter``
    is the total length of all boundary loops.
    """

    loops: tuple[np.ndarray, ...]
    area: float
    perimeter: float
    degenerate: bool = False
    triangles: np.ndarray = field(default_factory=lambda: np.empty((0, 3), np.int64), repr=False)


def as_points(points, min_points: int = 1) -> np.ndarray:
    """Validate and convert ``points`` to a float64 ``(n, 2)`` array."""
    p = np.asarray(points, dtype=np.float64)
    if p.size == 0:
        p = p.reshape(0, 2)
    if p.ndim != 2 or p.shape[1] != 2:
        raise InvalidInputError(f"expected an (n, 2) array of points, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise InvalidInputError("points must have finite coordinates")
    if p.shape[0] < min_points:
        raise InsufficientPointsError(p.shape[0], min_points)
    return p


def normalize_to_unit_square(points) -> np.ndarray:
    """Min-max scale each axis to [0, 1]; a constant axis maps to 0.5."""
    p = as_points(points)
    lo = p.min(axis=0)
    hi = p.max(axis=0)
    span = hi - lo
    out = np.empty_like(p)
    for k in range(2):
        if span[k] > 0:
            out[:, k] = (p[:, k] - lo[k]) / span[k]
        else:
            out[:, k] = 0.5
    return out


def canonical_order(p: np.ndarray) -> np.ndarray:
    """Permutation sorting points by x, then y."""
    return np.lexsort((p[:, 1], p[:, 0]))


def _distinct_sorted(ps: np.ndarray) -> np.ndarray:
    """Mask of the first occurrence of each point in a lexsorted array."""
    keep = np.ones(ps.shape[0], dtype=bool)
    if ps.shape[0] > 1:
        keep[1:] = np.any(ps[1:] != ps[:-1], axis=1)
    return keep


def _edge_lengths(p: np.ndarray, edges: np.ndarray) -> np.ndarray:
    d = p[edges[:, 0]] - p[edges[:, 1]]
    return np.sqrt(d[:, 0] ** 2 + d[:, 1] ** 2)


def _make_graph(p: np.ndarray, edges) -> EdgeGraph:
    e = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
    e = np.sort(e, axis=1)
    if e.shape[0]:
        e = np.unique(e, axis=0)
    return EdgeGraph(points=p, edges=e, lengths=_edge_lengths(p, e))


def convex_hull(points) -> PolygonShape:
    """Convex hull as a counter-clockwise vertex loop.

    Fewer than three non-collinear points give a zero-area degenerate shape
    whose perimeter is twice the length of the spanning segment.
    """
    p = as_points(points)
    order = canonical_order(p)
    ps = p[order]
    idx = _kernels.hull_indices(ps)
    area, per = _kernels.polygon_area_perimeter(ps, idx)
    return PolygonShape(
        loops=(order[idx],),
        area=float(area),
        perimeter=float(per),
        degenerate=bool(area <= 0.0),
    )


def _triangulate_sorted(ps: np.ndarray):
    """Delaunay of lexsorted, duplicate-free points.

    Returns ``(simplices, neighbors)``, or ``None`` when the set is
    degenerate (fewer than three points or all collinear).
    """
    if ps.shape[0] < 3:
        return None
    try:
        tri = Delaunay(ps)
    except (QhullError, ValueError):
        return None
    if tri.simplices.shape[0] == 0:
        return None
    return tri.simplices.astype(np.int64), tri.neighbors.astype(np.int64)


def delaunay_triangles(points) -> np.ndarray:
    """Delaunay triangles as an ``(t, 3)`` array of input-point indices.

    Duplicate points are triangulated once (through their first occurrence
    in sorted order); degenerate inputs give an empty array.
    """
    p = as_points(points)
    order = canonical_order(p)
    ps = p[order]
    keep = _distinct_sorted(ps)
    result = _triangulate_sorted(ps[keep])
    if result is None:
        return np.empty((0, 3), np.int64)
    return order[keep][result[0]]


def delaunay_triangulate(points) -> EdgeGraph:
    """Edges of the Delaunay triangulation.

    Duplicates are attached to their representative by zero-length edges.
    Degenerate input falls back to the complete graph when ``n <= 3`` and to
    the chain through the points in sorted order otherwise.
    """
    p = as_points(points)
    n = p.shape[0]
    order = canonical_order(p)
    ps = p[order]
    keep = _distinct_sorted(ps)
    rep_sorted = np.cumsum(keep) - 1  # position among distinct points
    distinct_idx = order[keep]
    result = _triangulate_sorted(ps[keep])
    if result is None:
        if n <= 3:
            edges = [(i, j) for i in range(n) for j in range(i + 1, n)]
            return _make_graph(p, edges)
        edges = np.column_stack([order[:-1], order[1:]])
        return _make_graph(p, edges)
    s = result[0]
    tri_edges = np.concatenate([s[:, [0, 1]], s[:, [1, 2]], s[:, [2, 0]]])
    tri_edges = distinct_idx[tri_edges]
    dup = np.flatnonzero(~keep)
    dup_edges = np.column_stack([order[dup], distinct_idx[rep_sorted[dup]]])
    return _make_graph(p, np.concatenate([tri_edges, dup_edges]))


def minimum_spanning_tree(points) -> EdgeGraph:
    """Euclidean minimum spanning tree.

    Prim's algorithm over all point pairs; this is the same tree as the one
    restricted to Delaunay edges, since the EMST is a Delaunay subgraph.
    """
    p = as_points(points)
    if p.shape[0] < 2:
        raise InsufficientPointsError(p.shape[0], 2, "minimum spanning tree")
    order = canonical_order(p)
    parent, _ = _kernels.prim_mst(p[order])
    child = np.arange(1, p.shape[0])
    edges = np.column_stack([order[child], order[parent[child]]])
    return _make_graph(p, edges)


def _parent_array(tree: EdgeGraph):
    """Root the tree at vertex 0; returns (parent, parent_edge_length)."""
    n = tree.n_vertices
    if tree.n_edges != n - 1:
        raise InvalidInputError(f"expected a tree with {n - 1} edges, got {tree.n_edges}")
    adj = [[] for _ in range(n)]
    for (i, j), w in zip(tree.edges, tree.lengths):
        adj[i].append((int(j), float(w)))
        adj[j].append((int(i), float(w)))
    parent = np.full(n, -2, np.int64)
    length = np.zeros(n)
    parent[0] = -1
    stack = [0]
    while stack:
        u = stack.pop()
        for v, w in adj[u]:
            if parent[v] == -2:
                parent[v] = u
                length[v] = w
                stack.append(v)
    if np.any(parent == -2):
        raise InvalidInputError("graph is disconnected")
    return parent, length


def mst_diameter(tree: EdgeGraph) -> float:
    """Length of the longest path between two vertices of a tree."""
    # relabel in canonical point order so the float sums do not depend on input order
    order = canonical_order(tree.points)
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    edges = rank[tree.edges] if tree.n_edges else tree.edges
    parent, length = _parent_array(EdgeGraph(tree.points[order], edges, tree.lengths))
    return float(_kernels.tree_diameter(tree.n_vertices, parent, length))


def _boundary_loops(p: np.ndarray, tris: np.ndarray) -> tuple[np.ndarray, ...]:
    """Boundary cycles of a triangle set, each oriented with the region on its left."""
    if tris.shape[0] == 0:
        return ()
    t = tris.copy()
    a, b, c = p[t[:, 0]], p[t[:, 1]], p[t[:, 2]]
    cw = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (b[:, 1] - a[:, 1]) * (c[:, 0] - a[:, 0]) < 0
    t[cw] = t[cw][:, [0, 2, 1]]
    directed = np.concatenate([t[:, [0, 1]], t[:, [1, 2]], t[:, [2, 0]]])
    fwd = {(int(u), int(v)) for u, v in directed}
    boundary = sorted(e for e in fwd if (e[1], e[0]) not in fwd)
    out: dict[int, list[int]] = {}
    for u, v in boundary:
        out.setdefault(u, []).append(v)
    loops = []
    for u0 in sorted(out):
        while out[u0]:
            loop = [u0]
            u = out[u0].pop(0)
            while u != u0:
                loop.append(u)
                u = out[u].pop(0)
            loops.append(np.array(loop, dtype=np.int64))
    return tuple(loops)


def alpha_shape(points, alpha: float) -> PolygonShape:
    """Alpha complex: Delaunay triangles with circumradius at most ``alpha``.

    ``area`` sums the kept triangles and ``perimeter`` is the length of every
    edge that borders exactly one kept triangle. When no triangle survives the
    shape is flagged degenerate with zero area and perimeter.
    """
    if not alpha > 0:
        raise InvalidParameterError(f"alpha must be positive, got {alpha!r}")
    p = as_points(points)
    if p.shape[0] < 3:
        raise InsufficientPointsError(p.shape[0], 3, "alpha shape")
    order = canonical_order(p)
    ps = p[order]
    keep = _distinct_sorted(ps)
    pd = ps[keep]
    result = _triangulate_sorted(pd)
    if result is None:
        return PolygonShape(loops=(), area=0.0, perimeter=0.0, degenerate=True)
    simplices, neighbors = result
    area, per, kept = _kernels.alpha_complex(pd, simplices, neighbors, float(alpha))
    to_input = order[keep]
    tris = to_input[simplices[kept]]
    return PolygonShape(
        loops=_boundary_loops(p, tris),
        area=float(area),
        perimeter=float(per),
        degenerate=not bool(kept.any()),
        triangles=tris,
    )


def hex_bin(points, grid: int = 40) -> np.ndarray:
    """Aggregate unit-square points into a ``grid`` x ``grid`` hexagonal lattice.

    Rows are ``1/(grid-1)`` apart with odd rows shifted by half a column; each
    point goes to its nearest lattice centre. Returns the mean of the points
    in every occupied cell, ordered by cell index.
    """
    if int(grid) != grid or grid < 2:
        raise InvalidParameterError(f"grid must be an integer >= 2, got {grid!r}")
    grid = int(grid)
    p = as_points(points)
    step = 1.0 / (grid - 1)
    x, y = p[:, 0], p[:, 1]
    j0 = np.clip(np.floor(y / step), 0, grid - 2).astype(np.int64)
    best_cell = None
    best_d = None
    for j in (j0, j0 + 1):
        offset = np.where(j % 2 == 1, 0.5 * step, 0.0)
        i = np.clip(np.rint((x - offset) / step), 0, grid - 1).astype(np.int64)
        d = (x - (i * step + offset)) ** 2 + (y - j * step) ** 2
        cell = j * grid + i
        if best_cell is None:
            best_cell, best_d = cell, d
        else:
            closer = d < best_d
            best_cell = np.where(closer, cell, best_cell)
            best_d = np.where(closer, d, best_d)
    cells, inverse = np.unique(best_cell, return_inverse=True)
    counts = np.bincount(inverse, minlength=cells.size)
    cx = np.bincount(inverse, weights=x, minlength=cells.size) / counts
    cy = np.bincount(inverse, weights=y, minlength=cells.size) / counts
    return np.column_stack([cx, cy])
