import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

import oracle
from scagen import geometry as g
from scagen.exceptions import InsufficientPointsError, InvalidInputError, InvalidParameterError

SQUARE = [(0, 0), (1, 0), (1, 1), (0, 1)]

point_sets = arrays(
    np.float64,
    st.tuples(st.integers(3, 25), st.just(2)),
    elements=st.floats(0, 1, allow_nan=False, width=32),
)


def test_normalize_examples():
    np.testing.assert_array_equal(g.normalize_to_unit_square([(0, 0), (2, 4)]), [(0, 0), (1, 1)])
    np.testing.assert_array_equal(g.normalize_to_unit_square([(3, 3), (3, 3)]), [(0.5, 0.5), (0.5, 0.5)])
    np.testing.assert_array_equal(
        g.normalize_to_unit_square([(1, 0), (2, 5), (3, 10)]), [(0, 0), (0.5, 0.5), (1, 1)]
    )


@pytest.mark.parametrize("bad", [[(0, np.nan)], [(np.inf, 1)], [(1, 2, 3)]])
def test_normalize_rejects_bad_input(bad):
    with pytest.raises(InvalidInputError):
        g.normalize_to_unit_square(bad)


def test_hull_square():
    h = g.convex_hull(SQUARE)
    assert h.area == 1.0
    assert h.perimeter == 4.0
    assert not h.degenerate


def test_hull_ignores_interior_point():
    a = g.convex_hull(SQUARE)
    b = g.convex_hull(SQUARE + [(0.5, 0.5)])
    assert set(a.loops[0]) == set(b.loops[0]) == {0, 1, 2, 3}
    assert (a.area, a.perimeter) == (b.area, b.perimeter)


@pytest.mark.parametrize("seed", range(5))
def test_hull_matches_brute_force(seed):
    p = np.random.default_rng(seed).random((20, 2))
    h = g.convex_hull(p)
    assert set(h.loops[0].tolist()) == oracle.brute_force_hull([tuple(r) for r in p])


def test_hull_collinear_is_degenerate():
    h = g.convex_hull([(0, 0), (0.25, 0.25), (1, 1)])
    assert h.degenerate and h.area == 0.0
    assert h.perimeter == pytest.approx(2 * math.sqrt(2))


def test_hull_of_identical_points():
    h = g.convex_hull([(0.2, 0.2)] * 4)
    assert h.degenerate and h.area == 0.0 and h.perimeter == 0.0


def test_delaunay_triangle():
    e = g.delaunay_triangulate([(0, 0), (1, 0), (0, 1)])
    assert e.edge_set() == {(0, 1), (0, 2), (1, 2)}


def test_delaunay_convex_quad_has_five_edges():
    e = g.delaunay_triangulate([(0, 0), (1, 0.1), (1.1, 1), (0.1, 0.9)])
    assert e.n_edges == 5


@pytest.mark.parametrize("seed", range(5))
def test_delaunay_empty_circumcircles(seed):
    p = np.random.default_rng(seed).random((10, 2))
    pts = [tuple(r) for r in p]
    tris = g.delaunay_triangles(p)
    assert len(tris) > 0
    assert all(oracle.empty_circumcircle(pts, tuple(t)) for t in tris)


def test_delaunay_collinear_falls_back_to_chain():
    p = [(0.3, 0.3), (0, 0), (1, 1), (0.6, 0.6)]
    e = g.delaunay_triangulate(p)
    assert e.edge_set() == {(0, 1), (0, 3), (2, 3)}


def test_delaunay_small_degenerate_is_complete():
    e = g.delaunay_triangulate([(0, 0), (1, 1), (2, 2)])
    assert e.n_edges == 3


def test_delaunay_duplicates_get_zero_length_edges():
    p = [(0, 0), (1, 0), (0, 1), (1, 0)]
    e = g.delaunay_triangulate(p)
    assert (1, 3) in e.edge_set()
    assert e.lengths[[tuple(x) for x in e.edges].index((1, 3))] == 0.0


def test_edge_lengths_are_euclidean(rng):
    p = rng.random((30, 2))
    e = g.delaunay_triangulate(p)
    ref = [math.dist(p[i], p[j]) for i, j in e.edges]
    np.testing.assert_allclose(e.lengths, ref, rtol=1e-12)
    assert np.all(e.edges[:, 0] < e.edges[:, 1])


def test_mst_two_points():
    t = g.minimum_spanning_tree([(0, 0), (1, 0)])
    assert t.n_edges == 1 and t.total_length == 1.0


def test_mst_square():
    assert g.minimum_spanning_tree(SQUARE).total_length == 3.0


@pytest.mark.parametrize("seed", range(5))
def test_mst_matches_exhaustive_enumeration(seed):
    p = np.random.default_rng(seed).random((7, 2))
    t = g.minimum_spanning_tree(p)
    total, edges = oracle.brute_force_mst([tuple(r) for r in p])
    assert t.edge_set() == edges
    assert math.fsum(t.lengths) == pytest.approx(total, rel=1e-12)


def test_mst_needs_two_points():
    with pytest.raises(InsufficientPointsError):
        g.minimum_spanning_tree([(0, 0)])


def test_mst_is_a_delaunay_subgraph(rng):
    p = rng.random((40, 2))
    assert g.minimum_spanning_tree(p).edge_set() <= g.delaunay_triangulate(p).edge_set()


def test_diameter_path():
    t = g.minimum_spanning_tree([(0, 0), (0.5, 0), (1, 0)])
    assert g.mst_diameter(t) == 1.0


def test_diameter_star():
    t = g.minimum_spanning_tree([(0, 0), (1, 0), (-1, 0), (0, 1), (0, -1)])
    assert g.mst_diameter(t) == 2.0


@pytest.mark.parametrize("seed", range(5))
def test_diameter_matches_all_pairs(seed):
    p = np.random.default_rng(seed).random((7, 2))
    t = g.minimum_spanning_tree(p)
    edges = [(int(i), int(j), float(w)) for (i, j), w in zip(t.edges, t.lengths)]
    assert g.mst_diameter(t) == pytest.approx(oracle.tree_diameter_all_pairs(7, edges), rel=1e-12)


def test_diameter_rejects_disconnected():
    pts = np.array([(0, 0), (1, 0), (2, 0), (3, 0)], dtype=float)
    bad = g.EdgeGraph(pts, np.array([(0, 1), (0, 1), (2, 3)]), np.array([1.0, 1.0, 1.0]))
    with pytest.raises(InvalidInputError):
        g.mst_diameter(bad)


def test_alpha_large_recovers_hull_on_grid():
    x, y = np.meshgrid(np.linspace(0, 1, 10), np.linspace(0, 1, 10))
    p = np.column_stack([x.ravel(), y.ravel()])
    a = g.alpha_shape(p, 1.0)
    assert a.area == pytest.approx(g.convex_hull(p).area, rel=0.02)


@pytest.mark.parametrize("seed", range(3))
def test_alpha_infinite_equals_hull(seed):
    p = np.random.default_rng(seed).random((30, 2))
    a = g.alpha_shape(p, np.inf)
    h = g.convex_hull(p)
    assert a.area == pytest.approx(h.area, rel=1e-12)
    assert a.perimeter == pytest.approx(h.perimeter, rel=1e-12)
    assert len(a.loops) == 1 and set(a.loops[0]) == set(h.loops[0])


def test_alpha_two_clusters():
    # jittered 4x5 lattices, far apart
    g0 = np.random.default_rng(3)
    x, y = np.meshgrid(np.arange(4), np.arange(5))
    lattice = np.column_stack([x.ravel(), y.ravel()]) * 0.02
    a = lattice + g0.normal(0, 0.002, lattice.shape) + (0.1, 0.1)
    b = lattice + g0.normal(0, 0.002, lattice.shape) + (0.8, 0.7)
    p = np.concatenate([a, b])
    shape = g.alpha_shape(p, 0.02)
    hull = g.convex_hull(p)
    assert len(shape.loops) == 2
    assert 0 < shape.area < hull.area
    # every kept triangle belongs to a single cluster
    assert all(len({int(k) >= 20 for k in t}) == 1 for t in shape.triangles)


def test_alpha_too_small_is_degenerate(rng):
    a = g.alpha_shape(rng.random((20, 2)), 1e-6)
    assert a.degenerate and a.area == 0.0 and a.perimeter == 0.0


def test_alpha_validation(rng):
    with pytest.raises(InvalidParameterError):
        g.alpha_shape(rng.random((5, 2)), 0.0)
    with pytest.raises(InsufficientPointsError):
        g.alpha_shape([(0, 0), (1, 1)], 1.0)


def test_hex_bin_identical_points():
    out = g.hex_bin([(0.3, 0.7)] * 5, 40)
    assert out.shape == (1, 2)
    np.testing.assert_allclose(out[0], (0.3, 0.7), rtol=1e-15)


def test_hex_bin_cell_bound(rng):
    out = g.hex_bin(rng.random((10_000, 2)), 40)
    assert 1 < out.shape[0] <= 1600


def test_hex_bin_cells_are_local(rng):
    p = rng.random((2000, 2))
    out = g.hex_bin(p, 10)
    # centroids of nearest-centre cells stay within one lattice spacing of the data
    d = np.min(np.linalg.norm(out[:, None, :] - p[None, :, :], axis=2), axis=1)
    assert np.all(d < 1 / 9)


def test_hex_bin_grid_validation():
    with pytest.raises(InvalidParameterError):
        g.hex_bin([(0.5, 0.5)], 1)


# -- properties -----------------------------------------------------------------

@settings(max_examples=60, deadline=None)
@given(point_sets, st.randoms(use_true_random=False))
def test_permutation_invariance(p, r):
    perm = list(range(len(p)))
    r.shuffle(perm)
    q = p[perm]
    assert g.convex_hull(p).area == g.convex_hull(q).area
    assert g.convex_hull(p).perimeter == g.convex_hull(q).perimeter
    assert g.minimum_spanning_tree(p).total_length == g.minimum_spanning_tree(q).total_length
    assert g.mst_diameter(g.minimum_spanning_tree(p)) == g.mst_diameter(g.minimum_spanning_tree(q))
    a, b = g.alpha_shape(p, 0.3), g.alpha_shape(q, 0.3)
    assert (a.area, a.perimeter) == (b.area, b.perimeter)


@settings(max_examples=60, deadline=None)
@given(point_sets, st.floats(1e-3, 2.0), st.floats(1e-3, 2.0))
def test_alpha_containment_and_monotonicity(p, a1, a2):
    lo, hi = sorted((a1, a2))
    hull = g.convex_hull(p).area
    small = g.alpha_shape(p, lo).area
    large = g.alpha_shape(p, hi).area
    assert small <= large + 1e-12
    assert large <= hull + 1e-12


@settings(max_examples=60, deadline=None)
@given(point_sets)
def test_hull_contains_every_point(p):
    h = g.convex_hull(p)
    loop = h.loops[0]
    if len(loop) < 3:
        return
    poly = p[loop]
    for q in p:
        for a, b in zip(poly, np.roll(poly, -1, axis=0)):
            assert oracle.cross(a, b, q) >= -1e-9


@settings(max_examples=40, deadline=None)
@given(point_sets, st.floats(0.01, 100), st.floats(-50, 50), st.floats(-50, 50))
def test_similarity_invariance_after_normalization(p, c, tx, ty):
    base = g.normalize_to_unit_square(p)
    moved = g.normalize_to_unit_square(c * p + (tx, ty))
    np.testing.assert_allclose(base, moved, atol=1e-9)
    assert g.minimum_spanning_tree(moved).total_length == pytest.approx(
        g.minimum_spanning_tree(base).total_length, abs=1e-9)
    assert g.convex_hull(moved).area == pytest.approx(g.convex_hull(base).area, abs=1e-9)
