"""Compiled inner loops for the geometry and scagnostics hot path.

Every kernel takes float64 arrays of shape (n, 2) in canonical order
(lexicographically sorted by x then y) so that results do not depend on the
order the caller supplied the points in.
"""

import numpy as np
from numba import njit

# Slack used by fence / denominator comparisons on normalized coordinates.
EPS = 1e-12


@njit(cache=True)
def prim_mst(p):
    """Euclidean MST by Prim's algorithm on the implicit complete graph.

    Returns ``(parent, length)``; vertex 0 is the root with ``parent[0] == -1``.
    Ties resolve to the lowest vertex index.
    """
    n = p.shape[0]
    parent = np.full(n, -1, np.int64)
    best = np.full(n, np.inf)
    used = np.zeros(n, np.bool_)
    best[0] = 0.0
    for _ in range(n):
        u = -1
        bu = np.inf
        for i in range(n):
            if not used[i] and best[i] < bu:
                bu = best[i]
                u = i
        used[u] = True
        ux = p[u, 0]
        uy = p[u, 1]
        for v in range(n):
            if not used[v]:
                dx = ux - p[v, 0]
                dy = uy - p[v, 1]
                d = np.sqrt(dx * dx + dy * dy)
                if d < best[v]:
                    best[v] = d
                    parent[v] = u
    best[0] = 0.0
    return parent, best


@njit(cache=True)
def quantile_sorted(s, q):
    """Linear-interpolation quantile of an ascending array (index q*(m-1))."""
    m = s.shape[0]
    h = q * (m - 1)
    lo = int(np.floor(h))
    if lo >= m - 1:
        return s[m - 1]
    frac = h - lo
    return s[lo] + frac * (s[lo + 1] - s[lo])


@njit(cache=True)
def _adjacency(n, parent):
    deg = np.zeros(n, np.int64)
    for v in range(n):
        if parent[v] >= 0:
            deg[v] += 1
            deg[parent[v]] += 1
    start = np.zeros(n + 1, np.int64)
    for v in range(n):
        start[v + 1] = start[v] + deg[v]
    fill = start[:-1].copy()
    # nbr holds the neighbour, via the vertex whose parent edge it is
    nbr = np.empty(start[n], np.int64)
    via = np.empty(start[n], np.int64)
    for v in range(n):
        u = parent[v]
        if u >= 0:
            nbr[fill[v]] = u
            via[fill[v]] = v
            fill[v] += 1
            nbr[fill[u]] = v
            via[fill[u]] = v
            fill[u] += 1
    return deg, start, nbr, via


@njit(cache=True)
def _farthest(src, n, start, nbr, via, length):
    dist = np.full(n, -1.0)
    stack = np.empty(n, np.int64)
    top = 0
    stack[0] = src
    top = 1
    dist[src] = 0.0
    while top > 0:
        top -= 1
        u = stack[top]
        for k in range(start[u], start[u + 1]):
            w = nbr[k]
            if dist[w] < 0.0:
                dist[w] = dist[u] + length[via[k]]
                stack[top] = w
                top += 1
    far = src
    for v in range(n):
        if dist[v] > dist[far]:
            far = v
    return far, dist[far]


@njit(cache=True)
def tree_diameter(n, parent, length):
    """Longest path length in the tree, by two farthest-vertex sweeps."""
    if n < 2:
        return 0.0
    deg, start, nbr, via = _adjacency(n, parent)
    a, _ = _farthest(0, n, start, nbr, via, length)
    _, d = _farthest(a, n, start, nbr, via, length)
    return d


@njit(cache=True)
def tree_measures(p, parent, length):
    """MST-derived measures for a tree stored as a parent array.

    Returns (outlying, skewed, clumpy, sparse, striated, stringy, q90).
    """
    n = p.shape[0]
    m = n - 1
    lens = np.empty(m, np.float64)
    k = 0
    total = 0.0
    for v in range(n):
        if parent[v] >= 0:
            lens[k] = length[v]
            total += length[v]
            k += 1
    s = np.sort(lens)
    q10 = quantile_sorted(s, 0.10)
    q25 = quantile_sorted(s, 0.25)
    q50 = quantile_sorted(s, 0.50)
    q75 = quantile_sorted(s, 0.75)
    q90 = quantile_sorted(s, 0.90)
    fence = q75 + 1.5 * (q75 - q25) + EPS

    deg, start, nbr, via = _adjacency(n, parent)

    # outlying: edges touching a vertex whose incident edges all exceed the fence
    outlier = np.zeros(n, np.bool_)
    for v in range(n):
        if deg[v] == 0:
            continue
        flag = True
        for j in range(start[v], start[v + 1]):
            if length[via[j]] <= fence:
                flag = False
                break
        outlier[v] = flag
    out_len = 0.0
    for v in range(n):
        if parent[v] >= 0 and (outlier[v] or outlier[parent[v]]):
            out_len += length[v]
    outlying = out_len / total if total > 0.0 else 0.0

    denom = q90 - q10
    skewed = (q90 - q50) / denom if denom > EPS else 0.0

    # striated: among degree-2 vertices, share with a (near) straight bend
    n2 = 0
    n_str = 0
    for v in range(n):
        if deg[v] != 2:
            continue
        n2 += 1
        a = nbr[start[v]]
        b = nbr[start[v] + 1]
        ax = p[a, 0] - p[v, 0]
        ay = p[a, 1] - p[v, 1]
        bx = p[b, 0] - p[v, 0]
        by = p[b, 1] - p[v, 1]
        la = np.sqrt(ax * ax + ay * ay)
        lb = np.sqrt(bx * bx + by * by)
        if la > 0.0 and lb > 0.0:
            if (ax * bx + ay * by) / (la * lb) <= -0.75:
                n_str += 1
    striated = n_str / n2 if n2 > 0 else 0.0

    a0, _ = _farthest(0, n, start, nbr, via, length)
    _, diam = _farthest(a0, n, start, nbr, via, length)
    stringy = diam / total if total > 0.0 else 0.0

    # clumpy: long cut edges whose smaller side is tight relative to the cut
    clumpy = 0.0
    in_sub = np.zeros(n, np.bool_)
    stack = np.empty(n, np.int64)
    for v in range(n):
        if parent[v] < 0 or length[v] <= fence:
            continue
        in_sub[:] = False
        in_sub[v] = True
        stack[0] = v
        top = 1
        size_in = 1
        while top > 0:
            top -= 1
            u = stack[top]
            for j in range(start[u], start[u + 1]):
                w = nbr[j]
                if w != parent[u] and not in_sub[w]:
                    in_sub[w] = True
                    size_in += 1
                    stack[top] = w
                    top += 1
        size_out = n - size_in
        max_in = 0.0
        max_out = 0.0
        for u in range(n):
            if parent[u] < 0 or u == v:
                continue
            if in_sub[u]:
                if length[u] > max_in:
                    max_in = length[u]
            elif length[u] > max_out:
                max_out = length[u]
        if size_in < size_out:
            if size_in < 2:
                continue
            runt = max_in
        elif size_out < size_in:
            if size_out < 2:
                continue
            runt = max_out
        else:
            if size_in < 2:
                continue
            runt = max(max_in, max_out)
        c = 1.0 - runt / length[v]
        if c > clumpy:
            clumpy = c
    return outlying, skewed, clumpy, q90, striated, stringy, q90


@njit(cache=True)
def hull_indices(p):
    """Andrew's monotone chain on lexicographically sorted points.

    Returns hull vertex indices counter-clockwise, collinear points dropped.
    """
    n = p.shape[0]
    h = np.empty(2 * n + 1, np.int64)
    k = 0
    for i in range(n):
        while k >= 2:
            o = h[k - 2]
            a = h[k - 1]
            cr = (p[a, 0] - p[o, 0]) * (p[i, 1] - p[o, 1]) - (p[a, 1] - p[o, 1]) * (p[i, 0] - p[o, 0])
            if cr <= 0.0:
                k -= 1
            else:
                break
        h[k] = i
        k += 1
    low = k + 1
    for i in range(n - 2, -1, -1):
        while k >= low:
            o = h[k - 2]
            a = h[k - 1]
            cr = (p[a, 0] - p[o, 0]) * (p[i, 1] - p[o, 1]) - (p[a, 1] - p[o, 1]) * (p[i, 0] - p[o, 0])
            if cr <= 0.0:
                k -= 1
            else:
                break
        h[k] = i
        k += 1
    if k <= 1:
        return h[:1].copy()
    out = h[: k - 1].copy()
    # chain of identical points collapses to a single vertex
    if out.shape[0] == 2 and p[out[0], 0] == p[out[1], 0] and p[out[0], 1] == p[out[1], 1]:
        return out[:1].copy()
    return out


@njit(cache=True)
def polygon_area_perimeter(p, idx):
    """Shoelace area and closed perimeter of the polygon p[idx]."""
    m = idx.shape[0]
    if m < 2:
        return 0.0, 0.0
    area2 = 0.0
    per = 0.0
    for i in range(m):
        a = idx[i]
        b = idx[(i + 1) % m]
        area2 += p[a, 0] * p[b, 1] - p[b, 0] * p[a, 1]
        dx = p[b, 0] - p[a, 0]
        dy = p[b, 1] - p[a, 1]
        per += np.sqrt(dx * dx + dy * dy)
    return abs(area2) * 0.5, per


@njit(cache=True)
def alpha_complex(p, simplices, neighbors, alpha):
    """Area and boundary length of the Delaunay triangles with circumradius <= alpha.

    Returns ``(area, perimeter, keep)``.
    """
    t = simplices.shape[0]
    keep = np.zeros(t, np.bool_)
    side = np.empty((t, 3), np.float64)
    tri_area = np.zeros(t, np.float64)
    for i in range(t):
        a = simplices[i, 0]
        b = simplices[i, 1]
        c = simplices[i, 2]
        # side k is opposite vertex k
        dx = p[b, 0] - p[c, 0]
        dy = p[b, 1] - p[c, 1]
        side[i, 0] = np.sqrt(dx * dx + dy * dy)
        dx = p[a, 0] - p[c, 0]
        dy = p[a, 1] - p[c, 1]
        side[i, 1] = np.sqrt(dx * dx + dy * dy)
        dx = p[a, 0] - p[b, 0]
        dy = p[a, 1] - p[b, 1]
        side[i, 2] = np.sqrt(dx * dx + dy * dy)
        cr = (p[b, 0] - p[a, 0]) * (p[c, 1] - p[a, 1]) - (p[b, 1] - p[a, 1]) * (p[c, 0] - p[a, 0])
        ar = 0.5 * abs(cr)
        tri_area[i] = ar
        if ar > 0.0:
            r = side[i, 0] * side[i, 1] * side[i, 2] / (4.0 * ar)
            keep[i] = r <= alpha
    area = 0.0
    per = 0.0
    for i in range(t):
        if not keep[i]:
            continue
        area += tri_area[i]
        for k in range(3):
            nb = neighbors[i, k]
            if nb < 0 or not keep[nb]:
                per += side[i, k]
    return area, per, keep


@njit(cache=True)
def average_ranks(x):
    """Ranks 1..n with ties assigned their average rank."""
    n = x.shape[0]
    order = np.argsort(x, kind="mergesort")
    r = np.empty(n, np.float64)
    i = 0
    while i < n:
        j = i
        while j + 1 < n and x[order[j + 1]] == x[order[i]]:
            j += 1
        avg = 0.5 * (i + j) + 1.0
        for k in range(i, j + 1):
            r[order[k]] = avg
        i = j + 1
    return r


@njit(cache=True)
def spearman_squared(x, y):
    """Squared Spearman correlation; 0 when either axis has no spread."""
    n = x.shape[0]
    rx = average_ranks(x)
    ry = average_ranks(y)
    mx = rx.mean()
    my = ry.mean()
    sxy = 0.0
    sxx = 0.0
    syy = 0.0
    for i in range(n):
        dx = rx[i] - mx
        dy = ry[i] - my
        sxy += dx * dy
        sxx += dx * dx
        syy += dy * dy
    if sxx <= 0.0 or syy <= 0.0:
        return 0.0
    rho = sxy / np.sqrt(sxx * syy)
    v = rho * rho
    return min(max(v, 0.0), 1.0)


@njit(cache=True)
def normalize_sorted(p):
    """Unit-square min-max scaling followed by lexicographic (x, y) sorting.

    Matches ``geometry.normalize_to_unit_square`` element for element. Returns
    ``(q, ok)`` where ``ok`` is False if any coordinate is non-finite.
    """
    n = p.shape[0]
    q = np.empty((n, 2), np.float64)
    for k in range(2):
        lo = np.inf
        hi = -np.inf
        for i in range(n):
            v = p[i, k]
            if not np.isfinite(v):
                return q, False
            if v < lo:
                lo = v
            if v > hi:
                hi = v
        span = hi - lo
        if span > 0.0:
            for i in range(n):
                q[i, k] = (p[i, k] - lo) / span
        else:
            for i in range(n):
                q[i, k] = 0.5
    by_y = np.argsort(q[:, 1], kind="mergesort")
    xs = q[by_y, 0]
    order = by_y[np.argsort(xs, kind="mergesort")]
    return q[order], True
