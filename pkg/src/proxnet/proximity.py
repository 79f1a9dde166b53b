"""Planar proximity graphs over embedded points.

Relative neighborhood rule: keep (u, v) unless some witness w is strictly
closer to both endpoints than they are to each other, i.e.
max(d(u,w), d(v,w)) < d(u,v). Exact equality does not block, so an
equilateral triangle keeps all three edges.

Gabriel rule: keep (u, v) unless some w falls inside or on the circle with
diameter uv, i.e. d2(u,w) + d2(v,w) <= d2(u,v). Boundary ties block, so a
point exactly on the circle kills the edge; on a square lattice this leaves
only the four axis neighbors.

Every kept Gabriel edge has a strictly empty diametral disk, which makes it
an edge of every Delaunay triangulation; the relative neighborhood graph is
a subset of the Gabriel graph. That is what licenses the Delaunay prefilter:
candidates are Delaunay edges, each then checked by the exact rule, and the
result is identical to testing all pairs.
"""
from __future__ import annotations

import numpy as np

from .graph import Graph
from .points import PointSet

_LITERAL_MAX_N = 4096
_AUTO_LITERAL_N = 600


def _require_distinct(pts: np.ndarray) -> None:
    if len(np.unique(pts, axis=0)) != len(pts):
        raise ValueError("points must be pairwise distinct")


def _sq_dist_matrix(pts: np.ndarray) -> np.ndarray:
    dx = np.subtract.outer(pts[:, 0], pts[:, 0])
    dy = np.subtract.outer(pts[:, 1], pts[:, 1])
    return dx * dx + dy * dy


def _sq_dist_row(pts: np.ndarray, u: int) -> np.ndarray:
    d = pts - pts[u]
    return (d * d).sum(axis=1)


def _edges_all_pairs(pts: np.ndarray, kind: str) -> np.ndarray:
    """Test every pair against every witness. O(n^3) work, vectorized per node."""
    n = len(pts)
    if n > _LITERAL_MAX_N:
        raise ValueError(
            f"literal construction caps at n={_LITERAL_MAX_N}; use method='delaunay'")
    d2 = _sq_dist_matrix(pts)
    edges = []
    for u in range(n - 1):
        rest = np.arange(u + 1, n)
        duv = d2[u, rest]
        if kind == "gg":
            vals = d2[rest, :] + d2[u, :][None, :]
        else:
            vals = np.maximum(d2[rest, :], d2[u, :][None, :])
        vals[:, u] = np.inf
        vals[np.arange(len(rest)), rest] = np.inf
        winner = vals.min(axis=1)
        keep = winner > duv if kind == "gg" else winner >= duv
        for v in rest[keep]:
            edges.append((u, int(v)))
    return np.array(edges, dtype=np.int64).reshape(-1, 2)


def _delaunay_candidates(pts: np.ndarray) -> np.ndarray:
    n = len(pts)
    if n <= 3:
        uu, vv = np.triu_indices(n, k=1)
        return np.column_stack([uu, vv]).astype(np.int64)
    try:
        from scipy.spatial import Delaunay, QhullError
        tri = Delaunay(pts)
    except QhullError:
        # degenerate input (e.g. all points collinear): fall back to all pairs
        uu, vv = np.triu_indices(n, k=1)
        return np.column_stack([uu, vv]).astype(np.int64)
    s = tri.simplices
    pairs = np.concatenate([s[:, [0, 1]], s[:, [1, 2]], s[:, [0, 2]]])
    lo = pairs.min(axis=1)
    hi = pairs.max(axis=1)
    keys = np.unique(lo.astype(np.int64) * n + hi)
    return np.column_stack([keys // n, keys % n])


def _edges_prefiltered(pts: np.ndarray, kind: str) -> np.ndarray:
    cands = _delaunay_candidates(pts)
    edges = []
    last_u, su = -1, None
    for u, v in cands:
        if u != last_u:
            su = _sq_dist_row(pts, u)
            last_u = u
        sv = _sq_dist_row(pts, v)
        duv = su[v]
        if kind == "gg":
            vals = su + sv
        else:
            vals = np.maximum(su, sv)
        vals[u] = np.inf
        vals[v] = np.inf
        winner = vals.min()
        keep = winner > duv if kind == "gg" else winner >= duv
        if keep:
            edges.append((int(u), int(v)))
    return np.array(edges, dtype=np.int64).reshape(-1, 2)


def _build(ps: PointSet, kind: str, method: str) -> Graph:
    pts = ps.points
    _require_distinct(pts)
    if method == "auto":
        method = "literal" if len(pts) <= _AUTO_LITERAL_N else "delaunay"
    if method == "literal":
        edges = _edges_all_pairs(pts, kind)
    elif method == "delaunay":
        edges = _edges_prefiltered(pts, kind)
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(edges):
        edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))]
    return Graph.from_edges(pts, edges)


def build_rng(ps: PointSet, method: str = "literal") -> Graph:
    """Relative neighborhood graph of a point set.

    method: 'literal' tests all pairs (the defining O(n^3) rule),
    'delaunay' prefilters candidates through a Delaunay triangulation with
    identical results, 'auto' picks by size.
    """
    return _build(ps, "rng", method)


def build_gg(ps: PointSet, method: str = "literal") -> Graph:
    """Gabriel graph of a point set. Same method choices as build_rng."""
    return _build(ps, "gg", method)


def check_planar_embedding(g: Graph):
    """Check that no two non-adjacent edges intersect as drawn.

    Returns (True, None) or (False, ((u1, v1), (u2, v2))) naming the first
    offending pair in edge order. Touching counts: an endpoint lying on
    another edge's interior, or collinear overlap, is a crossing.
    """
    edges = g.edges()
    m = len(edges)
    if m < 2:
        return True, None
    P = g.coords
    a = P[edges[:, 0]]
    b = P[edges[:, 1]]

    def cross(ox, oy, px, py, qx, qy):
        return (px - ox) * (qy - oy) - (py - oy) * (qx - ox)

    for i in range(m - 1):
        u1, v1 = edges[i]
        ax, ay = a[i]
        bx, by = b[i]
        cx, cy = a[i + 1:, 0], a[i + 1:, 1]
        dx, dy = b[i + 1:, 0], b[i + 1:, 1]
        share = ((edges[i + 1:, 0] == u1) | (edges[i + 1:, 0] == v1)
                 | (edges[i + 1:, 1] == u1) | (edges[i + 1:, 1] == v1))
        d1 = cross(cx, cy, dx, dy, ax, ay)
        d2 = cross(cx, cy, dx, dy, bx, by)
        d3 = cross(ax, ay, bx, by, cx, cy)
        d4 = cross(ax, ay, bx, by, dx, dy)
        proper = (((d1 > 0) & (d2 < 0)) | ((d1 < 0) & (d2 > 0))) & \
                 (((d3 > 0) & (d4 < 0)) | ((d3 < 0) & (d4 > 0)))

        def on_seg(px, py, qx, qy, xx, xy):
            return (np.minimum(px, qx) <= xx) & (xx <= np.maximum(px, qx)) & \
                   (np.minimum(py, qy) <= xy) & (xy <= np.maximum(py, qy))

        touch = ((d1 == 0) & on_seg(cx, cy, dx, dy, ax, ay)) | \
                ((d2 == 0) & on_seg(cx, cy, dx, dy, bx, by)) | \
                ((d3 == 0) & on_seg(ax, ay, bx, by, cx, cy)) | \
                ((d4 == 0) & on_seg(ax, ay, bx, by, dx, dy))
        hit = (proper | touch) & ~share
        if hit.any():
            j = i + 1 + int(np.argmax(hit))
            return False, ((int(u1), int(v1)),
                           (int(edges[j, 0]), int(edges[j, 1])))
    return True, None
