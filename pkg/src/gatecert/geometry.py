"""Planar convex hulls of eigenvalue clouds and the exact distance from the
origin to the hull (the minimum-overlap geometry of a unitary's spectrum)."""

from __future__ import annotations

import numpy as np

_DEDUP_TOL = 1e-9
_CROSS_TOL = 1e-12


def _cross(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def convex_hull(points) -> np.ndarray:
    """Hull vertices in counter-clockwise order, collinear points removed.

    Monotone chain after a lexicographic sort; near-duplicate input points
    (within 1e-9, e.g. repeated eigenvalues) are merged first. Degenerate
    outputs (a single point, or the two endpoints of a segment) are allowed.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    if pts.shape[0] == 0:
        raise ValueError("convex_hull requires at least one point")
    if not np.all(np.isfinite(pts)):
        raise ValueError("points must be finite")

    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]
    kept = [pts[0]]
    for p in pts[1:]:
        if max(abs(p[0] - kept[-1][0]), abs(p[1] - kept[-1][1])) > _DEDUP_TOL:
            kept.append(p)
    pts = np.array(kept)
    if len(pts) == 1:
        return pts

    def chain(seq):
        out = []
        for p in seq:
            while len(out) >= 2 and _cross(out[-2], out[-1], p) <= _CROSS_TOL:
                out.pop()
            out.append(p)
        return out

    lower = chain(pts)
    upper = chain(pts[::-1])
    return np.array(lower[:-1] + upper[:-1])


def _segment_distance_to_origin(a, b) -> float:
    ab = b - a
    denom = float(ab @ ab)
    if denom < 1e-300:
        return float(np.hypot(*a))
    t = min(1.0, max(0.0, float(-(a @ ab)) / denom))
    return float(np.hypot(*(a + t * ab)))


def distance_origin_to_hull(hull) -> float:
    """Euclidean distance from the origin to a hull from convex_hull.

    Zero when the origin lies inside or within 1e-12 of the boundary (the
    conservative reading for a boundary-grazing origin).
    """
    h = np.asarray(hull, dtype=float).reshape(-1, 2)
    k = h.shape[0]
    if k == 0:
        raise ValueError("empty hull")
    if k == 1:
        return float(np.hypot(h[0, 0], h[0, 1]))
    if k == 2:
        return _segment_distance_to_origin(h[0], h[1])

    origin = np.zeros(2)
    inside = all(
        _cross(h[i], h[(i + 1) % k], origin) >= -_CROSS_TOL for i in range(k)
    )
    if inside:
        return 0.0
    return min(
        _segment_distance_to_origin(h[i], h[(i + 1) % k]) for i in range(k)
    )
