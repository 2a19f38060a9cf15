"""Small shared numeric helpers for grids of points."""

import numpy as np

# angle tolerance for line membership / parallelism tests, radians
ANGLE_TOL = 1e-10
# length tolerances are this factor times the bounding-box diagonal
LENGTH_RTOL = 1e-9


def bbox_diagonal(points):
    """Diagonal of the axis-aligned bounding box of a point array (..., d).

    Returns 1.0 for an empty or single-point cloud so it can be used as a
    scale divisor.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, points.shape[-1])
    if pts.shape[0] == 0:
        return 1.0
    diag = float(np.linalg.norm(pts.max(axis=0) - pts.min(axis=0)))
    return diag if diag > 0.0 else 1.0


def unit(v):
    n = float(np.linalg.norm(v))
    if n == 0.0:
        raise ValueError("cannot normalize a zero vector")
    return np.asarray(v, dtype=float) / n


def rot90(v):
    """Rotate a 2D vector by +pi/2."""
    return np.array([-v[1], v[0]], dtype=float)


def cross2(u, v):
    """Scalar cross product of 2D vectors (batched on the last axis)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    return u[..., 0] * v[..., 1] - u[..., 1] * v[..., 0]


def wrap_angle(a):
    """Wrap an angle to (-pi, pi]."""
    a = float(a)
    w = (a + np.pi) % (2.0 * np.pi) - np.pi
    return np.pi if w == -np.pi else w


def line_angle(u, v):
    """Unsigned angle between the lines spanned by u and v, in [0, pi/2]."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("angle with a zero vector is undefined")
    if u.shape[-1] == 2:
        s = abs(cross2(u, v)) / (nu * nv)
    else:
        s = np.linalg.norm(np.atleast_1d(np.cross(u, v))) / (nu * nv)
    return float(np.arcsin(np.clip(s, 0.0, 1.0)))


def farthest_pair(points):
    """Indices of (approximately) the two farthest points of a small cloud."""
    pts = np.asarray(points, dtype=float)
    n = len(pts)
    best = (0, min(1, n - 1))
    best_d = -1.0
    for a in range(n):
        d = np.linalg.norm(pts - pts[a], axis=1)
        b = int(np.argmax(d))
        if d[b] > best_d:
            best_d = float(d[b])
            best = (a, b)
    return best


def max_line_deviation(points):
    """Max distance of the points from the line through their farthest pair.

    Zero for fewer than three points: two points always span a line.
    """
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return 0.0
    a, b = farthest_pair(pts)
    base = pts[b] - pts[a]
    nb = np.linalg.norm(base)
    if nb == 0.0:
        # all points coincide
        return 0.0
    d = pts - pts[a]
    if pts.shape[1] == 2:
        dev = np.abs(d[:, 0] * base[1] - d[:, 1] * base[0]) / nb
    else:
        dev = np.linalg.norm(np.cross(d, base), axis=1) / nb
    return float(dev.max())


def spans_line(points, scale, rtol=LENGTH_RTOL):
    """True if a polygon genuinely spans 2D/3D, i.e. is NOT within tolerance
    of a single line.  Polygons with fewer than three vertices pass
    vacuously."""
    pts = np.asarray(points, dtype=float)
    if len(pts) < 3:
        return True
    return max_line_deviation(pts) > rtol * scale
