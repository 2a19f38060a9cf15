"""Independent verification oracles for quad-surface grids.

These checks deliberately avoid the closed-form construction machinery:
face congruence is certified through the six point distances of each quad
(4 edges + 2 diagonals, which pin a planar quad up to rigid motion and
reflection), planarity through tetrahedron volumes, and whole-surface
congruence through a least-squares rigid alignment.
"""

from dataclasses import dataclass

import numpy as np

from . import errors
from .geometry import bbox_diagonal


def _face_corners(points):
    """Corners of every face as arrays p00, p01, p11, p10 with face (i, j)
    spanning grid vertices (i-1..i, j-1..j)."""
    return (
        points[:-1, :-1],
        points[:-1, 1:],
        points[1:, 1:],
        points[1:, :-1],
    )


def planarity(surface) -> float:
    """Max over faces of the distance of the fourth vertex from the plane of
    the other three, relative to the bounding-box diagonal.

    The distance uses the largest of the four corner triangles as the base
    plane; degenerate faces (all triangles collapsed) contribute zero.
    Accepts a THedron or a raw (m+1, n+1, 3) array.
    """
    pts = np.asarray(getattr(surface, "points", surface), dtype=float)
    scale = bbox_diagonal(pts)
    p00, p01, p11, p10 = _face_corners(pts)
    e1 = p01 - p00
    e2 = p11 - p00
    e3 = p10 - p00
    vol = np.abs(np.einsum("ijk,ijk->ij", np.cross(e1, e2), e3))
    crosses = [
        np.cross(p01 - p00, p11 - p00),
        np.cross(p01 - p00, p10 - p00),
        np.cross(p11 - p00, p10 - p00),
        np.cross(p11 - p01, p10 - p01),
    ]
    area2 = np.max(np.stack([np.linalg.norm(c, axis=-1) for c in crosses]), axis=0)
    dist = np.where(area2 > 1e-300 * scale**2, vol / np.maximum(area2, 1e-300), 0.0)
    return float(dist.max() / scale) if dist.size else 0.0


@dataclass(frozen=True)
class IsometryReport:
    """Worst-face congruence residuals between two combinatorially equal
    quad-surfaces."""

    max_edge_residual: float
    max_diagonal_residual: float
    worst_face: tuple
    tolerance: float

    @property
    def passed(self) -> bool:
        return (
            self.max_edge_residual <= self.tolerance
            and self.max_diagonal_residual <= self.tolerance
        )

    def __bool__(self):
        return self.passed


def _face_lengths(points):
    """Edge (4) and diagonal (2) lengths of every face, shapes (m, n, 4|2)."""
    p00, p01, p11, p10 = _face_corners(points)
    edges = np.stack(
        [
            np.linalg.norm(p01 - p00, axis=-1),
            np.linalg.norm(p11 - p01, axis=-1),
            np.linalg.norm(p10 - p11, axis=-1),
            np.linalg.norm(p00 - p10, axis=-1),
        ],
        axis=-1,
    )
    diags = np.stack(
        [
            np.linalg.norm(p11 - p00, axis=-1),
            np.linalg.norm(p10 - p01, axis=-1),
        ],
        axis=-1,
    )
    return edges, diags


def face_residual_grid(a, b):
    """Per-face congruence residual (max over the 4 edges and 2 diagonals),
    relative to surface a's lengths; shape (m, n)."""
    pa = np.asarray(a.points, dtype=float)
    pb = np.asarray(b.points, dtype=float)
    if pa.shape != pb.shape:
        raise errors.ShapeMismatch(f"grids {pa.shape[:2]} vs {pb.shape[:2]}")
    floor = 1e-9 * bbox_diagonal(pa)
    ea, da = _face_lengths(pa)
    eb, db = _face_lengths(pb)
    edge_res = np.abs(eb - ea) / np.maximum(ea, floor)
    diag_res = np.abs(db - da) / np.maximum(da, floor)
    return np.maximum(edge_res.max(axis=-1), diag_res.max(axis=-1))


def check_isometric(a, b, tol=1e-9) -> IsometryReport:
    """Face-by-face congruence of two grids via the six lengths of each quad.

    Residuals are relative to the reference length of surface a, with a
    floor of 1e-9 of its bounding-box diagonal to keep degenerate edges from
    dominating.
    """
    pa = np.asarray(a.points, dtype=float)
    pb = np.asarray(b.points, dtype=float)
    if pa.shape != pb.shape:
        raise errors.ShapeMismatch(f"grids {pa.shape[:2]} vs {pb.shape[:2]}")
    floor = 1e-9 * bbox_diagonal(pa)

    ea, da = _face_lengths(pa)
    eb, db = _face_lengths(pb)
    edge_res = np.abs(eb - ea) / np.maximum(ea, floor)
    diag_res = np.abs(db - da) / np.maximum(da, floor)

    worst_edge = float(edge_res.max()) if edge_res.size else 0.0
    worst_diag = float(diag_res.max()) if diag_res.size else 0.0
    if edge_res.size:
        flat = np.argmax(np.maximum(edge_res.max(axis=-1), diag_res.max(axis=-1)))
        wf = np.unravel_index(flat, edge_res.shape[:2])
        worst = (int(wf[0]) + 1, int(wf[1]) + 1)
    else:
        worst = (0, 0)
    return IsometryReport(
        max_edge_residual=worst_edge,
        max_diagonal_residual=worst_diag,
        worst_face=worst,
        tolerance=tol,
    )


def face_normals(surface):
    """Unit normals of all faces via the diagonal cross product (exact for
    planar quads).  Raises DegenerateFace where the area vanishes."""
    pts = np.asarray(surface.points, dtype=float)
    scale = bbox_diagonal(pts)
    p00, p01, p11, p10 = _face_corners(pts)
    n = np.cross(p11 - p00, p10 - p01)
    norms = np.linalg.norm(n, axis=-1)
    if np.any(norms <= 1e-12 * scale**2):
        i, j = np.unravel_index(int(np.argmin(norms)), norms.shape)
        raise errors.DegenerateFace(
            f"face ({i + 1}, {j + 1}) has numerically zero area", face=(i + 1, j + 1)
        )
    return n / norms[..., None]


def dihedral_angles(surface):
    """Unsigned dihedral angles at the interior edges, via face normals.

    Returns (across_rows, across_cols): angles between faces (i, j), (i+1, j)
    and between (i, j), (i, j+1).  A flat surface gives pi everywhere.
    """
    nrm = face_normals(surface)
    across_rows = np.einsum("ijk,ijk->ij", nrm[:-1, :], nrm[1:, :])
    across_cols = np.einsum("ijk,ijk->ij", nrm[:, :-1], nrm[:, 1:])
    rows = np.pi - np.arccos(np.clip(across_rows, -1.0, 1.0))
    cols = np.pi - np.arccos(np.clip(across_cols, -1.0, 1.0))
    return rows, cols


def max_dihedral_change(a, b) -> float:
    """Largest absolute change of any interior dihedral angle between two
    combinatorially equal surfaces."""
    ra, ca = dihedral_angles(a)
    rb, cb = dihedral_angles(b)
    if ra.shape != rb.shape or ca.shape != cb.shape:
        raise errors.ShapeMismatch("grids differ")
    parts = []
    if ra.size:
        parts.append(np.abs(ra - rb).max())
    if ca.size:
        parts.append(np.abs(ca - cb).max())
    return float(max(parts)) if parts else 0.0


@dataclass(frozen=True)
class CongruenceResult:
    congruent: bool
    reflected: bool
    max_deviation: float

    def __bool__(self):
        return self.congruent


def _aligned_deviation(pa, pb, allow_reflection):
    """Max vertex deviation after the best rigid alignment of pb onto pa,
    via the cross-covariance orthogonal polar factor."""
    ca = pa.mean(axis=0)
    cb = pb.mean(axis=0)
    qa = pa - ca
    qb = pb - cb
    H = qb.T @ qa
    U, _, Vt = np.linalg.svd(H)
    results = []
    dets = [1.0, -1.0] if allow_reflection else [1.0]
    for target in dets:
        D = np.eye(3)
        # force det(R) to the requested sign
        D[2, 2] = target * np.sign(np.linalg.det(U @ Vt))
        R = (U @ D @ Vt).T
        dev = float(np.linalg.norm(qb @ R.T - qa, axis=1).max())
        reflected = np.linalg.det(R) < 0
        results.append((dev, reflected))
    return min(results, key=lambda r: r[0])


def check_congruent(a, b, tol=1e-9, allow_reflection=True) -> CongruenceResult:
    """Whether a rigid motion (optionally with a reflection) maps one grid
    onto the other within tol x bounding-box diagonal."""
    pa = np.asarray(a.points, dtype=float).reshape(-1, 3)
    pb = np.asarray(b.points, dtype=float).reshape(-1, 3)
    if pa.shape != pb.shape:
        raise errors.ShapeMismatch("grids differ")
    scale = bbox_diagonal(np.asarray(a.points))
    dev, reflected = _aligned_deviation(pa, pb, allow_reflection)
    return CongruenceResult(
        congruent=dev <= tol * scale, reflected=bool(reflected), max_deviation=dev / scale
    )
