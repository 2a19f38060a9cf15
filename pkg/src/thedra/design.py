"""Design data and the planar ground view of trapezoidal quad-surfaces.

A T-hedron (a quad-surface whose two families of coordinate-polygon planes
are mutually orthogonal) projects onto its base trajectory plane as a T-net:
an (m+1) x (n+1) grid of 2D points whose profile rows lie on lines L_i and
whose faces are trapezoids with legs on consecutive lines.

The whole surface is encoded by a small set of numbers: the directions
phi_i of the profile lines, the directions psi_i of the base-normal lines
M_i, signed lengths f_0j along L_0 and g_i0 along the rotated normals J M_i,
and the trajectory-plane heights z_j.  Everything here is closed form; all
tolerances are floating-error slack, not modelling choices.
"""

from dataclasses import dataclass

import numpy as np

from . import errors
from .geometry import (
    ANGLE_TOL,
    LENGTH_RTOL,
    bbox_diagonal,
    cross2,
    spans_line,
    wrap_angle,
)

_HALF_PI = 0.5 * np.pi


def _freeze(a, dtype=float):
    arr = np.array(a, dtype=dtype)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class DesignData:
    """Generating data of a T-hedron in the normal form where the base
    trajectory plane is z=0, the first profile line is the oriented x-axis
    and the first vertex sits at the origin.

    phi, psi, g0 have one entry per profile strip (i = 1..m); f0 has one per
    trajectory strip (j = 1..n); z has n+1 entries with z[0] = 0.
    """

    phi: np.ndarray
    psi: np.ndarray
    f0: np.ndarray
    g0: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("phi", "psi", "f0", "g0", "z"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        if self.phi.ndim != 1 or self.phi.shape != self.psi.shape:
            raise ValueError("phi and psi must be 1D arrays of equal length")
        if self.g0.shape != self.phi.shape:
            raise ValueError("g0 must have one entry per profile strip")
        if self.z.ndim != 1 or self.z.shape[0] != self.f0.shape[0] + 1:
            raise ValueError("z must have exactly one more entry than f0")
        if self.m < 1 or self.n < 1:
            raise ValueError("need at least one strip in each direction")
        if self.z[0] != 0.0:
            raise ValueError("designs are stored in normal form with z[0] = 0")

    @property
    def m(self):
        return int(self.phi.shape[0])

    @property
    def n(self):
        return int(self.f0.shape[0])

    @property
    def phi_full(self):
        """Line angles including the conventional phi_0 = 0."""
        return np.concatenate(([0.0], self.phi))

    def replace_g0(self, g0):
        return DesignData(self.phi, self.psi, self.f0, g0, self.z)


@dataclass(frozen=True)
class DerivedQuantities:
    """Per-strip sector angles and the cumulative shrink factors.

    eta[i-1] is the angle from L_{i-1} to M_i, theta[i-1] from M_i to L_i.
    c[i-1] = cos eta_i / cos theta_i is the factor by which leg lengths grow
    from one profile line to the next; C is its cumulative product with
    C[0] = 1.  F is the cumulative sum of f0 with F[0] = 0.
    """

    eta: np.ndarray
    theta: np.ndarray
    c: np.ndarray
    C: np.ndarray
    F: np.ndarray

    def __post_init__(self):
        for name in ("eta", "theta", "c", "C", "F"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))


@dataclass(frozen=True)
class TNet:
    """Ground view of a T-hedron: the point grid plus its oriented lines.

    points has shape (m+1, n+1, 2).  phi_full holds the m+1 oriented line
    angles (phi_full[0] = 0 in normal form), psi the m normal-line angles.
    The lines L_i are recoverable as (points[i, 0], (cos phi_i, sin phi_i)).
    """

    points: np.ndarray
    phi_full: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        for name in ("points", "phi_full", "psi"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))

    @property
    def m(self):
        return int(self.points.shape[0]) - 1

    @property
    def n(self):
        return int(self.points.shape[1]) - 1

    @property
    def lines(self):
        """(anchor point, unit direction) for each profile line."""
        d = np.stack([np.cos(self.phi_full), np.sin(self.phi_full)], axis=-1)
        return list(zip(self.points[:, 0, :], d))


def derive(design: DesignData) -> DerivedQuantities:
    """Sector angles, shrink factors and cumulative lengths of a design.

    Rejects any design whose sector angles leave (-pi/2, pi/2), whose g0
    entries vanish, or whose consecutive heights coincide.
    """
    phi_prev = design.phi_full[:-1]
    eta = design.psi - phi_prev
    theta = design.phi - design.psi

    for name, arr in (("eta", eta), ("theta", theta)):
        bad = np.nonzero(np.abs(arr) >= _HALF_PI)[0]
        if bad.size:
            i = int(bad[0])
            raise errors.AngleOutOfRange(
                f"|{name}[{i + 1}]| = {abs(arr[i]):.6g} >= pi/2", index=i + 1
            )
    bad = np.nonzero(design.g0 == 0.0)[0]
    if bad.size:
        i = int(bad[0])
        raise errors.ZeroLength(f"g0[{i + 1}] must be nonzero", index=i + 1)
    dz = np.diff(design.z)
    bad = np.nonzero(dz == 0.0)[0]
    if bad.size:
        j = int(bad[0])
        raise errors.DegenerateHeights(
            f"z[{j}] == z[{j + 1}]; trajectory planes must be distinct", index=j + 1
        )

    c = np.cos(eta) / np.cos(theta)
    C = np.concatenate(([1.0], np.cumprod(c)))
    F = np.concatenate(([0.0], np.cumsum(design.f0)))
    return DerivedQuantities(eta=eta, theta=theta, c=c, C=C, F=F)


def tnet_points(design: DesignData, derived: DerivedQuantities | None = None):
    """Raw ground-view point grid of a design, without validity checks."""
    der = derived if derived is not None else derive(design)
    jm = np.stack([-np.sin(design.psi), np.cos(design.psi)], axis=-1)
    base = np.vstack([[0.0, 0.0], np.cumsum(design.g0[:, None] * jm, axis=0)])
    dirs = np.stack([np.cos(design.phi_full), np.sin(design.phi_full)], axis=-1)
    scale = (der.C[:, None] * dirs)[:, None, :]  # (m+1, 1, 2)
    return base[:, None, :] + der.F[None, :, None] * scale


def build_tnet(design: DesignData) -> TNet:
    """Construct the ground view of a design and check that it is a T-net.

    Raises SignConsistency when the recovered g lengths mix signs along a
    profile strip, CollinearPolygon when a generating polygon degenerates to
    a line (only meaningful for polygons with at least three vertices).
    """
    der = derive(design)
    pts = tnet_points(design, der)
    scale = bbox_diagonal(pts)

    # signed strip widths g_ij must not flip sign along a strip
    jm = np.stack([-np.sin(design.psi), np.cos(design.psi)], axis=-1)
    gs = np.einsum("ijk,ik->ij", pts[1:] - pts[:-1], jm)
    ref = np.sign(design.g0)[:, None]
    if np.any(gs * ref < -LENGTH_RTOL * scale):
        i = int(np.nonzero(np.any(gs * ref < -LENGTH_RTOL * scale, axis=1))[0][0])
        raise errors.SignConsistency(
            f"profile strip {i + 1} has mixed-sign widths (self-crossing strip)",
            index=i + 1,
        )

    profile = np.stack([der.F, design.z], axis=-1)
    if not spans_line(profile, bbox_diagonal(profile)):
        raise errors.CollinearPolygon("profile polygon is contained in a line")
    for j in range(design.n + 1):
        if not spans_line(pts[:, j, :], scale):
            raise errors.CollinearPolygon(
                f"trajectory polygon {j} is contained in a line"
            )

    return TNet(points=pts, phi_full=design.phi_full, psi=design.psi)


def recover_signed_lengths(net: TNet):
    """Signed edge lengths (f, g) of a T-net measured along its lines.

    f[i, j-1] is the length of the step from column j-1 to j along line L_i;
    g[i-1, j] the step from row i-1 to i along the rotated normal J M_i.
    Raises OffLine when a point leaves its profile line beyond tolerance.
    """
    pts = net.points
    scale = bbox_diagonal(pts)
    d = np.stack([np.cos(net.phi_full), np.sin(net.phi_full)], axis=-1)
    nrm = np.stack([-d[:, 1], d[:, 0]], axis=-1)

    off = np.einsum("ijk,ik->ij", pts - pts[:, :1, :], nrm)
    if np.any(np.abs(off) > LENGTH_RTOL * scale):
        i, j = np.unravel_index(np.argmax(np.abs(off)), off.shape)
        raise errors.OffLine(
            f"point ({i}, {j}) is {abs(off[i, j]):.3g} off its profile line"
        )

    f = np.einsum("ijk,ik->ij", pts[:, 1:, :] - pts[:, :-1, :], d)
    jm = np.stack([-np.sin(net.psi), np.cos(net.psi)], axis=-1)
    g = np.einsum("ijk,ik->ij", pts[1:] - pts[:-1], jm)
    return f, g


def validate_tnet(net: TNet):
    """Check the T-net invariants; returns (f, g) recovered lengths.

    - every point lies on its profile line,
    - the two trajectory edges of every face are parallel (trapezoid),
    - widths along a strip share one sign,
    - consecutive lines differ.
    """
    f, g = recover_signed_lengths(net)  # also checks line membership
    pts = net.points
    scale = bbox_diagonal(pts)

    base = pts[1:] - pts[:-1]  # trajectory edges, strip i: base[i-1, j]
    for i in range(net.m):
        for j in range(net.n):
            u, v = base[i, j], base[i, j + 1]
            nu, nv = np.linalg.norm(u), np.linalg.norm(v)
            if nu < LENGTH_RTOL * scale or nv < LENGTH_RTOL * scale:
                continue  # degenerate edge: trapezoid collapsed, allowed
            s = abs(float(cross2(u, v))) / (nu * nv)
            if np.arcsin(min(s, 1.0)) > ANGLE_TOL:
                raise errors.NotATHedron(
                    f"face ({i + 1}, {j + 1}) is not a trapezoid"
                )

    sign_ref = np.sign(g[np.arange(net.m), np.argmax(np.abs(g), axis=1)])
    if np.any(g * sign_ref[:, None] < -LENGTH_RTOL * scale):
        i = int(
            np.nonzero(np.any(g * sign_ref[:, None] < -LENGTH_RTOL * scale, axis=1))[0][0]
        )
        raise errors.SignConsistency(
            f"profile strip {i + 1} has mixed-sign widths", index=i + 1
        )

    dphi = np.diff(net.phi_full)
    same_dir = np.abs(np.sin(dphi)) <= ANGLE_TOL
    anchors_close = np.max(np.abs(g), axis=1) <= LENGTH_RTOL * scale
    if np.any(same_dir & anchors_close):
        i = int(np.nonzero(same_dir & anchors_close)[0][0])
        raise errors.NotATHedron(f"profile lines {i} and {i + 1} coincide")
    return f, g


def design_from_net(net: TNet, z) -> DesignData:
    """Reassemble the design data of a valid T-net plus heights.

    Angles are normalized so the first line angle is 0 (the stored normal
    form); signed lengths are rotation invariant.
    """
    f, g = recover_signed_lengths(net)
    shift = net.phi_full[0]
    return DesignData(
        phi=net.phi_full[1:] - shift,
        psi=net.psi - shift,
        f0=f[0],
        g0=g[:, 0],
        z=np.asarray(z, float),
    )


def _oriented_row_directions(pts, scale):
    """Recover oriented unit directions of the profile rows of a point grid.

    The orientation of row 0 is +x when the row is axis-aligned (normal
    form), otherwise the sign making its angle fall in (-pi/2, pi/2].  Other
    rows are oriented so that corresponding column steps share signs.
    """
    m1, n1, _ = pts.shape
    dirs = np.empty((m1, 2))
    for i in range(m1):
        row = pts[i]
        centered = row - row.mean(axis=0)
        _, s, vt = np.linalg.svd(centered, full_matrices=False)
        if s[0] <= LENGTH_RTOL * scale:
            raise errors.CollinearPolygon(
                f"profile row {i} does not span a line (single point)"
            )
        dirs[i] = vt[0]

    # orient row 0
    d0 = dirs[0]
    if abs(d0[1]) <= ANGLE_TOL:  # axis-aligned: use +x
        if d0[0] < 0:
            dirs[0] = -dirs[0]
    elif d0[0] < 0 or (d0[0] == 0 and d0[1] < 0):
        dirs[0] = -dirs[0]

    # reference column step on row 0
    steps0 = pts[0, 1:] - pts[0, :-1]
    lens0 = np.linalg.norm(steps0, axis=1)
    jref = int(np.argmax(lens0))
    if lens0[jref] <= LENGTH_RTOL * scale:
        raise errors.CollinearPolygon("profile row 0 has no nonzero edge")
    s0 = np.sign(float(np.dot(steps0[jref], dirs[0])))

    for i in range(1, m1):
        step = pts[i, jref + 1] - pts[i, jref]
        si = float(np.dot(step, dirs[i]))
        if abs(si) <= LENGTH_RTOL * scale:
            raise errors.OffLine(
                f"row {i} lost the reference edge {jref}; cannot orient its line"
            )
        if np.sign(si) != s0:
            dirs[i] = -dirs[i]
    return dirs


def net_from_points(pts) -> TNet:
    """Build a TNet (with canonical angles) from a raw 2D point grid.

    The angles are made coherent: each angle increment is wrapped so the
    per-strip sector angles land in (-pi/2, pi/2) when the grid is a valid
    T-net.
    """
    pts = np.asarray(pts, dtype=float)
    scale = bbox_diagonal(pts)
    dirs = _oriented_row_directions(pts, scale)

    m1 = pts.shape[0]
    phi = np.empty(m1)
    phi[0] = np.arctan2(dirs[0, 1], dirs[0, 0])
    if abs(phi[0]) <= ANGLE_TOL:
        phi[0] = 0.0
    psi = np.empty(m1 - 1)
    for i in range(1, m1):
        rows = pts[i] - pts[i - 1]
        lens = np.linalg.norm(rows, axis=1)
        jbest = int(np.argmax(lens))
        if lens[jbest] <= LENGTH_RTOL * scale:
            raise errors.NotATHedron(f"profile lines {i - 1} and {i} coincide")
        e = rows[jbest] / lens[jbest]
        mvec = np.array([e[1], -e[0]])  # J^{-1} e
        if np.dot(mvec, dirs[i - 1]) < 0:
            mvec = -mvec
        psi_raw = np.arctan2(mvec[1], mvec[0])
        eta = wrap_angle(psi_raw - phi[i - 1])
        phi_raw = np.arctan2(dirs[i, 1], dirs[i, 0])
        theta = wrap_angle(phi_raw - (phi[i - 1] + eta))
        psi[i - 1] = phi[i - 1] + eta
        phi[i] = psi[i - 1] + theta
    return TNet(points=pts, phi_full=phi, psi=psi)


def ground_view(surface) -> TNet:
    """Project a surface with horizontal trajectory rows onto z = 0.

    Accepts a THedron (anything with a .points (m+1, n+1, 3) grid).  Raises
    NonHorizontalRows when a row's z-extent exceeds the tolerance.
    """
    pts3 = np.asarray(surface.points, dtype=float)
    scale = bbox_diagonal(pts3)
    zvar = pts3[..., 2].max(axis=0) - pts3[..., 2].min(axis=0)
    if np.any(zvar > LENGTH_RTOL * scale):
        j = int(np.argmax(zvar))
        raise errors.NonHorizontalRows(
            f"trajectory row {j} spans a height range of {zvar[j]:.3g}"
        )
    return net_from_points(pts3[..., :2])
