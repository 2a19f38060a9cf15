"""Constructors for trapezoidal quad-surfaces and their special classes.

A THedron is stored as an (m+1) x (n+1) x 3 vertex grid in normal form:
trajectory rows horizontal, first row in the plane z = 0, first profile
plane containing the x-axis.  Faces are planar by construction; special
constructors produce the translational, molding, axial, revolution and
Miura-ori subclasses directly from their reduced data.
"""

from dataclasses import dataclass

import numpy as np

from . import errors
from .design import (
    DesignData,
    build_tnet,
    derive,
    design_from_net,
    ground_view,
    recover_signed_lengths,
    _freeze,
)
from .geometry import ANGLE_TOL, LENGTH_RTOL, bbox_diagonal, line_angle, spans_line

CLASS_TAGS = ("general", "translational", "molding", "axial", "revolution", "miura")

# |theta - eta| below this counts as the isosceles (molding) condition
MOLDING_ANGLE_TOL = 1e-9
# relative residual threshold for the common-axis length criterion
AXIAL_RTOL = 1e-9


@dataclass(frozen=True)
class THedron:
    """Vertex grid of a trapezoidal quad-surface.

    class_tag records which constructor produced the surface; it is advisory
    and can always be recomputed with classify().
    """

    points: np.ndarray
    class_tag: str = "general"

    def __post_init__(self):
        object.__setattr__(self, "points", _freeze(self.points))
        if self.points.ndim != 3 or self.points.shape[-1] != 3:
            raise ValueError("points must have shape (m+1, n+1, 3)")
        if self.class_tag not in CLASS_TAGS:
            raise ValueError(f"unknown class tag {self.class_tag!r}")

    @property
    def m(self):
        return int(self.points.shape[0]) - 1

    @property
    def n(self):
        return int(self.points.shape[1]) - 1

    @property
    def bbox_diagonal(self):
        return bbox_diagonal(self.points)


@dataclass(frozen=True)
class TranslationalData:
    """Generators of a surface with all faces parallelograms: a trajectory
    polygon (x_row, y, 0) translated along a profile polygon (x_col, 0, z)."""

    x_row: np.ndarray
    x_col: np.ndarray
    y: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        for name in ("x_row", "x_col", "y", "z"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))
        if self.x_row.shape != self.y.shape or self.x_col.shape != self.z.shape:
            raise ValueError("generator arrays must pair up: (x_row, y), (x_col, z)")
        if self.x_row[0] != 0.0 or self.x_col[0] != 0.0 or self.y[0] != 0.0 or self.z[0] != 0.0:
            raise ValueError("generators must start at the origin")

    @property
    def m(self):
        return int(self.x_row.shape[0]) - 1

    @property
    def n(self):
        return int(self.x_col.shape[0]) - 1


def lift(net, z, class_tag="general") -> THedron:
    """Lift a T-net to heights z: vertex (i, j) becomes (net point, z[j]).

    Consecutive heights must differ and every lifted profile polygon must
    genuinely span its vertical plane (for n >= 2).
    """
    z = np.asarray(z, dtype=float)
    if z.shape[0] != net.n + 1:
        raise errors.ShapeMismatch("need one height per trajectory row")
    if z[0] != 0.0:
        raise ValueError("normal form requires z[0] = 0")
    dz = np.diff(z)
    bad = np.nonzero(dz == 0.0)[0]
    if bad.size:
        j = int(bad[0])
        raise errors.DegenerateHeights(f"z[{j}] == z[{j + 1}]", index=j + 1)

    pts = np.concatenate(
        [net.points, np.broadcast_to(z, (net.m + 1, net.n + 1))[..., None]], axis=-1
    )
    scale = bbox_diagonal(pts)
    for i in range(net.m + 1):
        if not spans_line(pts[i], scale):
            raise errors.CollinearProfile(
                f"profile polygon {i} is contained in a line"
            )
    return THedron(points=pts, class_tag=class_tag)


def build_thedron(design: DesignData) -> THedron:
    """Ground-view construction followed by the vertical lift."""
    return lift(build_tnet(design), design.z)


def build_translational(data: TranslationalData) -> THedron:
    """sigma_ij = (x_row[i] + x_col[j], y[i], z[j]).

    All faces are parallelograms.  Rejects generator polygons with mutually
    parallel (or zero) edges, which would collapse a face.
    """
    traj = np.stack(
        [np.diff(data.x_row), np.diff(data.y), np.zeros(data.m)], axis=-1
    )
    prof = np.stack(
        [np.diff(data.x_col), np.zeros(data.n), np.diff(data.z)], axis=-1
    )
    lt = np.linalg.norm(traj, axis=1)
    lp = np.linalg.norm(prof, axis=1)
    scale = max(lt.max(initial=0.0), lp.max(initial=0.0), 1e-300)
    if np.any(lt <= LENGTH_RTOL * scale) or np.any(lp <= LENGTH_RTOL * scale):
        raise errors.ParallelGenerators("a generator edge has zero length")
    cross = np.linalg.norm(np.cross(traj[:, None, :], prof[None, :, :]), axis=-1)
    sines = cross / (lt[:, None] * lp[None, :])
    if np.any(sines <= ANGLE_TOL):
        a, b = np.unravel_index(np.argmin(sines), sines.shape)
        raise errors.ParallelGenerators(
            f"trajectory edge {a + 1} is parallel to profile edge {b + 1}"
        )

    x = data.x_row[:, None] + data.x_col[None, :]
    y = np.broadcast_to(data.y[:, None], x.shape)
    z = np.broadcast_to(data.z[None, :], x.shape)
    return THedron(points=np.stack([x, y, z], axis=-1), class_tag="translational")


def build_molding(design: DesignData) -> THedron:
    """Surface made of isosceles trapezoids: theta_i == eta_i, so the normal
    directions are the angle bisectors psi_i = (phi_{i-1} + phi_i) / 2 and
    all profile polygons are congruent."""
    der = derive(design)
    gap = np.abs(der.theta - der.eta)
    if np.any(gap > MOLDING_ANGLE_TOL):
        i = int(np.argmax(gap))
        raise errors.NotMolding(
            f"theta[{i + 1}] - eta[{i + 1}] = {der.theta[i] - der.eta[i]:.3g}"
        )
    phi_full = design.phi_full
    mid = 0.5 * (phi_full[:-1] + phi_full[1:])
    jm = np.stack([-np.sin(mid), np.cos(mid)], axis=-1)
    base = np.vstack([[0.0, 0.0], np.cumsum(design.g0[:, None] * jm, axis=0)])
    dirs = np.stack([np.cos(phi_full), np.sin(phi_full)], axis=-1)
    F = np.concatenate(([0.0], np.cumsum(design.f0)))
    pts2 = base[:, None, :] + F[None, :, None] * dirs[:, None, :]
    z = np.broadcast_to(design.z, pts2.shape[:2])[..., None]
    pts = np.concatenate([pts2, z], axis=-1)
    return THedron(points=pts, class_tag="molding")


def axial_radii(design: DesignData, f00: float):
    """Signed distances from the axis to the vertices on line L_0 (the
    extended cumulative lengths F_j including the axis offset f00)."""
    return f00 + np.concatenate(([0.0], np.cumsum(design.f0)))


def build_axial(design: DesignData, f00: float) -> THedron:
    """Surface whose profile planes share the vertical axis through the
    origin: sigma_ij = (C_i F_j cos phi_i, C_i F_j sin phi_i, z_j) with the
    radii F_j measured from the axis (F_0 = f00 != 0).

    The g0 entries of the design are not used: the strip widths of an axial
    surface are determined by the angles and f00.
    """
    if f00 == 0.0:
        raise errors.AxisDegenerate("f00 = 0 puts the first vertex on the axis")
    der = derive(design)
    F = axial_radii(design, f00)
    phi_full = design.phi_full
    r = der.C[:, None] * F[None, :]
    pts = np.stack(
        [
            r * np.cos(phi_full)[:, None],
            r * np.sin(phi_full)[:, None],
            np.broadcast_to(design.z, r.shape),
        ],
        axis=-1,
    )
    return THedron(points=pts, class_tag="axial")


def build_revolution(F, phi, z) -> THedron:
    """Discrete surface of revolution: profile polygon (F_j, z_j) rotated to
    the line directions phi_i about the vertical axis.

    F are the (nonzero) radii; phi are the m line angles for i = 1..m with
    phi_0 = 0; consecutive angles must differ by less than pi.
    """
    F = np.asarray(F, dtype=float)
    z = np.asarray(z, dtype=float)
    phi_full = np.concatenate(([0.0], np.asarray(phi, dtype=float)))
    if np.any(F == 0.0):
        j = int(np.nonzero(F == 0.0)[0][0])
        raise errors.ZeroRadius(f"F[{j}] = 0 collapses a trajectory polygon")
    half = 0.5 * np.diff(phi_full)
    if np.any(np.abs(half) >= 0.5 * np.pi):
        i = int(np.argmax(np.abs(half)))
        raise errors.AngleOutOfRange(
            f"|phi[{i + 1}] - phi[{i}]| >= pi is not a molding angle step",
            index=i + 1,
        )
    r = np.broadcast_to(F, (len(phi_full), len(F)))
    pts = np.stack(
        [
            r * np.cos(phi_full)[:, None],
            r * np.sin(phi_full)[:, None],
            np.broadcast_to(z, r.shape),
        ],
        axis=-1,
    )
    return THedron(points=pts, class_tag="revolution")


def miura_data(a, b, c, d, m, n) -> TranslationalData:
    """Translational generator data of the Miura-ori herringbone pattern.

    Column offsets advance by a, rows by b; every second profile polygon is
    shifted by c in x and every second trajectory polygon lifted to height d.
    d = 0 gives the flat parallelogram pattern.
    """
    if a <= 0 or b <= 0 or c <= 0 or d < 0:
        raise ValueError("need a, b, c > 0 and d >= 0")
    i = np.arange(m + 1)
    j = np.arange(n + 1)
    return TranslationalData(
        x_row=np.where(i % 2 == 0, 0.0, c),
        x_col=j * float(a),
        y=i * float(b),
        z=np.where(j % 2 == 0, 0.0, d),
    )


def build_miura(a, b, c, d, m, n) -> THedron:
    """Miura-ori: a translational surface with all faces congruent
    parallelograms."""
    surf = build_translational(miura_data(a, b, c, d, m, n))
    return THedron(points=surf.points, class_tag="miura")


def _axial_residual(eta, theta, C, g0):
    """Relative residual of the common-axis criterion
    g_i0 / g_10 = sin(eta_i + theta_i) cos(theta_1) C_i /
                  (sin(eta_1 + theta_1) cos(eta_i))."""
    s = np.sin(eta + theta)
    if abs(s[0]) < 1e-300:
        return np.inf
    expected = g0[0] * s * np.cos(theta[0]) * C[1:] / (s[0] * np.cos(eta))
    denom = np.maximum(np.abs(g0), np.abs(expected))
    denom = np.where(denom == 0.0, 1.0, denom)
    return float(np.max(np.abs(g0 - expected) / denom))


def classify(surface: THedron, angle_tol=1e-8, length_rtol=AXIAL_RTOL) -> str:
    """Recompute the class of a surface from its geometry.

    translational: all profile lines parallel; molding: isosceles ground
    trapezoids (theta == eta); axial: strip widths satisfy the common-axis
    length criterion; revolution: axial and molding; otherwise general.
    """
    try:
        net = ground_view(surface)
        f, g = recover_signed_lengths(net)
        design = design_from_net(net, surface.points[0, :, 2] - surface.points[0, 0, 2])
        der = derive(design)
    except errors.ThedraError as exc:
        raise errors.NotATHedron(f"cannot analyse surface: {exc}") from exc

    dirs = np.stack([np.cos(net.phi_full), np.sin(net.phi_full)], axis=-1)
    translational = all(
        line_angle(dirs[0], dirs[i]) <= angle_tol for i in range(1, len(dirs))
    )
    if translational:
        return "translational"
    molding = bool(np.all(np.abs(der.theta - der.eta) <= angle_tol))
    axial = (
        np.all(np.abs(np.sin(der.eta + der.theta)) > angle_tol)
        and _axial_residual(der.eta, der.theta, der.C, g[:, 0]) <= length_rtol
    )
    if axial and molding:
        return "revolution"
    if axial:
        return "axial"
    if molding:
        return "molding"
    return "general"
