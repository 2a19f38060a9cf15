"""Closed-form one-parameter isometric deformations of trapezoidal
quad-surfaces.

The deformation rescales every profile line L_i by k_i(t) = C_i(t) / C_i
with C_i(t) = sqrt(C_i^2 + t) while keeping all strip widths g, shrinking
the sector angles through sin eta_i(t) = (C_{i-1} / C_{i-1}(t)) sin eta_i
(same for theta with index i), and restoring the face shapes by moving the
trajectory planes to heights with increments
sign(dz_j) * sqrt(dz_j^2 - t f_0j^2).

t = 0 is the identity.  The admissible interval of t is bounded below by the
profile radicands C^2 cos^2 - hitting zero (a profile strip flattens into
the profile planes) and above by the height radicands (two trajectory planes
merge); both endpoints are legitimate flat configurations.

A second, exponential parameter convention is used for surfaces with all
faces parallelograms; the bridge between conventions is
sqrt(1 + t_additive) = exp(t_exponential) and conversion helpers are
provided.
"""

from dataclasses import dataclass

import numpy as np

from . import errors
from .builders import THedron, TranslationalData, axial_radii
from .design import DesignData, DerivedQuantities, derive, _freeze
from .geometry import bbox_diagonal

# slack for radicands at closed interval endpoints, relative to the radicand scale
_ENDPOINT_SLACK = 1e-9

PROFILE_FLATTENING = "ProfileFlattening"
TRAJECTORY_FLATTENING = "TrajectoryFlattening"
UNBOUNDED = "Unbounded"


@dataclass(frozen=True)
class Blocking:
    """What stops the deformation at an interval endpoint."""

    reason: str
    index: int | None = None

    def to_dict(self):
        return {"reason": self.reason, "index": self.index}


@dataclass(frozen=True)
class ParameterRange:
    """Admissible deformation interval (t_min, t_max) with closed endpoints
    allowed; t_max may be +inf."""

    t_min: float
    t_max: float
    min_blocking: Blocking
    max_blocking: Blocking

    def clamp(self, t):
        return min(max(t, self.t_min), self.t_max)

    def contains(self, t, slack=0.0):
        return self.t_min - slack <= t <= self.t_max + slack

    def to_dict(self):
        return {
            "t_min": self.t_min,
            "t_max": None if np.isinf(self.t_max) else self.t_max,
            "min_blocking": self.min_blocking.to_dict(),
            "max_blocking": self.max_blocking.to_dict(),
        }


@dataclass(frozen=True)
class DeformationState:
    """Deformed angle and height data at parameter t."""

    t: float
    Ct: np.ndarray
    eta_t: np.ndarray
    theta_t: np.ndarray
    phi_t: np.ndarray  # m+1 entries, phi_t[0] = 0
    psi_t: np.ndarray
    z_t: np.ndarray
    k: np.ndarray

    def __post_init__(self):
        for name in ("Ct", "eta_t", "theta_t", "phi_t", "psi_t", "z_t", "k"):
            object.__setattr__(self, name, _freeze(getattr(self, name)))


def parameter_range(design: DesignData) -> ParameterRange:
    """Largest interval of t on which every deformation radicand stays
    nonnegative.

    Lower bound: max_i of -C_{i-1}^2 cos^2 eta_i and -C_i^2 cos^2 theta_i.
    Upper bound: min over trajectory strips with f_0j != 0 of (dz_j/f_0j)^2,
    +inf when all f_0j vanish.
    """
    der = derive(design)
    lo_eta = -(der.C[:-1] * np.cos(der.eta)) ** 2
    lo_theta = -(der.C[1:] * np.cos(der.theta)) ** 2
    per_strip = np.maximum(lo_eta, lo_theta)
    i_min = int(np.argmax(per_strip))
    t_min = float(per_strip[i_min])
    min_block = Blocking(PROFILE_FLATTENING, index=i_min + 1)

    dz = np.diff(design.z)
    with np.errstate(divide="ignore"):
        caps = np.where(design.f0 != 0.0, (dz / np.where(design.f0 == 0.0, 1.0, design.f0)) ** 2, np.inf)
    if np.all(np.isinf(caps)):
        return ParameterRange(t_min, np.inf, min_block, Blocking(UNBOUNDED))
    j_max = int(np.argmin(caps))
    return ParameterRange(
        t_min, float(caps[j_max]), min_block, Blocking(TRAJECTORY_FLATTENING, index=j_max + 1)
    )


def _safe_arcsin(x, what, index_base=1):
    if np.any(np.abs(x) > 1.0 + 1e-12):
        i = int(np.argmax(np.abs(x)))
        raise errors.OutOfRange(
            f"deformed {what}[{i + index_base}] leaves its range",
            reason=PROFILE_FLATTENING,
            index=i + index_base,
        )
    return np.arcsin(np.clip(x, -1.0, 1.0))


def deformation_state(design: DesignData, t, derived: DerivedQuantities | None = None) -> DeformationState:
    """Deformed sector angles, line angles and heights at parameter t.

    Raises OutOfRange (with the blocking reason and strip index) when a
    radicand is negative beyond endpoint slack.
    """
    der = derived if derived is not None else derive(design)
    t = float(t)
    C = der.C

    if t == 0.0:
        # exact identity: the built and the t=0 deformed surface match
        # bit-for-bit
        return DeformationState(
            t=0.0,
            Ct=C,
            eta_t=der.eta,
            theta_t=der.theta,
            phi_t=design.phi_full,
            psi_t=design.psi,
            z_t=design.z,
            k=np.ones_like(C),
        )

    rad_eta = (C[:-1] * np.cos(der.eta)) ** 2 + t
    rad_theta = (C[1:] * np.cos(der.theta)) ** 2 + t
    slack = _ENDPOINT_SLACK * max(1.0, abs(t))
    for name, rad in (("eta", rad_eta), ("theta", rad_theta)):
        if np.any(rad < -slack):
            i = int(np.argmin(rad))
            raise errors.OutOfRange(
                f"profile radicand for {name}[{i + 1}] is negative at t={t:.6g}",
                reason=PROFILE_FLATTENING,
                index=i + 1,
            )

    Ct = np.sqrt(np.maximum(C**2 + t, 0.0))
    sin_eta = np.sin(der.eta)
    sin_theta = np.sin(der.theta)
    # 0/0 only occurs when the undeformed sine is itself zero; the angle then
    # stays zero for all t
    with np.errstate(divide="ignore", invalid="ignore"):
        se = np.where(sin_eta == 0.0, 0.0, C[:-1] * sin_eta / Ct[:-1])
        st = np.where(sin_theta == 0.0, 0.0, C[1:] * sin_theta / Ct[1:])
    eta_t = _safe_arcsin(se, "eta")
    theta_t = _safe_arcsin(st, "theta")

    steps = eta_t + theta_t
    phi_t = np.concatenate(([0.0], np.cumsum(steps)))
    psi_t = phi_t[:-1] + eta_t

    dz = np.diff(design.z)
    rad_z = dz**2 - t * design.f0**2
    zslack = _ENDPOINT_SLACK * max(np.max(dz**2), 1e-300)
    if np.any(rad_z < -zslack):
        j = int(np.argmin(rad_z))
        raise errors.OutOfRange(
            f"height radicand for strip {j + 1} is negative at t={t:.6g}",
            reason=TRAJECTORY_FLATTENING,
            index=j + 1,
        )
    z_t = np.concatenate(
        ([0.0], np.cumsum(np.sign(dz) * np.sqrt(np.maximum(rad_z, 0.0))))
    )

    return DeformationState(
        t=t,
        Ct=Ct,
        eta_t=eta_t,
        theta_t=theta_t,
        phi_t=phi_t,
        psi_t=psi_t,
        z_t=z_t,
        k=Ct / C,
    )


def _assemble(state: DeformationState, g0, F, class_tag="general") -> THedron:
    """Vertex grid from a deformation state, unchanged widths g0 and the
    undeformed cumulative lengths F."""
    jm = np.stack([-np.sin(state.psi_t), np.cos(state.psi_t)], axis=-1)
    base = np.vstack([[0.0, 0.0], np.cumsum(np.asarray(g0)[:, None] * jm, axis=0)])
    dirs = np.stack([np.cos(state.phi_t), np.sin(state.phi_t)], axis=-1)
    pts2 = base[:, None, :] + (state.Ct[:, None] * dirs)[:, None, :] * np.asarray(F)[None, :, None]
    z = np.broadcast_to(state.z_t, pts2.shape[:2])[..., None]
    return THedron(points=np.concatenate([pts2, z], axis=-1), class_tag=class_tag)


def deform(design: DesignData, t, class_tag="general") -> THedron:
    """Isometrically deformed surface at parameter t (t = 0 reproduces the
    plain construction).  Every face of the result is congruent to the
    corresponding undeformed face."""
    der = derive(design)
    state = deformation_state(design, t, der)
    return _assemble(state, design.g0, der.F, class_tag=class_tag)


# ---------------------------------------------------------------------------
# parameter-convention bridge
# ---------------------------------------------------------------------------

def t_additive_from_exponential(t):
    """exp-parametrized t -> additive t:  sqrt(1 + t_add) = e^t_exp."""
    return float(np.expm1(2.0 * t))


def t_exponential_from_additive(t):
    """additive t -> exp-parametrized t."""
    return 0.5 * float(np.log1p(t))


# ---------------------------------------------------------------------------
# translational surfaces (exponential parameter)
# ---------------------------------------------------------------------------

def translational_design(data: TranslationalData) -> DesignData:
    """Express parallelogram-face generator data in the general design form
    (all line angles zero)."""
    dx = np.diff(data.x_row)
    dy = np.diff(data.y)
    g0 = np.hypot(dx, dy)
    if np.any(g0 == 0.0):
        i = int(np.nonzero(g0 == 0.0)[0][0])
        raise errors.ZeroLength(f"trajectory edge {i + 1} has zero length", index=i + 1)
    psi = np.arctan2(-dx, dy)
    m = data.m
    return DesignData(
        phi=np.zeros(m), psi=psi, f0=np.diff(data.x_col), g0=g0, z=data.z
    )


def translational_parameter_range(data: TranslationalData) -> ParameterRange:
    """Admissible exponential-parameter interval of the parallelogram-face
    deformation."""
    dx_r = np.diff(data.x_row)
    dy = np.diff(data.y)
    dx_c = np.diff(data.x_col)
    dz = np.diff(data.z)

    with np.errstate(divide="ignore"):
        lows = np.where(
            dx_r != 0.0,
            -0.5 * np.log1p((dy / np.where(dx_r == 0.0, 1.0, dx_r)) ** 2),
            -np.inf,
        )
        highs = np.where(
            dx_c != 0.0,
            0.5 * np.log1p((dz / np.where(dx_c == 0.0, 1.0, dx_c)) ** 2),
            np.inf,
        )
    if np.all(np.isinf(lows)):
        min_block = Blocking(UNBOUNDED)
        t_min = -np.inf
    else:
        i = int(np.argmax(lows))
        min_block = Blocking(PROFILE_FLATTENING, index=i + 1)
        t_min = float(lows[i])
    if np.all(np.isinf(highs)):
        max_block = Blocking(UNBOUNDED)
        t_max = np.inf
    else:
        j = int(np.argmin(highs))
        max_block = Blocking(TRAJECTORY_FLATTENING, index=j + 1)
        t_max = float(highs[j])
    return ParameterRange(t_min, t_max, min_block, max_block)


def deform_translational_data(data: TranslationalData, t) -> TranslationalData:
    """Deformed generator polygons at exponential parameter t:
    x_row -> e^-t x_row, x_col -> e^t x_col, with y and z increments
    sign-preservingly shortened/stretched to keep all faces congruent."""
    t = float(t)
    dx_r = np.diff(data.x_row)
    dy = np.diff(data.y)
    dx_c = np.diff(data.x_col)
    dz = np.diff(data.z)

    rad_y = dy**2 + (1.0 - np.exp(-2.0 * t)) * dx_r**2
    slack_y = _ENDPOINT_SLACK * max(float(np.max(dy**2 + dx_r**2)), 1e-300)
    if np.any(rad_y < -slack_y):
        i = int(np.argmin(rad_y))
        raise errors.OutOfRange(
            f"profile-plane radicand of strip {i + 1} is negative at t={t:.6g}",
            reason=PROFILE_FLATTENING,
            index=i + 1,
        )
    rad_z = dz**2 + (1.0 - np.exp(2.0 * t)) * dx_c**2
    slack_z = _ENDPOINT_SLACK * max(float(np.max(dz**2 + dx_c**2)), 1e-300)
    if np.any(rad_z < -slack_z):
        j = int(np.argmin(rad_z))
        raise errors.OutOfRange(
            f"trajectory-plane radicand of strip {j + 1} is negative at t={t:.6g}",
            reason=TRAJECTORY_FLATTENING,
            index=j + 1,
        )

    y_t = np.concatenate(([0.0], np.cumsum(np.sign(dy) * np.sqrt(np.maximum(rad_y, 0.0)))))
    z_t = np.concatenate(([0.0], np.cumsum(np.sign(dz) * np.sqrt(np.maximum(rad_z, 0.0)))))
    return TranslationalData(
        x_row=np.exp(-t) * data.x_row,
        x_col=np.exp(t) * data.x_col,
        y=y_t,
        z=z_t,
    )


def deform_translational(data: TranslationalData, t) -> THedron:
    """Deformed parallelogram-face surface at exponential parameter t.

    Assembles the vertex grid directly so flat endpoint states (collapsed y
    or z increments) are representable."""
    d = deform_translational_data(data, t)
    x = d.x_row[:, None] + d.x_col[None, :]
    y = np.broadcast_to(d.y[:, None], x.shape)
    z = np.broadcast_to(d.z[None, :], x.shape)
    return THedron(points=np.stack([x, y, z], axis=-1), class_tag="translational")


def miura_flat_parameters(a, b, c, d):
    """Exponential parameters (t_minus, t_plus) of the two flat states of
    the Miura-ori with cell data a, b, c, d."""
    t_plus = 0.5 * np.log1p((d / a) ** 2)
    t_minus = -0.5 * np.log1p((b / c) ** 2)
    return float(t_minus), float(t_plus)


# ---------------------------------------------------------------------------
# specialized deformations (additive parameter)
# ---------------------------------------------------------------------------

def deform_molding(design: DesignData, t) -> THedron:
    """Deformation of an isosceles-trapezoid (molding) design: cumulative
    lengths scale by sqrt(1+t), the bisector structure is preserved."""
    der = derive(design)
    gap = np.abs(der.theta - der.eta)
    if np.any(gap > 1e-9):
        i = int(np.argmax(gap))
        raise errors.NotMolding(
            f"theta[{i + 1}] - eta[{i + 1}] = {der.theta[i] - der.eta[i]:.3g}"
        )
    t = float(t)
    if 1.0 + t <= 0.0:
        raise errors.OutOfRange(
            f"scale radicand 1 + t <= 0 at t={t:.6g}", reason=PROFILE_FLATTENING
        )
    root = np.sqrt(1.0 + t)
    se = np.sin(der.eta) / root
    eta_t = _safe_arcsin(se, "eta")
    phi_t = np.concatenate(([0.0], 2.0 * np.cumsum(eta_t)))
    psi_t = 0.5 * (phi_t[:-1] + phi_t[1:])

    dz = np.diff(design.z)
    rad_z = dz**2 - t * design.f0**2
    if np.any(rad_z < -_ENDPOINT_SLACK * max(float(np.max(dz**2)), 1e-300)):
        j = int(np.argmin(rad_z))
        raise errors.OutOfRange(
            f"height radicand for strip {j + 1} is negative at t={t:.6g}",
            reason=TRAJECTORY_FLATTENING,
            index=j + 1,
        )
    z_t = np.concatenate(([0.0], np.cumsum(np.sign(dz) * np.sqrt(np.maximum(rad_z, 0.0)))))

    jm = np.stack([-np.sin(psi_t), np.cos(psi_t)], axis=-1)
    base = np.vstack([[0.0, 0.0], np.cumsum(design.g0[:, None] * jm, axis=0)])
    dirs = np.stack([np.cos(phi_t), np.sin(phi_t)], axis=-1)
    F_t = root * der.F
    pts2 = base[:, None, :] + dirs[:, None, :] * F_t[None, :, None]
    z = np.broadcast_to(z_t, pts2.shape[:2])[..., None]
    return THedron(points=np.concatenate([pts2, z], axis=-1), class_tag="molding")


def deform_axial(design: DesignData, f00, t) -> THedron:
    """Deformation of a common-axis design: radii C_i(t) F_j about the fixed
    axis with the deformed line angles."""
    if f00 == 0.0:
        raise errors.AxisDegenerate("f00 = 0 puts the first vertex on the axis")
    der = derive(design)
    state = deformation_state(design, t, der)
    F = axial_radii(design, f00)
    r = state.Ct[:, None] * F[None, :]
    pts = np.stack(
        [
            r * np.cos(state.phi_t)[:, None],
            r * np.sin(state.phi_t)[:, None],
            np.broadcast_to(state.z_t, r.shape),
        ],
        axis=-1,
    )
    return THedron(points=pts, class_tag="axial")


def deform_revolution(F, phi, z, t) -> THedron:
    """Deformation of a discrete surface of revolution: radii scale by
    sqrt(1+t), line angles shrink through sin eta_i(t) = sin eta_i /
    sqrt(1+t), heights follow the usual radicand."""
    F = np.asarray(F, dtype=float)
    z = np.asarray(z, dtype=float)
    phi_full = np.concatenate(([0.0], np.asarray(phi, dtype=float)))
    t = float(t)
    if 1.0 + t <= 0.0:
        raise errors.OutOfRange(
            f"scale radicand 1 + t <= 0 at t={t:.6g}", reason=PROFILE_FLATTENING
        )
    eta = 0.5 * np.diff(phi_full)
    root = np.sqrt(1.0 + t)
    eta_t = _safe_arcsin(np.sin(eta) / root, "eta")
    phi_t = np.concatenate(([0.0], 2.0 * np.cumsum(eta_t)))

    dF = np.diff(F)
    dz = np.diff(z)
    rad_z = dz**2 - t * dF**2
    if np.any(rad_z < -_ENDPOINT_SLACK * max(float(np.max(dz**2)), 1e-300)):
        j = int(np.argmin(rad_z))
        raise errors.OutOfRange(
            f"height radicand for strip {j + 1} is negative at t={t:.6g}",
            reason=TRAJECTORY_FLATTENING,
            index=j + 1,
        )
    z_t = np.concatenate(([0.0], np.cumsum(np.sign(dz) * np.sqrt(np.maximum(rad_z, 0.0)))))

    r = root * np.broadcast_to(F, (len(phi_t), len(F)))
    pts = np.stack(
        [
            r * np.cos(phi_t)[:, None],
            r * np.sin(phi_t)[:, None],
            np.broadcast_to(z_t, r.shape),
        ],
        axis=-1,
    )
    return THedron(points=pts, class_tag="revolution")


# ---------------------------------------------------------------------------
# parallel pairs
# ---------------------------------------------------------------------------

def parallel_axial(design: DesignData) -> DesignData:
    """The common-axis partner of a design: same angles, lengths and
    heights, strip widths replaced by the unique (up to the first width)
    sequence satisfying the common-axis length criterion."""
    der = derive(design)
    s = np.sin(der.eta + der.theta)
    bad = np.nonzero(np.abs(s) < 1e-12)[0]
    if bad.size:
        i = int(bad[0])
        raise errors.ConsecutiveParallelPlanes(
            f"profile planes {i} and {i + 1} are parallel; no common axis",
            index=i + 1,
        )
    g_new = design.g0[0] * s * np.cos(der.theta[0]) * der.C[1:] / (s[0] * np.cos(der.eta))
    return design.replace_g0(g_new)


def is_parallel(a: THedron, b: THedron, tol=1e-9) -> bool:
    """True when every pair of corresponding edges spans the same line
    direction within tol radians.  Zero-length edges are skipped."""
    pa = np.asarray(a.points, float)
    pb = np.asarray(b.points, float)
    if pa.shape != pb.shape:
        raise errors.ShapeMismatch(f"grids {pa.shape[:2]} vs {pb.shape[:2]}")
    scale_a = bbox_diagonal(pa)
    scale_b = bbox_diagonal(pb)

    for ea, eb in (
        (pa[1:] - pa[:-1], pb[1:] - pb[:-1]),
        (pa[:, 1:] - pa[:, :-1], pb[:, 1:] - pb[:, :-1]),
    ):
        la = np.linalg.norm(ea, axis=-1)
        lb = np.linalg.norm(eb, axis=-1)
        ok = (la > 1e-12 * scale_a) & (lb > 1e-12 * scale_b)
        if not np.any(ok):
            continue
        cross = np.linalg.norm(np.cross(ea[ok], eb[ok]), axis=-1)
        sines = cross / (la[ok] * lb[ok])
        if np.any(np.arcsin(np.clip(sines, 0.0, 1.0)) > tol):
            return False
    return True
