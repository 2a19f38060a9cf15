"""Smooth T-surfaces: surfaces swept by a planar profile curve that is
rotated about a variable vertical axis and simultaneously scaled.

The general parametrization is

    sigma(u, v) = (gamma(u) + f(v) xi(u), z(v)),

with gamma the base trajectory curve (gamma' = g (-sin psi, cos psi)) and
xi = c (cos phi, sin phi) the profile-line direction field, subject to the
compatibility condition  c' cos eta = c phi' sin eta,  eta = phi - psi,
which makes xi' parallel to gamma'.

Every class admits a one-parameter isometric deformation.  The general,
axial and revolution forms use the additive parameter (c^t = sqrt(c^2 + t));
the translational and molding forms use an exponential parameter, matching
the discrete conventions.
"""

from dataclasses import dataclass

import numpy as np

from . import errors
from .functions import ScalarFunction, from_callable, integral_function
from .metrology import planarity

_GRID = 2049  # samples for derivative scans / radicand checks
COMPAT_RTOL = 1e-8
COMPAT_DRIFT_TOL = 1e-6


# ---------------------------------------------------------------------------
# helpers on scalar functions
# ---------------------------------------------------------------------------

def scale_function(sf: ScalarFunction, factor, name=None) -> ScalarFunction:
    factor = float(factor)
    return ScalarFunction(
        fn=lambda u: factor * sf(u),
        domain=sf.domain,
        dfn=lambda u: factor * sf.derivative(u),
        name=name or sf.name,
    )


def shift_function(sf: ScalarFunction, delta, name=None) -> ScalarFunction:
    delta = float(delta)
    return ScalarFunction(
        fn=lambda u: sf(u) + delta,
        domain=sf.domain,
        dfn=sf.derivative,
        name=name or sf.name,
    )


def _sample(fn, domain, n=_GRID):
    xs = np.linspace(domain[0], domain[1], n)
    return xs, np.array([fn(x) for x in xs], dtype=float)


@dataclass(frozen=True)
class _DerivativeScan:
    """Sign structure of a function's derivative over its domain."""

    sign: float          # sign at the largest-magnitude sample
    min_abs: float
    sign_changes: tuple  # refined locations where the derivative flips sign
    touches: tuple       # near-zero locations without a sign flip


def _scan_derivative(sf: ScalarFunction, n=_GRID) -> _DerivativeScan:
    xs, dv = _sample(sf.derivative, sf.domain, n)
    scale = float(np.max(np.abs(dv))) or 1.0
    tol = 1e-9 * scale
    sign = float(np.sign(dv[int(np.argmax(np.abs(dv)))]))

    changes = []
    touches = []
    flips = np.nonzero(np.sign(dv[:-1]) * np.sign(dv[1:]) < 0)[0]
    for k in flips:
        a, b = xs[k], xs[k + 1]
        fa, fb = dv[k], dv[k + 1]
        for _ in range(80):  # bisection, derivative callables may be kinked
            m = 0.5 * (a + b)
            fm = sf.derivative(m)
            if fa * fm <= 0:
                b, fb = m, fm
            else:
                a, fa = m, fm
        changes.append(0.5 * (a + b))
    small = np.abs(dv) <= tol
    k = 0
    while k < len(xs):
        if small[k] and not any(abs(xs[k] - c) < 2 * (xs[1] - xs[0]) for c in changes):
            j = k
            while j + 1 < len(xs) and small[j + 1]:
                j += 1
            touches.append(float(xs[(k + j) // 2]))
            k = j + 1
        else:
            k += 1
    return _DerivativeScan(
        sign=sign,
        min_abs=float(np.min(np.abs(dv))),
        sign_changes=tuple(changes),
        touches=tuple(touches),
    )


def _signed_sqrt_integral(base: ScalarFunction, rad_fn, scan: _DerivativeScan,
                          what, name):
    """Antiderivative of  piecewise_sign(base') * sqrt(rad)  over base's
    domain, anchored at base(lo).

    rad must be nonnegative up to endpoint slack; raises RadicandNegative
    with the offending location otherwise.  Sign flips of base' become
    integrand jumps (creases); radicand zeros get sqrt substitution.
    """
    lo, hi = base.domain
    xs = np.linspace(lo, hi, _GRID)
    rad = np.array([rad_fn(x) for x in xs], dtype=float)
    scale = float(np.max(np.abs(rad))) or 1.0
    if np.any(rad < -1e-9 * scale):
        k = int(np.argmin(rad))
        raise errors.RadicandNegative(
            f"{what} radicand is negative near {xs[k]:.6g}", location=float(xs[k])
        )
    # near-zero radicand locations need the sqrt substitution
    rad_zeros = []
    small = rad <= 1e-9 * scale
    k = 0
    while k < len(xs):
        if small[k]:
            j = k
            while j + 1 < len(xs) and small[j + 1]:
                j += 1
            rad_zeros.append(float(xs[np.argmin(rad[k:j + 1]) + k]))
            k = j + 1
        else:
            k += 1

    flips = list(scan.sign_changes)

    def signed(w):
        s = scan.sign
        for c in flips:
            if w > c:
                s = -s
        # recompute from the actual derivative when unambiguous
        d = base.derivative(w)
        return s if d == 0.0 else float(np.sign(d))

    def integrand(w):
        return signed(w) * np.sqrt(max(rad_fn(w), 0.0))

    return integral_function(
        integrand,
        base.domain,
        base=lo,
        value_at_base=base(lo),
        singular_points=tuple(sorted(set(rad_zeros + flips))),
        name=name,
    )


def _one_sided_guard(scan: _DerivativeScan, coef, other: ScalarFunction, axis_name,
                     forbidden_side):
    """Raise OneSidedOnly when a derivative zero makes the requested
    parameter sign infeasible (coef < 0 multiplies the other derivative)."""
    if coef >= 0.0:
        return
    locs = list(scan.sign_changes) + list(scan.touches)
    for w in locs:
        if abs(other.derivative(w)) > 1e-12:
            raise errors.OneSidedOnly(
                f"{axis_name}' vanishes at {w:.6g}: deformation is one-sided, "
                f"{forbidden_side} is forbidden",
                location=float(w),
            )


# ---------------------------------------------------------------------------
# surface forms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothSpec:
    """General T-surface data (g, psi, c, phi on U; f, z on V)."""

    g: ScalarFunction
    psi: ScalarFunction
    c: ScalarFunction
    phi: ScalarFunction
    f: ScalarFunction
    z: ScalarFunction

    def __post_init__(self):
        udoms = {self.g.domain, self.psi.domain, self.c.domain, self.phi.domain}
        vdoms = {self.f.domain, self.z.domain}
        if len(udoms) != 1 or len(vdoms) != 1:
            raise errors.ShapeMismatch("function domains do not pair up")
        gx = integral_function(
            lambda u: -self.g(u) * np.sin(self.psi(u)), self.phi.domain,
            name="gamma_x",
        )
        gy = integral_function(
            lambda u: self.g(u) * np.cos(self.psi(u)), self.phi.domain,
            name="gamma_y",
        )
        object.__setattr__(self, "_gamma_x", gx)
        object.__setattr__(self, "_gamma_y", gy)

    @property
    def u_domain(self):
        return self.phi.domain

    @property
    def v_domain(self):
        return self.f.domain

    def eta(self, u):
        return self.phi(u) - self.psi(u)

    def eta_derivative(self, u):
        return self.phi.derivative(u) - self.psi.derivative(u)

    def gamma(self, u):
        return np.array([self._gamma_x(u), self._gamma_y(u)])

    def xi(self, u):
        return self.c(u) * np.array([np.cos(self.phi(u)), np.sin(self.phi(u))])

    def xi_derivative(self, u):
        cu = self.c(u)
        dcu = self.c.derivative(u)
        ph = self.phi(u)
        dph = self.phi.derivative(u)
        er = np.array([np.cos(ph), np.sin(ph)])
        et = np.array([-np.sin(ph), np.cos(ph)])
        return dcu * er + cu * dph * et

    def lam(self, u):
        """Proportionality xi'(u) = lam(u) gamma'(u)."""
        gd = self.gamma_derivative(u)
        n2 = float(gd @ gd)
        if n2 == 0.0:
            raise errors.OutOfDomain(f"gamma is singular at u={u:g}")
        return float(self.xi_derivative(u) @ gd) / n2

    def gamma_derivative(self, u):
        gu = self.g(u)
        ps = self.psi(u)
        return gu * np.array([-np.sin(ps), np.cos(ps)])

    def evaluate(self, u, v):
        self._check_domain(u, v)
        p = self.gamma(u) + self.f(v) * self.xi(u)
        return np.array([p[0], p[1], self.z(v)])

    def partials(self, u, v):
        su = self.gamma_derivative(u) + self.f(v) * self.xi_derivative(u)
        sv = self.f.derivative(v) * self.xi(u)
        return (
            np.array([su[0], su[1], 0.0]),
            np.array([sv[0], sv[1], self.z.derivative(v)]),
        )

    def fundamental_form(self, u, v):
        self._check_domain(u, v)
        su, sv = self.partials(u, v)
        return float(su @ su), float(su @ sv), float(sv @ sv)

    def _check_domain(self, u, v):
        (ulo, uhi), (vlo, vhi) = self.u_domain, self.v_domain
        pad_u = 1e-9 * max(uhi - ulo, 1.0)
        pad_v = 1e-9 * max(vhi - vlo, 1.0)
        if not (ulo - pad_u <= u <= uhi + pad_u) or not (vlo - pad_v <= v <= vhi + pad_v):
            raise errors.OutOfDomain(f"(u, v) = ({u:g}, {v:g}) outside the patch")


@dataclass(frozen=True)
class TranslationalSurface:
    """sigma(u, v) = (x(u) + f(v), y(u), z(v)); creases list coordinate
    curves along which a deformed surface is only C^0."""

    x: ScalarFunction
    y: ScalarFunction
    f: ScalarFunction
    z: ScalarFunction
    creases_u: tuple = ()
    creases_v: tuple = ()

    @property
    def u_domain(self):
        return self.x.domain

    @property
    def v_domain(self):
        return self.f.domain

    def evaluate(self, u, v):
        return np.array([self.x(u) + self.f(v), self.y(u), self.z(v)])

    def fundamental_form(self, u, v):
        dx = self.x.derivative(u)
        dy = self.y.derivative(u)
        df = self.f.derivative(v)
        dz = self.z.derivative(v)
        return dx * dx + dy * dy, dx * df, df * df + dz * dz


@dataclass(frozen=True)
class AxialSurface:
    """sigma(u, v) = (f(v) xi(u), z(v)) with xi = c (cos phi, sin phi) and f
    nonzero: all profile planes pass through the vertical axis."""

    c: ScalarFunction
    phi: ScalarFunction
    f: ScalarFunction
    z: ScalarFunction
    creases_v: tuple = ()

    @property
    def u_domain(self):
        return self.phi.domain

    @property
    def v_domain(self):
        return self.f.domain

    def evaluate(self, u, v):
        r = self.f(v) * self.c(u)
        ph = self.phi(u)
        return np.array([r * np.cos(ph), r * np.sin(ph), self.z(v)])

    def fundamental_form(self, u, v):
        cu = self.c(u)
        dcu = self.c.derivative(u)
        dph = self.phi.derivative(u)
        fv = self.f(v)
        dfv = self.f.derivative(v)
        dzv = self.z.derivative(v)
        xi_dot2 = dcu * dcu + cu * cu * dph * dph
        return fv * fv * xi_dot2, dfv * fv * cu * dcu, dfv * dfv * cu * cu + dzv * dzv

    def eta(self, u):
        """Angle from the right-hand normal of xi to the position vector."""
        return float(np.arctan2(self.c.derivative(u), self.c(u) * self.phi.derivative(u)))


@dataclass(frozen=True)
class RevolutionSurface:
    """sigma(u, v) = (f(v) cos phi(u), f(v) sin phi(u), z(v))."""

    f: ScalarFunction
    phi: ScalarFunction
    z: ScalarFunction
    creases_v: tuple = ()

    @property
    def u_domain(self):
        return self.phi.domain

    @property
    def v_domain(self):
        return self.f.domain

    def evaluate(self, u, v):
        fv = self.f(v)
        ph = self.phi(u)
        return np.array([fv * np.cos(ph), fv * np.sin(ph), self.z(v)])

    def fundamental_form(self, u, v):
        fv = self.f(v)
        dph = self.phi.derivative(u)
        dfv = self.f.derivative(v)
        dzv = self.z.derivative(v)
        return fv * fv * dph * dph, 0.0, dfv * dfv + dzv * dzv


# ---------------------------------------------------------------------------
# validation of the general form
# ---------------------------------------------------------------------------

def validate_smooth_spec(spec: SmoothSpec, samples=257):
    """Numerically check the conditions a general T-surface datum must
    satisfy; returns a list of (path, message) violations.

    - f(0) = 0,
    - f and z locally affinely independent (windowed Gram determinant),
    - the profile curve (f, z) is regular,
    - gamma is regular and contains no straight segments (psi' not
      identically zero on any window),
    - |eta| < pi/2 everywhere,
    - compatibility c' cos eta = c phi' sin eta and 1 + f lam != 0.
    """
    bad = []
    (ulo, uhi) = spec.u_domain
    (vlo, vhi) = spec.v_domain
    us = np.linspace(ulo, uhi, samples)
    vs = np.linspace(vlo, vhi, samples)

    fv = np.array([spec.f(v) for v in vs])
    zv = np.array([spec.z(v) for v in vs])
    f_scale = max(float(np.max(np.abs(fv))), 1.0)
    if abs(spec.f(vlo)) > 1e-9 * f_scale:
        bad.append(("f", f"f({vlo:g}) = {spec.f(vlo):.3g} must vanish"))

    # windowed affine independence of (f, z, 1); the normalized Gram
    # determinant is ~ (relative fit residual)^2, so exact dependence sits
    # around 1e-30 while gently curved windows reach ~1e-10
    win = max(samples // 8 + 1, 4)
    step = max(win // 2, 1)
    worst = np.inf
    for start in range(0, samples - win + 1, step):
        sl = slice(start, start + win)
        M = np.stack([fv[sl], zv[sl], np.ones(win)])
        M = M / np.maximum(np.linalg.norm(M, axis=1, keepdims=True), 1e-300)
        worst = min(worst, abs(float(np.linalg.det(M @ M.T))))
    if worst <= 1e-12:
        bad.append(("f,z", "f and z are affinely dependent on a subinterval"))

    dfv = np.array([spec.f.derivative(v) for v in vs])
    dzv = np.array([spec.z.derivative(v) for v in vs])
    prof_speed = np.hypot(dfv, dzv)
    if float(prof_speed.min()) <= 1e-8 * max(float(prof_speed.max()), 1e-12):
        v0 = vs[int(np.argmin(prof_speed))]
        bad.append(("f,z", f"profile curve is singular near v={v0:g}"))

    gv = np.array([spec.g(u) for u in us])
    if float(np.min(np.abs(gv))) <= 1e-8 * max(float(np.max(np.abs(gv))), 1e-12):
        u0 = us[int(np.argmin(np.abs(gv)))]
        bad.append(("g", f"gamma is singular near u={u0:g}"))

    dpsi = np.array([spec.psi.derivative(u) for u in us])
    dpsi_scale = max(float(np.max(np.abs(dpsi))), 1e-12)
    for start in range(0, samples - win + 1, step):
        if float(np.max(np.abs(dpsi[start:start + win]))) <= 1e-8 * dpsi_scale:
            u0 = us[start]
            bad.append(("psi", f"gamma contains a straight segment near u={u0:g}"))
            break

    eta = np.array([spec.eta(u) for u in us])
    if float(np.max(np.abs(eta))) >= 0.5 * np.pi - 1e-9:
        u0 = us[int(np.argmax(np.abs(eta)))]
        bad.append(("phi,psi", f"|eta| reaches pi/2 near u={u0:g}"))
        return bad  # remaining checks divide by cos eta

    cu = np.array([spec.c(u) for u in us])
    dcu = np.array([spec.c.derivative(u) for u in us])
    dphi = np.array([spec.phi.derivative(u) for u in us])
    resid = np.abs(dcu * np.cos(eta) - cu * dphi * np.sin(eta))
    comp_scale = max(float(np.max(np.abs(dcu))), float(np.max(np.abs(cu * dphi))), 1.0)
    if float(resid.max()) > COMPAT_RTOL * comp_scale:
        u0 = us[int(np.argmax(resid))]
        bad.append(
            ("c,phi,psi",
             f"compatibility residual {resid.max():.3g} exceeds tolerance near u={u0:g}")
        )

    lam = np.array([spec.lam(u) for u in us])
    prod = 1.0 + np.outer(fv, lam)
    if float(np.min(np.abs(prod))) <= 1e-9 or prod.min() < 0 < prod.max():
        k = np.unravel_index(int(np.argmin(np.abs(prod))), prod.shape)
        bad.append(
            ("f,c", f"1 + f(v) lam(u) vanishes near (u, v) = "
                    f"({us[k[1]]:g}, {vs[k[0]]:g})")
        )
    return bad


def require_valid_spec(spec: SmoothSpec, samples=257):
    bad = validate_smooth_spec(spec, samples)
    if bad:
        path, message = bad[0]
        raise errors.InvariantViolation(message, path=path, violations=bad)
    return spec


# ---------------------------------------------------------------------------
# operations on the general form
# ---------------------------------------------------------------------------

def evaluate(spec, u, v):
    """Point of any smooth surface form at (u, v)."""
    return spec.evaluate(u, v)


def first_fundamental_form(spec, u, v):
    """(E, F, G) of any smooth surface form from its analytic partials."""
    return spec.fundamental_form(u, v)


def reconstruct_c(phi: ScalarFunction, eta, c0=1.0) -> ScalarFunction:
    """Profile-scale function from the direction data: the compatibility
    condition integrates to c(u) = c(0) exp(int_0^u phi' tan eta)."""
    eta_fn = eta if callable(eta) else (lambda u: float(eta))

    def integrand(u):
        return phi.derivative(u) * np.tan(eta_fn(u))

    inner = integral_function(integrand, phi.domain, name="log_c")
    c0 = float(c0)
    return ScalarFunction(
        fn=lambda u: c0 * np.exp(inner(u)),
        domain=phi.domain,
        dfn=lambda u: c0 * np.exp(inner(u)) * integrand(u),
        name="reconstructed_c",
    )


def sample_to_grid(surface, m, n):
    """Evaluate a smooth surface on a uniform (m+1) x (n+1) parameter grid.

    Returns (points, planarity_deviation).  The deviation is reported, not
    asserted: generic smooth surfaces sample to only approximately planar
    quads."""
    (ulo, uhi) = surface.u_domain
    (vlo, vhi) = surface.v_domain
    us = np.linspace(ulo, uhi, m + 1)
    vs = np.linspace(vlo, vhi, n + 1)
    pts = np.empty((m + 1, n + 1, 3))
    for i, u in enumerate(us):
        for j, v in enumerate(vs):
            pts[i, j] = surface.evaluate(u, v)
    return pts, planarity(pts)


# ---------------------------------------------------------------------------
# deformations
# ---------------------------------------------------------------------------

def deform_translational_surface(x, f, y, z, t) -> TranslationalSurface:
    """Isometric deformation of (x(u) + f(v), y(u), z(v)) at exponential
    parameter t: x -> e^t x, f -> e^-t f, with y and z rebuilt from the
    invariance of the fundamental form.

    y' = 0 somewhere makes t > 0 infeasible, z' = 0 makes t < 0 infeasible
    (OneSidedOnly); an extremum of y or z on the allowed side creases the
    surface along that coordinate curve.
    """
    t = float(t)
    scan_y = _scan_derivative(y)
    scan_z = _scan_derivative(z)
    coef_y = 1.0 - np.exp(2.0 * t)   # multiplies x'^2 in the y radicand
    coef_z = 1.0 - np.exp(-2.0 * t)  # multiplies f'^2 in the z radicand
    _one_sided_guard(scan_y, coef_y, x, "y", "t > 0")
    _one_sided_guard(scan_z, coef_z, f, "z", "t < 0")

    def rad_y(u):
        return y.derivative(u) ** 2 + coef_y * x.derivative(u) ** 2

    def rad_z(v):
        return z.derivative(v) ** 2 + coef_z * f.derivative(v) ** 2

    y_t = _signed_sqrt_integral(y, rad_y, scan_y, "profile-plane", "y_t")
    z_t = _signed_sqrt_integral(z, rad_z, scan_z, "trajectory-plane", "z_t")
    return TranslationalSurface(
        x=scale_function(x, np.exp(t), "x_t"),
        y=y_t,
        f=scale_function(f, np.exp(-t), "f_t"),
        z=z_t,
        creases_u=scan_y.sign_changes if t != 0.0 else (),
        creases_v=scan_z.sign_changes if t != 0.0 else (),
    )


def deform_molding_surface(spec: SmoothSpec, t) -> SmoothSpec:
    """Isometric deformation of a molding surface (c constant, eta = 0):
    the normal direction scales as psi -> e^t psi about its initial value,
    the profile offsets shrink by e^-t."""
    us = np.linspace(*spec.u_domain, 65)
    c_vals = np.array([spec.c(u) for u in us])
    eta_vals = np.array([spec.eta(u) for u in us])
    if float(np.ptp(c_vals)) > 1e-8 * max(float(np.max(np.abs(c_vals))), 1e-12):
        raise errors.NotMolding("c must be constant for a molding surface")
    if float(np.max(np.abs(eta_vals))) > 1e-8:
        raise errors.NotMolding("eta must vanish for a molding surface")

    t = float(t)
    psi0 = spec.psi(spec.u_domain[0])
    et = np.exp(t)
    psi_t = ScalarFunction(
        fn=lambda u: psi0 + et * (spec.psi(u) - psi0),
        domain=spec.psi.domain,
        dfn=lambda u: et * spec.psi.derivative(u),
        name="psi_t",
    )
    scan_z = _scan_derivative(spec.z)
    coef_z = 1.0 - np.exp(-2.0 * t)
    _one_sided_guard(scan_z, coef_z, spec.f, "z", "t < 0")

    def rad_z(v):
        return spec.z.derivative(v) ** 2 + coef_z * spec.f.derivative(v) ** 2

    z_t = _signed_sqrt_integral(spec.z, rad_z, scan_z, "trajectory-plane", "z_t")
    return SmoothSpec(
        g=spec.g,
        psi=psi_t,
        c=spec.c,
        phi=psi_t,
        f=scale_function(spec.f, np.exp(-t), "f_t"),
        z=z_t,
    )


def _axial_angle_data(c: ScalarFunction, phi: ScalarFunction, t):
    """Deformed scale c^t = sqrt(c^2 + t) and turning-rate integrand of an
    axial direction field.  The turning radicand factorizes as
    (c^2 phi'^2 + c'^2)(c^2 cos^2 eta + t), so feasibility is governed by
    c^2 cos^2 eta + t >= 0."""
    t = float(t)

    def ct(u):
        return np.sqrt(max(c(u) ** 2 + t, 0.0))

    def dct(u):
        root = ct(u)
        if root == 0.0:
            return 0.0
        return c(u) * c.derivative(u) / root

    def turn_rad(u):
        cu = c(u)
        dcu = c.derivative(u)
        dph = phi.derivative(u)
        return cu**4 * dph**2 + t * (cu**2 * dph**2 + dcu**2)

    def phi_integrand(u):
        return np.sqrt(max(turn_rad(u), 0.0)) / (c(u) ** 2 + t)

    return ct, dct, turn_rad, phi_integrand


def _check_turn_radicand(c, phi, turn_rad, t, domain):
    xs = np.linspace(domain[0], domain[1], _GRID)
    vals = np.array([turn_rad(x) for x in xs])
    scale = float(np.max(np.abs(vals))) or 1.0
    if np.any(vals < -1e-9 * scale):
        k = int(np.argmin(vals))
        raise errors.RadicandNegative(
            f"profile-turning radicand is negative near u={xs[k]:.6g} at t={t:g}",
            location=float(xs[k]),
        )


def deform_axial_surface(ax: AxialSurface, t) -> AxialSurface:
    """Isometric deformation of an axial surface: the direction-field scale
    becomes sqrt(c^2 + t), its turning rate follows from |xi'| invariance,
    and the heights absorb the radial stretch."""
    t = float(t)
    ct, dct, turn_rad, phi_integrand = _axial_angle_data(ax.c, ax.phi, t)
    _check_turn_radicand(ax.c, ax.phi, turn_rad, t, ax.u_domain)

    scan_z = _scan_derivative(ax.z)
    _one_sided_guard(scan_z, -t, ax.f, "z", "t > 0")

    def rad_z(v):
        return ax.z.derivative(v) ** 2 - t * ax.f.derivative(v) ** 2

    z_t = _signed_sqrt_integral(ax.z, rad_z, scan_z, "height", "z_t")
    phi_t = integral_function(
        phi_integrand, ax.u_domain, base=ax.u_domain[0],
        value_at_base=ax.phi(ax.u_domain[0]), name="phi_t",
    )
    c_t = ScalarFunction(fn=ct, domain=ax.c.domain, dfn=dct, name="c_t")
    return AxialSurface(c=c_t, phi=phi_t, f=ax.f, z=z_t,
                        creases_v=scan_z.sign_changes if t != 0.0 else ())


def deform_revolution_surface(f, phi, z, t) -> RevolutionSurface:
    """Isometric deformation of a surface of revolution: radii scale by
    sqrt(1 + t), the rotation angle divides by it, heights follow the
    radicand z'^2 - t f'^2."""
    t = float(t)
    if 1.0 + t <= 0.0:
        raise errors.RadicandNegative(f"1 + t <= 0 at t={t:g}")
    root = float(np.sqrt(1.0 + t))
    scan_z = _scan_derivative(z)
    _one_sided_guard(scan_z, -t, f, "z", "t > 0")

    def rad_z(v):
        return z.derivative(v) ** 2 - t * f.derivative(v) ** 2

    z_t = _signed_sqrt_integral(z, rad_z, scan_z, "height", "z_t")
    return RevolutionSurface(
        f=scale_function(f, root, "f_t"),
        phi=scale_function(phi, 1.0 / root, "phi_t"),
        z=z_t,
        creases_v=scan_z.sign_changes if t != 0.0 else (),
    )


def deform_general_surface(spec: SmoothSpec, t) -> SmoothSpec:
    """Isometric deformation of a general T-surface at additive parameter t.

    Requires phi' > 0 on the whole domain (direction field actually turns);
    z' must keep one sign.  The deformed data keeps g and f, scales c to
    sqrt(c^2 + t), and integrates the new turning rate; the output satisfies
    the compatibility condition by construction (checked, CompatibilityDrift
    otherwise).
    """
    t = float(t)
    us = np.linspace(*spec.u_domain, _GRID)
    dphi = np.array([spec.phi.derivative(u) for u in us])
    if float(dphi.min()) <= 0.0:
        raise errors.InvariantViolation(
            "phi' must be strictly positive for the general deformation "
            "(use the translational/molding forms otherwise)",
            path="phi",
        )

    # profile radicand c^2 cos^2 eta + t
    cvals = np.array([spec.c(u) for u in us])
    evals = np.array([spec.eta(u) for u in us])
    prof_rad = (cvals * np.cos(evals)) ** 2 + t
    if np.any(prof_rad < -1e-9 * max(float(np.max(prof_rad)), 1.0)):
        k = int(np.argmin(prof_rad))
        raise errors.RadicandNegative(
            f"profile radicand negative near u={us[k]:.6g}", location=float(us[k])
        )

    def ct(u):
        return np.sqrt(max(spec.c(u) ** 2 + t, 0.0))

    def dct(u):
        root = ct(u)
        return 0.0 if root == 0.0 else spec.c(u) * spec.c.derivative(u) / root

    def phi_integrand(u):
        cu = spec.c(u)
        e = spec.eta(u)
        rad = (cu * np.cos(e)) ** 2 + t
        return spec.phi.derivative(u) * cu * np.sqrt(max(rad, 0.0)) / (
            np.cos(e) * (cu**2 + t)
        )

    phi_t = integral_function(
        phi_integrand, spec.u_domain, base=spec.u_domain[0],
        value_at_base=spec.phi(spec.u_domain[0]), name="phi_t",
    )

    def eta_t(u):
        cu = spec.c(u)
        e = spec.eta(u)
        return np.arctan2(cu * np.sin(e), np.sqrt(max((cu * np.cos(e)) ** 2 + t, 0.0)))

    def eta_t_derivative(u):
        cu = spec.c(u)
        dcu = spec.c.derivative(u)
        e = spec.eta(u)
        de = spec.eta_derivative(u)
        N = cu * np.sin(e)
        D = np.sqrt(max((cu * np.cos(e)) ** 2 + t, 1e-300))
        dN = dcu * np.sin(e) + cu * np.cos(e) * de
        dD = (cu * dcu * np.cos(e) ** 2 - cu**2 * np.cos(e) * np.sin(e) * de) / D
        return (dN * D - N * dD) / (cu**2 + t)

    psi_t = ScalarFunction(
        fn=lambda u: phi_t(u) - eta_t(u),
        domain=spec.psi.domain,
        dfn=lambda u: phi_integrand(u) - eta_t_derivative(u),
        name="psi_t",
    )

    scan_z = _scan_derivative(spec.z)
    _one_sided_guard(scan_z, -t, spec.f, "z", "t > 0")

    def rad_z(v):
        return spec.z.derivative(v) ** 2 - t * spec.f.derivative(v) ** 2

    z_t = _signed_sqrt_integral(spec.z, rad_z, scan_z, "height", "z_t")

    out = SmoothSpec(
        g=spec.g,
        psi=psi_t,
        c=ScalarFunction(fn=ct, domain=spec.c.domain, dfn=dct, name="c_t"),
        phi=phi_t,
        f=spec.f,
        z=z_t,
    )
    _check_compatibility_drift(out)
    return out


def _check_compatibility_drift(spec: SmoothSpec, samples=65):
    us = np.linspace(*spec.u_domain, samples)
    resid = []
    scale = 1.0
    for u in us:
        cu = spec.c(u)
        dcu = spec.c.derivative(u)
        dph = spec.phi.derivative(u)
        e = spec.eta(u)
        resid.append(abs(dcu * np.cos(e) - cu * dph * np.sin(e)))
        scale = max(scale, abs(dcu), abs(cu * dph))
    worst = max(resid)
    if worst > COMPAT_DRIFT_TOL * scale:
        raise errors.CompatibilityDrift(
            f"deformed data violates the compatibility condition "
            f"(residual {worst:.3g})"
        )


# ---------------------------------------------------------------------------
# conversions and parallel partners
# ---------------------------------------------------------------------------

def axial_to_general(ax: AxialSurface) -> SmoothSpec:
    """Express an axial surface in the general form: the base trajectory
    curve is f(v0) xi(u) and the profile offsets are shifted to vanish at
    the start of the profile domain."""
    f0 = ax.f(ax.v_domain[0])
    if f0 == 0.0:
        raise errors.AxisDegenerate("axial surface with f = 0 at the profile start")

    def xi_dot_norm(u):
        dcu = ax.c.derivative(u)
        cu = ax.c(u)
        dph = ax.phi.derivative(u)
        return np.hypot(dcu, cu * dph)

    def psi(u):
        # direction angle of xi' minus pi/2, continuous for phi' > 0
        return ax.phi(u) + np.arctan2(ax.c(u) * ax.phi.derivative(u),
                                      ax.c.derivative(u)) - 0.5 * np.pi

    g = from_callable(lambda u: f0 * xi_dot_norm(u), ax.u_domain, name="g")
    return SmoothSpec(
        g=g,
        psi=from_callable(psi, ax.u_domain, name="psi"),
        c=ax.c,
        phi=ax.phi,
        f=shift_function(ax.f, -f0, "f"),
        z=ax.z,
    )


def general_to_translational(spec: SmoothSpec) -> TranslationalSurface:
    """Express a general datum with constant direction field (phi' = 0,
    c constant, phi(0) = 0) in the translational normal form."""
    us = np.linspace(*spec.u_domain, 65)
    dphi = max(abs(spec.phi.derivative(u)) for u in us)
    if dphi > 1e-8 or abs(spec.phi(spec.u_domain[0])) > 1e-12:
        raise errors.NonParallelInput(
            "direction field is not the constant x-direction"
        )
    c0 = spec.c(spec.u_domain[0])
    x = integral_function(
        lambda u: -spec.g(u) * np.sin(spec.psi(u)), spec.u_domain, name="x"
    )
    y = integral_function(
        lambda u: spec.g(u) * np.cos(spec.psi(u)), spec.u_domain, name="y"
    )
    return TranslationalSurface(
        x=x, y=y, f=scale_function(spec.f, c0, "f"), z=spec.z
    )


def smooth_parallel_partner(spec: SmoothSpec, g_new: ScalarFunction | None = None,
                            axial: bool = False, f_new: ScalarFunction | None = None,
                            z_new: ScalarFunction | None = None) -> SmoothSpec:
    """A T-surface parallel to spec: same direction field xi and normal
    directions psi, with a replaced trajectory speed g (and optionally a
    replaced, parallel profile (f, z)).

    axial=True picks the trajectory curve gamma' = xi (requires phi' != 0),
    which makes the partner's profile planes pass through a common vertical
    axis.
    """
    if axial:
        if g_new is not None:
            raise errors.NonParallelInput("pass either g_new or axial, not both")
        us = np.linspace(*spec.u_domain, 65)
        if min(abs(spec.phi.derivative(u)) for u in us) <= 1e-12:
            raise errors.NonParallelInput(
                "axial partner needs a turning direction field (phi' != 0)"
            )
        g_new = from_callable(
            lambda u: spec.lam(u) * spec.g(u), spec.u_domain, name="g_axial"
        )
    if g_new is None:
        g_new = spec.g
    if g_new.domain != spec.g.domain:
        raise errors.NonParallelInput("replacement trajectory domain mismatch")

    f_out, z_out = spec.f, spec.z
    if f_new is not None or z_new is not None:
        f_out = f_new if f_new is not None else spec.f
        z_out = z_new if z_new is not None else spec.z
        vs = np.linspace(*spec.v_domain, 65)
        for v in vs:
            cross = (f_out.derivative(v) * spec.z.derivative(v)
                     - z_out.derivative(v) * spec.f.derivative(v))
            norm = max(
                np.hypot(f_out.derivative(v), z_out.derivative(v))
                * np.hypot(spec.f.derivative(v), spec.z.derivative(v)),
                1e-300,
            )
            if abs(cross) / norm > 1e-8:
                raise errors.NonParallelInput(
                    f"replacement profile is not parallel near v={v:g}"
                )
    return SmoothSpec(g=g_new, psi=spec.psi, c=spec.c, phi=spec.phi, f=f_out, z=z_out)
