"""Named example designs used by the CLI, the service and the test suite."""

import numpy as np

from .builders import miura_data
from .design import DesignData
from .documents import DesignDocument
from .functions import exponential, polynomial, sampled
from .kinematics import translational_design
from .smooth import RevolutionSurface, SmoothSpec, TranslationalSurface


def miura_design(a=1.0, b=1.0, c=1.0, d=1.0, m=3, n=3) -> DesignData:
    """Miura-ori herringbone pattern as a general design (all line angles 0)."""
    return translational_design(miura_data(a, b, c, d, m, n))


def revolution_paraboloid_design(m=6, n=5, r0=0.25, r1=1.0, span=2.0 * np.pi / 3.0) -> DesignData:
    """Discrete paraboloid of revolution: radii r_j sampled uniformly, heights
    z_j = r_j^2 (shifted to start at 0), profile planes fanned over `span`."""
    r = np.linspace(r0, r1, n + 1)
    z = r**2 - r[0] ** 2
    eta = np.full(m, 0.5 * span / m)
    phi = np.cumsum(2.0 * eta)
    psi = phi - eta
    g0 = 2.0 * r[0] * np.sin(eta)
    return DesignData(phi=phi, psi=psi, f0=np.diff(r), g0=g0, z=z)


def axial_example_design(m=4, n=4) -> DesignData:
    """Common-axis design with unequal sector angles (axial but not a
    surface of revolution).  g0 entries are the widths induced by placing
    the axis at distance 1 from the first vertex."""
    eta = np.array([0.35, 0.2, 0.4, 0.25])[:m]
    theta = np.array([0.15, 0.3, 0.1, 0.3])[:m]
    phi = np.cumsum(eta + theta)
    psi = phi - theta
    c = np.cos(eta) / np.cos(theta)
    C = np.concatenate(([1.0], np.cumprod(c)))
    f00 = 1.0
    g0 = f00 * C[:-1] * np.sin(eta + theta) / np.cos(theta)
    f0 = np.full(n, 0.35)
    z = np.concatenate(([0.0], np.cumsum(np.full(n, 0.6))))
    return DesignData(phi=phi, psi=psi, f0=f0, g0=g0, z=z)


def general_example_design() -> DesignData:
    """A garden-variety design in no special class (mixed signs included)."""
    return DesignData(
        phi=[0.5, 1.1, 1.4],
        psi=[0.2, 0.9, 1.3],
        f0=[0.2, 0.3],
        g0=[1.0, -1.2, 0.8],
        z=[0.0, 0.7, 1.5],
    )


DISCRETE_PRESETS = {
    "miura": miura_design,
    "revolution-paraboloid": revolution_paraboloid_design,
    "axial-example": axial_example_design,
    "general-example": general_example_design,
}


def preset_document(name: str, **kwargs) -> DesignDocument:
    if name not in DISCRETE_PRESETS:
        raise KeyError(f"unknown preset {name!r}")
    return DesignDocument(
        kind="discrete",
        payload=DISCRETE_PRESETS[name](**kwargs),
        name=name,
    )


# ---------------------------------------------------------------------------
# smooth presets
# ---------------------------------------------------------------------------

def paraboloid_revolution_wedge(v_lo=0.1, v_hi=1.0, span=2.0 * np.pi / 3.0) -> RevolutionSurface:
    """Wedge of the paraboloid of revolution z = x^2 + y^2: radius f(v) = v,
    height z(v) = v^2."""
    V = (float(v_lo), float(v_hi))
    return RevolutionSurface(
        f=polynomial([0.0, 1.0], V),
        phi=polynomial([0.0, 1.0], (0.0, float(span))),
        z=polynomial([0.0, 0.0, 1.0], V),
    )


def translational_paraboloid(extent=0.5) -> TranslationalSurface:
    """The paraboloid as a translational surface, in the frame where the
    trajectory planes are parallel to the xy-plane: x(u) = u^2, y(u) = u,
    f(v) = v^2, z(v) = v."""
    U = (0.0, float(extent))
    V = (0.0, float(extent))
    return TranslationalSurface(
        x=polynomial([0.0, 0.0, 1.0], U),
        y=polynomial([0.0, 1.0], U),
        f=polynomial([0.0, 0.0, 1.0], V),
        z=polynomial([0.0, 1.0], V),
    )


def molding_channel(span=1.0, depth=0.5) -> SmoothSpec:
    """Molding surface along a circular trajectory: unit-speed curve with
    normal direction psi(u) = u, profile curve (v, v + v^2/2)."""
    U = (0.0, float(span))
    V = (0.0, float(depth))
    return SmoothSpec(
        g=polynomial([1.0], U),
        psi=polynomial([0.0, 1.0], U),
        c=polynomial([1.0], U),
        phi=polynomial([0.0, 1.0], U),
        f=polynomial([0.0, 1.0], V),
        z=polynomial([0.0, 1.0, 0.5], V),
    )


def general_spec_example(span=1.0, depth=0.5) -> SmoothSpec:
    """General T-surface datum with a genuinely varying profile scale,
    built so the compatibility condition holds exactly:
    eta = const, phi = u  =>  c = exp(u tan eta)."""
    U = (0.0, float(span))
    V = (0.0, float(depth))
    eta0 = 0.4
    k = float(np.tan(eta0))
    return SmoothSpec(
        g=polynomial([1.0], U),
        psi=polynomial([-eta0, 1.0], U),
        c=exponential(U, 1.0, k),
        phi=polynomial([0.0, 1.0], U),
        f=polynomial([0.0, 1.0], V),
        z=polynomial([0.0, 1.0, 0.5], V),
    )


SMOOTH_PRESETS = {
    "paraboloid-revolution": paraboloid_revolution_wedge,
    "translational-paraboloid": translational_paraboloid,
    "molding-channel": molding_channel,
    "general-exponential": general_spec_example,
}


def smooth_document_example(samples=64) -> DesignDocument:
    """A smooth document with sampled function payloads (round-trips to the
    precision of the stored decimals)."""
    spec = molding_channel()
    U = spec.u_domain
    V = spec.v_domain
    us = np.linspace(U[0], U[1], samples)
    vs = np.linspace(V[0], V[1], samples)
    return DesignDocument(
        kind="smooth",
        payload=SmoothSpec(
            g=sampled([spec.g(u) for u in us], U),
            psi=sampled([spec.psi(u) for u in us], U),
            c=sampled([spec.c(u) for u in us], U),
            phi=sampled([spec.phi(u) for u in us], U),
            f=sampled([spec.f(v) for v in vs], V),
            z=sampled([spec.z(v) for v in vs], V),
        ),
        name="molding-channel-sampled",
    )
