"""Shared generators for random-but-valid designs."""

import numpy as np
import pytest

from thedra.builders import TranslationalData
from thedra.design import DesignData, build_tnet, derive


def random_design(rng, m=None, n=None, mixed_signs=True):
    """A random valid design: safe sector angles, widths with margin so no
    strip self-crosses, mixed-sign lengths and non-monotone heights."""
    m = int(rng.integers(2, 9)) if m is None else m
    n = int(rng.integers(2, 9)) if n is None else n
    for _ in range(20):
        eta = rng.uniform(-0.6, 0.6, m)
        theta = rng.uniform(-0.6, 0.6, m)
        phi = np.cumsum(eta + theta)
        psi = phi - theta
        g0 = rng.uniform(1.0, 2.0, m)
        f0 = rng.uniform(0.1, 0.4, n)
        if mixed_signs:
            g0 = g0 * rng.choice([-1.0, 1.0], m)
            f0 = f0 * np.where(rng.random(n) < 0.25, -1.0, 1.0)
        z = np.concatenate(
            ([0.0], np.cumsum(rng.uniform(0.4, 1.0, n) * rng.choice([-1.0, 1.0], n)))
        )
        if np.any(np.diff(z) == 0.0):
            continue
        # keep strip widths one-signed: |F K| must stay below |g|
        c = np.cos(eta) / np.cos(theta)
        C = np.concatenate(([1.0], np.cumprod(c)))
        K = C[:-1] * np.sin(eta + theta) / np.cos(theta)
        F = np.concatenate(([0.0], np.cumsum(f0)))
        worst = float(np.max(np.abs(F)) * np.max(np.abs(K)))
        gmin = float(np.min(np.abs(g0)))
        if worst > 0.7 * gmin:
            f0 = f0 * 0.7 * gmin / worst
        design = DesignData(phi=phi, psi=psi, f0=f0, g0=g0, z=z)
        try:
            build_tnet(design)
        except Exception:
            continue
        return design
    raise RuntimeError("could not generate a valid design")


def random_molding_design(rng, m=None, n=None):
    m = int(rng.integers(2, 7)) if m is None else m
    n = int(rng.integers(2, 7)) if n is None else n
    for _ in range(20):
        eta = rng.uniform(-0.55, 0.55, m)
        phi = np.cumsum(2.0 * eta)
        psi = phi - eta
        g0 = rng.uniform(1.5, 2.5, m) * rng.choice([-1.0, 1.0], m)
        f0 = rng.uniform(0.1, 0.3, n)
        K = 2.0 * np.sin(eta)
        F = np.cumsum(f0)
        worst = float(np.max(np.abs(F)) * np.max(np.abs(K)))
        gmin = float(np.min(np.abs(g0)))
        if worst > 0.7 * gmin:
            f0 = f0 * 0.7 * gmin / worst
        z = np.concatenate(([0.0], np.cumsum(rng.uniform(0.4, 1.0, n))))
        design = DesignData(phi=phi, psi=psi, f0=f0, g0=g0, z=z)
        try:
            build_tnet(design)
        except Exception:
            continue
        return design
    raise RuntimeError("could not generate a molding design")


def random_axial_design(rng, m=None, n=None):
    """Returns (design, f00): a design whose widths put all profile lines
    through one point at distance f00 from the first vertex."""
    m = int(rng.integers(2, 7)) if m is None else m
    n = int(rng.integers(2, 7)) if n is None else n
    while True:
        eta = rng.uniform(-0.55, 0.55, m)
        theta = rng.uniform(-0.55, 0.55, m)
        if np.any(np.abs(eta + theta) < 0.15):
            continue
        phi = np.cumsum(eta + theta)
        psi = phi - theta
        c = np.cos(eta) / np.cos(theta)
        C = np.concatenate(([1.0], np.cumprod(c)))
        f00 = float(rng.uniform(0.5, 1.5))
        g0 = f00 * C[:-1] * np.sin(eta + theta) / np.cos(theta)
        f0 = rng.uniform(0.1, 0.3, n)
        z = np.concatenate(
            ([0.0], np.cumsum(rng.uniform(0.4, 1.0, n) * rng.choice([-1.0, 1.0], n)))
        )
        design = DesignData(phi=phi, psi=psi, f0=f0, g0=g0, z=z)
        try:
            build_tnet(design)
        except Exception:
            continue
        return design, f00


def random_revolution_data(rng, m=None, n=None):
    """Returns (F, phi, z) of a random discrete surface of revolution."""
    m = int(rng.integers(2, 7)) if m is None else m
    n = int(rng.integers(2, 7)) if n is None else n
    eta = rng.uniform(0.1, 0.5, m) * rng.choice([-1.0, 1.0], m)
    phi = np.cumsum(2.0 * eta)
    F = 0.4 + np.cumsum(rng.uniform(0.1, 0.4, n + 1)) - rng.uniform(0.1, 0.4)
    F = np.abs(F) + 0.3
    z = np.concatenate(
        ([0.0], np.cumsum(rng.uniform(0.4, 1.0, n) * rng.choice([-1.0, 1.0], n)))
    )
    return F, phi, z


def revolution_design(F, phi, z):
    """General design form of a discrete surface of revolution."""
    F = np.asarray(F, float)
    phi_full = np.concatenate(([0.0], np.asarray(phi, float)))
    eta = 0.5 * np.diff(phi_full)
    psi = phi_full[1:] - eta
    g0 = 2.0 * F[0] * np.sin(eta)
    return DesignData(phi=phi_full[1:], psi=psi, f0=np.diff(F), g0=g0, z=z)


def random_translational_data(rng, m=None, n=None):
    m = int(rng.integers(2, 7)) if m is None else m
    n = int(rng.integers(2, 7)) if n is None else n
    x_row = np.concatenate(
        ([0.0], np.cumsum(rng.uniform(0.1, 0.5, m) * rng.choice([-1.0, 1.0], m)))
    )
    y = np.concatenate(([0.0], np.cumsum(rng.uniform(0.4, 1.0, m))))
    x_col = np.concatenate(
        ([0.0], np.cumsum(rng.uniform(0.1, 0.5, n) * rng.choice([-1.0, 1.0], n)))
    )
    z = np.concatenate(
        ([0.0], np.cumsum(rng.uniform(0.4, 1.0, n) * rng.choice([-1.0, 1.0], n)))
    )
    return TranslationalData(x_row=x_row, x_col=x_col, y=y, z=z)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
