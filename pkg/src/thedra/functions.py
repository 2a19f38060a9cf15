"""Scalar functions of one variable with derivative access.

A ScalarFunction wraps a value callable on a closed interval together with
an optional derivative callable.  Functions built from the registry
(polynomial, trig, constant) carry analytic derivatives and serialize as
registry name + parameters; sampled functions interpolate with a cubic
spline; everything else falls back to 4th-order finite differences on a
stencil kept inside the domain.
"""

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from . import errors
from .quadrature import DEFAULT_TOL, adaptive_simpson

# finite-difference step: domain length / 1024
_FD_DIVISOR = 1024.0
# 4th-order first-derivative weights on a 5-point stencil, by position of the
# evaluation node within the stencil
_FD_WEIGHTS = {
    0: np.array([-25.0, 48.0, -36.0, 16.0, -3.0]) / 12.0,
    1: np.array([-3.0, -10.0, 18.0, -6.0, 1.0]) / 12.0,
    2: np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0,
    3: np.array([-1.0, 6.0, -18.0, 10.0, 3.0]) / 12.0,
    4: np.array([3.0, -16.0, 36.0, -48.0, 25.0]) / 12.0,
}

MIN_SAMPLES = 16


@dataclass(frozen=True)
class ScalarFunction:
    """Evaluable, differentiable real function on a closed interval."""

    fn: callable
    domain: tuple
    dfn: callable = None
    name: str = ""
    params: dict = None

    def __call__(self, u):
        u = np.asarray(u, dtype=float)
        lo, hi = self.domain
        pad = 1e-9 * max(hi - lo, 1.0)
        if np.any(u < lo - pad) or np.any(u > hi + pad):
            raise errors.OutOfDomain(
                f"argument outside [{lo:g}, {hi:g}] for {self.name or 'function'}"
            )
        out = self.fn(u)
        return float(out) if np.isscalar(u) or u.ndim == 0 else np.asarray(out, float)

    def derivative(self, u):
        if self.dfn is not None:
            out = self.dfn(np.asarray(u, dtype=float))
            return float(out) if np.ndim(u) == 0 else np.asarray(out, float)
        return self._fd_derivative(u)

    def _fd_derivative(self, u):
        lo, hi = self.domain
        h = (hi - lo) / _FD_DIVISOR
        scalar = np.ndim(u) == 0
        us = np.atleast_1d(np.asarray(u, dtype=float))
        out = np.empty(us.shape)
        for idx, x in np.ndenumerate(us):
            # uniform 5-point stencil through x, shifted to stay inside the
            # domain (4th order at any node position)
            left_room = int(np.floor((x - lo) / h + 1e-9))
            right_room = int(np.floor((hi - x) / h + 1e-9))
            pos = min(max(2, 4 - right_room), min(left_room, 4))
            nodes = x + h * (np.arange(5.0) - pos)
            vals = np.array([self.fn(nd) for nd in nodes], dtype=float)
            out[idx] = float(_FD_WEIGHTS[pos] @ vals) / h
        return float(out[0]) if scalar else out

    # -- registry ----------------------------------------------------------

    def to_registry(self):
        if self.params is None:
            raise errors.SchemaViolation(
                f"function {self.name or '<anonymous>'} has no registry form"
            )
        return {"name": self.name, "params": dict(self.params), "domain": list(self.domain)}


def polynomial(coefficients, domain, name="polynomial"):
    """Polynomial sum_k coefficients[k] * u^k."""
    coeffs = [float(c) for c in coefficients]
    p = np.polynomial.Polynomial(coeffs)
    dp = p.deriv()
    return ScalarFunction(
        fn=p, domain=tuple(domain), dfn=dp, name="polynomial",
        params={"coefficients": coeffs},
    )


def constant(value, domain):
    return polynomial([float(value)], domain)


def identity(domain):
    return polynomial([0.0, 1.0], domain)


def trig(domain, amplitude=1.0, frequency=1.0, phase=0.0, offset=0.0, kind="sin"):
    """offset + amplitude * sin/cos(frequency * u + phase)."""
    a, w, p, o = (float(amplitude), float(frequency), float(phase), float(offset))
    if kind == "sin":
        fn = lambda u: o + a * np.sin(w * u + p)
        dfn = lambda u: a * w * np.cos(w * u + p)
    elif kind == "cos":
        fn = lambda u: o + a * np.cos(w * u + p)
        dfn = lambda u: -a * w * np.sin(w * u + p)
    else:
        raise errors.SchemaViolation(f"unknown trig kind {kind!r}")
    return ScalarFunction(
        fn=fn, domain=tuple(domain), dfn=dfn, name="trig",
        params={"amplitude": a, "frequency": w, "phase": p, "offset": o, "kind": kind},
    )


def exponential(domain, amplitude=1.0, rate=1.0):
    """amplitude * exp(rate * u)."""
    a, r = float(amplitude), float(rate)
    return ScalarFunction(
        fn=lambda u: a * np.exp(r * u),
        domain=tuple(domain),
        dfn=lambda u: a * r * np.exp(r * u),
        name="exponential",
        params={"amplitude": a, "rate": r},
    )


def sampled(values, domain, name="samples"):
    """Uniform samples on the domain, interpolated with a cubic spline."""
    values = np.asarray(values, dtype=float)
    if values.shape[0] < MIN_SAMPLES:
        raise errors.SchemaViolation(
            f"sampled functions need at least {MIN_SAMPLES} points"
        )
    xs = np.linspace(domain[0], domain[1], values.shape[0])
    spline = CubicSpline(xs, values)
    dspline = spline.derivative()
    return ScalarFunction(
        fn=spline, domain=tuple(domain), dfn=dspline, name="samples",
        params={"values": [float(v) for v in values]},
    )


def from_callable(fn, domain, dfn=None, name=""):
    return ScalarFunction(fn=fn, domain=tuple(domain), dfn=dfn, name=name)


REGISTRY = {
    "polynomial": lambda params, domain: polynomial(params["coefficients"], domain),
    "trig": lambda params, domain: trig(domain, **params),
    "exponential": lambda params, domain: exponential(domain, **params),
    "samples": lambda params, domain: sampled(params["values"], domain),
}


def from_registry(entry):
    """Rebuild a ScalarFunction from its serialized registry form."""
    try:
        name = entry["name"]
        params = entry["params"]
        domain = tuple(entry["domain"])
    except (KeyError, TypeError) as exc:
        raise errors.SchemaViolation(f"malformed function entry: {exc}") from exc
    if name not in REGISTRY:
        raise errors.SchemaViolation(f"unknown registry function {name!r}")
    return REGISTRY[name](params, domain)


class _CachedAntiderivative:
    """Antiderivative of an integrand, evaluated by adaptive quadrature with
    a cache of already-integrated anchor points so grid sweeps stay cheap."""

    def __init__(self, integrand, base, value_at_base=0.0, tol=DEFAULT_TOL,
                 singular_points=()):
        self.integrand = integrand
        self.base = float(base)
        self.value_at_base = float(value_at_base)
        self.tol = tol
        # sorted interior points where the integrand has sqrt/kink behaviour
        self.splits = tuple(sorted(float(s) for s in singular_points))
        self._anchors = {self.base: self.value_at_base}

    def _segment(self, a, b):
        if a == b:
            return 0.0
        lo, hi = min(a, b), max(a, b)
        cuts = [lo] + [s for s in self.splits if lo < s < hi] + [hi]
        total = 0.0
        for u, v in zip(cuts[:-1], cuts[1:]):
            total += adaptive_simpson(
                self.integrand, u, v, self.tol,
                singular_left=u in self.splits,
                singular_right=v in self.splits,
            )
        return total if b >= a else -total

    def __call__(self, u):
        us = np.atleast_1d(np.asarray(u, dtype=float))
        order = np.argsort(us)
        out = np.empty(us.shape)
        prev_x = self.base
        prev_v = self.value_at_base
        # walk through requested points in increasing order, reusing anchors
        for k in order:
            x = float(us[k])
            if x in self._anchors:
                prev_x, prev_v = x, self._anchors[x]
            else:
                prev_v = prev_v + self._segment(prev_x, x)
                prev_x = x
                self._anchors[x] = prev_v
            out[k] = prev_v
        return out[0] if np.ndim(u) == 0 else out


def integral_function(integrand_fn, domain, base=None, value_at_base=0.0,
                      derivative_fn=None, tol=DEFAULT_TOL, singular_points=(),
                      name="integral"):
    """ScalarFunction u -> value_at_base + int_base^u integrand.

    The derivative is the integrand itself (or an explicit override);
    singular_points lists interior or endpoint locations where the integrand
    has sqrt-type behaviour and the quadrature must split/substitute.
    """
    lo, hi = domain
    if base is None:
        base = lo
    anti = _CachedAntiderivative(
        integrand_fn, base, value_at_base, tol, singular_points
    )
    return ScalarFunction(
        fn=anti,
        domain=(lo, hi),
        dfn=derivative_fn if derivative_fn is not None else integrand_fn,
        name=name,
    )
