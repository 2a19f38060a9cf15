"""Adaptive Simpson quadrature with square-root endpoint handling.

The deformation integrals all have smooth integrands on the open interval
but may behave like sqrt(x - a) at a closed endpoint (a radicand vanishing
exactly at the deformation boundary).  Such endpoints are regularized by the
substitution x = a + s^2, after which plain adaptive Simpson converges fast.
"""

import numpy as np

DEFAULT_TOL = 1e-10
_MAX_DEPTH = 60


def _simpson(f, a, fa, b, fb):
    m = 0.5 * (a + b)
    fm = f(m)
    return m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adapt(f, a, fa, b, fb, m, fm, whole, tol, depth):
    lm, flm, left = _simpson(f, a, fa, m, fm)
    rm, frm, right = _simpson(f, m, fm, b, fb)
    delta = left + right - whole
    if depth >= _MAX_DEPTH or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return _adapt(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth + 1) + _adapt(
        f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth + 1
    )


def adaptive_simpson(f, a, b, tol=DEFAULT_TOL, singular_left=False, singular_right=False):
    """Integral of f over [a, b] to absolute tolerance tol.

    Set singular_left/right when the integrand has a sqrt-type zero slope
    singularity at that endpoint (e.g. sqrt(radicand) with the radicand
    vanishing there); the local substitution x = a + s^2 removes it.
    """
    a = float(a)
    b = float(b)
    if a == b:
        return 0.0
    if b < a:
        return -adaptive_simpson(f, b, a, tol, singular_right, singular_left)

    if singular_left and singular_right:
        mid = 0.5 * (a + b)
        return adaptive_simpson(f, a, mid, 0.5 * tol, True, False) + adaptive_simpson(
            f, mid, b, 0.5 * tol, False, True
        )
    if singular_left:
        w = np.sqrt(b - a)
        return adaptive_simpson(lambda s: 2.0 * s * f(a + s * s), 0.0, w, tol)
    if singular_right:
        w = np.sqrt(b - a)
        return adaptive_simpson(lambda s: 2.0 * s * f(b - s * s), 0.0, w, tol)

    fa = float(f(a))
    fb = float(f(b))
    m, fm, whole = _simpson(f, a, fa, b, fb)
    return _adapt(f, a, fa, b, fb, m, fm, whole, tol, 0)


def cumulative(f, grid, tol=DEFAULT_TOL, singular_left=False, singular_right=False):
    """Cumulative integrals int_{grid[0]}^{grid[k]} f for a sorted grid.

    Integrates segment by segment so evaluating a profile of antiderivative
    values costs one pass.  Singularity flags refer to the overall interval
    endpoints.
    """
    grid = np.asarray(grid, dtype=float)
    out = np.zeros(grid.shape)
    total = 0.0
    last = len(grid) - 1
    for k in range(1, len(grid)):
        total += adaptive_simpson(
            f,
            grid[k - 1],
            grid[k],
            tol,
            singular_left and k == 1,
            singular_right and k == last,
        )
        out[k] = total
    return out
