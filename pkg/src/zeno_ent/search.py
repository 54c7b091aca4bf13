"""Grid scan plus golden-section refinement for smooth 1-d/2-d maxima."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["golden_section_max", "grid_refine_max", "coordinate_refine_max"]

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section_max(f, a: float, b: float, tol: float = 1e-4):
    """Maximum of a unimodal ``f`` on [a, b] to within ``tol`` in x.

    Returns ``(x, f(x))``. Deterministic iteration count from the interval
    shrink factor.
    """
    if b < a:
        a, b = b, a
    h = b - a
    if h <= tol:
        x = 0.5 * (a + b)
        return x, f(x)
    n = int(math.ceil(math.log(tol / h) / math.log(INV_PHI)))
    c = b - INV_PHI * h
    d = a + INV_PHI * h
    fc, fd = f(c), f(d)
    for _ in range(n):
        if fc > fd:
            b, d, fd = d, c, fc
            h = b - a
            c = b - INV_PHI * h
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            h = b - a
            d = a + INV_PHI * h
            fd = f(d)
    if fc > fd:
        return c, fc
    return d, fd


def grid_refine_max(f, xs, values=None, tol: float = 1e-4):
    """Coarse argmax over the grid ``xs``, then golden refinement between
    the neighbouring grid points.  ``values`` may carry precomputed ``f(xs)``."""
    xs = np.asarray(xs, dtype=float)
    if values is None:
        values = np.array([f(x) for x in xs])
    i = int(np.argmax(values))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, xs.size - 1)]
    x, fx = golden_section_max(f, float(lo), float(hi), tol=tol)
    # the refined point can only improve on the grid point
    if values[i] > fx:
        return float(xs[i]), float(values[i])
    return x, fx


def coordinate_refine_max(f, x0: float, y0: float, dx: float, dy: float,
                          bounds_x, bounds_y, tol: float = 1e-4, sweeps: int = 3):
    """Alternating golden-section sweeps around ``(x0, y0)`` for a 2-d maximum.

    ``dx``/``dy`` set the initial bracket half-widths (one coarse-grid cell);
    each sweep narrows one coordinate with the other held fixed.
    """
    x, y = float(x0), float(y0)
    fxy = f(x, y)
    for _ in range(sweeps):
        lo = max(bounds_x[0], x - dx)
        hi = min(bounds_x[1], x + dx)
        x, fxy = golden_section_max(lambda u: f(u, y), lo, hi, tol=tol)
        lo = max(bounds_y[0], y - dy)
        hi = min(bounds_y[1], y + dy)
        y, fxy = golden_section_max(lambda v: f(x, v), lo, hi, tol=tol)
    return x, y, fxy
