"""Adaptive outward integrator for rapidly oscillating radial problems.

A single embedded Dormand-Prince 5(4) stepper drives every stationary solve
in the package.  The right-hand side is always the second-order scalar form

    u''(x) = accel(x, u, u'),

integrated outward with two controls on the step size:

* the usual embedded-error control at the requested tolerance, and
* a hard ceiling tied to the local wavelength, h <= (2 pi / k_local(x)) / P,
  supplied by the caller as a callable.  Fixed steps chosen from a global
  bound silently dephase the tail of solutions whose wavenumber grows like
  x^gamma; the ceiling keeps the oscillation resolved everywhere while the
  error control is free to refine further.

Error weighting treats (u, u'/k) as commensurate components, where k is the
caller's local wavenumber estimate.  For an oscillatory solution this makes
the control a per-step phase tolerance and avoids the spurious step collapse
a per-component relative test suffers at the nodes of u.

For linear problems the state may be renormalized in flight (deeply
classically forbidden regions grow by thousands of e-folds, far past float64
range); the accumulated log-scale is reported per output sample so callers
can reconstruct any ratio or a max-normalized profile.  For nonlinear
problems renormalization is forbidden and an amplitude cap converts runaway
growth into `BlowupError` carrying the coordinate.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np

from .errors import BlowupError, ResolutionError

# Dormand-Prince 5(4) tableau (FSAL).
_C2, _C3, _C4, _C5 = 1 / 5, 3 / 10, 4 / 5, 8 / 9
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# y5 - y4 error weights (k1..k7)
_E1, _E3, _E4, _E5, _E6, _E7 = (71 / 57600, -71 / 16695, 71 / 1920,
                                -17253 / 339200, 22 / 525, -1 / 40)

_RENORM_THRESHOLD = 1e120


def integrate_second_order(
    accel: Callable[[float, float, float], float],
    x0: float,
    u0: float,
    v0: float,
    x_out: Sequence[float],
    *,
    step_ceiling: Callable[[float], float],
    wavenumber: Callable[[float], float],
    rtol: float = 1e-9,
    atol: float = 0.0,
    renormalize: bool = False,
    amplitude_cap: float | None = None,
    max_steps: int = 50_000_000,
):
    """Integrate u'' = accel(x, u, u') from (x0, u0, v0) through x_out.

    Returns (U, V, logscale): arrays over x_out with U = u * exp(logscale)
    conceptually; logscale is identically 0 unless `renormalize` fired.
    x_out must be ascending and start at or after x0.
    """
    xs = np.asarray(x_out, dtype=float)
    if xs.ndim != 1 or xs.size == 0 or np.any(np.diff(xs) <= 0):
        raise ValueError("x_out must be ascending and non-empty")
    if xs[0] < x0 - 1e-13 * max(1.0, abs(x0)):
        raise ValueError("x_out starts before x0")

    n = xs.size
    U = np.empty(n)
    V = np.empty(n)
    LOG = np.zeros(n)

    x = float(x0)
    u = float(u0)
    v = float(v0)
    logscale = 0.0
    tiny = 1e-300

    i_out = 0
    # emit any output points that coincide with the start
    while i_out < n and xs[i_out] <= x + 1e-14 * max(1.0, abs(x)):
        U[i_out], V[i_out], LOG[i_out] = u, v, logscale
        i_out += 1
    if i_out >= n:
        return U, V, LOG

    k1 = accel(x, u, v)
    h = min(step_ceiling(x), (xs[-1] - x) / 16.0)
    if not (h > 0):
        raise ValueError("step ceiling must be positive")

    steps = 0
    while i_out < n:
        steps += 1
        if steps > max_steps:
            raise ResolutionError(f"step budget exhausted at x = {x:.6g}")

        ceiling = step_ceiling(x)
        if h > ceiling:
            h = ceiling
        x_target = xs[i_out]
        hit_output = False
        if x + h >= x_target - 1e-14 * max(1.0, abs(x_target)):
            h = x_target - x
            hit_output = True
        if h <= 1e-16 * max(1.0, abs(x)):
            # degenerate interval; snap to the output point
            U[i_out], V[i_out], LOG[i_out] = u, v, logscale
            i_out += 1
            h = ceiling
            continue

        # six stages (k1 carried over, FSAL)
        du = h * v
        dv = h * k1
        u2 = u + _A21 * du
        v2 = v + _A21 * dv
        k2 = accel(x + _C2 * h, u2, v2)
        u3 = u + _A31 * du + _A32 * h * v2
        v3 = v + _A31 * dv + _A32 * h * k2
        k3 = accel(x + _C3 * h, u3, v3)
        u4 = u + _A41 * du + h * (_A42 * v2 + _A43 * v3)
        v4 = v + _A41 * dv + h * (_A42 * k2 + _A43 * k3)
        k4 = accel(x + _C4 * h, u4, v4)
        u5 = u + _A51 * du + h * (_A52 * v2 + _A53 * v3 + _A54 * v4)
        v5 = v + _A51 * dv + h * (_A52 * k2 + _A53 * k3 + _A54 * k4)
        k5 = accel(x + _C5 * h, u5, v5)
        u6 = u + _A61 * du + h * (_A62 * v2 + _A63 * v3 + _A64 * v4 + _A65 * v5)
        v6 = v + _A61 * dv + h * (_A62 * k2 + _A63 * k3 + _A64 * k4 + _A65 * k5)
        k6 = accel(x + h, u6, v6)

        u_new = u + h * (_B1 * v + _B3 * v3 + _B4 * v4 + _B5 * v5 + _B6 * v6)
        v_new = v + h * (_B1 * k1 + _B3 * k3 + _B4 * k4 + _B5 * k5 + _B6 * k6)
        k7 = accel(x + h, u_new, v_new)

        err_u = h * (_E1 * v + _E3 * v3 + _E4 * v4 + _E5 * v5 + _E6 * v6 + _E7 * v_new)
        err_v = h * (_E1 * k1 + _E3 * k3 + _E4 * k4 + _E5 * k5 + _E6 * k6 + _E7 * k7)

        khat = wavenumber(x + h)
        if khat < 1.0:
            khat = 1.0
        scale = atol + rtol * max(abs(u), abs(u_new), abs(v) / khat, abs(v_new) / khat, tiny)
        err = max(abs(err_u), abs(err_v) / khat) / scale

        if err <= 1.0 or h <= 1e-15 * max(1.0, abs(x)):
            x = x + h
            u, v, k1 = u_new, v_new, k7

            if amplitude_cap is not None and abs(u) > amplitude_cap:
                raise BlowupError(x)
            if renormalize:
                m = max(abs(u), abs(v))
                if m > _RENORM_THRESHOLD:
                    u /= m
                    v /= m
                    k1 = accel(x, u, v)
                    logscale += math.log(m)
            elif abs(u) > 1e280 or abs(v) > 1e280:
                raise BlowupError(x, "linear-range overflow; enable renormalization")

            if hit_output:
                U[i_out], V[i_out], LOG[i_out] = u, v, logscale
                i_out += 1

            grow = 0.9 * err ** -0.2 if err > 1e-10 else 5.0
            h = h * min(5.0, max(0.2, grow))
        else:
            h = h * max(0.2, 0.9 * err ** -0.2)

    return U, V, LOG


def reconstructed_profile(U: np.ndarray, LOG: np.ndarray):
    """Collapse (value, logscale) pairs to a finite float64 profile.

    Returns (values, log_reference) with values = U * exp(LOG - log_reference)
    and log_reference chosen so the largest magnitude is 1.  Samples more than
    ~700 e-folds below the maximum underflow to exactly 0.0, which is the
    correct float64 statement about them.
    """
    if not np.any(LOG != 0.0):
        return np.array(U, dtype=float), 0.0
    mag = np.where(np.abs(U) > 0, np.abs(U), 1e-300)
    logmag = np.log(mag) + LOG
    ref = float(np.max(logmag))
    vals = U * np.exp(LOG - ref)
    return vals, ref
