"""Tail fitting, norms and norm-growth classification.

The tail model is linear once rewritten.  With p = phi0 cos chi0 and
q = phi0 sin chi0, the order-n tail

    phi(x) x^e = phi0 [ cos(Phi - chi0) + w(x) sin(Phi - chi0) ]

(e the envelope exponent, Phi the bare phase, w the known small correction
built from E and the order-3 coefficient) expands into

    p [cos Phi + w sin Phi] + q [sin Phi - w cos Phi],

so the fit is an exact linear least-squares problem in (p, q): no starting
guess, no iteration, no convergence question.  The eigenvalue enters w, but
it is already known from the problem spec; the fit recovers amplitude and
phase only.  At gamma = 1 the same trick applies with the logarithmic phase
Phi = x^2/2 + E ln(x / l), where the reference length l must be fixed by the
caller (chi0 and l are redundant: shifting ln l moves chi0 by E ln l).

Norm conventions: 1D states live on the whole line (twice the half-line
integral); 2D radial norms carry the angular factor 2 pi r dr.  For
gamma > 1 the integral converges like L^(1-gamma) and `norm_estimate` adds
the analytic remainder phi0^2 L^(1-gamma)/(gamma-1) (times pi in 2D, where
the envelope is r^(-(gamma+1)/2)); at gamma = 1 it diverges
logarithmically and `norm_curve` exists to measure that growth and to
discriminate it from saturation by comparing residuals of the two
two-parameter models a + b ln L and a - c L^(-(gamma-1)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import cumulative_simpson, simpson

from .closedform import AsymptoteParams, antiho_tail, asymptotic_tail, power_phase
from .errors import FitWindowError
from .model import ProblemSpec, WaveFunction

_TAU = 2.0 * math.pi


def _envelope_exponent(spec: ProblemSpec) -> float:
    if spec.dimension == "1d":
        return 0.5 * spec.gamma
    return 0.5 * (spec.gamma + 1.0)


def grid_norm(wave: WaveFunction, spec: ProblemSpec) -> float:
    """Norm of the sampled state out to the grid edge."""
    x = wave.grid.points
    phi = wave.values
    if spec.dimension == "1d":
        return 2.0 * float(simpson(phi * phi, x=x))
    return _TAU * float(simpson(phi * phi * x, x=x))


@dataclass(frozen=True)
class TailFit:
    params: AsymptoteParams
    order: int
    window: tuple[float, float]
    rms: float
    phase_span: float


def _bare_phase(spec: ProblemSpec, x: np.ndarray, log_scale: float) -> np.ndarray:
    if spec.gamma > 1.0:
        return power_phase(x, spec.gamma + 1.0, spec.gamma + 1.0)
    xl = np.asarray(x, dtype=np.longdouble)
    phase = xl * xl / 2 + np.longdouble(spec.energy) * np.log(xl / np.longdouble(log_scale))
    return np.asarray(np.mod(phase, np.longdouble(_TAU)), dtype=float)


def _phase_correction(spec: ProblemSpec, x: np.ndarray, order: int) -> np.ndarray:
    w = np.zeros_like(x)
    gamma = spec.gamma
    if gamma == 1.0:
        return w
    if order >= 2:
        w = w + spec.energy / (gamma - 1.0) * x ** (1.0 - gamma)
    if order >= 3:
        if spec.dimension == "1d":
            c3 = gamma * (gamma + 2.0) / (8.0 * (gamma + 1.0))
        else:
            s = spec.vorticity
            c3 = ((gamma + 1.0) ** 2 - 4.0 * s * s) / (2.0 * (2.0 * gamma + 1.0))
        w = w + c3 * x ** (-gamma - 1.0)
    return w


def fit_tail(wave: WaveFunction, spec: ProblemSpec,
             window: tuple[float, float] | None = None, order: int = 2,
             log_scale: float = 1.0) -> TailFit:
    """Fit (phi0, chi0) on a tail window; exact linear least squares.

    The window must span at least three oscillations (phase span 6 pi), or
    the amplitude/phase split is ill-conditioned and FitWindowError is
    raised.  At gamma = 1 `log_scale` fixes the reference length l of the
    logarithmic phase and the returned chi0 is relative to it; `order` is
    meaningful for gamma > 1 only.
    """
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    x_all = wave.grid.points
    stop = wave.grid.stop
    if window is None:
        window = (0.6 * stop, 0.95 * stop)
    lo, hi = window
    if not (0.0 < lo < hi <= stop + 1e-12):
        raise ValueError("window must satisfy 0 < lo < hi <= grid edge")
    mask = (x_all >= lo) & (x_all <= hi)
    x = x_all[mask]
    if x.size < 16:
        raise FitWindowError(f"only {x.size} samples in the fit window")
    if spec.gamma > 1.0:
        span = (hi ** (spec.gamma + 1.0) - lo ** (spec.gamma + 1.0)) / (spec.gamma + 1.0)
    else:
        span = 0.5 * (hi * hi - lo * lo) + spec.energy * math.log(hi / lo)
    if span < 3.0 * _TAU:
        raise FitWindowError(
            f"window spans {span / _TAU:.2f} oscillations; need at least 3")

    y = wave.values[mask] * x ** _envelope_exponent(spec)
    phase = _bare_phase(spec, x, log_scale)
    c, s = np.cos(phase), np.sin(phase)
    w = _phase_correction(spec, x, order)
    design = np.column_stack([c + w * s, s - w * c])
    (p, q), *_ = np.linalg.lstsq(design, y, rcond=None)
    phi0 = float(math.hypot(p, q))
    if phi0 == 0.0:
        raise FitWindowError("profile vanishes on the fit window")
    chi0 = float(math.atan2(q, p) % _TAU)
    rms = float(np.sqrt(np.mean((design @ np.array([p, q]) - y) ** 2)))
    params = AsymptoteParams(phi0=phi0, chi0=chi0,
                             l=log_scale if spec.gamma == 1.0 else None)
    return TailFit(params=params, order=order if spec.gamma > 1.0 else 1,
                   window=(float(lo), float(hi)), rms=rms, phase_span=float(span))


def asymptotic_deviation(wave: WaveFunction, spec: ProblemSpec,
                         params: AsymptoteParams, order: int = 1,
                         window: tuple[float, float] | None = None) -> float:
    """Envelope-normalized sup deviation between the state and a tail model."""
    x_all = wave.grid.points
    stop = wave.grid.stop
    if window is None:
        window = (0.6 * stop, 0.95 * stop)
    mask = (x_all >= window[0]) & (x_all <= window[1])
    x = x_all[mask]
    if x.size == 0:
        raise ValueError("empty deviation window")
    if spec.gamma > 1.0:
        model = asymptotic_tail(spec, params, x, order)
    else:
        model = antiho_tail(spec, params, x)
    dev = (wave.values[mask] - model) * x ** _envelope_exponent(spec)
    return float(np.max(np.abs(dev)) / params.phi0)


def norm_estimate(wave: WaveFunction, spec: ProblemSpec, tail_corrected: bool = True,
                  window: tuple[float, float] | None = None) -> float:
    """Grid norm plus the analytic remainder beyond the grid edge.

    The remainder uses phi0 from a tail fit and the half-envelope mean of
    cos^2; it scales like L^(1-gamma) and is what makes a modest grid agree
    with the infinite-line norm.  Refuses gamma = 1, where no finite
    remainder exists.
    """
    base = grid_norm(wave, spec)
    if not tail_corrected:
        return base
    if spec.gamma == 1.0:
        raise ValueError("gamma = 1 norms diverge; use norm_curve instead")
    fit = fit_tail(wave, spec, window=window)
    l_edge = wave.grid.stop
    phi0 = fit.params.phi0
    tail = phi0 * phi0 * l_edge ** (1.0 - spec.gamma) / (spec.gamma - 1.0)
    if spec.dimension != "1d":
        tail *= math.pi
    return base + tail


@dataclass(frozen=True)
class NormCurve:
    """Norm growth N(L) together with its competing-model classification."""

    extents: np.ndarray
    norms: np.ndarray
    kind: str
    log_slope: float
    saturating_exponent: float
    rss_log: float
    rss_sat: float
    limit: float | None


def norm_curve(wave: WaveFunction, spec: ProblemSpec, samples: int = 12,
               inner_fraction: float = 0.3, discrimination: float = 4.0) -> NormCurve:
    """Measure N(L) on nested windows of one long solve and classify it.

    Both candidate models are two-parameter and linear (a + b ln L against
    a - c L^(-(gamma-1)), with exponent 1 at gamma = 1), so the comparison
    is symmetric: whichever residual is `discrimination` times smaller
    wins; anything closer is reported "ambiguous" rather than guessed.
    """
    x = wave.grid.points
    phi = wave.values
    if spec.dimension == "1d":
        density = 2.0 * phi * phi
    else:
        density = _TAU * phi * phi * x
    cum = cumulative_simpson(density, x=x, initial=0.0)
    stop = wave.grid.stop
    extents = np.geomspace(max(inner_fraction * stop, x[1]), stop, samples)
    idx = np.searchsorted(x, extents)
    idx = np.clip(idx, 1, len(x) - 1)
    ls = x[idx]
    ns = cum[idx]

    one = np.ones_like(ls)
    design_log = np.column_stack([one, np.log(ls)])
    coef_log, *_ = np.linalg.lstsq(design_log, ns, rcond=None)
    rss_log = float(np.sum((design_log @ coef_log - ns) ** 2))

    ex = spec.gamma - 1.0 if spec.gamma > 1.0 else 1.0
    design_sat = np.column_stack([one, -(ls ** -ex)])
    coef_sat, *_ = np.linalg.lstsq(design_sat, ns, rcond=None)
    rss_sat = float(np.sum((design_sat @ coef_sat - ns) ** 2))

    slope = float(coef_log[1])
    if rss_sat * discrimination < rss_log:
        kind, limit = "convergent", float(coef_sat[0])
    elif rss_log * discrimination < rss_sat and slope > 0.0:
        kind, limit = "log-divergent", None
    else:
        kind, limit = "ambiguous", None
    return NormCurve(extents=ls, norms=ns, kind=kind, log_slope=slope,
                     saturating_exponent=ex, rss_log=rss_log, rss_sat=rss_sat,
                     limit=limit)
