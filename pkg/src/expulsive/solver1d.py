"""Stationary states on the half-line by shooting from the origin.

The equation integrated is

    phi'' = -2 E phi - x^(2 gamma) phi + 2 g phi^(2 sigma + 1)

with parity initial data at x = 0: even states start from phi(0) = a,
phi'(0) = 0 and odd states from phi(0) = 0, phi'(0) = a.  Every solution of
the expulsive problem is oscillatory and bounded at large x, so there is no
eigenvalue condition to hunt for: any E gives a state, and the interesting
quantities are the tail parameters and the interior structure.

Linear runs (g = 0) integrate with in-flight renormalization, which lets
deeply negative energies through: at E = -1e4, gamma = 2 the profile climbs
~1475 e-folds between the origin and the turning point, far past float64.
The returned values are then rescaled so the largest magnitude is 1 and the
wavefunction is tagged "rescaled-max"; zero positions, the maximum location
and the tail phase are unaffected by the rescale, and for a linear equation
the amplitude carries no information anyway.  Nonlinear runs keep the true
amplitude (it sets the physics) and raise BlowupError if it runs away.

Structure classification evaluates phi'' through the equation itself rather
than by differencing, so an inflexion is wherever (2E + x^(2 gamma)) phi =
2 g phi^(2 sigma + 1) changes sign; for g = 0 and E < 0 that adds a sign
change at x = (-2E)^(1/(2 gamma)) which sits at no node, the grid signature
of a state pushed below the potential hilltop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import analysis
from .errors import BlowupError, BracketError, NonMonotoneScanError
from .integrate import integrate_second_order, reconstructed_profile
from .model import ProblemSpec, WaveFunction, make_grid


def _rhs(spec: ProblemSpec):
    two_e = 2.0 * spec.energy
    two_gamma = 2.0 * spec.gamma
    g = float(spec.g)
    power = 2 * spec.sigma + 1
    if g == 0.0:
        def accel(x, u, v):
            return -(two_e + x ** two_gamma) * u
    else:
        def accel(x, u, v):
            return -(two_e + x ** two_gamma) * u + 2.0 * g * u ** power
    return accel


def _local_wavenumber(spec: ProblemSpec):
    two_e = 2.0 * spec.energy
    two_gamma = 2.0 * spec.gamma

    def wavenumber(x):
        return math.sqrt(abs(two_e + x ** two_gamma)) + 1.0
    return wavenumber


def solve_stationary_1d(spec: ProblemSpec, extent: float, amplitude: float = 1.0,
                        points_per_wavelength: int = 16, rtol: float = 1e-9,
                        amplitude_cap: float = 1e6) -> WaveFunction:
    """Integrate one parity state out to `extent` and sample it on a grid
    fine enough to draw every oscillation."""
    if spec.dimension != "1d":
        raise ValueError("solve_stationary_1d handles dimension='1d' specs")
    if not (amplitude > 0) or not math.isfinite(amplitude):
        raise ValueError("amplitude must be positive and finite")
    grid = make_grid(spec.gamma, extent, points_per_wavelength, energy=spec.energy)
    if spec.parity == "even":
        u0, v0 = amplitude, 0.0
    else:
        u0, v0 = 0.0, amplitude
    wavenumber = _local_wavenumber(spec)
    period = 2.0 * math.pi / points_per_wavelength

    def ceiling(x):
        return period / wavenumber(x)

    linear = spec.g == 0
    values, slopes, logs = integrate_second_order(
        _rhs(spec), 0.0, u0, v0, grid.points,
        step_ceiling=ceiling, wavenumber=wavenumber, rtol=rtol,
        renormalize=linear, amplitude_cap=None if linear else amplitude_cap)
    if np.any(logs != 0.0):
        values, _ = reconstructed_profile(values, logs)
        note = "rescaled-max"
    else:
        note = "origin-unit" if spec.parity == "even" else "slope-unit"
        if amplitude != 1.0:
            note = "explicit"
    return WaveFunction(grid=grid, values=values, dimension="1d", amplitude_note=note)


@dataclass(frozen=True)
class StructureReport:
    """Node and inflexion positions, and which inflexions match no node."""

    zeros: np.ndarray
    inflexions: np.ndarray
    unmatched_inflexions: np.ndarray
    cell: float


def _crossing_positions(x: np.ndarray, y: np.ndarray, keep_touch: bool) -> np.ndarray:
    """Zero crossings of sampled data, linearly interpolated.

    A sample that is exactly zero counts as a crossing only if the sign
    flips around it, unless keep_touch is set (a node is a node even where
    the curve only touches; an inflexion is not).
    """
    out = []
    n = len(y)
    for i in range(n):
        if y[i] == 0.0:
            left = y[i - 1] if i > 0 else 0.0
            right = y[i + 1] if i < n - 1 else 0.0
            if keep_touch or left * right < 0.0:
                out.append(x[i])
    for i in range(n - 1):
        if y[i] * y[i + 1] < 0.0:
            out.append(x[i] - y[i] * (x[i + 1] - x[i]) / (y[i + 1] - y[i]))
    return np.sort(np.asarray(out))


def classify_structure(wave: WaveFunction, spec: ProblemSpec) -> StructureReport:
    """Locate nodes and inflexions of a sampled state.

    phi'' comes from the equation, not from differencing, so the inflexion
    positions inherit the sample accuracy of phi itself.
    """
    x = wave.grid.points
    phi = wave.values
    curvature = -(2.0 * spec.energy + x ** (2.0 * spec.gamma)) * phi
    if spec.g != 0:
        curvature = curvature + 2.0 * spec.g * phi ** (2 * spec.sigma + 1)
    zeros = _crossing_positions(x, phi, keep_touch=True)
    inflexions = _crossing_positions(x, curvature, keep_touch=False)
    cell = wave.grid.spacing
    unmatched = []
    for xi in inflexions:
        if len(zeros) == 0 or np.min(np.abs(zeros - xi)) > cell:
            unmatched.append(xi)
    return StructureReport(zeros=zeros, inflexions=inflexions,
                           unmatched_inflexions=np.asarray(unmatched), cell=cell)


def core_wave_check(wave: WaveFunction, spec: ProblemSpec) -> float:
    """Deviation of the core from the free wave cos(sqrt(2E) x).

    For E well above the hilltop the potential is negligible where
    |x| < E^(1/(2 gamma)) / 2, and an even state should look like a plane
    wave there.  Returns max |phi - phi(0) cos(k x)| / |phi(0)| over that
    window.
    """
    if spec.energy <= 0:
        raise ValueError("the free-wave core comparison needs E > 0")
    if spec.parity != "even":
        raise ValueError("comparison is defined for even states")
    k = math.sqrt(2.0 * spec.energy)
    half = 0.5 * spec.energy ** (1.0 / (2.0 * spec.gamma))
    x = wave.grid.points
    mask = x <= half
    if not np.any(mask):
        raise ValueError("grid does not reach the comparison window")
    phi0 = wave.values[0]
    ref = phi0 * np.cos(k * x[mask])
    return float(np.max(np.abs(wave.values[mask] - ref)) / abs(phi0))


def find_x_max(wave: WaveFunction) -> tuple[float, float]:
    """Position and value of the largest |phi|, parabola-refined on phi^2."""
    y = wave.values ** 2
    i = int(np.argmax(y))
    x = wave.grid.points
    if i == 0 or i == len(y) - 1:
        return float(x[i]), float(abs(wave.values[i]))
    h = wave.grid.spacing
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    shift = 0.0 if denom == 0.0 else 0.5 * h * (y[i - 1] - y[i + 1]) / denom
    shift = float(np.clip(shift, -h, h))
    return float(x[i] + shift), float(abs(wave.values[i]))


@dataclass(frozen=True)
class XmaxScan:
    energies: np.ndarray
    x_max: np.ndarray

    @property
    def loglog_slope(self) -> float:
        """Slope of ln x_max against ln |E|."""
        return float(np.polyfit(np.log(-self.energies), np.log(self.x_max), 1)[0])


def xmax_scan(gamma: float, energies, parity: str = "even",
              points_per_wavelength: int = 16, rtol: float = 1e-9) -> XmaxScan:
    """Track the global maximum of deep linear states across energies.

    Energies must be negative; each state is integrated to 1.6 times its
    classical turning point, which brackets the maximum (the envelope decays
    beyond the turn).
    """
    energies = np.asarray(energies, dtype=float)
    if np.any(energies >= 0):
        raise ValueError("the scan is for states below the hilltop: E < 0")
    xm = np.empty_like(energies)
    for j, e in enumerate(energies):
        spec = ProblemSpec(dimension="1d", gamma=gamma, g=0, sigma=1,
                           energy=float(e), parity=parity)
        turn = (-2.0 * e) ** (1.0 / (2.0 * gamma))
        extent = max(1.6 * turn, 2.0)
        wave = solve_stationary_1d(spec, extent,
                                   points_per_wavelength=points_per_wavelength,
                                   rtol=rtol)
        xm[j], _ = find_x_max(wave)
    return XmaxScan(energies=energies, x_max=xm)


def solve_to_norm(spec: ProblemSpec, target: float, extent: float,
                  amplitude_bracket: tuple[float, float] = (0.05, 5.0),
                  points_per_wavelength: int = 16, rtol: float = 1e-9,
                  norm_rtol: float = 1e-4, tail_corrected: bool = True,
                  max_expand: int = 6) -> tuple[WaveFunction, float]:
    """Tune the origin amplitude of a nonlinear state until its norm hits
    `target`; returns (state, amplitude).

    An amplitude whose profile runs away (possible on the g = +1 branch once
    the self-interaction outruns the potential) counts as norm infinity, so
    blowup simply caps the bracket from above.  The bracket is widened
    geometrically while the norm stays on one side of the target; if the
    finite norms seen during widening are not increasing with amplitude the
    collected table is raised inside NonMonotoneScanError rather than
    silently bisecting a fold.
    """
    if spec.g == 0:
        raise ValueError("amplitude tuning is for nonlinear states; linear "
                         "norms scale freely")
    if not (target > 0):
        raise ValueError("target norm must be positive")

    def norm_of(a: float) -> float:
        try:
            wave = solve_stationary_1d(spec, extent, amplitude=a,
                                       points_per_wavelength=points_per_wavelength,
                                       rtol=rtol)
        except BlowupError:
            return math.inf
        return analysis.norm_estimate(wave, spec, tail_corrected=tail_corrected)

    lo, hi = amplitude_bracket
    n_lo, n_hi = norm_of(lo), norm_of(hi)
    table = [(lo, n_lo), (hi, n_hi)]
    for _ in range(max_expand):
        if n_lo <= target <= n_hi:
            break
        if n_hi < target:
            lo, n_lo = hi, n_hi
            hi *= 3.0
            n_hi = norm_of(hi)
            table.append((hi, n_hi))
        else:
            hi, n_hi = lo, n_lo
            lo /= 3.0
            n_lo = norm_of(lo)
            table.append((lo, n_lo))
    else:
        raise BracketError(sorted(table), "could not bracket the target norm")
    finite = sorted((a, n) for a, n in table if math.isfinite(n))
    if any(b[1] <= a[1] for a, b in zip(finite, finite[1:])):
        raise NonMonotoneScanError(finite, "norm is not increasing with "
                                           "amplitude over the scanned bracket")
    best = None
    for _ in range(80):
        mid = math.sqrt(lo * hi)
        n_mid = norm_of(mid)
        if math.isfinite(n_mid) and abs(n_mid - target) <= norm_rtol * target:
            best = mid
            break
        if n_mid > target:
            hi = mid
        else:
            lo = mid
        if hi / lo < 1.0 + 1e-13:
            # interval pinched without meeting tolerance; accept only if
            # the norm is genuinely close (it may sit at a blowup edge
            # where the norm jumps past the target discontinuously)
            n_lo = norm_of(lo)
            if math.isfinite(n_lo) and abs(n_lo - target) <= 0.01 * target:
                best = lo
            break
    if best is None:
        raise BracketError([(lo, norm_of(lo)), (hi, None)],
                           "no amplitude reaches the target norm; the norm "
                           "jumps past it at the runaway edge")
    wave = solve_stationary_1d(spec, extent, amplitude=float(best),
                               points_per_wavelength=points_per_wavelength,
                               rtol=rtol)
    return wave, float(best)
