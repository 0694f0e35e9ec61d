"""Closed-form reference objects: tail asymptotes and exact solutions.

Asymptotic tails
----------------
For gamma > 1 the stationary tail of any solution is, with
Psi(x) = x^(gamma+1)/(gamma+1) - chi0,

    1D:  phi ~ phi0 [ x^(-gamma/2) cos Psi
                      + (E/(gamma-1)) x^(-3 gamma/2 + 1) sin Psi             (order 2)
                      + (gamma(gamma+2)/(8(gamma+1))) x^(-3 gamma/2 - 1) sin Psi ]  (order 3)

    2D:  phi ~ phi0 [ r^-((gamma+1)/2) cos Psi
                      + (E/(gamma-1)) r^(-(3 gamma - 1)/2) sin Psi
                      + (((gamma+1)^2 - 4 S^2)/(2(2 gamma + 1))) r^(-3(gamma+1)/2) sin Psi ]

The order-2 term carries the eigenvalue; the order-3 term is E-independent.
At gamma = 1 the expansion degenerates (1/(gamma-1) pole) and the tail
instead picks up a logarithmic phase,

    1D:  phi ~ phi0 |x|^(-1/2) cos( x^2/2 + E ln(|x|/l) - chi0 )
    2D:  phi ~ phi0  r^(-1)    cos( r^2/2 + E ln(r/l)  - chi0 )

where l > 0 is a length scale that is redundant with chi0 whenever E != 0
(shifting chi0 is the same as rescaling l); at E = 0 only chi0 survives.
The half-line norm then grows like phi0^2 ln(L/l) (1D) or pi phi0^2 ln(L/l)
(2D), the signature log divergence of the gamma = 1 family.

Exact solutions
---------------
* Radial vortex at the special steepness gamma = 2S - 1:
      phi = (phi0 / r^S) sin( r^(2S) / (2S) ),   E = 0, g = 0,
  normalizable for S >= 2 with
      N = phi0^2 pi Gamma(1/S) cos( (pi/2)(1 - 1/S) ) / ( 2 S^(1-1/S) (S-1) ),
  and log-divergent for S = 1 (the gamma = 1 member).
* A zero-energy bound state inside a 3D continuum: U(r) = 1/r^2 - (9/2) r^4
  supports phi = sin(r^3)/r^2 with E = 0 under the 3D radial Laplacian.
* A linearly coupled harmonic/anti-harmonic pair: with coupling lambda and
  trap offset omega = (5 + S - lambda^2)/2,
      U(r) = U0 [ (lambda^2 - 1 - S) + r^2 ] r^S exp(-r^2/2),
      V(r) = -2 lambda U0 r^S exp(-r^2/2),
      E    = (lambda^2 + 1 + S)/2
  solves the first (confined) component identically.  Substituting the pair
  into the second component leaves the residual -kappa lambda U0 r^(S+2)
  exp(-r^2/2): it is exactly linear in the expulsive strength kappa and
  vanishes only for kappa = 0.  `coupled_residual` exists to measure that
  fact rather than assume it.
* Retaining the cubic term at gamma = 1, E = 0 and general vorticity S, the
  vortex profile above (with S = 1 shape) is an approximate solution whose
  amplitude obeys phi0^2 = -2 (S^2 - 1) / (3 g); the neglected piece is the
  third harmonic -(g/4) phi0^3 sin(3 r^2/2) / r^3.

Residual evaluators substitute a closed form into the relevant operator via
Richardson-refined centered differences with a per-point step tied to the
local wavenumber.  Oscillatory phases are reduced modulo 2 pi in 80-bit
arithmetic before the sine/cosine so that argument-magnitude error does not
dominate.  Residuals are reported relative to the local magnitude of the
operator terms (sum of absolute values): the terms themselves reach ~1e7 at
the outer edge of the steep-vortex checks, so an absolute criterion would
measure float64 rounding, not correctness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ResolutionError
from .model import Grid, ProblemSpec

_TAU = 2.0 * math.pi


class Divergent:
    """Marker for a norm that diverges (first-class value, not an error)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Divergent"


class NoSolution:
    """Marker for an amplitude condition with no real solution."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "NoSolution"


DIVERGENT = Divergent()
NO_SOLUTION = NoSolution()


def _mod_tau(phase_longdouble):
    """Reduce an 80-bit phase modulo 2 pi and hand back float64."""
    tau = np.longdouble("6.283185307179586476925286766559")
    return np.asarray(np.mod(phase_longdouble, tau), dtype=float)


def power_phase(x, exponent: float, divisor: float):
    """x**exponent / divisor, reduced mod 2 pi in extended precision."""
    xl = np.asarray(x, dtype=np.longdouble)
    return _mod_tau(xl ** np.longdouble(exponent) / np.longdouble(divisor))


@dataclass(frozen=True)
class AsymptoteParams:
    """Tail parameters: amplitude phi0 > 0, phase offset chi0, log scale l.

    `l` matters only for gamma = 1 with E != 0 and must be supplied there.
    """

    phi0: float
    chi0: float = 0.0
    l: float | None = None

    def __post_init__(self):
        if not (self.phi0 > 0) or not math.isfinite(self.phi0):
            raise ValueError("phi0 must be positive and finite")
        if not math.isfinite(self.chi0):
            raise ValueError("chi0 must be finite")
        if self.l is not None and not (self.l > 0):
            raise ValueError("l must be positive when given")


def asymptotic_tail(spec: ProblemSpec, params: AsymptoteParams, coordinate, order: int = 1):
    """Evaluate the gamma > 1 tail truncated at `order` in {1, 2, 3}."""
    gamma = spec.gamma
    if gamma <= 1.0:
        raise ValueError("asymptotic_tail requires gamma > 1; use antiho_tail at gamma = 1")
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    x = np.asarray(coordinate, dtype=float)
    if np.any(x <= 0):
        raise ValueError("tail coordinates must be positive")

    psi = _mod_tau(np.asarray(x, dtype=np.longdouble) ** np.longdouble(gamma + 1.0)
                   / np.longdouble(gamma + 1.0) - np.longdouble(params.chi0))
    c, s = np.cos(psi), np.sin(psi)
    e_over = spec.energy / (gamma - 1.0)

    if spec.dimension == "1d":
        out = x ** (-gamma / 2.0) * c
        if order >= 2:
            out = out + e_over * x ** (-1.5 * gamma + 1.0) * s
        if order >= 3:
            coef = gamma * (gamma + 2.0) / (8.0 * (gamma + 1.0))
            out = out + coef * x ** (-1.5 * gamma - 1.0) * s
    else:
        out = x ** (-(gamma + 1.0) / 2.0) * c
        if order >= 2:
            out = out + e_over * x ** (-(3.0 * gamma - 1.0) / 2.0) * s
        if order >= 3:
            s_v = spec.vorticity
            coef = ((gamma + 1.0) ** 2 - 4.0 * s_v * s_v) / (2.0 * (2.0 * gamma + 1.0))
            out = out + coef * x ** (-1.5 * (gamma + 1.0)) * s
    return params.phi0 * out


def antiho_tail(spec: ProblemSpec, params: AsymptoteParams, coordinate):
    """gamma = 1 tail with logarithmic phase; keeps an explicit chi0."""
    if spec.gamma != 1.0:
        raise ValueError("antiho_tail is the gamma = 1 form")
    x = np.asarray(coordinate, dtype=float)
    if np.any(x <= 0):
        raise ValueError("tail coordinates must be positive")
    l = params.l
    if spec.energy != 0.0 and l is None:
        raise ValueError("l is required when E != 0 at gamma = 1")
    if l is None:
        l = 1.0
    xl = np.asarray(x, dtype=np.longdouble)
    phase = xl * xl / 2 + np.longdouble(spec.energy) * np.log(xl / np.longdouble(l)) \
        - np.longdouble(params.chi0)
    c = np.cos(_mod_tau(phase))
    if spec.dimension == "1d":
        return params.phi0 * x ** -0.5 * c
    return params.phi0 * c / x


def exact_vortex(vorticity: int, phi0: float, r):
    """phi = (phi0 / r^S) sin(r^(2S)/(2S)); exact at gamma = 2S - 1, E = 0, g = 0."""
    s = int(vorticity)
    if s < 1:
        raise ValueError("the exact vortex needs vorticity >= 1")
    rr = np.asarray(r, dtype=float)
    if np.any(rr < 0):
        raise ValueError("r must be non-negative")
    out = np.zeros_like(rr, dtype=float)
    pos = rr > 0
    ph = power_phase(rr[pos] if rr.ndim else rr, 2 * s, 2 * s)
    if rr.ndim:
        out[pos] = phi0 * np.sin(ph) / rr[pos] ** s
        return out
    return float(phi0 * np.sin(ph) / rr ** s) if rr > 0 else 0.0


def exact_vortex_norm(vorticity: int, phi0: float = 1.0):
    """Closed-form 2D norm of the exact vortex; Divergent for S = 1."""
    s = int(vorticity)
    if s < 1:
        raise ValueError("vorticity must be >= 1")
    if s == 1:
        return DIVERGENT
    num = phi0 * phi0 * math.pi * math.gamma(1.0 / s) * math.cos(0.5 * math.pi * (1.0 - 1.0 / s))
    return num / (2.0 * s ** (1.0 - 1.0 / s) * (s - 1.0))


def vnw_state(r):
    """(potential, wavefunction) of the 3D zero-energy continuum bound state.

    U(r) = 1/r^2 - (9/2) r^4 and phi = sin(r^3)/r^2, valid for r > 0.
    """
    rr = np.asarray(r, dtype=float)
    if np.any(rr <= 0):
        raise ValueError("r must be positive (the potential is singular at 0)")
    potential = 1.0 / rr ** 2 - 4.5 * rr ** 4
    phi = np.sin(power_phase(rr, 3, 1)) / rr ** 2
    if np.ndim(r) == 0:
        return float(potential), float(phi)
    return potential, phi


# --- linearly coupled harmonic / anti-harmonic pair -------------------------

@dataclass(frozen=True)
class CoupledSystemSpec:
    """Parameters of the coupled pair: coupling lam, expulsive strength kappa,
    trap offset omega, common vorticity, and first-component scale u0."""

    lam: float
    kappa: float
    omega: float
    vorticity: int = 0
    u0: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.lam) or self.lam == 0.0:
            raise ValueError("lam must be finite and nonzero")
        if not math.isfinite(self.kappa) or self.kappa < 0:
            raise ValueError("kappa must be finite and >= 0")
        if int(self.vorticity) != self.vorticity or self.vorticity < 0:
            raise ValueError("vorticity must be a non-negative integer")

    @property
    def constraint_omega(self) -> float:
        """The omega at which the closed-form pair solves the first equation."""
        return 0.5 * (5.0 + self.vorticity - self.lam ** 2)

    @property
    def constraint_satisfied(self) -> bool:
        return abs(self.omega - self.constraint_omega) <= 1e-12 * max(1.0, abs(self.constraint_omega))

    @property
    def exact_energy(self) -> float:
        return 0.5 * (self.lam ** 2 + 1.0 + self.vorticity)


@dataclass(frozen=True)
class CoupledFields:
    grid: Grid
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        for name in ("u", "v"):
            arr = np.asarray(getattr(self, name), dtype=float)
            object.__setattr__(self, name, arr)
            if arr.shape != (self.grid.samples,):
                raise ValueError(f"{name} must match the grid")
            if not np.all(np.isfinite(arr)):
                raise ValueError(f"{name} must be finite")


def coupled_exact_fields(cspec: CoupledSystemSpec, grid: Grid):
    """Sample the closed-form pair; returns (CoupledFields, E_exact).

    Rejects a spec whose omega does not satisfy the constraint: off the
    constraint the pair solves neither equation and sampling it would only
    manufacture confusion.
    """
    if not cspec.constraint_satisfied:
        raise ValueError(
            f"omega = {cspec.omega} violates the closed-form constraint "
            f"omega = (5 + S - lam^2)/2 = {cspec.constraint_omega}")
    r = grid.points
    s = cspec.vorticity
    gauss = r ** s * np.exp(-0.5 * r * r)
    u = cspec.u0 * ((cspec.lam ** 2 - 1.0 - s) + r * r) * gauss
    v = -2.0 * cspec.lam * cspec.u0 * gauss
    return CoupledFields(grid=grid, u=u, v=v), cspec.exact_energy


@dataclass(frozen=True)
class CoupledResidual:
    """Pointwise residuals of both equations on the interior of the grid."""

    r: np.ndarray
    res_u: np.ndarray
    res_v: np.ndarray


def _grid_derivatives(f: np.ndarray, h: float):
    """Richardson-refined centered first/second differences on a uniform grid.

    Returns (d1, d2) on the interior slice [2:-2].
    """
    d1_h = (f[3:-1] - f[1:-3]) / (2.0 * h)
    d1_2h = (f[4:] - f[:-4]) / (4.0 * h)
    d1 = (4.0 * d1_h - d1_2h) / 3.0
    d2_h = (f[3:-1] - 2.0 * f[2:-2] + f[1:-3]) / (h * h)
    d2_2h = (f[4:] - 2.0 * f[2:-2] + f[:-4]) / (4.0 * h * h)
    d2 = (4.0 * d2_h - d2_2h) / 3.0
    return d1, d2


def coupled_residual(cspec: CoupledSystemSpec, fields: CoupledFields,
                     energy: float | None = None, noise_tol: float = 1e-9) -> CoupledResidual:
    """Absolute residuals of both coupled equations for the given fields.

    Second differences are taken from the samples, so the grid must be fine
    enough that their roundoff floor ~6 eps max|f| / h^2 stays below
    `noise_tol`.  `energy` defaults to the closed-form eigenvalue.
    """
    h = fields.grid.spacing
    floor = 6.0 * np.finfo(float).eps * max(np.max(np.abs(fields.u)), np.max(np.abs(fields.v))) / h ** 2
    if floor > noise_tol:
        raise ResolutionError(
            f"grid too coarse: second-difference noise floor {floor:.2e} exceeds {noise_tol:.2e}")
    e = cspec.exact_energy if energy is None else float(energy)
    r = fields.grid.points[2:-2]
    if np.any(r <= 0):
        raise ValueError("residual evaluation needs r > 0 on the interior")
    s2 = float(cspec.vorticity) ** 2

    du1, du2 = _grid_derivatives(fields.u, h)
    dv1, dv2 = _grid_derivatives(fields.v, h)
    u = fields.u[2:-2]
    v = fields.v[2:-2]

    lap_u = du2 + du1 / r - s2 * u / r ** 2
    lap_v = dv2 + dv1 / r - s2 * v / r ** 2
    res_u = (e + cspec.omega) * u + 0.5 * lap_u - 0.5 * r ** 2 * u + cspec.lam * v
    res_v = e * v + 0.5 * lap_v + 0.5 * cspec.kappa * r ** 2 * v + cspec.lam * u
    return CoupledResidual(r=r, res_u=res_u, res_v=res_v)


def nonlinear_vortex_amplitude(vorticity: int, g: int):
    """phi0^2 = -2 (S^2 - 1) / (3 g) when positive, else NoSolution."""
    if g not in (-1, 1):
        raise ValueError("the amplitude condition needs g = -1 or +1")
    s = int(vorticity)
    if s < 0:
        raise ValueError("vorticity must be >= 0")
    val = -2.0 * (s * s - 1.0) / (3.0 * g)
    if val <= 0.0:
        return NO_SOLUTION
    return val


# --- callable-based residuals of the single-field equations -----------------

def _point_derivatives(f: Callable, x: np.ndarray, h: np.ndarray):
    """Richardson-refined derivatives of a callable near points x.

    The step is rounded down to a power of two and each point is snapped to
    the nearest multiple of h/2, so that every stencil offset is exact in
    float64.  Without the snap, fl(x +- h) - x differs from h by up to
    eps*x, and the induced f' * delta / h^2 term swamps residuals once the
    local wavenumber passes ~1e4.  Returns (x_snapped, f0, d1, d2).
    """
    h = np.exp2(np.floor(np.log2(h)))
    q = 0.5 * h
    xs = np.round(x / q) * q
    fp2 = f(xs + h)
    fm2 = f(xs - h)
    fp1 = f(xs + q)
    fm1 = f(xs - q)
    f0 = f(xs)
    d1 = (4.0 * (fp1 - fm1) / h - (fp2 - fm2) / (2.0 * h)) / 3.0
    d2_h = (fp2 - 2.0 * f0 + fm2) / (h * h)
    d2_h2 = (fp1 - 2.0 * f0 + fm1) / (0.25 * h * h)
    d2 = (4.0 * d2_h2 - d2_h) / 3.0
    return xs, f0, d1, d2


def _fd_steps(x: np.ndarray, k_local: np.ndarray, frac: float = 0.012):
    return np.minimum(frac / np.maximum(k_local, 1.0), x / 8.0)


def equation_residual(f: Callable, coordinate, spec: ProblemSpec, relative: bool = True):
    """Residual of the stationary equation for a callable profile.

    Computes (H - E) phi at the given points by finite differences, where H
    includes the expulsive potential, the centrifugal term (2D) and the
    mean-field term.  With relative=True the residual is divided at each
    point by the sum of the absolute term magnitudes plus k_loc |phi'| / 2.
    The derivative term keeps the denominator at about k_loc^2 times the
    oscillation envelope even at nodes of the profile, where every plain
    term vanishes and the ratio would otherwise be decided by how close a
    sample happens to land to the node.  Evaluation points are snapped to
    the stencil lattice (a shift of at most a quarter step, i.e. well under
    0.01 of the local wavelength).
    """
    x = np.atleast_1d(np.asarray(coordinate, dtype=float))
    if np.any(x <= 0):
        raise ValueError("residual points must be positive")
    gamma = spec.gamma
    if spec.dimension == "2d-radial":
        s2 = float(spec.vorticity) ** 2
        k_loc = np.sqrt(2.0 * abs(spec.energy) + x ** (2 * gamma) + s2 / x ** 2)
    else:
        s2 = 0.0
        k_loc = np.sqrt(2.0 * abs(spec.energy) + x ** (2 * gamma))
    h = _fd_steps(x, k_loc)
    x, f0, d1, d2 = _point_derivatives(f, x, h)

    kinetic = -0.5 * d2
    terms = [kinetic, -0.5 * x ** (2 * gamma) * f0, -spec.energy * f0]
    if spec.dimension == "2d-radial":
        terms.append(-0.5 * d1 / x)
        terms.append(0.5 * s2 * f0 / x ** 2)
    if spec.g != 0:
        terms.append(spec.g * f0 ** (2 * spec.sigma + 1))
    res = sum(terms)
    if not relative:
        return res if np.ndim(coordinate) else float(res[0])
    scale = sum(np.abs(t) for t in terms) + 0.5 * k_loc * np.abs(d1) + 1e-30
    out = res / scale
    return out if np.ndim(coordinate) else float(out[0])


def vnw_residual(coordinate, relative: bool = True):
    """Residual of the 3D radial zero-energy equation for the vnw pair."""
    x = np.atleast_1d(np.asarray(coordinate, dtype=float))
    if np.any(x <= 0):
        raise ValueError("residual points must be positive")
    k_loc = 3.0 * x ** 2 + 1.0 / x
    h = _fd_steps(x, k_loc)

    def phi(r):
        return vnw_state(r)[1]

    x, f0, d1, d2 = _point_derivatives(phi, x, h)
    potential = 1.0 / x ** 2 - 4.5 * x ** 4
    terms = [-0.5 * d2, -d1 / x, potential * f0]
    res = sum(terms)
    if not relative:
        return res if np.ndim(coordinate) else float(res[0])
    scale = sum(np.abs(t) for t in terms) + 0.5 * k_loc * np.abs(d1) + 1e-30
    out = res / scale
    return out if np.ndim(coordinate) else float(out[0])
