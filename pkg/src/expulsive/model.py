"""Problem vocabulary for bound states in steep expulsive potentials.

Every computation in this package concerns the stationary or time-dependent
mean-field Schrodinger problem with the inverted power-law potential

    V(x) = -(1/2) |x|^(2*gamma),        gamma >= 1,

either on the 1D line (states of definite parity, solved on the half line) or
in 2D polar coordinates for a single angular harmonic exp(i*S*theta) (radial
profiles with integer vorticity S >= 0). The stationary field phi obeys

    1D:  E phi = -(1/2) phi'' - (1/2) |x|^(2 gamma) phi + g phi^(2 sigma + 1)
    2D:  E phi = -(1/2) (phi'' + phi'/r - S^2 phi / r^2)
                 - (1/2) r^(2 gamma) phi + g phi^3

with g in {-1, 0, +1} and sigma = 1 (cubic) or 2 (quintic).  Because the
potential is expulsive and unbounded below, these are not textbook bound
states: normalizable profiles exist for every real E once gamma > 1, with
oscillatory power-law tails whose local wavenumber grows like |x|^gamma.
That growth sets the resolution economics of everything downstream, so the
grid helpers here expose the oscillation bound

    h <= (2 pi / k_edge) / P,   k_edge = sqrt(2|E| + L^(2 gamma)),

where P is the number of samples per shortest local wavelength (default 16).
This is at least as strict as the plain 2 pi / (P L^gamma) bound.

`ProblemSpec` carries the physics parameters, `Grid` the uniform sampling,
and `WaveFunction` a sampled profile.  Solvers live elsewhere; this module
owns only the shared vocabulary, the potential/nonlinearity evaluators, and
flat key=value (de)serialization used by the command-line layer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

_DIMENSIONS = ("1d", "2d-radial")
_PARITIES = ("even", "odd")


@dataclass(frozen=True)
class ProblemSpec:
    """Full physical specification of one stationary problem.

    Attributes
    ----------
    dimension : str
        "1d" (half line, definite parity) or "2d-radial" (radial profile of
        one angular harmonic).
    gamma : float
        Potential steepness, >= 1.  gamma = 1 is the inverted harmonic
        oscillator; the tail-norm integral converges only for gamma > 1.
    g : int
        Nonlinearity sign, -1 (focusing), 0 (linear), +1 (defocusing).
    sigma : int
        Nonlinearity exponent: 1 = cubic, 2 = quintic.  2D is cubic only.
    energy : float
        Eigenvalue E.  Any real value is admissible; there is no spectrum
        constraint for these potentials.
    parity : str | None
        "even" or "odd"; required in 1D, forbidden in 2D.
    vorticity : int | None
        Integer S >= 0; required in 2D, forbidden in 1D.
    """

    dimension: str
    gamma: float
    g: int = 0
    sigma: int = 1
    energy: float = 0.0
    parity: str | None = None
    vorticity: int | None = None

    def __post_init__(self):
        if self.dimension not in _DIMENSIONS:
            raise ValueError(f"dimension must be one of {_DIMENSIONS}, got {self.dimension!r}")
        if not (self.gamma >= 1.0) or not math.isfinite(self.gamma):
            raise ValueError(f"gamma must be finite and >= 1, got {self.gamma}")
        if self.g not in (-1, 0, 1):
            raise ValueError(f"g must be -1, 0 or +1, got {self.g}")
        if self.sigma not in (1, 2):
            raise ValueError(f"sigma must be 1 (cubic) or 2 (quintic), got {self.sigma}")
        if not math.isfinite(self.energy):
            raise ValueError("energy must be finite")
        if self.dimension == "1d":
            if self.parity not in _PARITIES:
                raise ValueError("1d problems require parity 'even' or 'odd'")
            if self.vorticity is not None:
                raise ValueError("vorticity is a 2d-radial attribute")
        else:
            if self.parity is not None:
                raise ValueError("parity is a 1d attribute")
            if self.vorticity is None or int(self.vorticity) != self.vorticity or self.vorticity < 0:
                raise ValueError("2d-radial problems require integer vorticity >= 0")
            if self.sigma != 1:
                raise ValueError("2d-radial problems support the cubic term only (sigma = 1)")


def potential_value(spec: ProblemSpec, coordinate):
    """Expulsive potential -(1/2)|x|^(2 gamma) at `coordinate` (scalar or array)."""
    x = np.abs(np.asarray(coordinate, dtype=float))
    return -0.5 * x ** (2.0 * spec.gamma)


def nonlinear_term(spec: ProblemSpec, amplitude):
    """Mean-field term g * a^(2 sigma + 1) for a real amplitude a >= 0."""
    a = np.asarray(amplitude, dtype=float)
    if np.any(a < 0):
        raise ValueError("amplitude must be non-negative; pass |phi|")
    return spec.g * a ** (2 * spec.sigma + 1)


@dataclass(frozen=True)
class Grid:
    """Uniform sampling: points = start + spacing * arange(samples)."""

    start: float
    extent: float
    samples: int

    def __post_init__(self):
        if self.samples < 4:
            raise ValueError("a grid needs at least 4 samples")
        if not (self.extent > 0 and math.isfinite(self.extent)):
            raise ValueError("extent must be positive and finite")

    @property
    def spacing(self) -> float:
        return self.extent / (self.samples - 1)

    @property
    def points(self) -> np.ndarray:
        return self.start + self.spacing * np.arange(self.samples)

    @property
    def stop(self) -> float:
        return self.start + self.extent


def edge_wavenumber(gamma: float, extent: float, energy: float = 0.0) -> float:
    """Largest local wavenumber on [0, extent]: sqrt(2|E| + L^(2 gamma))."""
    return math.sqrt(2.0 * abs(energy) + extent ** (2.0 * gamma))


def oscillation_bound(gamma: float, extent: float, points_per_wavelength: float = 16.0,
                      energy: float = 0.0) -> float:
    """Largest admissible grid spacing for the fastest oscillation on the domain."""
    if points_per_wavelength < 4:
        raise ValueError("fewer than 4 points per wavelength cannot represent the tail")
    return (2.0 * math.pi / edge_wavenumber(gamma, extent, energy)) / points_per_wavelength


def make_grid(gamma: float, extent: float, points_per_wavelength: float = 16.0,
              energy: float = 0.0, start: float = 0.0) -> Grid:
    """Half-line grid [start, start+extent] satisfying the oscillation bound."""
    h = oscillation_bound(gamma, extent, points_per_wavelength, energy)
    samples = int(math.ceil(extent / h)) + 1
    return Grid(start=start, extent=extent, samples=samples)


def grid_resolves(grid: Grid, gamma: float, energy: float = 0.0,
                  points_per_wavelength: float = 4.0) -> bool:
    """True if the grid meets the oscillation bound at `points_per_wavelength`."""
    outer = max(abs(grid.start), abs(grid.stop))
    return grid.spacing <= oscillation_bound(gamma, outer, points_per_wavelength, energy) * (1 + 1e-12)


@dataclass(frozen=True)
class WaveFunction:
    """A sampled profile tied to a grid.

    `values` is real for stationary solves and complex for propagated fields.
    `amplitude_note` records the normalization convention in force:
    "origin-unit" (phi(0)=A with the configured A), "slope-unit" (odd states,
    phi'(0)=A), "frobenius-unit" (2D, leading coefficient a0), "rescaled-max"
    (deep-E linear solves renormalized so max|phi| = 1) or "explicit".
    """

    grid: Grid
    values: np.ndarray
    dimension: str = "1d"
    amplitude_note: str = "explicit"

    def __post_init__(self):
        vals = np.asarray(self.values)
        object.__setattr__(self, "values", vals)
        if vals.shape != (self.grid.samples,):
            raise ValueError("values must match the grid sample count")
        if not np.all(np.isfinite(vals)):
            raise ValueError("wavefunction values must be finite everywhere")
        if self.dimension not in _DIMENSIONS:
            raise ValueError(f"dimension must be one of {_DIMENSIONS}")


# --- flat key=value serialization (schema shared with the cli module) ------

def spec_to_config(spec: ProblemSpec) -> dict[str, str]:
    out = {
        "dimension": spec.dimension,
        "gamma": repr(float(spec.gamma)),
        "g": str(spec.g),
        "sigma": str(spec.sigma),
        "energy": repr(float(spec.energy)),
    }
    if spec.parity is not None:
        out["parity"] = spec.parity
    if spec.vorticity is not None:
        out["vorticity"] = str(spec.vorticity)
    return out


def spec_from_config(mapping: dict[str, str]) -> ProblemSpec:
    def _get(key, default=None):
        return mapping.get(key, default)

    dimension = _get("dimension", "1d")
    kwargs = dict(
        dimension=dimension,
        gamma=float(_get("gamma", "1")),
        g=int(_get("g", "0")),
        sigma=int(_get("sigma", "1")),
        energy=float(_get("energy", "0")),
    )
    if dimension == "1d":
        kwargs["parity"] = _get("parity", "even")
    else:
        kwargs["vorticity"] = int(_get("vorticity", "0"))
    return ProblemSpec(**kwargs)


def grid_to_config(grid: Grid) -> dict[str, str]:
    return {
        "grid.start": repr(float(grid.start)),
        "grid.extent": repr(float(grid.extent)),
        "grid.samples": str(grid.samples),
    }


def grid_from_config(mapping: dict[str, str]) -> Grid:
    return Grid(start=float(mapping.get("grid.start", "0.0")),
                extent=float(mapping["grid.extent"]),
                samples=int(mapping["grid.samples"]))
