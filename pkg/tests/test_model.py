import numpy as np
import pytest

from expulsive.model import (
    Grid,
    ProblemSpec,
    WaveFunction,
    edge_wavenumber,
    grid_from_config,
    grid_resolves,
    grid_to_config,
    make_grid,
    nonlinear_term,
    oscillation_bound,
    potential_value,
    spec_from_config,
    spec_to_config,
)


def test_spec_1d_requires_parity():
    with pytest.raises(ValueError):
        ProblemSpec(dimension="1d", gamma=2.0, g=0, sigma=1, energy=0.0)


def test_spec_2d_requires_vorticity():
    with pytest.raises(ValueError):
        ProblemSpec(dimension="2d-radial", gamma=2.0, g=0, sigma=1, energy=0.0)


def test_spec_2d_rejects_quintic():
    with pytest.raises(ValueError):
        ProblemSpec(dimension="2d-radial", gamma=1.0, g=1, sigma=2, energy=0.0,
                    vorticity=1)


@pytest.mark.parametrize("bad", [0.5, 0.99, -1.0])
def test_spec_rejects_shallow_gamma(bad):
    with pytest.raises(ValueError):
        ProblemSpec(dimension="1d", gamma=bad, g=0, sigma=1, energy=0.0, parity="even")


def test_spec_rejects_odd_couplings():
    with pytest.raises(ValueError):
        ProblemSpec(dimension="1d", gamma=1.0, g=2, sigma=1, energy=0.0, parity="even")
    with pytest.raises(ValueError):
        ProblemSpec(dimension="1d", gamma=1.0, g=1, sigma=3, energy=0.0, parity="even")


def test_potential_is_expulsive_and_even():
    spec = ProblemSpec(dimension="1d", gamma=2.0, g=0, sigma=1, energy=0.0, parity="even")
    assert potential_value(spec, 2.0) == pytest.approx(-8.0)
    assert potential_value(spec, -2.0) == pytest.approx(-8.0)
    x = np.linspace(0.0, 3.0, 20)
    v = potential_value(spec, x)
    assert np.all(np.diff(v) <= 0)


def test_nonlinear_term_power_and_sign():
    cubic = ProblemSpec(dimension="1d", gamma=1.0, g=-1, sigma=1, energy=0.0, parity="even")
    quintic = ProblemSpec(dimension="1d", gamma=1.0, g=1, sigma=2, energy=0.0, parity="odd")
    assert nonlinear_term(cubic, 2.0) == pytest.approx(-8.0)
    assert nonlinear_term(quintic, 2.0) == pytest.approx(32.0)
    with pytest.raises(ValueError):
        nonlinear_term(cubic, -1.0)


def test_grid_geometry():
    grid = Grid(start=0.0, extent=10.0, samples=101)
    assert grid.spacing == pytest.approx(0.1)
    assert grid.stop == pytest.approx(10.0)
    pts = grid.points
    assert pts.shape == (101,)
    assert pts[0] == 0.0
    assert pts[-1] == pytest.approx(10.0)
    with pytest.raises(ValueError):
        Grid(start=0.0, extent=1.0, samples=3)


def test_oscillation_bound_tracks_edge_wavenumber():
    k = edge_wavenumber(gamma=2.0, extent=10.0, energy=0.0)
    assert k == pytest.approx(100.0)
    h = oscillation_bound(gamma=2.0, extent=10.0, points_per_wavelength=16, energy=0.0)
    assert h == pytest.approx(2.0 * np.pi / 1600.0)
    with pytest.raises(ValueError):
        oscillation_bound(gamma=2.0, extent=10.0, points_per_wavelength=2)


def test_make_grid_resolves_itself():
    grid = make_grid(gamma=2.0, extent=8.0, points_per_wavelength=16)
    assert grid_resolves(grid, gamma=2.0, points_per_wavelength=16)
    assert not grid_resolves(grid, gamma=2.0, points_per_wavelength=64)
    deep = make_grid(gamma=2.0, extent=8.0, points_per_wavelength=16, energy=-200.0)
    assert deep.samples > grid.samples


def test_wavefunction_checks_shape_and_finiteness():
    grid = Grid(start=0.0, extent=1.0, samples=5)
    WaveFunction(grid=grid, values=np.zeros(5), dimension="1d", amplitude_note="origin-unit")
    with pytest.raises(ValueError):
        WaveFunction(grid=grid, values=np.zeros(4), dimension="1d", amplitude_note="origin-unit")
    bad = np.zeros(5)
    bad[2] = np.nan
    with pytest.raises(ValueError):
        WaveFunction(grid=grid, values=bad, dimension="1d", amplitude_note="origin-unit")


def test_spec_config_roundtrip():
    spec = ProblemSpec(dimension="2d-radial", gamma=3.0, g=-1, sigma=1, energy=-0.25,
                       vorticity=2)
    cfg = spec_to_config(spec)
    assert cfg["dimension"] == "2d-radial"
    assert spec_from_config(cfg) == spec
    spec1 = ProblemSpec(dimension="1d", gamma=1.0, g=1, sigma=2, energy=0.5, parity="odd")
    assert spec_from_config(spec_to_config(spec1)) == spec1


def test_grid_config_roundtrip():
    grid = Grid(start=0.5, extent=7.5, samples=321)
    assert grid_from_config(grid_to_config(grid)) == grid
