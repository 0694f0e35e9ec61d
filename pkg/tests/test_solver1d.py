"""Shooting solver checks.

The frozen phase targets come from the Bessel closed form of the linear
zero-energy problem: phi = sqrt(x) J_{-nu}(x^(gamma+1)/(gamma+1)) with
nu = 1/(2 gamma + 2) for even states (J_{+nu} for odd), whose large-x form
fixes chi0 = pi/4 -+ nu pi/2 and, with the unit origin normalization, the
amplitudes below.
"""

import math

import numpy as np
import pytest

from expulsive.analysis import fit_tail, norm_estimate
from expulsive.errors import BracketError
from expulsive.model import ProblemSpec
from expulsive.solver1d import (
    classify_structure,
    core_wave_check,
    find_x_max,
    solve_stationary_1d,
    solve_to_norm,
    xmax_scan,
)


def linear_spec(gamma, parity, energy=0.0):
    return ProblemSpec(dimension="1d", gamma=gamma, g=0, sigma=1,
                       energy=energy, parity=parity)


@pytest.fixture(scope="module")
def even_gamma2():
    spec = linear_spec(2.0, "even")
    return spec, solve_stationary_1d(spec, 16.0)


def test_zero_energy_phase_even_gamma2(even_gamma2):
    spec, wave = even_gamma2
    fit = fit_tail(wave, spec, order=3)
    assert fit.params.chi0 == pytest.approx(math.pi / 6.0, abs=1e-6)
    phi0 = math.gamma(5.0 / 6.0) * 6.0 ** (1.0 / 3.0) / math.sqrt(math.pi)
    assert fit.params.phi0 == pytest.approx(phi0, rel=1e-5)


def test_zero_energy_phase_odd_gamma2():
    spec = linear_spec(2.0, "odd")
    wave = solve_stationary_1d(spec, 16.0)
    fit = fit_tail(wave, spec, order=3)
    assert fit.params.chi0 == pytest.approx(math.pi / 3.0, abs=1e-6)
    phi0 = 6.0 ** (1.0 / 6.0) * math.gamma(7.0 / 6.0) * math.sqrt(6.0 / math.pi)
    assert fit.params.phi0 == pytest.approx(phi0, rel=1e-5)


@pytest.mark.parametrize("parity,chi_target,phi_target", [
    ("even", math.pi / 8.0, 2.0 * (math.gamma(0.75) / math.sqrt(2.0)) / math.sqrt(math.pi)),
    ("odd", 3.0 * math.pi / 8.0, 2.0 * math.sqrt(2.0) * math.gamma(1.25) / math.sqrt(math.pi)),
])
def test_zero_energy_phase_gamma1(parity, chi_target, phi_target):
    spec = linear_spec(1.0, parity)
    wave = solve_stationary_1d(spec, 24.0)
    fit = fit_tail(wave, spec)
    # the gamma = 1 tail model omits the O(x^-2) phase correction, which
    # biases the fit at the few-1e-4 level on this window
    assert fit.params.chi0 == pytest.approx(chi_target, abs=2e-3)
    assert fit.params.phi0 == pytest.approx(phi_target, rel=1e-3)


def test_linearity_of_linear_solves(even_gamma2):
    spec, wave = even_gamma2
    double = solve_stationary_1d(spec, 16.0, amplitude=2.0)
    np.testing.assert_allclose(double.values, 2.0 * wave.values, rtol=1e-9, atol=1e-12)
    assert double.amplitude_note == "explicit"


def test_odd_state_starts_at_zero():
    spec = linear_spec(2.0, "odd")
    wave = solve_stationary_1d(spec, 6.0)
    assert wave.values[0] == 0.0
    assert wave.amplitude_note == "slope-unit"


def test_envelope_stays_bounded(even_gamma2):
    spec, wave = even_gamma2
    x = wave.grid.points
    mask = x >= 2.0
    envelope = np.abs(wave.values[mask]) * x[mask]
    phi0 = math.gamma(5.0 / 6.0) * 6.0 ** (1.0 / 3.0) / math.sqrt(math.pi)
    assert np.max(envelope) < 1.1 * phi0


def test_deep_state_is_renormalized_and_peaks_at_the_turn():
    spec = linear_spec(2.0, "even", energy=-1e4)
    turn = (2e4) ** 0.25
    wave = solve_stationary_1d(spec, 1.6 * turn)
    assert wave.amplitude_note == "rescaled-max"
    assert np.max(np.abs(wave.values)) == pytest.approx(1.0)
    xm, _ = find_x_max(wave)
    assert xm == pytest.approx(turn, rel=0.02)


def test_moderate_depth_maximum_position():
    spec = linear_spec(2.0, "even", energy=-200.0)
    wave = solve_stationary_1d(spec, 8.0)
    xm, _ = find_x_max(wave)
    assert xm == pytest.approx((400.0) ** 0.25, rel=0.10)


def test_xmax_scan_slope_gamma2():
    scan = xmax_scan(2.0, -np.geomspace(200.0, 5000.0, 9))
    assert np.all(np.diff(scan.x_max) > 0)
    assert 0.22 < scan.loglog_slope < 0.28


def test_structure_zero_energy_inflexions_sit_on_nodes(even_gamma2):
    spec, _ = even_gamma2
    wave = solve_stationary_1d(spec, 10.0)
    report = classify_structure(wave, spec)
    assert len(report.zeros) == 106
    assert len(report.inflexions) == len(report.zeros)
    assert report.unmatched_inflexions.size == 0


def test_structure_negative_energy_extra_inflexion():
    spec = linear_spec(1.0, "even", energy=-0.5)
    wave = solve_stationary_1d(spec, 12.0)
    report = classify_structure(wave, spec)
    assert report.unmatched_inflexions.size == 1
    # the equation changes character where 2E + x^2 crosses zero
    assert report.unmatched_inflexions[0] == pytest.approx(1.0, abs=2.0 * report.cell)


def test_core_looks_like_a_free_wave_at_high_energy():
    spec = linear_spec(2.0, "even", energy=50.0)
    wave = solve_stationary_1d(spec, 10.0, rtol=1e-10)
    dev = core_wave_check(wave, spec)
    assert 0.01 < dev < 0.045


def test_solve_to_norm_attractive_branch():
    spec = ProblemSpec(dimension="1d", gamma=2.0, g=-1, sigma=1, energy=-1.0,
                       parity="even")
    wave, amp = solve_to_norm(spec, 2.86, 14.0)
    assert 0.44 < amp < 0.48
    assert norm_estimate(wave, spec) == pytest.approx(2.86, rel=1e-3)


def test_solve_to_norm_repulsive_odd_branch():
    spec = ProblemSpec(dimension="1d", gamma=2.0, g=1, sigma=1, energy=0.0,
                       parity="odd")
    wave, amp = solve_to_norm(spec, 1.23, 14.0)
    assert 0.45 < amp < 0.55
    fit = fit_tail(wave, spec, order=3)
    assert fit.params.chi0 == pytest.approx(5.0 * math.pi / 12.0, abs=0.02)


def test_solve_to_norm_rejects_linear_specs(even_gamma2):
    spec, _ = even_gamma2
    with pytest.raises(ValueError):
        solve_to_norm(spec, 1.0, 10.0)


def test_solve_to_norm_unreachable_target():
    spec = ProblemSpec(dimension="1d", gamma=2.0, g=1, sigma=1, energy=0.0,
                       parity="odd")
    with pytest.raises(BracketError):
        solve_to_norm(spec, 1e9, 8.0, points_per_wavelength=8, rtol=1e-7)
