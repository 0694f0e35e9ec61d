"""Stepper checks against solutions known in closed form.

The cosine and hyperbolic cases are textbook; the Airy case exercises a
coordinate-dependent wavenumber over ~110 radians of accumulated phase and
is compared against scipy.special.airy, which shares no code with the
stepper.
"""

import numpy as np
import pytest
import scipy.special as sp

from expulsive.errors import BlowupError, ResolutionError
from expulsive.integrate import integrate_second_order, reconstructed_profile


def test_cosine_hundred_periods():
    x_out = np.linspace(0.0, 200.0 * np.pi, 101)
    u, v, log = integrate_second_order(
        lambda x, uu, vv: -uu, 0.0, 1.0, 0.0, x_out,
        step_ceiling=lambda x: 0.5, wavenumber=lambda x: 1.0, rtol=1e-9)
    np.testing.assert_allclose(u, np.cos(x_out), atol=2e-6)
    np.testing.assert_allclose(v, -np.sin(x_out), atol=2e-6)
    assert np.all(log == 0.0)


def test_error_falls_with_rtol():
    x_out = np.linspace(0.0, 200.0 * np.pi, 41)
    errs = []
    for rtol in (1e-6, 1e-8, 1e-10):
        u, _, _ = integrate_second_order(
            lambda x, uu, vv: -uu, 0.0, 1.0, 0.0, x_out,
            step_ceiling=lambda x: 1.0, wavenumber=lambda x: 1.0, rtol=rtol)
        errs.append(np.max(np.abs(u - np.cos(x_out))))
    assert errs[0] > 10.0 * errs[1] > 100.0 * errs[2]


def test_airy_phase_accuracy():
    ai0, aip0, _, _ = sp.airy(0.0)
    x_out = np.linspace(0.0, 30.0, 61)
    u, v, _ = integrate_second_order(
        lambda x, uu, vv: -x * uu, 0.0, float(ai0), float(-aip0), x_out,
        step_ceiling=lambda x: 2.0 * np.pi / (16.0 * max(np.sqrt(abs(x)), 1e-3)),
        wavenumber=lambda x: max(np.sqrt(abs(x)), 1.0), rtol=1e-10)
    ref_u = sp.airy(-x_out)[0]
    ref_v = -sp.airy(-x_out)[1]
    np.testing.assert_allclose(u, ref_u, atol=1e-8)
    np.testing.assert_allclose(v, ref_v, atol=1e-7)


def test_renormalized_growth_tracks_cosh():
    x_out = np.linspace(0.0, 800.0, 9)
    u, v, log = integrate_second_order(
        lambda x, uu, vv: uu, 0.0, 1.0, 0.0, x_out,
        step_ceiling=lambda x: 10.0, wavenumber=lambda x: 1.0,
        rtol=1e-12, renormalize=True)
    ln_true = x_out[1:] - np.log(2.0) + np.log1p(np.exp(-2.0 * x_out[1:]))
    ln_got = np.log(np.abs(u[1:])) + log[1:]
    np.testing.assert_allclose(ln_got, ln_true, atol=1e-8)
    assert log[-1] > 500.0


def test_reconstructed_profile_normalizes():
    u = np.array([1.0, 0.5, 2.0])
    log = np.array([0.0, 10.0, 5.0])
    vals, ref = reconstructed_profile(u, log)
    assert np.max(np.abs(vals)) == pytest.approx(1.0)
    # largest true magnitude is 0.5 * e^10
    assert ref == pytest.approx(10.0 + np.log(0.5))
    plain, ref0 = reconstructed_profile(u, np.zeros(3))
    np.testing.assert_array_equal(plain, u)
    assert ref0 == 0.0


def test_amplitude_cap_raises_blowup():
    with pytest.raises(BlowupError) as info:
        integrate_second_order(
            lambda x, uu, vv: uu, 0.0, 1.0, 1.0, np.linspace(0.0, 50.0, 6),
            step_ceiling=lambda x: 1.0, wavenumber=lambda x: 1.0,
            amplitude_cap=1e6)
    assert 13.0 < info.value.coordinate < 14.5


def test_unrenormalized_overflow_is_diagnosed():
    with pytest.raises(BlowupError) as info:
        integrate_second_order(
            lambda x, uu, vv: uu, 0.0, 1.0, 1.0, np.linspace(0.0, 800.0, 5),
            step_ceiling=lambda x: 10.0, wavenumber=lambda x: 1.0)
    assert "renormal" in str(info.value)
    assert info.value.coordinate > 500.0


def test_step_budget_guard():
    with pytest.raises(ResolutionError):
        integrate_second_order(
            lambda x, uu, vv: -uu, 0.0, 1.0, 0.0, np.array([0.0, 1000.0]),
            step_ceiling=lambda x: 1e-4, wavenumber=lambda x: 1.0,
            max_steps=100)


def test_outputs_land_exactly_on_requested_points():
    x_out = np.array([0.0, 0.37, 1.11, 2.0])
    u, v, _ = integrate_second_order(
        lambda x, uu, vv: -uu, 0.0, 0.3, -0.2, x_out,
        step_ceiling=lambda x: 0.9, wavenumber=lambda x: 1.0, rtol=1e-11)
    assert u[0] == 0.3 and v[0] == -0.2
    ref = 0.3 * np.cos(x_out) - 0.2 * np.sin(x_out)
    np.testing.assert_allclose(u, ref, atol=1e-9)
