"""Medium-coefficient checks: derivation routes, the soliton profile, and the
probe potential with its linearization."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cpodeflect import (
    AtomParams,
    ConfigurationError,
    FarDetuningWarning,
    InvalidRegimeError,
    MediumCoefficients,
    ParameterError,
    couplings_from_alphas,
    derive_coefficients,
    linearized_potential,
    probe_potential,
    soliton_fd_residual,
    soliton_profile,
)

# the working point used throughout: slow inversion decay, red-detuned control
_ATOM = AtomParams(gamma1=0.01, gamma2=1.0, delta_c=-10.0, w_eq=-1.0)


def _unit_coeffs(**overrides) -> MediumCoefficients:
    """Coefficients tuned so q = 1 and l_c = 1 exactly."""
    kwargs = dict(k_c=2.0, k_p=2.0, alpha_c=0.505, alpha_p=1000.0)
    kwargs.update(overrides)
    return derive_coefficients(_ATOM, **kwargs)


def test_beta_hand_value():
    # gamma1 = gamma2 = 1, Delta = 10: beta = 2*1/(1*(1 + 100)) = 2/101
    params = AtomParams(gamma1=1.0, gamma2=1.0, delta_c=10.0)
    coeffs = derive_coefficients(params, k_c=2.0, k_p=2.0, alpha_c=-1.0, alpha_p=-1.0)
    assert abs(coeffs.beta - 2.0 / 101.0) < 1e-15


def test_unit_soliton_scale():
    coeffs = _unit_coeffs()
    assert abs(coeffs.beta - 200.0 / 101.0) < 1e-12
    assert abs(coeffs.q - 1.0) < 1e-12
    assert abs(coeffs.l_c - 1.0) < 1e-12


def test_zero_detuning_rejected():
    params = AtomParams(gamma1=0.01, gamma2=1.0, delta_c=0.0)
    with pytest.raises(InvalidRegimeError):
        derive_coefficients(params, k_c=2.0, k_p=2.0, alpha_c=1.0, alpha_p=1.0)


def test_moderate_detuning_warns():
    params = AtomParams(gamma1=0.01, gamma2=1.0, delta_c=-2.0)
    with pytest.warns(FarDetuningWarning):
        derive_coefficients(params, k_c=2.0, k_p=2.0, alpha_c=1.0, alpha_p=1.0)


def test_alpha_signs_must_oppose_detuning():
    # red detuning means both responses are positive; a negative alpha_c is
    # inconsistent with Delta < 0
    with pytest.raises(ParameterError):
        derive_coefficients(_ATOM, k_c=2.0, k_p=2.0, alpha_c=-0.5, alpha_p=1000.0)


def test_coupling_route_roundtrip():
    """alphas -> couplings -> alphas is the identity."""
    gc, gp = couplings_from_alphas(0.505, 1000.0, _ATOM, c=1.0, atom_line_density=1.0)
    assert gc > 0 and gp > 0
    coeffs = derive_coefficients(
        _ATOM, k_c=2.0, k_p=2.0, coupling_c=gc, coupling_p=gp, atom_line_density=1.0
    )
    assert abs(coeffs.alpha_c - 0.505) < 1e-12 * 0.505
    assert abs(coeffs.alpha_p - 1000.0) < 1e-12 * 1000.0
    assert coeffs.coupling_c == gc


def test_conflicting_explicit_alphas_rejected():
    gc, gp = couplings_from_alphas(0.505, 1000.0, _ATOM)
    with pytest.raises(ConfigurationError):
        derive_coefficients(
            _ATOM, k_c=2.0, k_p=2.0,
            coupling_c=gc, coupling_p=gp, atom_line_density=1.0,
            alpha_c=0.6, alpha_p=1000.0,
        )


def test_partial_coupling_inputs_rejected():
    with pytest.raises(ConfigurationError):
        derive_coefficients(_ATOM, k_c=2.0, k_p=2.0, coupling_c=1.0)


def test_q_and_width_self_consistency():
    rng = np.random.default_rng(3)
    for _ in range(50):
        params = AtomParams(
            gamma1=rng.uniform(0.01, 1.0),
            gamma2=1.0,
            delta_c=-rng.uniform(5.0, 20.0),
        )
        alpha_c = rng.uniform(0.1, 2.0)
        k_c = rng.uniform(0.5, 8.0)
        coeffs = derive_coefficients(
            params, k_c=k_c, k_p=2.0, alpha_c=alpha_c, alpha_p=rng.uniform(1.0, 1e3)
        )
        assert abs(coeffs.q - coeffs.alpha_c * coeffs.beta) <= 1e-12 * abs(coeffs.q)
        # the width absorbs 1/q, so l_c * alpha_c * beta recovers sqrt(2/k_c)
        assert abs(coeffs.l_c * coeffs.alpha_c * coeffs.beta - math.sqrt(2 / k_c)) \
            <= 1e-12 * math.sqrt(2 / k_c)


def test_soliton_profile_peak_and_width_points():
    coeffs = _unit_coeffs()
    peak = soliton_profile(np.array([0.0]), 0.0, coeffs)[0]
    assert abs(peak - coeffs.soliton_amplitude) < 1e-15
    sech1 = 1 / math.cosh(1.0)
    assert abs(sech1 - 0.648054) < 1e-6
    edge = soliton_profile(np.array([coeffs.l_c, -coeffs.l_c]), 0.3, coeffs)
    assert np.allclose(np.abs(edge), coeffs.soliton_amplitude * sech1, rtol=1e-12)


def test_soliton_profile_phase_advance():
    coeffs = _unit_coeffs()
    x = np.linspace(-2.0, 2.0, 11)
    z = 0.7
    ratio = soliton_profile(x, z, coeffs) / soliton_profile(x, 0.0, coeffs)
    expected = np.exp(1j * (coeffs.q**2 / 4 - coeffs.alpha_c) * z)
    assert np.max(np.abs(ratio - expected)) < 1e-12


def test_soliton_fd_residual_is_second_order():
    coeffs = _unit_coeffs()
    h = coeffs.l_c / 50
    ratio = soliton_fd_residual(coeffs, h) / soliton_fd_residual(coeffs, h / 2)
    assert 3.5 < ratio < 4.5


def test_probe_potential_flat_without_control():
    coeffs = _unit_coeffs()
    x = np.linspace(-4.0, 4.0, 33)
    v = probe_potential(x, coeffs, np.zeros_like(x, dtype=complex))
    assert np.all(v == coeffs.alpha_p)


def test_probe_potential_even_for_centered_soliton():
    coeffs = _unit_coeffs()
    # symmetric sampling makes the flip comparison exact
    x = np.linspace(-4.0, 4.0, 65)
    v = probe_potential(x, coeffs, soliton_profile(x, 0.0, coeffs))
    assert np.max(np.abs(v - v[::-1])) < 1e-12 * coeffs.alpha_p


def test_offset_identity_eta0_is_potential_at_a():
    coeffs = _unit_coeffs()
    for a in (-0.7, -0.2, 0.0, 0.2, 1.3):
        eta = linearized_potential(a, coeffs)
        v_a = probe_potential(
            np.array([a]), coeffs, soliton_profile(np.array([a]), 0.0, coeffs)
        )[0]
        assert eta.a == a
        assert abs(eta.eta0 - v_a) <= 1e-12 * abs(v_a)


def test_eta1_zero_on_axis_exactly():
    eta = linearized_potential(0.0, _unit_coeffs())
    assert eta.eta1 == 0.0


def test_eta1_odd_in_offset():
    coeffs = _unit_coeffs()
    for a in (0.1, 0.2, 0.5, 2.0):
        left = linearized_potential(-a, coeffs).eta1
        right = linearized_potential(a, coeffs).eta1
        assert left == -right


def test_eta1_sign_quadrants():
    """sign(eta1) = sign(a) * sign(-Delta) in all four quadrants."""
    for delta_c in (-10.0, 10.0):
        params = AtomParams(gamma1=0.01, gamma2=1.0, delta_c=delta_c)
        sign = -math.copysign(1.0, delta_c)
        coeffs = derive_coefficients(
            params, k_c=2.0, k_p=2.0, alpha_c=sign * 0.505, alpha_p=sign * 1000.0
        )
        for a in (-0.2, 0.2):
            eta1 = linearized_potential(a, coeffs).eta1
            assert math.copysign(1.0, eta1) == math.copysign(1.0, a) * sign


def test_eta1_vanishes_far_from_axis():
    coeffs = _unit_coeffs()
    near = abs(linearized_potential(0.2, coeffs).eta1)
    far = abs(linearized_potential(50.0 * coeffs.l_c, coeffs).eta1)
    assert far < 1e-30 * near


def test_eta1_matches_numerical_derivative():
    """Richardson-extrapolated 5-point derivative of the sampled potential."""
    coeffs = _unit_coeffs()

    def v_of(x: float) -> float:
        arr = np.array([x])
        return probe_potential(arr, coeffs, soliton_profile(arr, 0.0, coeffs))[0]

    def stencil(a: float, h: float) -> float:
        return (v_of(a - 2 * h) - 8 * v_of(a - h) + 8 * v_of(a + h) - v_of(a + 2 * h)) / (12 * h)

    for a in (-0.6, 0.2, 0.9):
        h = coeffs.l_c / 1000
        d1, d2 = stencil(a, h), stencil(a, h / 2)
        derivative = (16 * d2 - d1) / 15
        eta1 = linearized_potential(a, coeffs).eta1
        assert abs(eta1 - derivative) <= 1e-6 * abs(derivative)


def test_coefficient_validation():
    with pytest.raises(ParameterError):
        MediumCoefficients(
            alpha_c=1.0, alpha_p=1.0, beta=-0.1, q=1.0, l_c=1.0, k_c=2.0, k_p=2.0
        )
    with pytest.raises(ParameterError):
        MediumCoefficients(
            alpha_c=1.0, alpha_p=1.0, beta=0.1, q=1.0, l_c=-1.0, k_c=2.0, k_p=2.0
        )
    with pytest.raises(ParameterError):
        couplings_from_alphas(-0.505, 1000.0, _ATOM)
