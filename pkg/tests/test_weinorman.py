"""Factorized-propagator checks: closed-form exponents, the coefficient ODEs,
exact Gaussian evolution, and the constant-force endpoint."""

from __future__ import annotations

import math

import numpy as np
import pytest

from cpodeflect import (
    AtomParams,
    ComplexField1D,
    ConfigurationError,
    GaussianPacket,
    InvalidEvolutionError,
    TransverseGrid,
    beam_diagnostics,
    derive_coefficients,
    evolve_gaussian_analytic,
    linearized_potential,
    propagate_probe,
    trajectory_endpoint,
    wn_closed_coefficients,
    wn_integrate_odes,
)


# ------------------------------------------------------- closed coefficients


def test_identity_at_time_zero():
    coeffs = wn_closed_coefficients(0.0, 1.0, 0.7, 0.3)
    assert (coeffs.g1, coeffs.g2, coeffs.g3, coeffs.g4) == (0, 0, 0, 0)


def test_no_force_hand_values():
    eta0 = 0.7
    coeffs = wn_closed_coefficients(2.0, 1.0, eta0, 0.0)
    assert coeffs.g1 == -1j
    assert coeffs.g2 == 0
    assert coeffs.g3 == 0
    assert coeffs.g4 == -2j * eta0


def test_force_parity():
    plus = wn_closed_coefficients(1.3, 2.0, 0.7, 0.4)
    minus = wn_closed_coefficients(1.3, 2.0, 0.7, -0.4)
    assert minus.g1 == plus.g1
    assert minus.g2 == -plus.g2
    assert minus.g3 == -plus.g3
    assert minus.g4 == plus.g4


def test_mass_must_be_positive():
    with pytest.raises(ConfigurationError):
        wn_closed_coefficients(1.0, 0.0, 0.0, 0.0)
    with pytest.raises(ConfigurationError):
        wn_closed_coefficients(1.0, -2.0, 0.0, 0.0)


def test_exponents_must_be_imaginary():
    from cpodeflect.weinorman import WeiNormanCoeffs

    with pytest.raises(InvalidEvolutionError):
        WeiNormanCoeffs(g1=0.1 - 1j, g2=0j, g3=0j, g4=0j, t=1.0)


def test_anti_diffusive_kinetic_factor_rejected():
    from cpodeflect.weinorman import WeiNormanCoeffs

    with pytest.raises(InvalidEvolutionError):
        WeiNormanCoeffs(g1=+0.5j, g2=0j, g3=0j, g4=0j, t=1.0)


# --------------------------------------------------------------- ODE route


def test_ode_all_zero_is_identity():
    coeffs = wn_integrate_odes(0.0, 0.0, 0.0, 1.0, 0.01)
    assert (coeffs.g1, coeffs.g2, coeffs.g3, coeffs.g4) == (0, 0, 0, 0)


def test_ode_constant_coefficients_match_closed_form():
    mass, eta0, eta1 = 2.0, 0.7, 0.4
    closed = wn_closed_coefficients(1.0, mass, eta0, eta1)
    integrated = wn_integrate_odes(1 / (2 * mass), eta1, eta0, 1.0, 1e-3)
    for name in ("g1", "g2", "g3", "g4"):
        assert abs(getattr(integrated, name) - getattr(closed, name)) < 1e-8
    assert integrated.mass == mass


def test_ode_pure_phase():
    eta0 = 0.9
    coeffs = wn_integrate_odes(0.0, 0.0, eta0, 2.0, 0.01)
    assert coeffs.g1 == 0 and coeffs.g2 == 0 and coeffs.g3 == 0
    assert abs(coeffs.g4 - (-1j * eta0 * 2.0)) < 1e-12
    assert coeffs.mass is None


def test_ode_time_dependent_force():
    """Ramped force C3 = kappa*t integrates to polynomial exponents.

    Chaining dg2/dt = 2 g1 C3 and dg4/dt = g2 C3 gives
    g3 = -i kappa t^2/2, g2 = -i kappa t^3/(3m), g4 = -i kappa^2 t^5/(15m).
    """
    mass, kappa, t_end = 1.5, 0.8, 1.2
    coeffs = wn_integrate_odes(1 / (2 * mass), lambda t: kappa * t, 0.0, t_end, 1e-3)
    assert abs(coeffs.g3 - (-1j * kappa * t_end**2 / 2)) < 1e-10
    assert abs(coeffs.g2 - (-1j * kappa * t_end**3 / (3 * mass))) < 1e-10
    assert abs(coeffs.g4 - (-1j * kappa**2 * t_end**5 / (15 * mass))) < 1e-10
    assert coeffs.eta1 is None


def test_ode_step_guard():
    with pytest.raises(ConfigurationError):
        wn_integrate_odes(5.0, 0.0, 0.0, 1.0, 0.2)
    with pytest.raises(ConfigurationError):
        wn_integrate_odes(0.5, 0.0, 0.0, 0.0, 0.01)


# --------------------------------------------------------- packet evolution


def _packet(center=0.0, momentum=0.0, b=0.5) -> GaussianPacket:
    return GaussianPacket(center=center, momentum=momentum, complex_width=1 / b**2 + 0j)


def test_packet_requires_positive_width():
    with pytest.raises(InvalidEvolutionError):
        GaussianPacket(center=0.0, momentum=0.0, complex_width=-1.0 + 0.5j)


def test_packet_sample_moments():
    grid = TransverseGrid.centered(16.0, 1024)
    packet = _packet(center=0.3, b=0.4)
    field = ComplexField1D(grid=grid, values=packet.sample(grid.x))
    diag = beam_diagnostics(field)
    assert abs(diag.norm - packet.norm) < 1e-10
    assert abs(diag.centroid - 0.3) < grid.dx / 10
    assert abs(diag.rms_width - 0.2) < 0.002


def test_free_evolution_spreads_without_drift():
    packet = _packet(b=0.5)
    w0 = packet.complex_width
    mass = 2.0
    for t in (0.5, 1.0, 2.0):
        out = evolve_gaussian_analytic(packet, wn_closed_coefficients(t, mass, 0.0, 0.0))
        assert out.center == 0.0
        assert out.momentum == 0.0
        expected = w0 / (1 + 2j * t * w0 / mass)
        assert abs(out.complex_width - expected) < 1e-12


def test_centroid_follows_classical_trajectory():
    """Ehrenfest holds exactly for potentials at most linear in x."""
    mass, eta0, eta1 = 2.0, 0.7, 0.4
    rng = np.random.default_rng(7)
    for _ in range(20):
        a = rng.uniform(-1, 1)
        p0 = rng.uniform(-2, 2)
        t = rng.uniform(0.1, 3.0)
        out = evolve_gaussian_analytic(
            _packet(center=a, momentum=p0),
            wn_closed_coefficients(t, mass, eta0, eta1, offset=a),
        )
        assert abs(out.center - (a + p0 * t / mass - eta1 * t**2 / (2 * mass))) < 1e-10
        assert abs(out.momentum - (p0 - eta1 * t)) < 1e-10


def test_group_property():
    mass, eta0, eta1 = 1.5, 0.3, 0.6
    packet = _packet(center=0.2, momentum=0.5, b=0.4)
    t1, t2 = 0.7, 1.1
    one_step = evolve_gaussian_analytic(
        packet, wn_closed_coefficients(t1 + t2, mass, eta0, eta1)
    )
    two_step = evolve_gaussian_analytic(
        evolve_gaussian_analytic(packet, wn_closed_coefficients(t1, mass, eta0, eta1)),
        wn_closed_coefficients(t2, mass, eta0, eta1),
    )
    assert abs(two_step.center - one_step.center) < 1e-10
    assert abs(two_step.momentum - one_step.momentum) < 1e-10
    assert abs(two_step.complex_width - one_step.complex_width) < 1e-10
    assert abs(two_step.global_phase - one_step.global_phase) < 1e-10


def test_norm_preserved():
    packet = _packet(center=0.2, momentum=0.5, b=0.4)
    out = evolve_gaussian_analytic(packet, wn_closed_coefficients(2.0, 1.5, 0.3, 0.6))
    assert abs(out.norm - packet.norm) < 1e-10


# ----------------------------------------------------------------- endpoint


def test_trajectory_endpoint_hand_values():
    assert trajectory_endpoint(0.3, 0.0, 5.0, 2.0) == (0.3, 5.0)
    assert trajectory_endpoint(0.3, 0.8, 0.0, 2.0) == (0.3, 0.0)
    x, z = trajectory_endpoint(0.5, 0.2, 2.0, 1.0, 1.0)
    assert abs(x - 0.1) < 1e-15
    assert z == 2.0


def test_endpoint_matches_packet_center():
    a, eta1, k_p, c, length = 0.2, 101.0, 2.0, 1.0, 0.04
    coeffs = wn_closed_coefficients(length / c, k_p / c, 0.0, eta1, offset=a)
    out = evolve_gaussian_analytic(_packet(center=a, b=0.2), coeffs)
    x_an, _ = trajectory_endpoint(a, eta1, length, k_p, c)
    assert abs(out.center - x_an) < 1e-12


def test_analytic_packet_matches_grid_propagation():
    """L2 distance between the factorized evolution and split-step < 1e-6."""
    atom = AtomParams(gamma1=0.01, gamma2=1.0, delta_c=-10.0, w_eq=-1.0)
    coeffs = derive_coefficients(atom, k_c=2.0, k_p=2.0, alpha_c=0.505, alpha_p=1000.0)
    grid = TransverseGrid.centered(16.0, 1024)
    a, b, length = 0.2, 0.2, 0.04
    eta = linearized_potential(a, coeffs)

    phase = -0.25 * math.log(math.pi * b**2 / 2)  # unit L2 norm
    packet = GaussianPacket(
        center=a, momentum=0.0, complex_width=1 / b**2 + 0j, global_phase=phase
    )
    closed = wn_closed_coefficients(
        length / coeffs.c, coeffs.probe_mass, eta.eta0, eta.eta1, offset=a
    )
    evolved = evolve_gaussian_analytic(packet, closed)

    start = ComplexField1D(grid=grid, values=packet.sample(grid.x), z=0.0)
    propagated = propagate_probe(start, coeffs, length, potential="linearized", eta=eta)
    l2 = math.sqrt(
        float(np.sum(np.abs(propagated.values - evolved.sample(grid.x)) ** 2)) * grid.dx
    )
    assert l2 < 1e-6
