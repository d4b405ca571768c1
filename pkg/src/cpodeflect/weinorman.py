"""Operator-factorized evolution for a probe packet in a linear potential.

The time picture of paraxial probe propagation is a Schrodinger equation

    i dpsi/dt = [P^2/(2m) + eta0 + eta1 (x - a)] psi,     P = -i d/dx,

with effective mass m = k_p / c and evolution time t = L / c for a medium of
length L.  Because {P^2, P, x, 1} close under commutation, the propagator
factorizes exactly as

    U(t) = exp(g1 P^2) exp(g2 P) exp(g3 (x - a)) exp(g4)

with first-order ODEs for the g_k that integrate in closed form when the
coefficients are constant:

    g1 = -i t / (2m)
    g2 = -i eta1 t^2 / (2m)
    g3 = -i eta1 t
    g4 = -i (eta0 t + eta1^2 t^3 / (6m))

Each factor maps a Gaussian exp(-W x'^2 + B x' + C) (x' = x - a) to another
Gaussian, so packets evolve without any grid: the center follows the
constant-force parabola a' - eta1 t^2 / (2m) exactly, which is the analytic
deflection law the beam-propagation runs are checked against.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import ConfigurationError, InvalidEvolutionError

__all__ = [
    "WeiNormanCoeffs",
    "GaussianPacket",
    "wn_closed_coefficients",
    "wn_integrate_odes",
    "evolve_gaussian_analytic",
    "trajectory_endpoint",
]

_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class WeiNormanCoeffs:
    """Factorization exponents g1..g4 at time t, for the x' = x - offset frame.

    mass, eta0 and eta1 record the constant Hamiltonian the exponents came
    from; they are None when the ODE route was driven by time-dependent
    coefficients, in which case only the g_k themselves are meaningful.
    """

    g1: complex
    g2: complex
    g3: complex
    g4: complex
    t: float
    offset: float = 0.0
    mass: float | None = None
    eta0: float | None = None
    eta1: float | None = None

    def __post_init__(self) -> None:
        # unitary evolution puts all four exponents on the imaginary axis,
        # with the kinetic one spreading (Im g1 <= 0 for t >= 0)
        for name in ("g1", "g2", "g3", "g4"):
            g = getattr(self, name)
            if not (cmath.isfinite(g)):
                raise InvalidEvolutionError(f"{name} is not finite")
            if abs(g.real) > _IMAG_TOL * max(1.0, abs(g)):
                raise InvalidEvolutionError(f"{name} = {g!r} is not purely imaginary")
        if self.t >= 0 and self.g1.imag > _IMAG_TOL:
            raise InvalidEvolutionError("Im g1 > 0 at t >= 0: kinetic factor would anti-diffuse")


@dataclass(frozen=True)
class GaussianPacket:
    """psi(x) = exp(-W (x - x0)^2 + i p (x - x0) + phi) with Re W > 0.

    center/momentum are the phase-space coordinates; complex_width W sets the
    spot size (Re W = 1/b^2 for an amplitude 1/e half-width b) and chirp;
    global_phase phi carries both normalization (real part) and overall phase.
    """

    center: float
    momentum: float
    complex_width: complex
    global_phase: complex = 0j

    def __post_init__(self) -> None:
        if not (self.complex_width.real > 0):
            raise InvalidEvolutionError("Re W must be > 0 for a normalizable packet")

    @property
    def norm(self) -> float:
        """L2 norm, sqrt(integral |psi|^2 dx), in closed form."""
        return math.exp(self.global_phase.real) * (math.pi / (2 * self.complex_width.real)) ** 0.25

    def sample(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        dx = x - self.center
        return np.exp(-self.complex_width * dx**2 + 1j * self.momentum * dx + self.global_phase)


def wn_closed_coefficients(
    t: float,
    mass: float,
    eta0: float,
    eta1: float,
    offset: float = 0.0,
) -> WeiNormanCoeffs:
    """Closed-form exponents for constant (eta0, eta1) and mass m."""
    if mass <= 0:
        raise ConfigurationError("mass must be > 0")
    return WeiNormanCoeffs(
        g1=-1j * t / (2 * mass),
        g2=-1j * eta1 * t**2 / (2 * mass),
        g3=-1j * eta1 * t,
        g4=-1j * (eta0 * t + eta1**2 * t**3 / (6 * mass)),
        t=t,
        offset=offset,
        mass=mass,
        eta0=eta0,
        eta1=eta1,
    )


def _as_fun(coefficient) -> Callable[[float], float]:
    if callable(coefficient):
        return coefficient
    value = float(coefficient)
    return lambda _t: value


def wn_integrate_odes(
    c_kinetic,
    c_linear,
    c_const,
    t_end: float,
    dt: float,
    offset: float = 0.0,
) -> WeiNormanCoeffs:
    """Integrate the factorization ODEs for H = c_kinetic P^2 + c_linear x' + c_const.

    Each coefficient is a float or a callable of t.  The ODE system is

        dg1/dt = -i c1,   dg3/dt = -i c3,
        dg2/dt = 2 g1 c3, dg4/dt = -i c4 + g2 c3,

    integrated with classic fixed-step RK4.  For constant coefficients the
    result must match wn_closed_coefficients to integrator accuracy; that
    agreement is one of the pinned cross-checks.
    """
    if t_end <= 0 or dt <= 0:
        raise ConfigurationError("t_end and dt must be > 0")
    c1, c3, c4 = _as_fun(c_kinetic), _as_fun(c_linear), _as_fun(c_const)
    scale = max(
        abs(c(t)) for c in (c1, c3, c4) for t in (0.0, t_end / 2, t_end)
    )
    if dt * scale >= 0.5:
        raise ConfigurationError(
            f"dt = {dt:.3g} too coarse for coefficient scale {scale:.3g} (need dt*scale < 0.5)"
        )

    def rhs(t: float, g: np.ndarray) -> np.ndarray:
        v1, v3, v4 = c1(t), c3(t), c4(t)
        return np.array(
            [-1j * v1, 2 * g[0] * v3, -1j * v3, -1j * v4 + g[1] * v3],
            dtype=complex,
        )

    n_steps = max(1, math.ceil(t_end / dt - 1e-12))
    h = t_end / n_steps
    g = np.zeros(4, dtype=complex)
    t = 0.0
    for _ in range(n_steps):
        k1 = rhs(t, g)
        k2 = rhs(t + h / 2, g + h / 2 * k1)
        k3 = rhs(t + h / 2, g + h / 2 * k2)
        k4 = rhs(t + h, g + h * k3)
        g = g + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        t += h

    mass = None
    if not callable(c_kinetic):
        mass = 1 / (2 * float(c_kinetic)) if c_kinetic else None
    return WeiNormanCoeffs(
        g1=complex(g[0]), g2=complex(g[1]), g3=complex(g[2]), g4=complex(g[3]),
        t=t_end, offset=offset, mass=mass,
        eta0=None if callable(c_const) else float(c_const),
        eta1=None if callable(c_linear) else float(c_linear),
    )


def _packet_to_wbc(packet: GaussianPacket, offset: float) -> tuple[complex, complex, complex]:
    # rewrite exp(-W(x-x0)^2 + ip(x-x0) + phi) as exp(-W u^2 + B u + C), u = x - offset
    x0 = packet.center - offset
    w = packet.complex_width
    b = 2 * w * x0 + 1j * packet.momentum
    c = packet.global_phase - w * x0**2 - 1j * packet.momentum * x0
    return w, b, c


def _wbc_to_packet(w: complex, b: complex, c: complex, offset: float) -> GaussianPacket:
    if not (w.real > 0):
        raise InvalidEvolutionError("evolution produced a non-normalizable width (Re W <= 0)")
    x0 = b.real / (2 * w.real)
    p = b.imag - 2 * w.imag * x0
    phi = c + w * x0**2 + 1j * p * x0
    return GaussianPacket(
        center=x0 + offset, momentum=p, complex_width=w, global_phase=phi
    )


def evolve_gaussian_analytic(packet: GaussianPacket, coeffs: WeiNormanCoeffs) -> GaussianPacket:
    """Apply U = e^{g1 P^2} e^{g2 P} e^{g3 x'} e^{g4} to a Gaussian, exactly.

    Factors act right to left on exp(-W u^2 + B u + C), u = x - offset:

      e^{g4}:        C += g4
      e^{g3 u}:      B += g3
      e^{g2 P}:      translation by s = i g2:  C -= W s^2 + B s, then B += 2 W s
      e^{g1 P^2}:    heat kernel with lam = -g1:
                     W /= (1 + 4 lam W), B /= (1 + 4 lam W),
                     C += lam B^2/(1 + 4 lam W) - ln(1 + 4 lam W)/2   (pre-update B)

    Gaussians are closed under each step, so the map is exact; unitarity of
    the result (norm preservation for imaginary g_k) is a checked invariant.
    """
    w, b, c = _packet_to_wbc(packet, coeffs.offset)

    c = c + coeffs.g4
    b = b + coeffs.g3

    s = 1j * coeffs.g2
    c = c - w * s**2 - b * s
    b = b + 2 * w * s

    lam = -coeffs.g1
    den = 1 + 4 * lam * w
    if den == 0:
        raise InvalidEvolutionError("kinetic factor is singular for this width (1 + 4 lam W = 0)")
    c = c + lam * b**2 / den - 0.5 * cmath.log(den)
    b = b / den
    w = w / den

    return _wbc_to_packet(w, b, c, coeffs.offset)


def trajectory_endpoint(
    a: float, eta1: float, length: float, k_p: float, c: float = 1.0
) -> tuple[float, float]:
    """Constant-force exit point (x, z) with x = a - eta1 L^2 / (2 k_p c), z = L.

    x is the center of the packet returned by evolve_gaussian_analytic with
    the closed-form coefficients at t = L/c, m = k_p/c; the beam propagation
    runs are validated against it.
    """
    return a - eta1 * length**2 / (2 * k_p * c), length
