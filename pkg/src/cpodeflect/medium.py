"""Macroscopic propagation coefficients and the soliton-dressed probe potential.

In the far-detuned regime the two-level medium acts on the control beam as a
saturable self-focusing nonlinearity and on the probe as an effective
refractive potential shaped by the local control intensity:

    control:  i dOmega_c/dz + (1/2 k_c) d^2 Omega_c/dx^2 = alpha_c * Omega_c / (1 + 2 beta |Omega_c|^2)
    probe:    potential V(x) = alpha_p * (1 + 2 beta |Omega_c(x)|^2)^-2

Expanding the saturable response to cubic order admits an exact bright
soliton, Omega_c = (sqrt(q)/2) exp(i (q^2/4 - alpha_c) z) sech(x / l_c) with
q = alpha_c * beta and l_c = sqrt(2/k_c)/q.  A probe beam launched a distance
``a`` off the soliton axis sees, to first order in the displacement, the
linear potential eta0 + eta1 * (x - a); eta1 sets the transverse force and
therefore the bend direction.

Self-focusing (and hence the soliton) requires alpha_c > 0, i.e. red
detuning.  For blue detuning the same positive sech intensity profile is
used with alpha_p's sign flipped, which reverses the force: the probe is
pushed away from the control axis instead of pulled toward it.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .bloch import AtomParams
from .errors import ConfigurationError, InvalidRegimeError, ParameterError

__all__ = [
    "MediumCoefficients",
    "LinearPotential",
    "FarDetuningWarning",
    "derive_coefficients",
    "couplings_from_alphas",
    "soliton_profile",
    "soliton_fd_residual",
    "probe_potential",
    "linearized_potential",
]

_CROSS_CHECK_TOL = 1e-9


class FarDetuningWarning(UserWarning):
    """|Delta| is not large against gamma2; the adiabatic coefficient formulas degrade."""


@dataclass(frozen=True)
class MediumCoefficients:
    """Derived propagation coefficients for one choice of atom parameters.

    alpha_c, alpha_p carry sign(-Delta); beta > 0 is the saturation weight;
    q = alpha_c * beta; l_c = sqrt(2/k_c)/|q| is the (positive) soliton
    width.  coupling_c/coupling_p are the collective coupling strengths
    |g_c|^2, |g_p|^2 and atom_line_density the dimensionless N entering the
    alphas; they are None when the alphas were supplied directly.
    """

    alpha_c: float
    alpha_p: float
    beta: float
    q: float
    l_c: float
    k_c: float
    k_p: float
    c: float = 1.0
    coupling_c: float | None = None
    coupling_p: float | None = None
    atom_line_density: float | None = None

    def __post_init__(self) -> None:
        if not (self.beta > 0):
            raise ParameterError("beta must be > 0")
        if not (self.l_c > 0):
            raise ParameterError("l_c must be > 0")
        if not (self.k_c > 0 and self.k_p > 0):
            raise ParameterError("wavenumbers k_c, k_p must be > 0")
        if not (self.c > 0):
            raise ParameterError("c must be > 0")

    @property
    def soliton_amplitude(self) -> float:
        return math.sqrt(abs(self.q)) / 2

    @property
    def probe_mass(self) -> float:
        """Effective mass of the probe packet in the time picture, k_p / c."""
        return self.k_p / self.c


@dataclass(frozen=True)
class LinearPotential:
    """First-order expansion V(x) ~ eta0 + eta1*(x - a) around the launch offset a."""

    eta0: float
    eta1: float
    a: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.eta0) and math.isfinite(self.eta1)):
            raise ParameterError("eta0/eta1 must be finite")


def _alpha_signs_ok(alpha: float, delta_c: float) -> bool:
    # zero is allowed (switched-off coupling); nonzero must carry sign(-Delta)
    return alpha == 0 or math.copysign(1.0, alpha) == -math.copysign(1.0, delta_c)


def derive_coefficients(
    params: AtomParams,
    *,
    k_c: float,
    k_p: float,
    c: float = 1.0,
    coupling_c: float | None = None,
    coupling_p: float | None = None,
    atom_line_density: float | None = None,
    alpha_c: float | None = None,
    alpha_p: float | None = None,
) -> MediumCoefficients:
    """Build MediumCoefficients from either couplings or direct alphas.

    Derived path (coupling_c, coupling_p, atom_line_density all given):

        alpha_c = -(N/c) |g_c|^2 Delta / (Delta^2 + gamma2^2)
        alpha_p = -N |g_p|^2 Delta / (gamma2^2 + Delta^2)

    Direct path: alpha_c, alpha_p given as-is.  When both paths are supplied
    they are cross-validated to 1e-9 relative.  Delta = 0 is rejected (the
    dispersive coefficients change sign there) and |Delta| < 5*gamma2 only
    warns.
    """
    dc, g2 = params.delta_c, params.gamma2
    if dc == 0:
        raise InvalidRegimeError("Delta = 0: dispersive coefficients are undefined on resonance")
    if abs(dc) < 5 * g2:
        warnings.warn(
            f"|Delta| = {abs(dc):.3g} is below 5*gamma2; far-detuned formulas are marginal",
            FarDetuningWarning,
            stacklevel=2,
        )

    derived = (coupling_c is not None, coupling_p is not None, atom_line_density is not None)
    have_derived = all(derived)
    if any(derived) and not have_derived:
        raise ConfigurationError(
            "coupling_c, coupling_p and atom_line_density must be given together"
        )
    have_direct = alpha_c is not None and alpha_p is not None
    if (alpha_c is None) != (alpha_p is None):
        raise ConfigurationError("alpha_c and alpha_p must be given together")
    if not have_derived and not have_direct:
        raise ConfigurationError("need either (coupling_c, coupling_p, atom_line_density) or (alpha_c, alpha_p)")

    lorentz = dc**2 + g2**2
    if have_derived:
        if coupling_c < 0 or coupling_p < 0 or atom_line_density < 0:
            raise ParameterError("couplings and atom_line_density must be >= 0")
        ac = -(atom_line_density / c) * coupling_c * dc / lorentz
        ap = -atom_line_density * coupling_p * dc / lorentz
        if have_direct:
            for name, got, expect in (("alpha_c", alpha_c, ac), ("alpha_p", alpha_p, ap)):
                scale = max(abs(got), abs(expect), 1e-300)
                if abs(got - expect) / scale > _CROSS_CHECK_TOL:
                    raise ConfigurationError(
                        f"{name} = {got!r} disagrees with the value derived from the couplings ({expect!r})"
                    )
    else:
        ac, ap = float(alpha_c), float(alpha_p)

    if not _alpha_signs_ok(ac, dc) or not _alpha_signs_ok(ap, dc):
        raise ParameterError("alpha_c and alpha_p must carry sign(-Delta)")
    if ac == 0:
        raise ParameterError("alpha_c must be nonzero (the control must couple to the medium)")

    beta = 2 * g2 / (params.gamma1 * lorentz)
    q = ac * beta
    l_c = math.sqrt(2 / k_c) / abs(q)
    return MediumCoefficients(
        alpha_c=ac,
        alpha_p=ap,
        beta=beta,
        q=q,
        l_c=l_c,
        k_c=k_c,
        k_p=k_p,
        c=c,
        coupling_c=coupling_c,
        coupling_p=coupling_p,
        atom_line_density=atom_line_density,
    )


def couplings_from_alphas(
    alpha_c: float,
    alpha_p: float,
    params: AtomParams,
    c: float = 1.0,
    atom_line_density: float = 1.0,
) -> tuple[float, float]:
    """Invert the alpha formulas to (coupling_c, coupling_p) for a given N.

    Used to hold the microscopic couplings fixed while sweeping Delta.
    """
    dc, g2 = params.delta_c, params.gamma2
    if dc == 0:
        raise InvalidRegimeError("Delta = 0: cannot invert the dispersive coefficients")
    lorentz = dc**2 + g2**2
    coupling_c = -alpha_c * c * lorentz / (atom_line_density * dc)
    coupling_p = -alpha_p * lorentz / (atom_line_density * dc)
    if coupling_c < 0 or coupling_p < 0:
        raise ParameterError("alphas inconsistent with sign(-Delta); couplings came out negative")
    return coupling_c, coupling_p


def soliton_profile(x: np.ndarray, z: float, coeffs: MediumCoefficients) -> np.ndarray:
    """Bright-soliton control envelope at propagation distance z.

    Amplitude sqrt(|q|)/2, width l_c, longitudinal phase (q^2/4 - alpha_c) z.
    An exact stationary solution of the cubic model only in the self-focusing
    regime (alpha_c > 0); elsewhere it is just the reference sech profile.
    """
    x = np.asarray(x, dtype=float)
    return (
        coeffs.soliton_amplitude
        * np.exp(1j * (coeffs.q**2 / 4 - coeffs.alpha_c) * z)
        / np.cosh(x / coeffs.l_c)
    )


def soliton_fd_residual(coeffs: MediumCoefficients, h: float, half_width: float | None = None) -> float:
    """Max-norm residual of the analytic soliton in the cubic model, with a
    second-order finite-difference transverse Laplacian of spacing h.

    The analytic profile satisfies the cubic equation exactly, so this
    residual is purely the O(h^2) discretization error; it is used as a
    convergence-order oracle.
    """
    if half_width is None:
        half_width = 8 * coeffs.l_c
    n = int(round(2 * half_width / h))
    x = -half_width + h * np.arange(n + 1)
    om = soliton_profile(x, 0.0, coeffs)
    dz_term = -(coeffs.q**2 / 4 - coeffs.alpha_c) * om  # i * d/dz of the analytic phase
    lap = (om[2:] - 2 * om[1:-1] + om[:-2]) / h**2
    rhs = coeffs.alpha_c * (1 - 2 * coeffs.beta * np.abs(om[1:-1]) ** 2) * om[1:-1]
    return float(np.max(np.abs(dz_term[1:-1] + lap / (2 * coeffs.k_c) - rhs)))


def probe_potential(x: np.ndarray, coeffs: MediumCoefficients, control) -> np.ndarray:
    """Probe refractive potential V(x) = alpha_p (1 + 2 beta |Omega_c(x)|^2)^-2.

    ``control`` is the control envelope sampled at x, either a plain array or
    a field object carrying ``values`` (only the magnitude enters).  With the
    control off the potential is the flat alpha_p.
    """
    x = np.asarray(x, dtype=float)
    control = np.asarray(getattr(control, "values", control))
    if control.shape != x.shape:
        raise ConfigurationError("control field and x grid must have matching shapes")
    return coeffs.alpha_p * (1 + 2 * coeffs.beta * np.abs(control) ** 2) ** -2


def linearized_potential(a: float, coeffs: MediumCoefficients) -> LinearPotential:
    """Linearize the soliton-dressed probe potential about the launch offset a.

    eta0 = alpha_p [1 + (beta |q| / 2) sech^2(a/l_c)]^-2
    eta1 = alpha_p q^2 beta sqrt(2 k_c) sech^2(a/l_c) tanh(a/l_c)
           / [1 + (beta |q| / 2) sech^2(a/l_c)]^3

    so sign(eta1) = sign(a) * sign(alpha_p) = sign(a) * sign(-Delta): toward
    the axis for red detuning, away from it for blue.
    """
    u = a / coeffs.l_c
    sech2 = 1 / math.cosh(u) ** 2
    base = 1 + (coeffs.beta * abs(coeffs.q) / 2) * sech2
    eta0 = coeffs.alpha_p / base**2
    eta1 = (
        coeffs.alpha_p
        * coeffs.q**2
        * coeffs.beta
        * math.sqrt(2 * coeffs.k_c)
        * sech2
        * math.tanh(u)
        / base**3
    )
    return LinearPotential(eta0=eta0, eta1=eta1, a=a)
