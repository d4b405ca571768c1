"""Two-level atomic response to a strong control field plus a weak probe.

The medium is a homogeneously broadened two-level ensemble with population
relaxation rate ``gamma1``, coherence relaxation rate ``gamma2``, control
detuning ``Delta`` and equilibrium inversion ``w_eq``.  The control drives the
transition with Rabi frequency ``Omega_c``; a weak probe, detuned from the
control by the beat frequency ``delta``, adds a time-dependent term
``Omega_p * exp(-i*delta*t)`` (phases referenced to z = 0).

The population inversion then oscillates at the beat frequency (coherent
population oscillation).  Truncating the response at the first sideband,

    w(t)        = w0 + w(+) e^{+i delta t} + w(-) e^{-i delta t}
    sigma_ge(t) = sigma_ge0 + sigma_ge(+) e^{+i delta t} + sigma_ge(-) e^{-i delta t}

with w(+) = conj(w(-)) and sigma_eg(+) = conj(sigma_ge(-)), the probe
susceptibility per unit Rabi amplitude is chi = sigma_ge(-) / Omega_p.  For a
slow population rate (gamma1 << gamma2) the imaginary part of chi develops a
narrow hole around delta = 0: the probe sees reduced absorption inside a
window set by the population lifetime, the mechanism behind slow light in
this medium.

Two independent routes to sigma_ge(-) are provided: a literal transcription
of the closed-form expression (`first_order_closed`) and a direct linear
solve of the truncated steady-state system (`floquet_steady_solve`).  They
must agree; the runner reports their residuals.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigurationError,
    NoDipError,
    NumericalDivergenceError,
    ParameterError,
    SingularDenominatorError,
    SingularResponseError,
)

__all__ = [
    "AtomParams",
    "DriveFields",
    "BlochState",
    "SteadyResponse",
    "SpectrumTable",
    "DipMetrics",
    "PerturbativeDriveWarning",
    "integrate_bloch",
    "steady_state_zeroth",
    "first_order_closed",
    "floquet_steady_solve",
    "probe_spectrum",
    "dip_metrics",
    "closed_form_residual",
]

_STATE_TOL = 1e-9
_COND_LIMIT = 1e12


class PerturbativeDriveWarning(UserWarning):
    """Probe amplitude large enough to strain the first-order sideband truncation."""


@dataclass(frozen=True)
class AtomParams:
    """Relaxation rates, control detuning and equilibrium inversion.

    gamma2 >= gamma1/2 is the usual dephasing bound (pure dephasing only adds
    to gamma2); w_eq in [-1, 0] restricts equilibrium to at most full
    ground-state population.
    """

    gamma1: float
    gamma2: float
    delta_c: float
    w_eq: float = -1.0

    def __post_init__(self) -> None:
        if not (self.gamma1 > 0):
            raise ParameterError("gamma1 must be > 0")
        if not (self.gamma2 > 0):
            raise ParameterError("gamma2 must be > 0")
        if self.gamma2 < self.gamma1 / 2:
            raise ParameterError("gamma2 >= gamma1/2 is required for a physical two-level medium")
        if not (-1.0 <= self.w_eq <= 0.0):
            raise ParameterError("w_eq must lie in [-1, 0]")


@dataclass(frozen=True)
class DriveFields:
    """Control and probe Rabi amplitudes plus the beat detuning delta = nu_c - nu_p."""

    omega_c: complex
    omega_p: complex
    delta: float

    def __post_init__(self) -> None:
        if abs(self.omega_p) > 0.1 * abs(self.omega_c) and self.omega_p != 0:
            warnings.warn(
                "probe amplitude exceeds 10% of the control; first-order sideband "
                "truncation may be inaccurate",
                PerturbativeDriveWarning,
                stacklevel=2,
            )


@dataclass(frozen=True)
class BlochState:
    """Inversion and optical coherence at one instant."""

    time: float
    w: float
    sigma_eg: complex

    def __post_init__(self) -> None:
        if abs(self.w) > 1.0 + _STATE_TOL:
            raise ParameterError(f"|w| = {abs(self.w)} exceeds 1")
        if abs(self.sigma_eg) > 0.5 + _STATE_TOL:
            raise ParameterError(f"|sigma_eg| = {abs(self.sigma_eg)} exceeds 1/2")

    @property
    def sigma_ge(self) -> complex:
        return self.sigma_eg.conjugate()


@dataclass(frozen=True)
class SteadyResponse:
    """Zeroth-order background plus the first-order probe sideband amplitudes.

    d_denominator is the cubic-in-delta denominator of the closed-form route,
    carried along so spectra can report proximity to its zeros.
    """

    w0: float
    sigma_ge0: complex
    w_minus: complex
    sigma_eg_minus: complex
    sigma_ge_minus: complex
    d_denominator: complex

    @property
    def sigma_eg0(self) -> complex:
        return self.sigma_ge0.conjugate()


def integrate_bloch(
    params: AtomParams,
    fields: DriveFields,
    t_end: float,
    dt: float,
    w0: float | None = None,
    sigma0: complex = 0j,
    store_every: int = 1,
) -> list[BlochState]:
    """Integrate the driven Bloch equations with fixed-step fourth-order Runge-Kutta.

    The drive is Omega(t) = omega_c + omega_p * exp(-i*delta*t) (probe phase
    referenced to z = 0) and the equations of motion are

        dw/dt        = -gamma1*(w - w_eq) + 2i*(conj(Omega)*sigma_ge - Omega*sigma_eg)
        dsigma_eg/dt = -(i*Delta + gamma2)*sigma_eg - i*conj(Omega)*w

    with sigma_ge = conj(sigma_eg).  Starts from (w_eq, 0) unless an initial
    state is given.  Returns the sampled trajectory; the final state is always
    included.

    Raises ConfigurationError if dt does not resolve the fastest rate, and
    NumericalDivergenceError if the state leaves the unit ball or turns
    non-finite.
    """
    if t_end <= 0 or dt <= 0:
        raise ConfigurationError("t_end and dt must be positive")
    rate = max(params.gamma1, params.gamma2, abs(params.delta_c), abs(fields.omega_c))
    if dt * rate >= 0.1:
        raise ConfigurationError(
            f"dt*max_rate = {dt * rate:.3g} violates the dt*max(gamma1, gamma2, |Delta|, "
            f"|Omega_c|) < 0.1 step guard"
        )
    if store_every < 1:
        raise ConfigurationError("store_every must be >= 1")

    n_steps = max(1, math.ceil(t_end / dt))
    dt = t_end / n_steps

    g1, g2 = params.gamma1, params.gamma2
    w_eq = params.w_eq
    lam = -(1j * params.delta_c + g2)
    oc = complex(fields.omega_c)
    op = complex(fields.omega_p)
    delta = fields.delta

    w = params.w_eq if w0 is None else float(w0)
    s = complex(sigma0)
    out = [BlochState(0.0, w, s)]

    probe_on = op != 0

    def rhs(t: float, w: float, s: complex) -> tuple[float, complex]:
        om = oc + op * cmath.exp(-1j * delta * t) if probe_on else oc
        dw = -g1 * (w - w_eq) + (2j * (om.conjugate() * s.conjugate() - om * s)).real
        ds = lam * s - 1j * om.conjugate() * w
        return dw, ds

    t = 0.0
    half = dt / 2
    for step in range(1, n_steps + 1):
        k1w, k1s = rhs(t, w, s)
        k2w, k2s = rhs(t + half, w + half * k1w, s + half * k1s)
        k3w, k3s = rhs(t + half, w + half * k2w, s + half * k2s)
        k4w, k4s = rhs(t + dt, w + dt * k3w, s + dt * k3s)
        w = w + dt / 6 * (k1w + 2 * k2w + 2 * k3w + k4w)
        s = s + dt / 6 * (k1s + 2 * k2s + 2 * k3s + k4s)
        t = step * dt
        if not (math.isfinite(w) and cmath.isfinite(s)):
            raise NumericalDivergenceError(f"non-finite Bloch state at t = {t:.6g}")
        if step % store_every == 0 or step == n_steps:
            out.append(BlochState(t, w, s))
    return out


def steady_state_zeroth(params: AtomParams, omega_c: complex) -> tuple[float, complex]:
    """Closed-form control-only steady state (w0, sigma_ge0).

    Saturation lowers |w0| below |w_eq|; the coherence follows the control
    with the usual dispersive/absorptive weighting (i*gamma2 - Delta).
    """
    g1, g2, dc = params.gamma1, params.gamma2, params.delta_c
    den = g1 * (dc**2 + g2**2) + 4 * g2 * abs(omega_c) ** 2
    w0 = g1 * (dc**2 + g2**2) * params.w_eq / den
    sigma_ge0 = g1 * (1j * g2 - dc) * omega_c * params.w_eq / den
    return w0, sigma_ge0


def _d_denominator(params: AtomParams, omega_c: complex, delta: float) -> complex:
    g1, g2, dc = params.gamma1, params.gamma2, params.delta_c
    return (delta + 1j * g1) * (delta - dc + 1j * g2) * (delta + dc + 1j * g2) - 4 * abs(
        omega_c
    ) ** 2 * (1j * g2 + delta)


def first_order_closed(params: AtomParams, fields: DriveFields) -> complex:
    """Literal closed-form probe-sideband coherence sigma_ge(-).

    The expression is transcribed as printed, including the common factor
    D*(i*gamma2 - Delta) in the first term, so that it can be checked against
    the independent linear solve without simplification on our side.
    """
    g2, dc = params.gamma2, params.delta_c
    delta = fields.delta
    w0, _ = steady_state_zeroth(params, fields.omega_c)
    d = _d_denominator(params, fields.omega_c, delta)
    if abs(d) < 1e-12:
        raise SingularDenominatorError(f"|D| = {abs(d):.3g} at delta = {delta:.6g}")
    common = d * (1j * g2 - dc)
    numerator = common + 2 * abs(fields.omega_c) ** 2 * (delta + 2j * g2) * (delta - dc + 1j * g2)
    return -numerator / (common * (delta + dc + 1j * g2)) * w0 * fields.omega_p


def _complex_to_real_system(a: np.ndarray, b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Expand a complex linear system A u = b into its real form.

    Unknown layout: [Re u0, Im u0, Re u1, Im u1, ...]; each complex equation
    contributes a real and an imaginary row.
    """
    m, n = a.shape
    ar = np.zeros((2 * m, 2 * n))
    br = np.zeros(2 * m)
    ar[0::2, 0::2] = a.real
    ar[0::2, 1::2] = -a.imag
    ar[1::2, 0::2] = a.imag
    ar[1::2, 1::2] = a.real
    br[0::2] = b.real
    br[1::2] = b.imag
    return ar, br


def floquet_steady_solve(params: AtomParams, fields: DriveFields) -> SteadyResponse:
    """Steady sideband amplitudes from the truncated Floquet system.

    Solves the control-only stationary background as a real 3-unknown system
    (w0, Re sigma_eg0, Im sigma_eg0), then the first-order sideband equations
    for (w(-), sigma_eg(-), sigma_ge(-)) as a real linear system of dimension
    six.  This route shares no algebra with `first_order_closed` beyond the
    equations of motion themselves.
    """
    g1, g2, dc = params.gamma1, params.gamma2, params.delta_c
    oc = complex(fields.omega_c)
    op = complex(fields.omega_p)
    delta = fields.delta
    cr, ci = oc.real, oc.imag

    m0 = np.array(
        [
            [-g1, 4 * ci, 4 * cr],
            [-ci, -g2, dc],
            [-cr, -dc, -g2],
        ]
    )
    rhs0 = np.array([-g1 * params.w_eq, 0.0, 0.0])
    cond0 = np.linalg.cond(m0)
    if not np.isfinite(cond0) or cond0 > _COND_LIMIT:
        raise SingularResponseError(f"zeroth-order system condition number {cond0:.3g}")
    w0, sr, si = np.linalg.solve(m0, rhs0)
    sigma_eg0 = complex(sr, si)
    sigma_ge0 = sigma_eg0.conjugate()

    # sideband unknowns u = (w-, sigma_eg-, sigma_ge-); h.c. terms resolved via
    # w(+) = conj(w(-)), sigma_eg(+) = conj(sigma_ge(-))
    a1 = np.array(
        [
            [1j * delta - g1, -2j * oc, 2j * oc.conjugate()],
            [-1j * oc.conjugate(), 1j * (delta - dc) - g2, 0],
            [1j * oc, 0, 1j * (delta + dc) - g2],
        ],
        dtype=complex,
    )
    b1 = np.array([2j * op * sigma_eg0, 0, -1j * op * w0], dtype=complex)
    ar, br = _complex_to_real_system(a1, b1)
    cond1 = np.linalg.cond(ar)
    if not np.isfinite(cond1) or cond1 > _COND_LIMIT:
        raise SingularResponseError(f"sideband system condition number {cond1:.3g}")
    u = np.linalg.solve(ar, br)
    return SteadyResponse(
        w0=float(w0),
        sigma_ge0=sigma_ge0,
        w_minus=complex(u[0], u[1]),
        sigma_eg_minus=complex(u[2], u[3]),
        sigma_ge_minus=complex(u[4], u[5]),
        d_denominator=_d_denominator(params, oc, delta),
    )


def closed_form_residual(params: AtomParams, fields: DriveFields) -> float:
    """Relative disagreement between the closed form and the linear solve."""
    solved = floquet_steady_solve(params, fields).sigma_ge_minus
    closed = first_order_closed(params, fields)
    scale = max(abs(solved), abs(closed))
    if scale == 0:
        return 0.0
    return abs(solved - closed) / scale


@dataclass(frozen=True)
class SpectrumTable:
    """Probe susceptibility chi(delta) on a detuning grid; failed points are NaN."""

    delta: np.ndarray
    chi: np.ndarray
    ok: np.ndarray = field(repr=False)


def probe_spectrum(
    params: AtomParams,
    omega_c: complex,
    delta_grid: np.ndarray,
    omega_p: complex = 1e-4,
) -> SpectrumTable:
    """Probe susceptibility chi = sigma_ge(-)/Omega_p over a beat-detuning grid.

    chi is exactly independent of the probe amplitude used internally (the
    sideband system is linear in Omega_p).  Points where the solve fails are
    recorded as NaN rather than aborting the scan.
    """
    if omega_p == 0:
        raise ConfigurationError("omega_p must be nonzero to normalize the response")
    deltas = np.asarray(delta_grid, dtype=float)
    chi = np.empty(deltas.shape, dtype=complex)
    ok = np.ones(deltas.shape, dtype=bool)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", PerturbativeDriveWarning)
        for i, d in enumerate(deltas):
            try:
                resp = floquet_steady_solve(
                    params, DriveFields(omega_c=omega_c, omega_p=omega_p, delta=float(d))
                )
                chi[i] = resp.sigma_ge_minus / omega_p
            except (SingularResponseError, SingularDenominatorError):
                chi[i] = complex("nan")
                ok[i] = False
    return SpectrumTable(delta=deltas, chi=chi, ok=ok)


@dataclass(frozen=True)
class DipMetrics:
    """Geometry of the narrow hole in |Im chi| around delta = 0."""

    center: float
    fwhm: float
    depth: float
    baseline: float
    minimum: float


def dip_metrics(spectrum: SpectrumTable) -> DipMetrics:
    """Measure the spectral hole: center, FWHM, and depth below the shoulders.

    The dip center is the interior local minimum of |Im chi| nearest delta = 0;
    the shoulders are the adjacent local maxima, the baseline their mean, and
    the FWHM is read off at half recovery by linear interpolation.  Raises
    NoDipError when the spectrum is a plain single-peaked profile (e.g. with
    the control off).
    """
    if not np.all(spectrum.ok):
        raise NoDipError("spectrum contains failed points")
    y = np.abs(spectrum.chi.imag)
    x = spectrum.delta
    n = y.size
    if n < 5:
        raise NoDipError("spectrum grid too coarse to measure a dip")

    interior = np.arange(1, n - 1)
    is_min = (y[interior] < y[interior - 1]) & (y[interior] < y[interior + 1])
    candidates = interior[is_min]
    # ignore roundoff wiggles in the far tails
    candidates = candidates[(np.maximum(y[candidates - 1], y[candidates + 1]) - y[candidates]) > 1e-9 * y.max()]
    if candidates.size == 0:
        raise NoDipError("no interior local minimum in |Im chi|")
    im = int(candidates[np.argmin(np.abs(x[candidates]))])

    left = im
    while left > 0 and y[left - 1] > y[left]:
        left -= 1
    right = im
    while right < n - 1 and y[right + 1] > y[right]:
        right += 1
    if left == im or right == im:
        raise NoDipError("minimum is not bracketed by rising shoulders")

    baseline = 0.5 * (y[left] + y[right])
    minimum = y[im]
    depth = baseline - minimum
    if depth <= 0:
        raise NoDipError("dip has no depth")
    half = minimum + 0.5 * depth

    i = im
    while i > 0 and y[i] < half:
        i -= 1
    if y[i] < half:
        raise NoDipError("half-recovery level is never reached on the left shoulder")
    x_left = float(np.interp(half, [y[i + 1], y[i]], [x[i + 1], x[i]]))
    i = im
    while i < n - 1 and y[i] < half:
        i += 1
    if y[i] < half:
        raise NoDipError("half-recovery level is never reached on the right shoulder")
    x_right = float(np.interp(half, [y[i - 1], y[i]], [x[i - 1], x[i]]))

    return DipMetrics(
        center=float(x[im]),
        fwhm=x_right - x_left,
        depth=float(depth),
        baseline=float(baseline),
        minimum=float(minimum),
    )
