"""Split-step Fourier beam propagation for the control and probe envelopes.

Both envelopes obey paraxial equations of Schrodinger form in the
propagation distance z,

    i dpsi/dz = P^2/(2 k) psi + G(x, |psi|^2) psi,      P = -i d/dx,

with G = alpha_c / (1 + 2 beta |psi|^2) for the saturable control model,
G = alpha_c (1 - 2 beta |psi|^2) for its cubic truncation, and the static
G = V(x) / c for the probe riding a frozen control profile.  The integrator
is Strang-split: half a kinetic step in Fourier space, a full potential
step in real space, half a kinetic step.  Every factor is a pure phase, so
the L2 norm is conserved to roundoff; the scheme is second order in dz,
and for a potential that is exactly linear in x the endpoint centroid is
reproduced to roundoff (the splitting error commutes into phase there,
which is what makes the constant-force law a usable oracle).

The FFT imposes periodic boundaries, so fields must stay negligible at the
box edges; a leak guard aborts the run rather than let wrap-around
contaminate the result.
"""

from __future__ import annotations

import dataclasses
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .bloch import AtomParams
from .errors import (
    BoundaryContaminationError,
    ConfigurationError,
    CpoError,
    NumericalDivergenceError,
    UndefinedCentroidError,
    UnderResolvedError,
)
from .medium import (
    MediumCoefficients,
    derive_coefficients,
    linearized_potential,
    probe_potential,
    soliton_profile,
)
from .weinorman import trajectory_endpoint

__all__ = [
    "TransverseGrid",
    "ComplexField1D",
    "BeamDiagnostics",
    "DeflectionSetup",
    "DeflectionRecord",
    "make_gaussian",
    "beam_diagnostics",
    "propagate_control",
    "propagate_probe",
    "classify_direction",
    "deflection_experiment",
]

_EDGE_TOL = 1e-6
_CHECK_EVERY = 25
_CONTROL_MODELS = ("saturable", "cubic")
_PROBE_POTENTIALS = ("full", "linearized")


@dataclass(frozen=True)
class TransverseGrid:
    """Uniform periodic grid of n points on [x_min, x_max), n a power of two >= 64."""

    n: int
    x_min: float
    x_max: float

    def __post_init__(self) -> None:
        if self.n < 64 or (self.n & (self.n - 1)) != 0:
            raise ConfigurationError("grid size n must be a power of two >= 64")
        if not (self.x_max > self.x_min):
            raise ConfigurationError("x_max must exceed x_min")

    @classmethod
    def centered(cls, half_width: float, n: int) -> "TransverseGrid":
        return cls(n=n, x_min=-half_width, x_max=half_width)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """FFT wavenumbers matching numpy's transform ordering."""
        return 2 * math.pi * np.fft.fftfreq(self.n, d=self.dx)


@dataclass(frozen=True)
class ComplexField1D:
    """A complex envelope sampled on a grid at propagation distance z."""

    grid: TransverseGrid
    values: np.ndarray
    z: float = 0.0

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        if values.shape != (self.grid.n,):
            raise ConfigurationError("field values must match the grid size")
        if not np.all(np.isfinite(values.view(float))):
            raise NumericalDivergenceError("field contains non-finite samples")
        object.__setattr__(self, "values", values.copy())


@dataclass(frozen=True)
class BeamDiagnostics:
    """Intensity-weighted moments of a field: norm, centroid, rms width, peak."""

    norm: float
    centroid: float
    rms_width: float
    peak_position: float
    peak_amplitude: float


def make_gaussian(
    grid: TransverseGrid,
    center: float,
    width: float,
    momentum: float = 0.0,
    normalize: bool = True,
) -> ComplexField1D:
    """Gaussian envelope exp(-(x-center)^2/width^2 + i momentum (x-center)).

    width is the amplitude 1/e half-width; it must span at least four grid
    cells or the kinetic phase is aliased.
    """
    if width < 4 * grid.dx:
        raise UnderResolvedError(
            f"beam width {width:.4g} below 4 dx = {4 * grid.dx:.4g}; refine the grid"
        )
    if not (grid.x_min < center < grid.x_max):
        raise ConfigurationError("beam center lies outside the grid")
    dx_rel = grid.x - center
    values = np.exp(-(dx_rel**2) / width**2 + 1j * momentum * dx_rel)
    if normalize:
        values /= math.sqrt(float(np.sum(np.abs(values) ** 2)) * grid.dx)
    return ComplexField1D(grid=grid, values=values, z=0.0)


def beam_diagnostics(field: ComplexField1D) -> BeamDiagnostics:
    intensity = np.abs(field.values) ** 2
    total = float(np.sum(intensity))
    if total <= 0 or not math.isfinite(total):
        raise UndefinedCentroidError("field carries no usable intensity")
    x = field.grid.x
    centroid = float(np.sum(x * intensity) / total)
    rms = math.sqrt(max(float(np.sum((x - centroid) ** 2 * intensity) / total), 0.0))
    peak = int(np.argmax(intensity))
    return BeamDiagnostics(
        norm=math.sqrt(total * field.grid.dx),
        centroid=centroid,
        rms_width=rms,
        peak_position=float(x[peak]),
        peak_amplitude=float(math.sqrt(intensity[peak])),
    )


def _edge_leak(values: np.ndarray) -> float:
    peak = float(np.max(np.abs(values)))
    if peak == 0:
        return 0.0
    return max(abs(values[0]), abs(values[-1])) / peak


def _split_step_run(
    field: ComplexField1D,
    mass: float,
    phase_of,
    z_target: float,
    dz: float,
    label: str,
) -> ComplexField1D:
    """Strang-split drive of one envelope from field.z to z_target.

    phase_of(values) returns the real potential array G(x, |values|^2); each
    step applies exp(-i k^2 dz / (4 mass)) in Fourier space on both sides of
    exp(-i G dz) in real space.
    """
    span = z_target - field.z
    if span <= 0:
        raise ConfigurationError("z_target must lie beyond the field's current z")
    if dz <= 0:
        raise ConfigurationError("dz must be > 0")
    n_steps = max(1, math.ceil(span / dz - 1e-12))
    h = span / n_steps

    if _edge_leak(field.values) > _EDGE_TOL:
        raise BoundaryContaminationError(
            f"{label}: initial field exceeds {_EDGE_TOL:.0e} of peak at the box edge"
        )

    k2 = field.grid.k**2
    half_kinetic = np.exp(-1j * k2 * h / (4 * mass))
    psi = field.values.copy()
    for step in range(n_steps):
        psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
        psi *= np.exp(-1j * phase_of(psi) * h)
        psi = np.fft.ifft(half_kinetic * np.fft.fft(psi))
        if (step + 1) % _CHECK_EVERY == 0 or step + 1 == n_steps:
            if not np.all(np.isfinite(psi.view(float))):
                raise NumericalDivergenceError(f"{label}: field diverged at step {step + 1}")
            if _edge_leak(psi) > _EDGE_TOL:
                raise BoundaryContaminationError(
                    f"{label}: field leaked past {_EDGE_TOL:.0e} of peak at the box edge "
                    f"(z = {field.z + (step + 1) * h:.4g})"
                )
    return ComplexField1D(grid=field.grid, values=psi, z=z_target)


def propagate_control(
    field: ComplexField1D,
    coeffs: MediumCoefficients,
    z_target: float,
    dz: float | None = None,
    model: str = "saturable",
) -> ComplexField1D:
    """Advance the control envelope to z_target under the chosen nonlinearity."""
    if model not in _CONTROL_MODELS:
        raise ConfigurationError(f"unknown control model {model!r}; pick from {_CONTROL_MODELS}")
    if field.grid.width < 8 * coeffs.l_c:
        raise ConfigurationError(
            f"grid width {field.grid.width:.4g} under 8 l_c = {8 * coeffs.l_c:.4g}; "
            "the soliton tails would touch the box edge"
        )
    if dz is None:
        # fine enough that splitting-error radiation stays below the edge
        # guard on a 16 l_c half-width box over z = 10/|alpha_c|
        dz = 0.005 / max(abs(coeffs.alpha_c), 1e-300)
    if dz * abs(coeffs.alpha_c) >= 0.1:
        raise ConfigurationError(
            f"dz * |alpha_c| = {dz * abs(coeffs.alpha_c):.3g} >= 0.1; reduce dz"
        )

    ac, beta = coeffs.alpha_c, coeffs.beta
    if model == "saturable":
        def phase_of(psi: np.ndarray) -> np.ndarray:
            return ac / (1 + 2 * beta * np.abs(psi) ** 2)
    else:
        def phase_of(psi: np.ndarray) -> np.ndarray:
            return ac * (1 - 2 * beta * np.abs(psi) ** 2)

    return _split_step_run(field, coeffs.k_c, phase_of, z_target, dz, f"control/{model}")


def propagate_probe(
    field: ComplexField1D,
    coeffs: MediumCoefficients,
    z_target: float,
    dz: float | None = None,
    potential: str = "full",
    control: np.ndarray | None = None,
    eta=None,
) -> ComplexField1D:
    """Advance the probe envelope through the frozen control-dressed medium.

    potential = "full" uses V(x) built from the control profile (the analytic
    soliton when ``control`` is not given); "linearized" uses the tangent-line
    potential ``eta`` and requires the probe to start narrower than the
    soliton core, since that is the regime in which the tangent line means
    anything.
    """
    if potential not in _PROBE_POTENTIALS:
        raise ConfigurationError(
            f"unknown probe potential {potential!r}; pick from {_PROBE_POTENTIALS}"
        )
    x = field.grid.x
    if potential == "full":
        if control is None:
            control = soliton_profile(x, 0.0, coeffs).astype(complex)
        g = probe_potential(x, coeffs, control) / coeffs.c
    else:
        if eta is None:
            raise ConfigurationError("linearized propagation needs the eta coefficients")
        start = beam_diagnostics(field)
        if 2 * start.rms_width > coeffs.l_c * (1 + 1e-9):
            raise ConfigurationError(
                f"probe width {2 * start.rms_width:.4g} exceeds the soliton core l_c = "
                f"{coeffs.l_c:.4g}; the linearized potential is not trustworthy"
            )
        g = (eta.eta0 + eta.eta1 * (x - eta.a)) / coeffs.c

    g_scale = float(np.max(np.abs(g)))
    if dz is None:
        span = z_target - field.z
        dz = min(span / 200, 0.05 / max(g_scale, 1e-300)) if span > 0 else 1.0
    if dz * g_scale >= 0.1:
        raise ConfigurationError(f"dz * max|V|/c = {dz * g_scale:.3g} >= 0.1; reduce dz")

    g_arr = g

    def phase_of(_psi: np.ndarray) -> np.ndarray:
        return g_arr

    return _split_step_run(field, coeffs.k_p, phase_of, z_target, dz, f"probe/{potential}")


def classify_direction(shift: float, dx: float) -> str:
    """Label a centroid shift as left/right/straight with the grid cell as deadband."""
    if abs(shift) < dx:
        return "straight"
    return "left" if shift < 0 else "right"


@dataclass(frozen=True)
class DeflectionSetup:
    """Fixed apparatus for a deflection sweep: microscopic couplings, optics, grid, beam.

    Couplings (not alphas) are held fixed so that sweeping the detuning
    re-derives the propagation coefficients per cell with the correct signs.
    """

    atom_template: AtomParams
    coupling_c: float
    coupling_p: float
    atom_line_density: float
    k_c: float
    k_p: float
    grid: TransverseGrid
    beam_width: float
    length: float
    c: float = 1.0
    dz_probe: float | None = None


@dataclass(frozen=True)
class DeflectionRecord:
    """One sweep cell: numeric, linearized and analytic exit centroids plus direction."""

    a: float
    delta_c: float
    x_numeric: float
    x_linearized: float
    x_analytic: float
    direction: str
    failure: str | None = None


def _deflection_cell(args: tuple[DeflectionSetup, float, float]) -> DeflectionRecord:
    setup, a, delta_c = args
    try:
        params = dataclasses.replace(setup.atom_template, delta_c=delta_c)
        coeffs = derive_coefficients(
            params,
            k_c=setup.k_c,
            k_p=setup.k_p,
            c=setup.c,
            coupling_c=setup.coupling_c,
            coupling_p=setup.coupling_p,
            atom_line_density=setup.atom_line_density,
        )
        eta = linearized_potential(a, coeffs)
        probe = make_gaussian(setup.grid, a, setup.beam_width)
        full = propagate_probe(
            probe, coeffs, setup.length, dz=setup.dz_probe, potential="full"
        )
        linear = propagate_probe(
            probe, coeffs, setup.length, dz=setup.dz_probe, potential="linearized", eta=eta
        )
        x_numeric = beam_diagnostics(full).centroid
        x_linearized = beam_diagnostics(linear).centroid
        x_analytic, _ = trajectory_endpoint(a, eta.eta1, setup.length, setup.k_p, setup.c)
        return DeflectionRecord(
            a=a,
            delta_c=delta_c,
            x_numeric=x_numeric,
            x_linearized=x_linearized,
            x_analytic=x_analytic,
            direction=classify_direction(x_numeric - a, setup.grid.dx),
        )
    except (CpoError, FloatingPointError) as exc:
        nan = float("nan")
        return DeflectionRecord(
            a=a, delta_c=delta_c, x_numeric=nan, x_linearized=nan, x_analytic=nan,
            direction="failed", failure=f"{type(exc).__name__}: {exc}",
        )


def deflection_experiment(
    setup: DeflectionSetup,
    a_values,
    delta_values,
    jobs: int = 1,
) -> list[DeflectionRecord]:
    """Run the (a, delta) deflection matrix; cell order is row-major and stable.

    Failed cells are recorded with a failure note instead of aborting the
    sweep.  jobs > 1 fans cells over processes; results keep the same order
    either way.
    """
    if jobs < 1:
        raise ConfigurationError("jobs must be >= 1")
    cells = [(setup, float(a), float(d)) for a in a_values for d in delta_values]
    if jobs == 1 or len(cells) <= 1:
        return [_deflection_cell(cell) for cell in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_deflection_cell, cells))
