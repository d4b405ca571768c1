"""Typed INI configuration for the scenario runner.

One file drives every scenario.  All keys are optional except that the
[atom] section itself must be present; every omitted key falls back to a
recorded default so a run's metadata always states the complete parameter
set actually used.  Unknown sections or keys are hard errors, as is a
scenario name in the file that contradicts the one requested on the
command line.

Example:

    [atom]
    gamma1 = 0.01
    gamma2 = 1.0
    delta_c = -10.0

    [beam]
    a = 0.2

Overrides of the form ``section.key=value`` are applied on top of the file
before validation, so a sweep can be re-pointed without editing it.
"""

from __future__ import annotations

import configparser
import math
from dataclasses import dataclass, field

from .bloch import AtomParams
from .errors import ConfigurationError
from .medium import MediumCoefficients, couplings_from_alphas, derive_coefficients
from .propagation import DeflectionSetup, TransverseGrid

__all__ = ["ScenarioConfig", "parse_config", "load_config", "SCENARIOS", "SCHEMA"]

SCENARIOS = ("spectrum", "soliton", "deflect", "sweep", "wn-check")

# kind: how the raw string parses; default None means "absent unless given"
_F, _I, _S, _FL = "float", "int", "str", "float_list"

SCHEMA: dict[str, dict[str, tuple[str, object]]] = {
    "run": {
        "scenario": (_S, None),
    },
    "atom": {
        "gamma1": (_F, 0.01),
        "gamma2": (_F, 1.0),
        "delta_c": (_F, -10.0),
        "w_eq": (_F, -1.0),
    },
    "drive": {
        "omega_c": (_F, 0.3),
        "omega_c_phase": (_F, 0.0),
        "omega_p": (_F, 1e-4),
    },
    "medium": {
        "alpha_c": (_F, 0.505),
        "alpha_p": (_F, 1000.0),
        "coupling_c": (_F, None),
        "coupling_p": (_F, None),
        "atom_line_density": (_F, None),
        "k_c": (_F, 2.0),
        "k_p": (_F, 2.0),
        "c": (_F, 1.0),
    },
    "grid": {
        "n": (_I, 1024),
        "half_width": (_F, 16.0),
    },
    "beam": {
        "a": (_F, 0.2),
        "b": (_F, 0.2),
        "length": (_F, 0.04),
    },
    "numerics": {
        "dt": (_F, None),
        "dz_control": (_F, None),
        "dz_probe": (_F, None),
        "soliton_z": (_F, None),
        "snapshots": (_I, 9),
        "wn_dt": (_F, None),
        "control_model": (_S, "cubic"),
    },
    "spectrum": {
        "delta_min": (_F, -1.5),
        "delta_max": (_F, 1.5),
        "points": (_I, 1201),
    },
    "sweep": {
        "a_values": (_FL, (-0.2, 0.0, 0.2)),
        "delta_values": (_FL, (-10.0, 10.0)),
    },
    # data formats (column orders, float digits) are pinned by the
    # determinism contract, so only the destination is configurable
    "output": {
        "dir": (_S, "out"),
    },
}


def _parse_value(kind: str, raw: str, where: str):
    raw = raw.strip()
    try:
        if kind == _F:
            value = float(raw)
            if not math.isfinite(value):
                raise ValueError("not finite")
            return value
        if kind == _I:
            return int(raw, 10)
        if kind == _FL:
            parts = [p for p in raw.replace(",", " ").split() if p]
            if not parts:
                raise ValueError("empty list")
            return tuple(float(p) for p in parts)
        return raw
    except ValueError as exc:
        raise ConfigurationError(f"{where}: cannot parse {raw!r} as {kind} ({exc})") from None


@dataclass(frozen=True)
class ScenarioConfig:
    """Fully resolved configuration: every schema key has a value or None."""

    scenario: str
    values: dict = field(repr=False)
    provided: frozenset = field(repr=False)

    def get(self, section: str, key: str):
        return self.values[(section, key)]

    def was_provided(self, section: str, key: str) -> bool:
        return (section, key) in self.provided

    @property
    def defaults_applied(self) -> list[str]:
        return sorted(
            f"{s}.{k}"
            for (s, k), v in self.values.items()
            if (s, k) not in self.provided and v is not None and s != "run"
        )

    def atom_params(self) -> AtomParams:
        return AtomParams(
            gamma1=self.get("atom", "gamma1"),
            gamma2=self.get("atom", "gamma2"),
            delta_c=self.get("atom", "delta_c"),
            w_eq=self.get("atom", "w_eq"),
        )

    def omega_c(self) -> complex:
        mag = self.get("drive", "omega_c")
        phase = self.get("drive", "omega_c_phase")
        return mag * complex(math.cos(phase), math.sin(phase))

    def omega_p(self) -> float:
        return self.get("drive", "omega_p")

    def _coupling_route(self) -> bool:
        return any(
            self.was_provided("medium", k)
            for k in ("coupling_c", "coupling_p", "atom_line_density")
        )

    def medium_coefficients(self, params: AtomParams | None = None) -> MediumCoefficients:
        """Derive coefficients, preferring explicit couplings over default alphas.

        Default alpha values are only used when no coupling key was given, so
        supplying couplings never trips a spurious cross-check against the
        built-in alphas; supplying both explicitly does cross-check them.
        """
        if params is None:
            params = self.atom_params()
        kwargs = dict(
            k_c=self.get("medium", "k_c"),
            k_p=self.get("medium", "k_p"),
            c=self.get("medium", "c"),
        )
        if self._coupling_route():
            for key in ("coupling_c", "coupling_p", "atom_line_density"):
                kwargs[key] = self.get("medium", key)
            if self.was_provided("medium", "alpha_c") or self.was_provided("medium", "alpha_p"):
                kwargs["alpha_c"] = self.get("medium", "alpha_c")
                kwargs["alpha_p"] = self.get("medium", "alpha_p")
        else:
            kwargs["alpha_c"] = self.get("medium", "alpha_c")
            kwargs["alpha_p"] = self.get("medium", "alpha_p")
        return derive_coefficients(params, **kwargs)

    def grid(self) -> TransverseGrid:
        return TransverseGrid.centered(self.get("grid", "half_width"), self.get("grid", "n"))

    def deflection_setup(self) -> DeflectionSetup:
        """Setup with couplings fixed across detunings.

        When only alphas are configured they are inverted to couplings at the
        template detuning (unit line density), so sweep cells at other
        detunings stay on the same physical medium.
        """
        params = self.atom_params()
        if self._coupling_route():
            coupling_c = self.get("medium", "coupling_c")
            coupling_p = self.get("medium", "coupling_p")
            density = self.get("medium", "atom_line_density")
            if None in (coupling_c, coupling_p, density):
                raise ConfigurationError(
                    "coupling_c, coupling_p and atom_line_density must be given together"
                )
        else:
            density = 1.0
            coupling_c, coupling_p = couplings_from_alphas(
                self.get("medium", "alpha_c"),
                self.get("medium", "alpha_p"),
                params,
                c=self.get("medium", "c"),
                atom_line_density=density,
            )
        return DeflectionSetup(
            atom_template=params,
            coupling_c=coupling_c,
            coupling_p=coupling_p,
            atom_line_density=density,
            k_c=self.get("medium", "k_c"),
            k_p=self.get("medium", "k_p"),
            grid=self.grid(),
            beam_width=self.get("beam", "b"),
            length=self.get("beam", "length"),
            c=self.get("medium", "c"),
            dz_probe=self.get("numerics", "dz_probe"),
        )

    def resolved(self) -> dict:
        """Nested plain dict of every resolved value, for run metadata."""
        out: dict[str, dict] = {}
        for (section, key), value in sorted(self.values.items()):
            if value is None:
                continue
            if isinstance(value, tuple):
                value = list(value)
            out.setdefault(section, {})[key] = value
        return out


def parse_config(text: str, scenario: str | None = None, overrides: list[str] | None = None) -> ScenarioConfig:
    """Parse and validate INI text, returning a fully resolved ScenarioConfig.

    ``scenario`` is the subcommand being run; a [run] scenario key in the
    file must agree with it.  Unknown sections/keys and malformed values are
    rejected outright.
    """
    parser = configparser.ConfigParser(interpolation=None)
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigurationError(f"malformed config: {exc}") from None

    if not parser.has_section("atom"):
        raise ConfigurationError("missing required section [atom]")

    for override in overrides or ():
        key_part, sep, raw = override.partition("=")
        if not sep or "." not in key_part:
            raise ConfigurationError(
                f"override {override!r} must look like section.key=value"
            )
        section, _, key = key_part.strip().partition(".")
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key.strip(), raw.strip())

    values: dict = {}
    provided: set = set()
    for section in parser.sections():
        if section not in SCHEMA:
            raise ConfigurationError(
                f"unknown section [{section}]; valid sections: {', '.join(sorted(SCHEMA))}"
            )
        for key, raw in parser.items(section):
            if key not in SCHEMA[section]:
                raise ConfigurationError(
                    f"unknown key {key!r} in [{section}]; valid keys: "
                    f"{', '.join(sorted(SCHEMA[section]))}"
                )
            kind, _default = SCHEMA[section][key]
            values[(section, key)] = _parse_value(kind, raw, f"[{section}] {key}")
            provided.add((section, key))
    for section, keys in SCHEMA.items():
        for key, (_kind, default) in keys.items():
            values.setdefault((section, key), default)

    file_scenario = values[("run", "scenario")]
    if file_scenario is not None and file_scenario not in SCENARIOS:
        raise ConfigurationError(
            f"unknown scenario {file_scenario!r}; valid: {', '.join(SCENARIOS)}"
        )
    if scenario is None:
        scenario = file_scenario
    elif file_scenario is not None and file_scenario != scenario:
        raise ConfigurationError(
            f"config names scenario {file_scenario!r} but {scenario!r} was requested"
        )
    if scenario is None:
        raise ConfigurationError("no scenario given (pass one or set [run] scenario)")
    if scenario not in SCENARIOS:
        raise ConfigurationError(f"unknown scenario {scenario!r}; valid: {', '.join(SCENARIOS)}")

    cfg = ScenarioConfig(scenario=scenario, values=values, provided=frozenset(provided))
    _validate(cfg)
    return cfg


def load_config(path: str | None, scenario: str | None = None, overrides: list[str] | None = None) -> ScenarioConfig:
    """parse_config over a file; with no path, defaults plus overrides."""
    if path is None:
        text = "[atom]\n"
    else:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    return parse_config(text, scenario=scenario, overrides=overrides)


def _validate(cfg: ScenarioConfig) -> None:
    cfg.atom_params()  # parameter invariants fail fast, with their own messages

    for section, key in (
        ("beam", "b"), ("beam", "length"), ("grid", "half_width"),
        ("drive", "omega_c"), ("medium", "k_c"), ("medium", "k_p"), ("medium", "c"),
    ):
        if not (cfg.get(section, key) > 0):
            raise ConfigurationError(f"[{section}] {key} must be > 0")
    if cfg.get("drive", "omega_p") < 0:
        raise ConfigurationError("[drive] omega_p must be >= 0")
    for section, key, minimum in (
        ("numerics", "snapshots", 2), ("spectrum", "points", 5), ("grid", "n", 64),
    ):
        if cfg.get(section, key) < minimum:
            raise ConfigurationError(f"[{section}] {key} must be >= {minimum}")
    for section, key in (
        ("numerics", "dt"), ("numerics", "dz_control"),
        ("numerics", "dz_probe"), ("numerics", "soliton_z"), ("numerics", "wn_dt"),
    ):
        value = cfg.get(section, key)
        if value is not None and not (value > 0):
            raise ConfigurationError(f"[{section}] {key} must be > 0 when given")
    if not (cfg.get("spectrum", "delta_max") > cfg.get("spectrum", "delta_min")):
        raise ConfigurationError("[spectrum] delta_max must exceed delta_min")
    if cfg.get("numerics", "control_model") not in ("cubic", "saturable"):
        raise ConfigurationError("[numerics] control_model must be cubic or saturable")
    if not cfg.get("sweep", "a_values") or not cfg.get("sweep", "delta_values"):
        raise ConfigurationError("[sweep] a_values and delta_values must be non-empty")
    if not cfg.get("output", "dir").strip():
        raise ConfigurationError("[output] dir must be a non-empty path")

    cfg.grid()  # power-of-two and extent checks

    if cfg.scenario in ("soliton", "deflect", "sweep", "wn-check"):
        coeffs = cfg.medium_coefficients()
        if cfg.scenario in ("deflect", "sweep", "wn-check"):
            if not (cfg.get("beam", "b") < coeffs.l_c):
                raise ConfigurationError(
                    f"[beam] b = {cfg.get('beam', 'b'):.4g} must be below the soliton "
                    f"width l_c = {coeffs.l_c:.4g} for the deflection picture to hold"
                )
        if cfg.scenario == "soliton" and coeffs.q <= 0:
            raise ConfigurationError(
                "soliton scenario needs self-focusing (alpha_c > 0, i.e. delta_c < 0)"
            )
