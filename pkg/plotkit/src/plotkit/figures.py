"""The three figure kinds, built from solver CSV artifacts.

Everything here is presentation: numbers are taken from the input tables
as-is, never recomputed.  Ray paths in the trajectories figure are drawn
as parabolas matched to the tabulated entry and exit points, which is a
display convention (a uniformly bending ray), not a solution of anything.

Rendering is deterministic: the Agg backend, pinned rc parameters, a
fixed ``svg.hashsalt``, and no timestamps in file metadata mean the same
inputs produce byte-identical PNG and SVG output.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .errors import PlotkitError
from .reader import load_dip_summary, load_table, sniff_kind

KINDS = ("spectrum", "soliton_map", "trajectories")

_RC = {
    "figure.figsize": (7.0, 4.5),
    "figure.dpi": 100,
    "savefig.dpi": 100,
    "font.size": 10,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "svg.hashsalt": "plotkit",
}

# One fixed color per bend direction reported by the sweep.
_DIRECTION_COLORS = {
    "left": "#1f77b4",
    "right": "#d62728",
    "straight": "#444444",
}


@dataclass(frozen=True)
class FigureSpec:
    """What to draw: a kind, its input files, and the output path."""

    kind: str
    inputs: tuple[str, ...]
    out: str
    title: str | None = None
    xlim: tuple[float, float] | None = None
    ylim: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise PlotkitError(
                f"unknown figure kind {self.kind!r} (choose from: {', '.join(KINDS)})"
            )
        if not self.inputs:
            raise PlotkitError("at least one input file is required")
        suffix = Path(self.out).suffix.lower()
        if suffix not in (".png", ".svg"):
            raise PlotkitError(
                f"output must end in .png or .svg, got {self.out!r}"
            )


def _split_inputs(spec: FigureSpec) -> tuple[list[str], list[str]]:
    """Separate CSV inputs from JSON sidecars, preserving order."""
    csvs = [p for p in spec.inputs if not p.lower().endswith(".json")]
    jsons = [p for p in spec.inputs if p.lower().endswith(".json")]
    return csvs, jsons


def _build_spectrum(spec: FigureSpec, ax: plt.Axes) -> None:
    csvs, jsons = _split_inputs(spec)
    if len(csvs) != 1:
        raise PlotkitError(
            f"spectrum takes exactly one CSV input, got {len(csvs)}"
        )
    if len(jsons) > 1:
        raise PlotkitError(
            f"spectrum takes at most one JSON dip summary, got {len(jsons)}"
        )
    kind = sniff_kind(csvs[0])
    if kind != "spectrum":
        raise PlotkitError(f"{csvs[0]}: expected a spectrum table, found {kind!r}")
    table = load_table(csvs[0], "spectrum")
    delta = table["delta"]
    absorption = np.abs(table["im_chi"])

    (line,) = ax.plot(delta, absorption, color="#1f77b4", lw=1.5,
                      label=r"$|\mathrm{Im}\,\chi|$")
    line.set_gid("absorption")
    (disp,) = ax.plot(delta, table["re_chi"], color="#ff7f0e", lw=1.0, ls="--",
                      label=r"$\mathrm{Re}\,\chi$")
    disp.set_gid("dispersion")

    if jsons:
        dip = load_dip_summary(jsons[0])
        center_line = ax.axvline(dip["center"], color="#555555", ls=":", lw=1.0)
        center_line.set_gid("dip-center")
        half_level = dip["minimum"] + 0.5 * dip["depth"]
        (fwhm_line,) = ax.plot(
            [dip["center"] - 0.5 * dip["fwhm"], dip["center"] + 0.5 * dip["fwhm"]],
            [half_level, half_level],
            color="#2ca02c", lw=2.0, marker="|", ms=8,
        )
        fwhm_line.set_gid("dip-fwhm")
        note = ax.annotate(
            f"dip at {dip['center']:.3g}\nFWHM {dip['fwhm']:.3g}",
            xy=(dip["center"] + 0.5 * dip["fwhm"], half_level),
            xytext=(6, 4), textcoords="offset points", fontsize=9,
        )
        note.set_gid("dip-note")

    ax.set_xlabel(r"beat detuning $\delta$")
    ax.set_ylabel(r"probe susceptibility $\chi$")
    ax.legend(loc="upper right")
    ax.set_title(spec.title or "probe absorption spectrum")


def _build_soliton_map(spec: FigureSpec, ax: plt.Axes) -> None:
    csvs, jsons = _split_inputs(spec)
    if jsons:
        raise PlotkitError("soliton_map takes no JSON inputs")
    if len(csvs) < 2:
        raise PlotkitError(
            f"soliton_map needs at least two snapshot CSVs in order, got {len(csvs)}"
        )
    x_ref: np.ndarray | None = None
    rows = []
    for path in csvs:
        kind = sniff_kind(path)
        if kind != "field":
            raise PlotkitError(f"{path}: expected a field table, found {kind!r}")
        table = load_table(path, "field")
        x = np.asarray(table["x"])
        if x_ref is None:
            x_ref = x
        elif x.shape != x_ref.shape or not np.array_equal(x, x_ref):
            raise PlotkitError(
                f"{path}: grid differs from {csvs[0]}; snapshots must share one grid"
            )
        rows.append(np.sqrt(np.asarray(table["abs2"])))
    amp = np.vstack(rows)

    if spec.xlim is None:
        # Crop the flat tails so the channel fills the frame.
        occupied = np.nonzero(amp.max(axis=0) > 0.01 * amp.max())[0]
        lo = max(float(x_ref[occupied[0]]) - 2.0, float(x_ref[0]))
        hi = min(float(x_ref[occupied[-1]]) + 2.0, float(x_ref[-1]))
    else:
        lo, hi = spec.xlim

    image = ax.imshow(
        amp,
        origin="lower",
        aspect="auto",
        extent=(float(x_ref[0]), float(x_ref[-1]), 0.0, 1.0),
        cmap="magma",
        interpolation="nearest",
    )
    image.set_gid("stability-map")
    ax.figure.colorbar(image, ax=ax, label=r"$|\Omega_c|$")
    ax.set_xlim(lo, hi)
    ax.set_xlabel(r"transverse position $x$")
    ax.set_ylabel(r"propagation fraction $z/z_\mathrm{end}$")
    ax.grid(False)
    ax.set_title(spec.title or "control-field stability map")


def _build_trajectories(spec: FigureSpec, ax: plt.Axes) -> None:
    csvs, jsons = _split_inputs(spec)
    if jsons:
        raise PlotkitError("trajectories takes no JSON inputs")
    if len(csvs) != 2:
        raise PlotkitError(
            f"trajectories needs a sweep CSV and a control-profile CSV, got {len(csvs)} files"
        )
    by_kind = {sniff_kind(path): path for path in csvs}
    if set(by_kind) != {"sweep", "field"}:
        raise PlotkitError(
            "trajectories needs one sweep table and one field table, got: "
            + ", ".join(sorted(sniff_kind(p) for p in csvs))
        )
    sweep = load_table(by_kind["sweep"], "sweep")
    profile = load_table(by_kind["field"], "field")

    zeta = np.linspace(0.0, 1.0, 201)
    seen_labels: set[str] = set()
    max_reach = 0.0
    for a, x_exit, direction in zip(
        sweep["a"], sweep["x_numeric"], sweep["direction"]
    ):
        if not np.isfinite(x_exit):
            continue
        # Display convention: a uniformly bending ray through the two
        # tabulated points, entry (a, 0) and exit (x_exit, 1).
        ray = a + (x_exit - a) * zeta**2
        color = _DIRECTION_COLORS.get(direction, "#999999")
        label = direction if direction not in seen_labels else None
        seen_labels.add(direction)
        if direction == "straight":
            (line,) = ax.plot(ray, zeta, color=color, ls="--", lw=1.2, label=label)
            line.set_gid("centerline")
        else:
            (line,) = ax.plot(ray, zeta, color=color, lw=1.5, label=label)
            line.set_gid("ray")
        max_reach = max(max_reach, abs(float(a)), abs(float(x_exit)))

    finite = np.isfinite(np.asarray(sweep["x_numeric"]))
    pts = ax.scatter(
        np.asarray(sweep["x_numeric"])[finite],
        np.ones(int(finite.sum())),
        s=18, color="#111111", zorder=3, label="numeric exit",
    )
    pts.set_gid("endpoint")
    ref = ax.scatter(
        np.asarray(sweep["x_analytic"])[finite],
        np.ones(int(finite.sum())),
        s=60, facecolors="none", edgecolors="#666666", zorder=3,
        label="analytic exit",
    )
    ref.set_gid("endpoint-analytic")

    x = np.asarray(profile["x"])
    amp = np.sqrt(np.asarray(profile["abs2"]))
    peak = float(amp.max())
    if peak > 0.0:
        scaled = 0.15 * amp / peak
        (overlay,) = ax.plot(x, scaled, color="#2ca02c", lw=2.0,
                             label="control profile")
        overlay.set_gid("control-profile")
        fill = ax.fill_between(x, 0.0, scaled, color="#2ca02c", alpha=0.2)
        fill.set_gid("control-profile-fill")
        half = np.nonzero(amp >= 0.5 * peak)[0]
        half_width = 0.5 * float(x[half[-1]] - x[half[0]])
    else:
        half_width = 1.0

    if spec.xlim is None:
        reach = max(3.0 * max_reach, 2.0 * half_width)
        ax.set_xlim(-reach, reach)
    ax.set_ylim(spec.ylim if spec.ylim is not None else (0.0, 1.05))
    ax.set_xlabel(r"transverse position $x$")
    ax.set_ylabel(r"propagation fraction $z/L$")
    ax.legend(loc="upper left", fontsize=8)
    ax.set_title(spec.title or "probe deflection across the control channel")


_BUILDERS = {
    "spectrum": _build_spectrum,
    "soliton_map": _build_soliton_map,
    "trajectories": _build_trajectories,
}


def build_figure(spec: FigureSpec) -> plt.Figure:
    """Build the figure in memory; callers own closing it."""
    with plt.rc_context(_RC):
        fig, ax = plt.subplots()
        try:
            _BUILDERS[spec.kind](spec, ax)
            if spec.xlim is not None:
                ax.set_xlim(spec.xlim)
            if spec.ylim is not None:
                ax.set_ylim(spec.ylim)
            fig.tight_layout()
        except Exception:
            plt.close(fig)
            raise
    return fig


def render(spec: FigureSpec) -> Path:
    """Build the figure and write it to ``spec.out``; returns the path."""
    fig = build_figure(spec)
    out = Path(spec.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    try:
        with plt.rc_context(_RC):
            if out.suffix.lower() == ".svg":
                # A fixed hashsalt pins the generated element ids; dropping
                # the date stamp makes reruns byte-identical.
                fig.savefig(out, format="svg", metadata={"Date": None})
            else:
                fig.savefig(out, format="png")
    finally:
        plt.close(fig)
    return out
