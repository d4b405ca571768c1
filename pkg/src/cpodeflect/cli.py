"""Command-line entry point.

    cpodeflect <scenario> [--config FILE] [--override section.key=value ...]
                          [--out DIR] [--jobs N]

Scenarios: spectrum, soliton, deflect, sweep, wn-check.  Exit status is 0
when every embedded check passes, 2 when the run completed but a check
failed, and 1 on configuration or runtime errors.
"""

from __future__ import annotations

import argparse
import sys

from .config import SCENARIOS, load_config
from .errors import CpoError
from .runner import run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cpodeflect",
        description="Slow-light probe deflection scenarios: atomic response, "
        "soliton propagation, deflection sweeps and packet-evolution checks.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True, metavar="scenario")
    for name in SCENARIOS:
        s = sub.add_parser(name, help=f"run the {name} scenario")
        s.add_argument("--config", default=None, help="INI configuration file")
        s.add_argument(
            "--override",
            action="append",
            default=[],
            metavar="SECTION.KEY=VALUE",
            help="override one config value (repeatable)",
        )
        s.add_argument(
            "--out",
            default=None,
            help="output directory (default: the config's [output] dir, i.e. ./out)",
        )
        s.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, scenario=args.scenario, overrides=args.override)
        out_dir = args.out if args.out is not None else cfg.get("output", "dir")
        report = run_scenario(cfg, out_dir, jobs=args.jobs)
    except CpoError as exc:
        print(f"error [{args.scenario}]: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error [{args.scenario}]: {exc}", file=sys.stderr)
        return 1

    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        line = f"[{status}] {check.name}: value = {check.value:.6g}"
        if check.detail.startswith("expected in"):
            line += f" ({check.detail})"
        else:
            line += f" (tolerance {check.tolerance:.6g})"
        print(line)
    n_pass = sum(c.passed for c in report.checks)
    print(f"{report.scenario}: {n_pass}/{len(report.checks)} checks passed; "
          f"artifacts in {out_dir}")
    return 0 if report.passed else 2


if __name__ == "__main__":
    sys.exit(main())
