"""Command line entry point: ``plotkit render``."""

from __future__ import annotations

import argparse
import sys

from .errors import PlotkitError
from .figures import KINDS, FigureSpec, render


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plotkit",
        description="Render figures from solver CSV artifacts.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    rend = sub.add_parser("render", help="render one figure from CSV inputs")
    rend.add_argument("--kind", required=True, choices=KINDS,
                      help="which figure to draw")
    rend.add_argument("--in", dest="inputs", required=True, nargs="+",
                      metavar="FILE",
                      help="input files; CSV tables, plus an optional dip "
                           "summary JSON for the spectrum kind")
    rend.add_argument("--out", required=True,
                      help="output image path (.png or .svg)")
    rend.add_argument("--title", default=None, help="override the figure title")
    rend.add_argument("--xlim", nargs=2, type=float, default=None,
                      metavar=("LO", "HI"), help="x-axis range")
    rend.add_argument("--ylim", nargs=2, type=float, default=None,
                      metavar=("LO", "HI"), help="y-axis range")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        spec = FigureSpec(
            kind=args.kind,
            inputs=tuple(args.inputs),
            out=args.out,
            title=args.title,
            xlim=tuple(args.xlim) if args.xlim is not None else None,
            ylim=tuple(args.ylim) if args.ylim is not None else None,
        )
        out = render(spec)
    except PlotkitError as exc:
        print(f"plotkit: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"plotkit: error: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
