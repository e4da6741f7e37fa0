"""Command line: plotkit [--mode raw|normalized] [--label ...] --out FIG inputs..."""

import argparse
import sys
from pathlib import Path

from .render import MODES, FigureSpec, render_figures


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="plotkit", description=__doc__)
    parser.add_argument("inputs", nargs="+", type=Path, help="regret-curve CSV files")
    parser.add_argument("--out", type=Path, required=True, help="output image path")
    parser.add_argument("--mode", choices=MODES, default="normalized")
    parser.add_argument("--label", action="append", default=[],
                        help="series label, once per input (default: file stems)")
    args = parser.parse_args(argv)
    try:
        spec = FigureSpec(inputs=args.inputs, output=args.out, mode=args.mode,
                          labels=list(args.label))
        summary = render_figures(spec)
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    print(f"wrote {summary['output']} ({len(summary['series'])} series, "
          f"{summary['bound_overlays']} bound overlays)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
