"""Entry point: plots <kind> <input_csv> <output_image>."""

from __future__ import annotations

import argparse
import sys

from .figures import KINDS, FigureSpec, SchemaError, render


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plots",
        description="Render a dbspsim results.csv as a Pareto front or s-curve figure.",
    )
    parser.add_argument("kind", choices=KINDS, help="figure kind")
    parser.add_argument("input_csv", help="results.csv produced by a dbspsim sweep")
    parser.add_argument("output_image", help="output path ending in .png or .svg")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    suffix = args.output_image.rsplit(".", 1)[-1].lower() if "." in args.output_image else ""
    try:
        spec = FigureSpec(
            input_csv=args.input_csv,
            kind=args.kind,
            output_path=args.output_image,
            image_format=suffix,
        )
        render(spec)
    except (SchemaError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(args.output_image)
    return 0


if __name__ == "__main__":
    sys.exit(main())
