"""Command line entry point: render a compare manifest to an image file."""

import argparse
import sys

from .render import SchemaError, render_compare


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="oqsim-render",
        description="Render the 8-panel comparison figure from a compare manifest.",
    )
    parser.add_argument("--manifest", required=True, help="path to manifest.yaml")
    parser.add_argument("--out", required=True, help="output image path (png, pdf, ...)")
    parser.add_argument("--coherences", nargs=2, type=int, metavar=("I", "J"),
                        help="additionally plot |rho_IJ| in every panel")
    args = parser.parse_args(argv)

    try:
        statuses = render_compare(args.manifest, args.out, coherences=args.coherences)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    missing = {k: v for k, v in statuses.items() if v != "ok"}
    for label in sorted(statuses):
        print(f"panel {label}: {statuses[label]}")
    print(f"wrote {args.out}")
    return 1 if missing else 0


if __name__ == "__main__":
    sys.exit(main())
