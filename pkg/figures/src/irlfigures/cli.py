"""Command line: render --kind {1|2|4} --in file.csv --out file.png.

Exit codes: 0 on success, 2 on a schema mismatch, 1 on any other error.
"""

from __future__ import annotations

import argparse
import sys

from .render import FigureJob, SchemaError, render

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_SCHEMA = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="irlfigures")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("render", help="render one figure from a harness CSV")
    p.add_argument("--kind", type=int, choices=(1, 2, 4), required=True)
    p.add_argument("--in", dest="csv_path", required=True)
    p.add_argument("--out", dest="out_path", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    out = render(FigureJob(csv_path=args.csv_path, kind=args.kind,
                           out_path=args.out_path))
    print(f"wrote {out}")
    return EXIT_OK


def entry() -> None:
    try:
        code = main()
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        code = EXIT_SCHEMA
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_ERROR
    sys.exit(code)


if __name__ == "__main__":
    entry()
