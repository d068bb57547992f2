"""Command line entry point for the parser bridge."""

from __future__ import annotations

import argparse
import sys

from .model import load_model
from .protocol import batch_convert, serve


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="factext-bridge",
        description="Dependency parser bridge speaking the PARSE line protocol",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sv = sub.add_parser("serve", help="answer PARSE requests on stdin until EOF")
    sv.add_argument("--model", default="heuristic", help="model name (default: heuristic)")

    cv = sub.add_parser("convert", help="parse one sentence per line into a CoNLL-U file")
    cv.add_argument("--model", default="heuristic")
    cv.add_argument("--input", required=True, help="text file, one sentence per line")
    cv.add_argument("--output", required=True, help="CoNLL-U file to write")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        model = load_model(args.model)
    except Exception as exc:
        print(f"error: cannot load model {args.model!r}: {exc}", file=sys.stderr)
        return 3
    if args.command == "serve":
        serve(model)
        return 0
    try:
        batch_convert(args.input, args.output, model)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
