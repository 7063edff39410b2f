"""Command-line front end.

Exit codes: 0 success, 1 file I/O failure, 2 invalid input or arguments,
3 unexpected internal error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .backends import MODEL_CAPACITIES, select_backend
from .convert import CONVERT_FORMATS, convert_ground_truth, write_notes_csv
from .extract import AdapterError, extract_features, write_f0_csv, write_metadata


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="crepe-adapter",
        description="Extract 10 ms f0/confidence CSVs from audio and "
        "convert ground-truth annotations to the notes CSV schema.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    extract = sub.add_parser(
        "extract", help="run the pitch tracker over WAV files"
    )
    extract.add_argument(
        "--model", choices=MODEL_CAPACITIES, default="full",
        help="model capacity for neural backends (default: full)",
    )
    extract.add_argument("--out", required=True, help="output directory")
    extract.add_argument("files", nargs="+", help="WAV files to process")

    convert = sub.add_parser(
        "convert", help="convert ground-truth annotations to notes CSV"
    )
    convert.add_argument(
        "--format", choices=CONVERT_FORMATS, required=True,
        help="annotation format of the input files",
    )
    convert.add_argument("--out", required=True, help="output directory")
    convert.add_argument("files", nargs="+", help="annotation files to process")
    return parser


def cmd_extract(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    backend = select_backend()
    print(
        f"backend: {backend.name} {backend.version} (model: {args.model})",
        file=sys.stderr,
    )
    for name in args.files:
        result = extract_features(name, args.model, backend)
        stem = Path(name).stem
        csv_path = out / f"{stem}.f0.csv"
        write_f0_csv(result, csv_path)
        write_metadata(result, out / f"{stem}.f0.meta.json")
        print(csv_path)
    return 0


def cmd_convert(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in args.files:
        notes = convert_ground_truth(name, args.format)
        path = out / f"{Path(name).stem}.notes.csv"
        write_notes_csv(notes, path)
        print(path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "extract":
            return cmd_extract(args)
        return cmd_convert(args)
    except AdapterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
