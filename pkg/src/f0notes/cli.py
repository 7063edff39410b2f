"""Command-line interface: transcribe, evaluate, batch, plot-data.

Exit codes: 0 success, 1 I/O failure, 2 invalid input or arguments,
3 internal error.  Threshold flags default to the PipelineConfig values;
a JSON config file named by the F0NOTES_CONFIG environment variable can
override those defaults, and explicit flags override the file.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys

from . import batch as batchmod
from .core import InputError, PipelineConfig
from .evaluate import OFFSET_MODES, evaluate
from .onsets import onset_strength
from .pipeline import boundary_analysis, transcribe_bundle
from .trackio import (
    TrackBundle,
    compute_envelope,
    read_audio,
    read_f0_csv,
    read_notes_any,
    read_onsets_file,
    write_midi,
    write_notes_json,
)

CONFIG_ENV_VAR = "F0NOTES_CONFIG"

_CONFIG_FIELDS = {field.name for field in dataclasses.fields(PipelineConfig)}

# (flag, config field, type, help text with the pinned default)
_THRESHOLD_FLAGS = [
    ("--boundary-threshold", "boundary_threshold", float,
     "peak-picking threshold on the combined boundary signal (default: 0.002)"),
    ("--onset-threshold", "onset_threshold", float,
     "onset-strength threshold for splitting repeated notes (default: 0.7)"),
    ("--velocity-min", "velocity_min", int,
     "drop notes below this MIDI velocity (default: 15)"),
    ("--min-duration-ms", "min_duration_ms", float,
     "drop notes shorter than this many milliseconds (default: 30)"),
    ("--trim-velocity", "trim_velocity", int,
     "amplitude-trim threshold in velocity units (default: 10)"),
    ("--merge-semitones", "merge_semitones", float,
     "merge adjacent segments whose medians differ by less than this (default: 1.0)"),
]

_EVAL_FLAGS = [
    ("--onset-tolerance-ms", "onset_tolerance_ms", float,
     "onset matching tolerance in milliseconds (default: 50)"),
]


def _base_config() -> PipelineConfig:
    """PipelineConfig defaults, overridden by the F0NOTES_CONFIG JSON file."""
    path = os.environ.get(CONFIG_ENV_VAR)
    if not path:
        return PipelineConfig()
    with open(path) as fh:
        try:
            overrides = json.load(fh)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}: invalid JSON in config file: {exc}") from exc
    if not isinstance(overrides, dict):
        raise InputError(f"{path}: config file must hold a JSON object")
    unknown = set(overrides) - _CONFIG_FIELDS
    if unknown:
        raise InputError(
            f"{path}: unknown config keys {sorted(unknown)}; "
            f"valid keys are {sorted(_CONFIG_FIELDS)}"
        )
    return PipelineConfig(**overrides)


def _config_from_args(args) -> PipelineConfig:
    config = _base_config()
    updates = {}
    for _, dest, _, _ in _THRESHOLD_FLAGS + _EVAL_FLAGS:
        value = getattr(args, dest, None)
        if value is None:
            continue
        if dest == "min_duration_ms":
            updates["min_duration_s"] = value / 1000.0
        elif dest == "onset_tolerance_ms":
            updates["eval_onset_tolerance_s"] = value / 1000.0
        else:
            updates[dest] = value
    return dataclasses.replace(config, **updates) if updates else config


def _add_flags(parser, flags):
    for flag, dest, value_type, help_text in flags:
        parser.add_argument(flag, dest=dest, type=value_type, default=None,
                            help=help_text)


def _add_offset_mode(parser):
    parser.add_argument(
        "--offset-mode",
        choices=(*OFFSET_MODES, "both"),
        default="both",
        help="offset handling during matching; 'both' reports the ignore and "
             "tolerance variants side by side (default: both)",
    )


def _selected_modes(args):
    return OFFSET_MODES if args.offset_mode == "both" else (args.offset_mode,)


def _report_dict(report) -> dict:
    return {
        "precision": report.precision,
        "recall": report.recall,
        "f_measure": report.f_measure,
        "avg_overlap": report.avg_overlap,
        "n_matches": len(report.matches),
        "matches": [list(pair) for pair in report.matches],
    }


def _stem(path) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="f0notes",
        description="Convert frame-wise f0/confidence tracks into note events "
                    "and evaluate transcriptions against reference notes.",
        epilog=f"Set {CONFIG_ENV_VAR} to a JSON file to change the threshold "
               "defaults without flags.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_tr = sub.add_parser(
        "transcribe",
        help="turn an f0 CSV (plus audio) into MIDI and JSON note files",
    )
    p_tr.add_argument("f0_csv", help="pitch-tracker CSV: time,frequency,confidence")
    p_tr.add_argument("audio", nargs="?", default=None,
                      help="matching WAV file (omit only with --no-amplitude)")
    p_tr.add_argument("--out", default=".", help="output directory (default: .)")
    _add_flags(p_tr, _THRESHOLD_FLAGS)
    p_tr.add_argument("--onsets-file", default=None,
                      help="use these onset times (one per line, seconds) instead "
                           "of the spectral-flux detector")
    p_tr.add_argument("--no-amplitude", action="store_true",
                      help="skip envelope-based velocity, trimming, and filtering")
    p_tr.set_defaults(func=cmd_transcribe)

    p_ev = sub.add_parser(
        "evaluate",
        help="match estimated notes against a reference and print metrics as JSON",
    )
    p_ev.add_argument("ref_notes", help="reference notes (.csv, .json, or .mid)")
    p_ev.add_argument("est_notes", help="estimated notes (.csv, .json, or .mid)")
    _add_flags(p_ev, _EVAL_FLAGS)
    _add_offset_mode(p_ev)
    p_ev.set_defaults(func=cmd_evaluate)

    p_ba = sub.add_parser(
        "batch",
        help="transcribe and evaluate every track in a manifest CSV",
    )
    p_ba.add_argument("manifest", help="CSV with header f0_csv,audio,ground_truth")
    p_ba.add_argument("--out", default=".",
                      help="directory for batch.csv and batch.json (default: .)")
    p_ba.add_argument("--jobs", type=int, default=1,
                      help="worker processes for per-track parallelism (default: 1)")
    _add_flags(p_ba, _THRESHOLD_FLAGS + _EVAL_FLAGS)
    _add_offset_mode(p_ba)
    p_ba.set_defaults(func=cmd_batch)

    p_pl = sub.add_parser(
        "plot-data",
        help="dump the aligned per-frame series behind boundary detection",
    )
    p_pl.add_argument("f0_csv", help="pitch-tracker CSV: time,frequency,confidence")
    p_pl.add_argument("audio", nargs="?", default=None,
                      help="optional WAV; adds envelope and onset-strength columns")
    p_pl.add_argument("--out", default=".", help="output directory (default: .)")
    _add_flags(p_pl, _THRESHOLD_FLAGS)
    p_pl.set_defaults(func=cmd_plot_data)

    return parser


def cmd_transcribe(args) -> int:
    config = _config_from_args(args)
    if args.audio is None and not args.no_amplitude:
        raise InputError(
            "the amplitude stages need audio; pass a WAV file or --no-amplitude"
        )
    fs = read_f0_csv(args.f0_csv)
    samples = sample_rate = envelope = None
    if args.audio is not None:
        samples, sample_rate = read_audio(args.audio)
        if not args.no_amplitude:
            envelope = compute_envelope(samples, sample_rate, fs.hop_seconds, len(fs))
    onsets_s = read_onsets_file(args.onsets_file) if args.onsets_file else None
    bundle = TrackBundle(
        frame_series=fs, samples=samples, sample_rate=sample_rate, envelope=envelope
    )
    notes, report = transcribe_bundle(bundle, config, onsets_s=onsets_s)

    os.makedirs(args.out, exist_ok=True)
    stem = _stem(args.f0_csv)
    midi_path = os.path.join(args.out, stem + ".mid")
    json_path = os.path.join(args.out, stem + ".notes.json")
    write_midi(notes, midi_path)
    write_notes_json(notes, json_path)
    print(
        f"notes in: {report.notes_in}  dropped (velocity): {report.dropped_velocity}  "
        f"dropped (duration): {report.dropped_duration}  "
        f"dropped (trim): {report.dropped_empty_after_trim}  "
        f"notes out: {report.notes_out}",
        file=sys.stderr,
    )
    print(midi_path)
    print(json_path)
    return 0


def cmd_evaluate(args) -> int:
    config = _config_from_args(args)
    ref = read_notes_any(args.ref_notes)
    est = read_notes_any(args.est_notes)
    modes = _selected_modes(args)
    payload = {
        "ref_file": args.ref_notes,
        "est_file": args.est_notes,
        "n_ref": len(ref),
        "n_est": len(est),
        "modes": {
            mode: _report_dict(evaluate(ref, est, config, offset_mode=mode))
            for mode in modes
        },
    }
    json.dump(payload, sys.stdout, indent=2)
    print()
    return 0


def cmd_batch(args) -> int:
    config = _config_from_args(args)
    if args.jobs < 1:
        raise InputError("--jobs must be at least 1")
    result = batchmod.run_batch(
        args.manifest, config, offset_modes=_selected_modes(args), jobs=args.jobs
    )
    os.makedirs(args.out, exist_ok=True)
    csv_path = os.path.join(args.out, "batch.csv")
    json_path = os.path.join(args.out, "batch.json")
    batchmod.write_batch_csv(result, csv_path)
    batchmod.write_batch_json(result, json_path)
    for row in result.rows:
        if not row.ok:
            print(f"warning: track {row.index} failed: {row.error}", file=sys.stderr)
    if result.n_failed:
        print(f"warning: {result.n_failed} track(s) excluded from means", file=sys.stderr)
    print(batchmod.format_summary(result))
    print(csv_path, file=sys.stderr)
    print(json_path, file=sys.stderr)
    return 0


def cmd_plot_data(args) -> int:
    config = _config_from_args(args)
    fs = read_f0_csv(args.f0_csv)
    analysis = boundary_analysis(fs, config)
    envelope = track = None
    if args.audio is not None:
        samples, sample_rate = read_audio(args.audio)
        envelope = compute_envelope(samples, sample_rate, fs.hop_seconds, len(fs))
        track = onset_strength(samples, sample_rate, fs.hop_seconds, n_frames=len(fs))

    os.makedirs(args.out, exist_ok=True)
    stem = _stem(args.f0_csv)
    series_path = os.path.join(args.out, stem + ".series.csv")
    peaks_path = os.path.join(args.out, stem + ".peaks.csv")

    header = ["time", "pitch_midi", "confidence", "gradient_norm", "combined"]
    columns = [analysis.midi, analysis.confidence, analysis.gradient_norm,
               analysis.combined]
    if envelope is not None:
        header += ["envelope", "onset_strength"]
        columns += [envelope.values, track.strength]
    with open(series_path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for i in range(len(fs)):
            cells = [f"{i * fs.hop_seconds:.6f}"]
            cells += [f"{column[i]:.6f}" for column in columns]
            fh.write(",".join(cells) + "\n")
    with open(peaks_path, "w", newline="") as fh:
        fh.write("frame,time,value\n")
        for frame in analysis.peak_frames:
            fh.write(
                f"{frame},{frame * fs.hop_seconds:.6f},{analysis.combined[frame]:.6f}\n"
            )
    print(series_path)
    print(peaks_path)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except InputError as exc:  # covers ParseError
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
