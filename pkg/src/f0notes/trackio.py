"""Readers and writers for every on-disk format the pipeline touches.

Formats:
  - f0 CSV, header ``time,frequency,confidence``: seconds on a uniform
    10 ms grid, Hz, confidence in [0, 1].
  - Notes CSV, header ``onset_s,offset_s,pitch_midi``.
  - Notes JSON: list of objects with onset_s, offset_s, pitch_midi,
    pitch_hz, velocity.
  - WAV audio (PCM 8/16/24/32-bit or float), mono or stereo.
  - Onset override file: one onset time in seconds per line.
  - Standard MIDI files via the smf module.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass

import numpy as np
from scipy.io import wavfile

from . import smf
from .core import AmplitudeEnvelope, FrameSeries, InputError, NoteEvent, ParseError

F0_HEADER = ["time", "frequency", "confidence"]
NOTES_HEADER = ["onset_s", "offset_s", "pitch_midi"]

F0_HOP_S = 0.01
F0_GRID_TOLERANCE_S = 0.001

# notes CSV carries no velocity column; loaded notes get this placeholder
DEFAULT_VELOCITY = 100


def _parse_float(text: str, column: str, path, line: int) -> float:
    try:
        return float(text)
    except ValueError:
        raise ParseError(f"{column} value {text!r} is not a number", path, line) from None


def read_f0_csv(path) -> FrameSeries:
    """Load a pitch-tracker CSV into a FrameSeries.

    The time column must sit on a uniform 10 ms grid (within 1 ms);
    frequency must be positive and confidence within [0, 1].  Violations
    raise a ParseError naming the offending line.
    """
    f0 = []
    confidence = []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip() for h in header] != F0_HEADER:
            raise ParseError(
                f"expected header {','.join(F0_HEADER)!r}", path, 1
            )
        for line, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", path, line)
            t = _parse_float(row[0], "time", path, line)
            freq = _parse_float(row[1], "frequency", path, line)
            conf = _parse_float(row[2], "confidence", path, line)
            expected_t = len(f0) * F0_HOP_S
            if abs(t - expected_t) > F0_GRID_TOLERANCE_S:
                raise ParseError(
                    f"time {t} is off the uniform 10 ms grid "
                    f"(expected {expected_t:.6f} +/- {F0_GRID_TOLERANCE_S})",
                    path,
                    line,
                )
            if not freq > 0:
                raise ParseError(f"frequency {freq} must be positive", path, line)
            if not 0.0 <= conf <= 1.0:
                raise ParseError(f"confidence {conf} outside [0, 1]", path, line)
            f0.append(freq)
            confidence.append(conf)
    if len(f0) < 2:
        raise ParseError("need at least 2 frames", path)
    return FrameSeries(np.array(f0), np.array(confidence), hop_seconds=F0_HOP_S)


def write_f0_csv(fs: FrameSeries, path) -> None:
    """Write a FrameSeries back to the pitch-tracker CSV schema (6 decimals)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(F0_HEADER)
        for i in range(len(fs)):
            writer.writerow(
                [
                    f"{i * fs.hop_seconds:.6f}",
                    f"{fs.f0_hz[i]:.6f}",
                    f"{fs.confidence[i]:.6f}",
                ]
            )


def read_audio(path):
    """Decode a WAV file to (mono float samples in [-1, 1], sample rate).

    Stereo channels are averaged.  Integer PCM is scaled by its full-scale
    value; float data is taken as already scaled.
    """
    try:
        sample_rate, data = wavfile.read(path)
    except ValueError as exc:
        raise InputError(f"unsupported audio format in {path}: {exc}") from exc
    if data.size == 0:
        raise InputError(f"{path} contains no samples")
    if data.dtype == np.int16:
        samples = data / 32768.0
    elif data.dtype == np.int32:
        samples = data / 2147483648.0
    elif data.dtype == np.uint8:
        samples = (data.astype(np.float64) - 128.0) / 128.0
    elif data.dtype in (np.float32, np.float64):
        samples = data.astype(np.float64)
    else:
        raise InputError(f"unsupported WAV sample format {data.dtype} in {path}")
    if samples.ndim == 2:
        samples = samples.mean(axis=1)
    return samples, int(sample_rate)


def compute_envelope(samples, sample_rate, hop_seconds, n_frames) -> AmplitudeEnvelope:
    """Per-frame peak amplitude: frame i is max |sample| over [i*hop, (i+1)*hop).

    Frames past the end of the audio are zero.  Values are capped at 1 so
    out-of-range float input still yields a valid envelope.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.size == 0:
        raise InputError("audio is empty")
    hop = round(hop_seconds * sample_rate)
    if hop < 1:
        raise InputError(f"hop of {hop_seconds} s is under one sample at {sample_rate} Hz")
    padded = np.zeros(n_frames * hop)
    usable = min(len(samples), len(padded))
    padded[:usable] = np.abs(samples[:usable])
    values = padded.reshape(n_frames, hop).max(axis=1)
    return AmplitudeEnvelope(np.minimum(values, 1.0), hop_seconds=hop_seconds)


def read_notes(path) -> list[NoteEvent]:
    """Load ground-truth notes from CSV (header ``onset_s,offset_s,pitch_midi``).

    The schema has no velocity, so notes get a fixed placeholder velocity;
    evaluation never reads it.
    """
    notes = []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip() for h in header] != NOTES_HEADER:
            raise ParseError(f"expected header {','.join(NOTES_HEADER)!r}", path, 1)
        for line, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", path, line)
            onset = _parse_float(row[0], "onset_s", path, line)
            offset = _parse_float(row[1], "offset_s", path, line)
            pitch = _parse_float(row[2], "pitch_midi", path, line)
            try:
                notes.append(NoteEvent.from_midi(onset, offset, pitch, DEFAULT_VELOCITY))
            except InputError as exc:
                raise ParseError(str(exc), path, line) from exc
    return notes


def write_notes_csv(notes, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(NOTES_HEADER)
        for note in notes:
            writer.writerow(
                [f"{note.onset_s:.6f}", f"{note.offset_s:.6f}", f"{note.pitch_midi:.6f}"]
            )


def write_notes_json(notes, path) -> None:
    """Write notes as a JSON list; float fields round-trip losslessly."""
    payload = [
        {
            "onset_s": note.onset_s,
            "offset_s": note.offset_s,
            "pitch_midi": note.pitch_midi,
            "pitch_hz": note.pitch_hz,
            "velocity": note.velocity,
        }
        for note in notes
    ]
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def read_notes_json(path) -> list[NoteEvent]:
    with open(path) as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}", path) from exc
    if not isinstance(payload, list):
        raise ParseError("expected a top-level JSON list of notes", path)
    notes = []
    for index, item in enumerate(payload):
        try:
            notes.append(
                NoteEvent(
                    onset_s=float(item["onset_s"]),
                    offset_s=float(item["offset_s"]),
                    pitch_midi=float(item["pitch_midi"]),
                    pitch_hz=float(item["pitch_hz"]),
                    velocity=int(item["velocity"]),
                )
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"bad note at index {index}: {exc}", path) from exc
    return notes


def read_notes_any(path) -> list[NoteEvent]:
    """Load notes from CSV, JSON, or MIDI, dispatching on the file suffix."""
    lower = str(path).lower()
    if lower.endswith(".json"):
        return read_notes_json(path)
    if lower.endswith((".mid", ".midi")):
        return smf.read_midi(path)
    return read_notes(path)


write_midi = smf.write_midi
read_midi = smf.read_midi


def read_onsets_file(path) -> list[float]:
    """Load an onset override file: one onset time in seconds per line."""
    onsets = []
    with open(path) as fh:
        for line, raw in enumerate(fh, start=1):
            text = raw.strip()
            if not text:
                continue
            onsets.append(_parse_float(text, "onset", path, line))
    if any(b < a for a, b in zip(onsets, onsets[1:])):
        onsets.sort()
    return onsets


@dataclass(frozen=True)
class TrackBundle:
    """Everything known about one track: frames, optional audio-derived
    envelope, and optional ground truth."""

    frame_series: FrameSeries
    samples: np.ndarray | None = None
    sample_rate: int | None = None
    envelope: AmplitudeEnvelope | None = None
    ground_truth: list[NoteEvent] | None = None

    def __post_init__(self):
        if self.envelope is not None and len(self.envelope) != len(self.frame_series):
            raise InputError(
                f"envelope length {len(self.envelope)} does not match "
                f"{len(self.frame_series)} frames"
            )


def load_track(f0_csv, audio_path=None, ground_truth_path=None) -> TrackBundle:
    """Load a track's frame series plus, when given, audio and ground truth."""
    fs = read_f0_csv(f0_csv)
    samples = sample_rate = envelope = None
    if audio_path is not None:
        samples, sample_rate = read_audio(audio_path)
        envelope = compute_envelope(samples, sample_rate, fs.hop_seconds, len(fs))
    ground_truth = read_notes(ground_truth_path) if ground_truth_path else None
    return TrackBundle(
        frame_series=fs,
        samples=samples,
        sample_rate=sample_rate,
        envelope=envelope,
        ground_truth=ground_truth,
    )
