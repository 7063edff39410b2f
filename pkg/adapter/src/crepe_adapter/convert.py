"""Ground-truth annotation conversion to the notes CSV schema.

Two source formats are supported:

  * ``midi``: Standard MIDI Files (format 0 or 1, PPQ division); note
    times come from the first tempo event, or 120 BPM when none is set.
  * ``hz-csv``: CSV with header ``onset_s,offset_s,pitch_hz`` as shipped
    with Hz-labeled datasets; pitches are converted to fractional MIDI
    numbers against the 440 Hz reference.

Output rows are ``onset_s,offset_s,pitch_midi`` sorted by onset.
"""

from __future__ import annotations

import csv
import math

from .extract import AdapterError

NOTES_HEADER = "onset_s,offset_s,pitch_midi"
CONVERT_FORMATS = ("midi", "hz-csv")

_DEFAULT_TEMPO_US = 500000  # 120 BPM


def hz_to_midi(hz: float) -> float:
    if not hz > 0:
        raise AdapterError(f"frequency {hz} must be positive")
    return 69.0 + 12.0 * math.log2(hz / 440.0)


def _read_vlq(data: bytes, pos: int) -> tuple[int, int]:
    value = 0
    while True:
        byte = data[pos]
        pos += 1
        value = (value << 7) | (byte & 0x7F)
        if not byte & 0x80:
            return value, pos


def _midi_notes(path) -> list[tuple[float, float, float]]:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != b"MThd" or len(data) < 14:
        raise AdapterError(f"{path}: not a Standard MIDI File")
    fmt = int.from_bytes(data[8:10], "big")
    n_tracks = int.from_bytes(data[10:12], "big")
    division = int.from_bytes(data[12:14], "big")
    if fmt not in (0, 1):
        raise AdapterError(f"{path}: unsupported SMF format {fmt}")
    if division & 0x8000:
        raise AdapterError(f"{path}: SMPTE time division is not supported")

    tempo_us = None
    events: list[tuple[int, int, int]] = []  # (tick, 1=on/0=off, key)
    pos = 14
    for _ in range(n_tracks):
        if data[pos : pos + 4] != b"MTrk":
            raise AdapterError(f"{path}: malformed track chunk")
        length = int.from_bytes(data[pos + 4 : pos + 8], "big")
        track = data[pos + 8 : pos + 8 + length]
        pos += 8 + length

        tick = 0
        i = 0
        status = 0
        while i < len(track):
            delta, i = _read_vlq(track, i)
            tick += delta
            if track[i] & 0x80:
                status = track[i]
                i += 1
            if status == 0xFF:
                meta = track[i]
                size, i = _read_vlq(track, i + 1)
                if meta == 0x51 and tempo_us is None:
                    tempo_us = int.from_bytes(track[i : i + 3], "big")
                i += size
            elif status in (0xF0, 0xF7):
                size, i = _read_vlq(track, i)
                i += size
            else:
                kind = status & 0xF0
                if kind in (0xC0, 0xD0):
                    i += 1
                    continue
                d1, d2 = track[i], track[i + 1]
                i += 2
                if kind == 0x90 and d2 > 0:
                    events.append((tick, 1, d1))
                elif kind == 0x80 or (kind == 0x90 and d2 == 0):
                    events.append((tick, 0, d1))

    seconds_per_tick = (tempo_us or _DEFAULT_TEMPO_US) / 1e6 / division
    events.sort(key=lambda e: (e[0], e[1]))  # offs before ons at equal ticks
    open_notes: dict[int, list[int]] = {}
    notes = []
    for tick, is_on, key in events:
        if is_on:
            open_notes.setdefault(key, []).append(tick)
        elif open_notes.get(key):
            start = open_notes[key].pop(0)
            if tick > start:
                notes.append(
                    (start * seconds_per_tick, tick * seconds_per_tick, float(key))
                )
    return sorted(notes)


def _hz_csv_notes(path) -> list[tuple[float, float, float]]:
    notes = []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip() for h in header] != [
            "onset_s", "offset_s", "pitch_hz",
        ]:
            raise AdapterError(f"{path}:1: expected header onset_s,offset_s,pitch_hz")
        for line, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise AdapterError(f"{path}:{line}: expected 3 columns")
            try:
                onset, offset, hz = (float(v) for v in row)
            except ValueError:
                raise AdapterError(f"{path}:{line}: non-numeric value") from None
            if not offset > onset:
                raise AdapterError(f"{path}:{line}: offset must exceed onset")
            notes.append((onset, offset, hz_to_midi(hz)))
    return sorted(notes)


def convert_ground_truth(source_path, format_hint: str):
    """Parse annotations into (onset_s, offset_s, pitch_midi) tuples."""
    if format_hint == "midi":
        return _midi_notes(source_path)
    if format_hint == "hz-csv":
        return _hz_csv_notes(source_path)
    raise AdapterError(
        f"unknown annotation format {format_hint!r}; "
        f"supported: {', '.join(CONVERT_FORMATS)}"
    )


def write_notes_csv(notes, path) -> None:
    with open(path, "w") as fh:
        fh.write(NOTES_HEADER + "\n")
        for onset, offset, midi in notes:
            fh.write(f"{onset:.6f},{offset:.6f},{midi:.6f}\n")
