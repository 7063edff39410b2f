"""Segment-to-note conversion and amplitude-based cleanup.

The f0 tracker keeps reporting pitch through silence and reverb tails, so
raw segments include notes nobody played.  Three filters remove them: a
velocity floor (the per-segment envelope maximum mapped to MIDI velocity),
a minimum duration, and amplitude trimming that pulls each note's edges
inward until the envelope clears a threshold.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import AmplitudeEnvelope, InputError, NoteEvent, round_half_up

_EPS_S = 1e-9  # absorbs float noise when comparing second-valued durations


@dataclass(frozen=True)
class RefinementReport:
    """Bookkeeping for the cleanup filters; counts must reconcile exactly."""

    notes_in: int
    dropped_velocity: int
    dropped_duration: int
    dropped_empty_after_trim: int
    notes_out: int

    def __post_init__(self):
        expected = (
            self.notes_in
            - self.dropped_velocity
            - self.dropped_duration
            - self.dropped_empty_after_trim
        )
        if self.notes_out != expected:
            raise InputError(
                f"refinement counts do not reconcile: {self.notes_out} != {expected}"
            )


def _check_alignment(envelope: AmplitudeEnvelope, hop_seconds: float, end_frame: int):
    if not math.isclose(envelope.hop_seconds, hop_seconds, rel_tol=1e-9):
        raise InputError(
            f"envelope hop {envelope.hop_seconds} does not match frame hop {hop_seconds}"
        )
    if len(envelope) < end_frame:
        raise InputError(
            f"envelope has {len(envelope)} frames but segments extend to {end_frame}"
        )


def segments_to_notes(segments, envelope: AmplitudeEnvelope, hop_seconds: float) -> list[NoteEvent]:
    """One note per segment: frame edges become times, the segment median
    becomes the pitch, and velocity is the envelope maximum scaled to 0..127
    (half values round up)."""
    segments = list(segments)
    if segments:
        _check_alignment(envelope, hop_seconds, max(s.end_frame for s in segments))
    notes = []
    for seg in segments:
        peak = float(np.max(envelope.values[seg.start_frame : seg.end_frame]))
        notes.append(
            NoteEvent.from_midi(
                seg.start_frame * hop_seconds,
                seg.end_frame * hop_seconds,
                seg.median_midi,
                round_half_up(127.0 * peak),
            )
        )
    return notes


def filter_by_velocity(notes, velocity_min: int) -> list[NoteEvent]:
    """Keep notes whose velocity is at or above the floor."""
    return [n for n in notes if n.velocity >= velocity_min]


def filter_by_duration(notes, min_duration_s: float) -> list[NoteEvent]:
    """Keep notes at least ``min_duration_s`` long (boundary inclusive)."""
    return [n for n in notes if n.duration_s + _EPS_S >= min_duration_s]


def trim_by_amplitude(
    notes,
    envelope: AmplitudeEnvelope,
    trim_velocity: int,
    min_duration_s: float,
) -> list[NoteEvent]:
    """Pull note edges inward to where the envelope reaches the threshold.

    With ``a = trim_velocity / 127``, the onset frame advances while the
    envelope is below ``a`` and the offset frame retreats likewise.  Notes
    whose frames are exhausted or whose trimmed duration falls below
    ``min_duration_s`` are dropped; survivors have envelope >= ``a`` at
    their first and last frame.
    """
    hop = envelope.hop_seconds
    env = envelope.values
    threshold = trim_velocity / 127.0
    out: list[NoteEvent] = []
    for note in notes:
        start = int(round(note.onset_s / hop))
        end = int(round(note.offset_s / hop))
        start = max(0, start)
        end = min(len(env), end)
        new_start, new_end = start, end
        while new_start < new_end and env[new_start] < threshold:
            new_start += 1
        while new_end > new_start and env[new_end - 1] < threshold:
            new_end -= 1
        if new_start >= new_end:
            continue
        if (new_end - new_start) * hop + _EPS_S < min_duration_s:
            continue
        if new_start == start and new_end == end:
            out.append(note)
        else:
            out.append(
                NoteEvent.from_midi(
                    new_start * hop, new_end * hop, note.pitch_midi, note.velocity
                )
            )
    return out


def refine_notes(notes, envelope: AmplitudeEnvelope, config) -> tuple[list[NoteEvent], RefinementReport]:
    """Run velocity filter, duration filter, and amplitude trimming in order."""
    n_in = len(notes)
    kept = filter_by_velocity(notes, config.velocity_min)
    d_velocity = n_in - len(kept)
    long_enough = filter_by_duration(kept, config.min_duration_s)
    d_duration = len(kept) - len(long_enough)
    trimmed = trim_by_amplitude(
        long_enough, envelope, config.trim_velocity, config.min_duration_s
    )
    d_trim = len(long_enough) - len(trimmed)
    report = RefinementReport(
        notes_in=n_in,
        dropped_velocity=d_velocity,
        dropped_duration=d_duration,
        dropped_empty_after_trim=d_trim,
        notes_out=len(trimmed),
    )
    return trimmed, report
