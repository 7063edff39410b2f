"""Core domain types, unit conversions, and pipeline configuration.

All value types are immutable after construction: array fields are copied
into read-only float arrays, so instances can be shared freely between
threads and worker processes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

A4_HZ = 440.0
A4_MIDI = 69.0


class InputError(ValueError):
    """An input value or structure violates one of the documented contracts."""


class ParseError(InputError):
    """Malformed on-disk data; carries the offending file and line number."""

    def __init__(self, message: str, path=None, line: int | None = None):
        prefix = ""
        if path is not None:
            prefix = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(prefix + message)
        self.path = path
        self.line = line


def hz_to_midi(f):
    """Convert frequency in Hz to a fractional MIDI number (A4 = 440 Hz = 69).

    Accepts a scalar or an array; raises InputError for non-positive input.
    """
    arr = np.asarray(f, dtype=float)
    if np.any(arr <= 0) or not np.all(np.isfinite(arr)):
        raise InputError("frequencies must be finite and strictly positive")
    midi = A4_MIDI + 12.0 * np.log2(arr / A4_HZ)
    return float(midi) if arr.ndim == 0 else midi


def midi_to_hz(m):
    """Convert a fractional MIDI number to Hz: 440 * 2**((m - 69) / 12)."""
    arr = np.asarray(m, dtype=float)
    hz = A4_HZ * np.exp2((arr - A4_MIDI) / 12.0)
    return float(hz) if arr.ndim == 0 else hz


def round_half_up(x: float) -> int:
    """Round to the nearest integer, with exact halves rounding up."""
    return int(math.floor(x + 0.5))


def _readonly_array(values, name: str) -> np.ndarray:
    arr = np.array(values, dtype=float)
    if arr.ndim != 1:
        raise InputError(f"{name} must be one-dimensional")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class FrameSeries:
    """Uniformly sampled f0/confidence track with one frame every ``hop_seconds``.

    Frame i sits at time ``i * hop_seconds``; there is no explicit time axis.
    """

    f0_hz: np.ndarray
    confidence: np.ndarray
    hop_seconds: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "f0_hz", _readonly_array(self.f0_hz, "f0_hz"))
        object.__setattr__(
            self, "confidence", _readonly_array(self.confidence, "confidence")
        )
        if len(self.f0_hz) != len(self.confidence):
            raise InputError("f0_hz and confidence must have identical length")
        if len(self.f0_hz) < 2:
            raise InputError("a FrameSeries needs at least 2 frames")
        if np.any(self.f0_hz <= 0) or not np.all(np.isfinite(self.f0_hz)):
            raise InputError("every f0 value must be finite and strictly positive")
        if np.any((self.confidence < 0.0) | (self.confidence > 1.0)):
            raise InputError("confidence values must lie in [0, 1]")
        if not self.hop_seconds > 0:
            raise InputError("hop_seconds must be positive")

    def __len__(self) -> int:
        return len(self.f0_hz)

    @property
    def times(self) -> np.ndarray:
        """Frame times in seconds."""
        return np.arange(len(self)) * self.hop_seconds

    @property
    def duration_s(self) -> float:
        return len(self) * self.hop_seconds


@dataclass(frozen=True)
class AmplitudeEnvelope:
    """Per-frame full-scale amplitude in [0, 1], aligned to a FrameSeries grid."""

    values: np.ndarray
    hop_seconds: float = 0.01

    def __post_init__(self):
        object.__setattr__(self, "values", _readonly_array(self.values, "values"))
        if np.any((self.values < 0.0) | (self.values > 1.0)):
            raise InputError("envelope values must lie in [0, 1]")
        if not self.hop_seconds > 0:
            raise InputError("hop_seconds must be positive")

    def __len__(self) -> int:
        return len(self.values)


@dataclass(frozen=True)
class Segment:
    """Half-open frame range [start_frame, end_frame) with its median pitch."""

    start_frame: int
    end_frame: int
    median_midi: float

    def __post_init__(self):
        if not self.start_frame < self.end_frame:
            raise InputError(
                f"empty segment: start {self.start_frame} >= end {self.end_frame}"
            )

    @property
    def n_frames(self) -> int:
        return self.end_frame - self.start_frame


@dataclass(frozen=True)
class NoteEvent:
    """A discrete note event: onset/offset in seconds, fractional MIDI pitch,
    the equivalent frequency in Hz, and a MIDI velocity."""

    onset_s: float
    offset_s: float
    pitch_midi: float
    pitch_hz: float
    velocity: int

    def __post_init__(self):
        if not self.onset_s < self.offset_s:
            raise InputError(
                f"note onset {self.onset_s} must precede offset {self.offset_s}"
            )
        if not 0 <= self.velocity <= 127:
            raise InputError(f"velocity {self.velocity} outside 0..127")
        expected_hz = midi_to_hz(self.pitch_midi)
        if abs(self.pitch_hz - expected_hz) > 1e-9 * expected_hz:
            raise InputError(
                f"pitch_hz {self.pitch_hz} inconsistent with pitch_midi {self.pitch_midi}"
            )

    @classmethod
    def from_midi(cls, onset_s, offset_s, pitch_midi, velocity) -> "NoteEvent":
        """Build a note, deriving pitch_hz from the MIDI pitch."""
        return cls(
            float(onset_s),
            float(offset_s),
            float(pitch_midi),
            midi_to_hz(pitch_midi),
            int(velocity),
        )

    @property
    def duration_s(self) -> float:
        return self.offset_s - self.onset_s


@dataclass(frozen=True)
class PipelineConfig:
    """Thresholds for the segmentation pipeline and the evaluator.

    The defaults are the empirically chosen operating point: 0.002 for
    peak picking on the combined boundary signal, 0.7 for trusted onsets,
    velocity floor 15, 30 ms minimum duration, trim threshold 10 velocity
    units, 1 semitone merge distance, and 50 ms / 50 cent evaluation
    tolerances.
    """

    boundary_threshold: float = 0.002
    onset_threshold: float = 0.7
    velocity_min: int = 15
    min_duration_s: float = 0.030
    trim_velocity: int = 10
    merge_semitones: float = 1.0
    eval_onset_tolerance_s: float = 0.050
    eval_pitch_tolerance_cents: float = 50.0

    def __post_init__(self):
        nonnegative = (
            "boundary_threshold",
            "min_duration_s",
            "merge_semitones",
            "eval_onset_tolerance_s",
            "eval_pitch_tolerance_cents",
        )
        for name in nonnegative:
            if getattr(self, name) < 0:
                raise InputError(f"{name} must be nonnegative")
        if not 0.0 <= self.onset_threshold <= 1.0:
            raise InputError("onset_threshold must lie in [0, 1]")
        for name in ("velocity_min", "trim_velocity"):
            if not 0 <= getattr(self, name) <= 127:
                raise InputError(f"{name} must lie in 0..127")
