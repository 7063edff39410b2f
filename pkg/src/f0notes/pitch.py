"""Semitone-space pitch track and its normalized absolute gradient.

Pitch is perceived roughly logarithmically, so the f0 contour is converted
to fractional MIDI numbers before differencing; a one-semitone step then
has the same magnitude anywhere on the pitch axis, where the same step in
Hz would span two orders of magnitude between the bottom and top octaves.
"""

from __future__ import annotations

import numpy as np

from .core import FrameSeries, InputError, hz_to_midi


def midi_track(fs: FrameSeries) -> np.ndarray:
    """Element-wise Hz to fractional-MIDI conversion of the f0 track."""
    return hz_to_midi(fs.f0_hz)


def abs_gradient(midi) -> np.ndarray:
    """Absolute backward first difference of a MIDI track.

    The first frame has no predecessor and is padded with 0 so the output
    stays aligned with the input track.
    """
    midi = np.asarray(midi, dtype=float)
    if midi.ndim != 1 or len(midi) < 2:
        raise InputError("gradient needs a one-dimensional track of at least 2 frames")
    out = np.empty_like(midi)
    out[0] = 0.0
    out[1:] = np.abs(np.diff(midi))
    return out


def normalize_gradient(gradient) -> np.ndarray:
    """Scale a gradient track by its global maximum into [0, 1].

    An all-zero track (constant pitch) stays all zero rather than dividing
    by zero.
    """
    gradient = np.asarray(gradient, dtype=float)
    peak = gradient.max() if len(gradient) else 0.0
    if peak <= 0.0:
        return np.zeros_like(gradient)
    return gradient / peak
