"""Spectral-flux onset strength and repeated-note splitting.

Equal-pitch repeated notes leave no trace in the pitch gradient and often
too little in the confidence track, so the boundary stage merges them into
one long segment.  A percussive onset signal supplies the missing cuts:
only onsets whose strength clears a very high threshold are trusted, and a
cut is placed only where it leaves at least the minimum note duration on
both sides of itself within the enclosing segment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boundaries import pick_peaks, segment_between
from .core import InputError, Segment, _readonly_array

_EPS_S = 1e-9  # absorbs float noise when comparing second-valued quantities

DEFAULT_WINDOW_SIZE = 2048


@dataclass(frozen=True)
class OnsetTrack:
    """Per-frame onset strength in [0, 1], optionally with detected onset times."""

    strength: np.ndarray
    hop_seconds: float = 0.01
    onsets_s: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "strength", _readonly_array(self.strength, "strength"))
        if np.any((self.strength < 0.0) | (self.strength > 1.0)):
            raise InputError("onset strength values must lie in [0, 1]")
        if not self.hop_seconds > 0:
            raise InputError("hop_seconds must be positive")
        onsets = self.onsets_s if self.onsets_s is not None else np.empty(0)
        onsets = _readonly_array(onsets, "onsets_s")
        if np.any(np.diff(onsets) < 0):
            raise InputError("onset times must be sorted")
        object.__setattr__(self, "onsets_s", onsets)

    def __len__(self) -> int:
        return len(self.strength)


def onset_strength(
    samples,
    sample_rate: int,
    hop_seconds: float = 0.01,
    n_frames: int | None = None,
    window_size: int = DEFAULT_WINDOW_SIZE,
) -> OnsetTrack:
    """Normalized spectral-flux onset strength on the analysis frame grid.

    A Hann-windowed magnitude spectrum (``window_size`` samples, centered
    on each frame time) is taken every ``hop_seconds``; the flux of a frame
    is the half-wave rectified magnitude increase from the previous frame,
    summed over bins.  The flux track is scaled by its global maximum so
    the output lies in [0, 1] (all zero for e.g. digital silence).

    Parameters
    ----------
    samples : array_like
        Mono audio, full scale in [-1, 1].
    sample_rate : int
        Sample rate in Hz, at least 8000.
    hop_seconds : float
        Frame hop matching the f0 track's grid.
    n_frames : int, optional
        Pad or truncate the output to this many frames so it aligns with a
        FrameSeries of known length; default covers the whole signal.
    window_size : int
        Analysis window length in samples.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim != 1 or len(samples) == 0:
        raise InputError("audio must be a nonempty mono sample array")
    if sample_rate < 8000:
        raise InputError(f"sample rate {sample_rate} below the 8 kHz minimum")

    hop = int(round(hop_seconds * sample_rate))
    n_audio = max(1, math.ceil(len(samples) / hop))

    # Center window i on sample i*hop by padding half a window on the left;
    # pad on the right so the last frame has a full window as well.
    half = window_size // 2
    needed = (n_audio - 1) * hop + window_size
    right = max(half, needed - (len(samples) + half))
    padded = np.concatenate(
        [np.zeros(half), samples, np.zeros(right)]
    )
    frames = np.lib.stride_tricks.sliding_window_view(padded, window_size)[::hop]
    frames = frames[:n_audio]

    window = np.hanning(window_size)
    mags = np.abs(np.fft.rfft(frames * window, axis=1))
    prev = np.vstack([np.zeros(mags.shape[1]), mags[:-1]])
    flux = np.maximum(mags - prev, 0.0).sum(axis=1)

    peak = flux.max()
    if peak > 0:
        flux /= peak

    if n_frames is not None and n_frames != n_audio:
        out = np.zeros(n_frames)
        out[: min(n_frames, n_audio)] = flux[: min(n_frames, n_audio)]
        flux = out
    return OnsetTrack(strength=flux, hop_seconds=hop_seconds)


def detect_onsets(track: OnsetTrack, threshold: float) -> np.ndarray:
    """Times in seconds of strength peaks at or above ``threshold``.

    Uses the same peak rule as boundary picking.
    """
    if not 0.0 <= threshold <= 1.0:
        raise InputError("onset threshold must lie in [0, 1]")
    idx = pick_peaks(track.strength, threshold)
    return idx * track.hop_seconds


def split_repeated_notes(
    segments,
    onsets_s,
    midi,
    hop_seconds: float,
    min_duration_s: float = 0.030,
) -> list[Segment]:
    """Cut segments at trusted onsets that fall well inside them.

    An onset introduces a cut at its nearest frame only when both the onset
    time and the snapped frame are at least ``min_duration_s`` away from
    both edges of the enclosing segment, so no resulting edge piece can be
    shorter than the minimum duration.  Medians are recomputed from the
    MIDI track for the resulting sub-segments; the union of covered frames
    never changes.
    """
    midi = np.asarray(midi, dtype=float)
    onsets = np.sort(np.asarray(onsets_s, dtype=float).ravel())
    out: list[Segment] = []
    for seg in segments:
        start_s = seg.start_frame * hop_seconds
        end_s = seg.end_frame * hop_seconds
        cuts: set[int] = set()
        inside = onsets[(onsets > start_s) & (onsets < end_s)]
        for t in inside:
            if t - start_s + _EPS_S < min_duration_s:
                continue
            if end_s - t + _EPS_S < min_duration_s:
                continue
            frame = int(round(t / hop_seconds))
            if not seg.start_frame < frame < seg.end_frame:
                continue
            # re-check the guard after snapping to the frame grid
            if (frame - seg.start_frame) * hop_seconds + _EPS_S < min_duration_s:
                continue
            if (seg.end_frame - frame) * hop_seconds + _EPS_S < min_duration_s:
                continue
            cuts.add(frame)
        edges = [seg.start_frame] + sorted(cuts) + [seg.end_frame]
        out.extend(
            segment_between(midi, a, b) for a, b in zip(edges, edges[1:])
        )
    return out
