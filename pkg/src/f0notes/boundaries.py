"""Note-boundary detection on the combined confidence/gradient signal.

Confidence troughs and pitch-gradient spikes both mark candidate note
transitions, but neither is clean enough on its own to separate real
boundaries from noise with a single threshold.  Their product, inverted
confidence times normalized absolute gradient, has well-defined peaks at
boundaries and stays near zero elsewhere, so one low threshold suffices.
Spurious cuts inside a note are repaired afterwards by merging adjacent
segments whose median pitches are closer than a semitone.
"""

from __future__ import annotations

import numpy as np

from .core import FrameSeries, InputError, Segment


def combined_signal(fs: FrameSeries, normalized_gradient) -> np.ndarray:
    """Element-wise ``(1 - confidence) * normalized_gradient``."""
    g = np.asarray(normalized_gradient, dtype=float)
    if len(g) != len(fs):
        raise InputError(
            f"gradient length {len(g)} does not match frame count {len(fs)}"
        )
    return (1.0 - fs.confidence) * g


def pick_peaks(signal, threshold: float) -> np.ndarray:
    """Frame indices of local maxima at or above ``threshold``.

    A peak rises strictly from the left and is not exceeded on the right
    (``s[i] > s[i-1]`` and ``s[i] >= s[i+1]``), which resolves plateaus to
    their leftmost sample.  Endpoints are never peaks.
    """
    if threshold < 0:
        raise InputError("peak threshold must be nonnegative")
    s = np.asarray(signal, dtype=float)
    if len(s) < 3:
        return np.empty(0, dtype=int)
    mid = s[1:-1]
    mask = (mid > s[:-2]) & (mid >= s[2:]) & (mid >= threshold)
    return np.nonzero(mask)[0] + 1


def segment_between(midi, start: int, end: int) -> Segment:
    """Segment over [start, end) with its median pitch taken from ``midi``."""
    return Segment(int(start), int(end), float(np.median(midi[start:end])))


def initial_segments(midi, boundaries) -> list[Segment]:
    """Tile the frame range [0, len) with cuts at each boundary index.

    ``boundaries`` must be strictly increasing and lie strictly inside
    (0, len); the result has ``len(boundaries) + 1`` segments whose median
    pitches come from the MIDI track.
    """
    midi = np.asarray(midi, dtype=float)
    n = len(midi)
    cuts = [int(b) for b in boundaries]
    if any(b2 <= b1 for b1, b2 in zip(cuts, cuts[1:])):
        raise InputError("boundaries must be strictly increasing")
    if cuts and not (0 < cuts[0] and cuts[-1] < n):
        raise InputError(f"boundaries must lie strictly inside (0, {n})")
    edges = [0] + cuts + [n]
    return [segment_between(midi, a, b) for a, b in zip(edges, edges[1:])]


def merge_segments(segments, midi, merge_semitones: float = 1.0) -> list[Segment]:
    """Fuse neighbours whose median pitches differ by less than ``merge_semitones``.

    Greedy left-to-right: while the current segment and the next are within
    the merge distance they are fused and the median recomputed over the
    union, so a fused segment keeps absorbing neighbours.  The pass repeats
    until no adjacent pair is closer than ``merge_semitones``; a difference
    of exactly one semitone keeps the boundary.
    """
    midi = np.asarray(midi, dtype=float)
    segs = list(segments)
    for prev, cur in zip(segs, segs[1:]):
        if prev.end_frame != cur.start_frame:
            raise InputError("segments must be contiguous and ordered")
    while True:
        merged = False
        out: list[Segment] = []
        for seg in segs:
            if out and abs(out[-1].median_midi - seg.median_midi) < merge_semitones:
                out[-1] = segment_between(midi, out[-1].start_frame, seg.end_frame)
                merged = True
            else:
                out.append(seg)
        segs = out
        if not merged:
            return segs
