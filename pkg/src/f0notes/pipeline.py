"""End-to-end transcription: frames in, refined note events out.

The stages run in a fixed order: pitch gradient, boundary peaks, initial
segmentation, same-pitch merging, onset-based splitting of repeated notes,
then amplitude-based refinement.  Without an envelope the amplitude stages
degrade gracefully: a unit envelope makes every velocity 127 and trimming
a no-op, while the duration filter still applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import boundaries, onsets, pitch, refine
from .core import AmplitudeEnvelope, FrameSeries, InputError, PipelineConfig
from .refine import RefinementReport
from .trackio import TrackBundle


@dataclass(frozen=True)
class BoundaryAnalysis:
    """Aligned per-frame series behind boundary picking, plus the peaks."""

    midi: np.ndarray
    confidence: np.ndarray
    gradient_norm: np.ndarray
    combined: np.ndarray
    peak_frames: np.ndarray


def boundary_analysis(fs: FrameSeries, config: PipelineConfig | None = None) -> BoundaryAnalysis:
    """Compute the per-frame boundary signal and its picked peaks."""
    config = config or PipelineConfig()
    midi = pitch.midi_track(fs)
    gradient_norm = pitch.normalize_gradient(pitch.abs_gradient(midi))
    combined = boundaries.combined_signal(fs, gradient_norm)
    peaks = boundaries.pick_peaks(combined, config.boundary_threshold)
    return BoundaryAnalysis(
        midi=midi,
        confidence=np.array(fs.confidence),
        gradient_norm=gradient_norm,
        combined=combined,
        peak_frames=peaks,
    )


def transcribe(
    fs: FrameSeries,
    envelope: AmplitudeEnvelope | None = None,
    onset_track: onsets.OnsetTrack | None = None,
    onsets_s=None,
    config: PipelineConfig | None = None,
):
    """Run the full pipeline on one track.

    Onset times for repeated-note splitting come from ``onsets_s`` when
    given, otherwise from thresholding ``onset_track``; with neither, the
    splitting stage is skipped.  Returns (notes, RefinementReport).
    """
    config = config or PipelineConfig()
    if envelope is not None and len(envelope) != len(fs):
        raise InputError(
            f"envelope length {len(envelope)} does not match {len(fs)} frames"
        )

    analysis = boundary_analysis(fs, config)
    segments = boundaries.initial_segments(analysis.midi, analysis.peak_frames)
    segments = boundaries.merge_segments(segments, analysis.midi, config.merge_semitones)

    if onsets_s is None and onset_track is not None:
        onsets_s = onsets.detect_onsets(onset_track, config.onset_threshold)
    if onsets_s is not None and len(onsets_s) > 0:
        segments = onsets.split_repeated_notes(
            segments,
            onsets_s,
            analysis.midi,
            fs.hop_seconds,
            config.min_duration_s,
        )

    if envelope is None:
        envelope = AmplitudeEnvelope(np.ones(len(fs)), hop_seconds=fs.hop_seconds)
    notes = refine.segments_to_notes(segments, envelope, fs.hop_seconds)
    return refine.refine_notes(notes, envelope, config)


def transcribe_bundle(
    bundle: TrackBundle,
    config: PipelineConfig | None = None,
    onsets_s=None,
) -> tuple[list, RefinementReport]:
    """Transcribe a loaded track, deriving onset strength from its audio."""
    config = config or PipelineConfig()
    onset_track = None
    if onsets_s is None and bundle.samples is not None:
        onset_track = onsets.onset_strength(
            bundle.samples,
            bundle.sample_rate,
            hop_seconds=bundle.frame_series.hop_seconds,
            n_frames=len(bundle.frame_series),
        )
    return transcribe(
        bundle.frame_series,
        envelope=bundle.envelope,
        onset_track=onset_track,
        onsets_s=onsets_s,
        config=config,
    )
