import numpy as np
import pytest

import f0notes as fn
from f0notes.core import InputError
from synth import melody_fixture


def test_constant_track_yields_one_full_length_note():
    fs = fn.FrameSeries(np.full(80, 440.0), np.full(80, 0.9))
    notes, report = fn.transcribe(fs)
    assert len(notes) == 1
    assert notes[0].onset_s == 0.0
    assert notes[0].offset_s == pytest.approx(0.8)
    assert notes[0].pitch_midi == pytest.approx(69.0)
    assert report.notes_in == 1 and report.notes_out == 1


def test_melody_recovered_without_audio():
    fs, reference, _ = melody_fixture([60, 63, 58, 65], seed=9)
    notes, _ = fn.transcribe(fs)
    assert len(notes) == len(reference)
    for got, want in zip(notes, reference):
        assert got.onset_s == pytest.approx(want.onset_s, abs=0.02)
        assert abs(got.pitch_midi - want.pitch_midi) < 0.05


def test_unit_envelope_fallback_gives_full_velocity():
    fs = fn.FrameSeries(np.full(50, 330.0), np.full(50, 0.9))
    notes, _ = fn.transcribe(fs)
    assert notes[0].velocity == 127


def test_envelope_length_mismatch_rejected():
    fs = fn.FrameSeries(np.full(50, 330.0), np.full(50, 0.9))
    env = fn.AmplitudeEnvelope(np.full(40, 0.5))
    with pytest.raises(InputError):
        fn.transcribe(fs, envelope=env)


def test_onset_track_splits_only_above_threshold():
    fs = fn.FrameSeries(np.full(100, 440.0), np.full(100, 0.95))
    strength = np.zeros(100)
    strength[50] = 0.9
    track = fn.OnsetTrack(strength)
    low, _ = fn.transcribe(fs, onset_track=track,
                           config=fn.PipelineConfig(onset_threshold=0.7))
    high, _ = fn.transcribe(fs, onset_track=track,
                            config=fn.PipelineConfig(onset_threshold=0.95))
    assert len(low) == 2
    assert len(high) == 1


def test_explicit_onsets_override_the_track():
    fs = fn.FrameSeries(np.full(100, 440.0), np.full(100, 0.95))
    strength = np.zeros(100)
    strength[50] = 0.9
    track = fn.OnsetTrack(strength)
    notes, _ = fn.transcribe(fs, onset_track=track, onsets_s=[0.3, 0.6])
    assert [n.onset_s for n in notes] == pytest.approx([0.0, 0.3, 0.6])


def test_boundary_analysis_shapes_and_peaks():
    fs, _, _ = melody_fixture([60, 64], seed=2)
    analysis = fn.boundary_analysis(fs)
    n = len(fs)
    for series in (analysis.midi, analysis.confidence, analysis.gradient_norm,
                   analysis.combined):
        assert len(series) == n
    assert all(0 < p < n for p in analysis.peak_frames)
    assert np.all(analysis.combined[analysis.peak_frames] >= 0.002)


def test_transcribe_bundle_without_audio_skips_splitting():
    fs = fn.FrameSeries(np.full(100, 440.0), np.full(100, 0.95))
    bundle = fn.TrackBundle(frame_series=fs)
    notes, _ = fn.transcribe_bundle(bundle)
    assert len(notes) == 1
