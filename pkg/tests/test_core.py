import numpy as np
import pytest

import f0notes as fn
from f0notes.core import InputError


class TestPitchConversions:
    def test_a4_reference(self):
        assert fn.hz_to_midi(440.0) == pytest.approx(69.0, abs=1e-12)
        assert fn.midi_to_hz(69.0) == pytest.approx(440.0, abs=1e-12)

    def test_octave_up_is_twelve_semitones(self):
        assert fn.hz_to_midi(880.0) == pytest.approx(81.0, abs=1e-12)

    def test_octave_below_a4(self):
        assert fn.midi_to_hz(57.0) == pytest.approx(220.0, abs=1e-12)

    def test_middle_c(self):
        assert fn.hz_to_midi(261.6256) == pytest.approx(60.0, abs=1e-4)

    def test_semitone_step_size_grows_with_register(self):
        # the same one-semitone step spans ~2 Hz at the bottom of the piano
        # range and ~236 Hz at the top
        assert fn.midi_to_hz(23.0) == pytest.approx(30.87, abs=0.01)
        assert fn.midi_to_hz(107.0) == pytest.approx(3951.1, abs=0.1)
        low_step = fn.midi_to_hz(24.0) - fn.midi_to_hz(23.0)
        high_step = fn.midi_to_hz(108.0) - fn.midi_to_hz(107.0)
        assert low_step == pytest.approx(2.0, abs=0.2)
        assert high_step == pytest.approx(236.0, abs=2.0)

    def test_transposition_is_exactly_twelve(self):
        for f in [27.5, 100.0, 261.6256, 440.0, 1000.0, 7902.13]:
            assert fn.hz_to_midi(2 * f) - fn.hz_to_midi(f) == pytest.approx(
                12.0, abs=1e-9
            )

    def test_round_trip_across_the_audible_range(self):
        f = np.geomspace(20.0, 8000.0, 500)
        back = fn.midi_to_hz(fn.hz_to_midi(f))
        assert np.allclose(back, f, rtol=1e-9, atol=0.0)

    def test_array_input(self):
        out = fn.hz_to_midi(np.array([440.0, 880.0]))
        assert np.allclose(out, [69.0, 81.0])

    def test_non_positive_frequency_rejected(self):
        with pytest.raises(InputError):
            fn.hz_to_midi(0.0)
        with pytest.raises(InputError):
            fn.hz_to_midi(-440.0)
        with pytest.raises(InputError):
            fn.hz_to_midi([440.0, np.nan])


class TestRoundHalfUp:
    def test_half_rounds_up(self):
        assert fn.round_half_up(63.5) == 64
        assert fn.round_half_up(0.5) == 1

    def test_plain_cases(self):
        assert fn.round_half_up(63.4) == 63
        assert fn.round_half_up(63.6) == 64
        assert fn.round_half_up(127.0) == 127


class TestFrameSeries:
    def test_times_and_duration(self):
        fs = fn.FrameSeries([440.0, 440.0, 440.0], [0.5, 0.5, 0.5], hop_seconds=0.01)
        assert len(fs) == 3
        assert np.allclose(fs.times, [0.0, 0.01, 0.02])
        assert fs.duration_s == pytest.approx(0.03)

    def test_arrays_are_immutable(self):
        fs = fn.FrameSeries([440.0, 440.0], [0.5, 0.5])
        with pytest.raises(ValueError):
            fs.f0_hz[0] = 1.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(InputError):
            fn.FrameSeries([440.0, 440.0], [0.5])

    def test_too_short_rejected(self):
        with pytest.raises(InputError):
            fn.FrameSeries([440.0], [0.5])

    def test_confidence_range_enforced(self):
        with pytest.raises(InputError):
            fn.FrameSeries([440.0, 440.0], [0.5, 1.2])

    def test_non_positive_f0_rejected(self):
        with pytest.raises(InputError):
            fn.FrameSeries([440.0, 0.0], [0.5, 0.5])

    def test_zero_confidence_frames_are_retained(self):
        fs = fn.FrameSeries([440.0, 440.0], [0.0, 0.0])
        assert len(fs) == 2


class TestAmplitudeEnvelope:
    def test_range_enforced(self):
        with pytest.raises(InputError):
            fn.AmplitudeEnvelope([0.5, 1.5])
        env = fn.AmplitudeEnvelope([0.0, 1.0, 0.5])
        assert len(env) == 3


class TestSegment:
    def test_empty_segment_rejected(self):
        with pytest.raises(InputError):
            fn.Segment(5, 5, 60.0)
        with pytest.raises(InputError):
            fn.Segment(6, 5, 60.0)

    def test_n_frames(self):
        assert fn.Segment(2, 7, 60.0).n_frames == 5


class TestNoteEvent:
    def test_pitch_consistency_enforced(self):
        with pytest.raises(InputError):
            fn.NoteEvent(0.0, 1.0, 69.0, 441.0, 100)

    def test_from_midi_derives_hz(self):
        note = fn.NoteEvent.from_midi(0.0, 1.0, 69.0, 100)
        assert note.pitch_hz == pytest.approx(440.0, rel=1e-12)
        assert note.duration_s == pytest.approx(1.0)

    def test_ordering_and_velocity_range(self):
        with pytest.raises(InputError):
            fn.NoteEvent.from_midi(1.0, 1.0, 69.0, 100)
        with pytest.raises(InputError):
            fn.NoteEvent.from_midi(0.0, 1.0, 69.0, 128)


class TestPipelineConfig:
    def test_defaults_match_the_documented_operating_point(self):
        config = fn.PipelineConfig()
        assert config.boundary_threshold == 0.002
        assert config.onset_threshold == 0.7
        assert config.velocity_min == 15
        assert config.min_duration_s == 0.030
        assert config.trim_velocity == 10
        assert config.merge_semitones == 1.0
        assert config.eval_onset_tolerance_s == 0.050
        assert config.eval_pitch_tolerance_cents == 50.0

    def test_validation(self):
        with pytest.raises(InputError):
            fn.PipelineConfig(boundary_threshold=-0.1)
        with pytest.raises(InputError):
            fn.PipelineConfig(onset_threshold=1.5)
        with pytest.raises(InputError):
            fn.PipelineConfig(velocity_min=200)
