import json

import numpy as np
import pytest
from scipy.io import wavfile

import f0notes as fn
from f0notes.core import InputError, ParseError
from synth import write_wav


def _write(path, text):
    path.write_text(text)
    return str(path)


class TestF0Csv:
    def test_small_file(self, tmp_path):
        p = _write(
            tmp_path / "a.csv",
            "time,frequency,confidence\n0.00,440.0,0.9\n0.01,440.0,0.8\n0.02,441.0,0.7\n",
        )
        fs = fn.read_f0_csv(p)
        assert len(fs) == 3
        assert fs.hop_seconds == 0.01
        assert np.allclose(fs.f0_hz, [440.0, 440.0, 441.0])

    def test_crlf_accepted(self, tmp_path):
        p = _write(
            tmp_path / "a.csv",
            "time,frequency,confidence\r\n0.00,440.0,0.9\r\n0.01,440.0,0.8\r\n",
        )
        assert len(fn.read_f0_csv(p)) == 2

    def test_round_trip_preserves_six_decimals(self, tmp_path):
        rng = np.random.default_rng(71)
        fs = fn.FrameSeries(rng.uniform(100, 2000, 50), rng.uniform(0, 1, 50))
        p = tmp_path / "rt.csv"
        fn.write_f0_csv(fs, p)
        back = fn.read_f0_csv(p)
        assert np.allclose(back.f0_hz, fs.f0_hz, atol=5e-7)
        assert np.allclose(back.confidence, fs.confidence, atol=5e-7)

    def test_out_of_range_confidence_names_the_line(self, tmp_path):
        rows = ["time,frequency,confidence"]
        rows += [f"0.0{i},440.0,0.9" for i in range(3)]
        rows += ["0.03,440.0,1.2"]
        p = _write(tmp_path / "bad.csv", "\n".join(rows) + "\n")
        with pytest.raises(ParseError, match=r":5:"):
            fn.read_f0_csv(p)

    def test_non_uniform_grid_rejected(self, tmp_path):
        p = _write(
            tmp_path / "bad.csv",
            "time,frequency,confidence\n0.00,440.0,0.9\n0.01,440.0,0.9\n0.03,440.0,0.9\n",
        )
        with pytest.raises(ParseError, match="grid"):
            fn.read_f0_csv(p)

    def test_grid_tolerance_of_one_ms(self, tmp_path):
        p = _write(
            tmp_path / "ok.csv",
            "time,frequency,confidence\n0.0,440.0,0.9\n0.0109,440.0,0.9\n",
        )
        assert len(fn.read_f0_csv(p)) == 2

    def test_missing_header_rejected(self, tmp_path):
        p = _write(tmp_path / "bad.csv", "0.00,440.0,0.9\n")
        with pytest.raises(ParseError, match="header"):
            fn.read_f0_csv(p)

    def test_ragged_row_rejected(self, tmp_path):
        p = _write(
            tmp_path / "bad.csv",
            "time,frequency,confidence\n0.00,440.0,0.9\n0.01,440.0\n",
        )
        with pytest.raises(ParseError, match=r":3:"):
            fn.read_f0_csv(p)

    def test_non_numeric_cell_rejected(self, tmp_path):
        p = _write(
            tmp_path / "bad.csv",
            "time,frequency,confidence\n0.00,abc,0.9\n",
        )
        with pytest.raises(ParseError, match=r":2:"):
            fn.read_f0_csv(p)

    def test_non_positive_frequency_rejected(self, tmp_path):
        p = _write(
            tmp_path / "bad.csv",
            "time,frequency,confidence\n0.00,440.0,0.9\n0.01,0.0,0.9\n",
        )
        with pytest.raises(ParseError, match=r":3:"):
            fn.read_f0_csv(p)

    def test_missing_file_raises_oserror(self, tmp_path):
        with pytest.raises(OSError):
            fn.read_f0_csv(tmp_path / "nope.csv")


class TestReadAudio:
    def test_silence(self, tmp_path):
        p = tmp_path / "s.wav"
        write_wav(p, np.zeros(44100))
        samples, sr = fn.read_audio(p)
        assert sr == 44100
        assert len(samples) == 44100
        assert np.all(samples == 0.0)

    def test_full_scale_square_wave_scaling(self, tmp_path):
        p = tmp_path / "sq.wav"
        data = np.array([32767, -32768] * 100, dtype=np.int16)
        wavfile.write(p, 44100, data)
        samples, _ = fn.read_audio(p)
        assert samples.max() == pytest.approx(32767 / 32768)
        assert samples.min() == pytest.approx(-1.0)

    def test_stereo_averaged_to_mono(self, tmp_path):
        p = tmp_path / "st.wav"
        x = (np.random.default_rng(1).normal(size=1000) * 10000).astype(np.int16)
        wavfile.write(p, 44100, np.stack([x, -x], axis=1))
        samples, _ = fn.read_audio(p)
        assert samples.shape == (1000,)
        assert np.all(samples == 0.0)

    def test_float_wav_passthrough(self, tmp_path):
        p = tmp_path / "f.wav"
        data = np.linspace(-0.5, 0.5, 1000).astype(np.float32)
        wavfile.write(p, 44100, data)
        samples, _ = fn.read_audio(p)
        assert np.allclose(samples, data, atol=1e-7)

    def test_uint8_scaling(self, tmp_path):
        p = tmp_path / "u8.wav"
        wavfile.write(p, 44100, np.array([0, 128, 255], dtype=np.uint8))
        samples, _ = fn.read_audio(p)
        assert np.allclose(samples, [-1.0, 0.0, 127 / 128])

    def test_int32_scaling(self, tmp_path):
        p = tmp_path / "i32.wav"
        wavfile.write(p, 44100, np.array([2**31 - 1, -(2**31)], dtype=np.int32))
        samples, _ = fn.read_audio(p)
        assert samples[0] == pytest.approx(1.0, abs=1e-9)
        assert samples[1] == pytest.approx(-1.0)

    def test_garbage_file_rejected(self, tmp_path):
        p = tmp_path / "g.wav"
        p.write_bytes(b"not a wav file at all")
        with pytest.raises((InputError, OSError)):
            fn.read_audio(p)


class TestComputeEnvelope:
    def test_silence(self):
        env = fn.compute_envelope(np.zeros(44100), 44100, 0.01, 100)
        assert len(env) == 100
        assert np.all(env.values == 0.0)

    def test_constant_full_scale(self):
        env = fn.compute_envelope(np.ones(44100), 44100, 0.01, 100)
        assert np.all(env.values == 1.0)

    def test_single_impulse(self):
        samples = np.zeros(44100)
        samples[int(3.5 * 441)] = 0.8  # inside frame 3
        env = fn.compute_envelope(samples, 44100, 0.01, 10)
        expected = np.zeros(10)
        expected[3] = 0.8
        assert np.allclose(env.values, expected)

    def test_padding_past_audio_end(self):
        env = fn.compute_envelope(np.ones(441 * 5), 44100, 0.01, 10)
        assert np.all(env.values[:5] == 1.0)
        assert np.all(env.values[5:] == 0.0)

    def test_values_capped_at_one(self):
        env = fn.compute_envelope(np.full(441, 1.5), 44100, 0.01, 1)
        assert env.values[0] == 1.0

    def test_empty_audio_rejected(self):
        with pytest.raises(InputError):
            fn.compute_envelope(np.empty(0), 44100, 0.01, 10)


class TestNotesCsv:
    def test_round_trip(self, tmp_path):
        notes = [
            fn.NoteEvent.from_midi(0.0, 0.5, 60.25, 100),
            fn.NoteEvent.from_midi(0.5, 1.0, 72.0, 100),
        ]
        p = tmp_path / "n.csv"
        fn.write_notes_csv(notes, p)
        back = fn.read_notes(p)
        assert len(back) == 2
        assert back[0].onset_s == pytest.approx(0.0)
        assert back[0].pitch_midi == pytest.approx(60.25)

    def test_bad_header(self, tmp_path):
        p = _write(tmp_path / "n.csv", "onset,offset,pitch\n")
        with pytest.raises(ParseError, match="header"):
            fn.read_notes(p)

    def test_inverted_interval_names_the_line(self, tmp_path):
        p = _write(
            tmp_path / "n.csv",
            "onset_s,offset_s,pitch_midi\n0.0,0.5,60\n0.9,0.7,62\n",
        )
        with pytest.raises(ParseError, match=r":3:"):
            fn.read_notes(p)


class TestNotesJson:
    def test_lossless_round_trip(self, tmp_path):
        notes = [
            fn.NoteEvent.from_midi(0.123456789, 0.987654321, 61.33, 88),
            fn.NoteEvent.from_midi(1.0, 2.0, 69.0, 127),
        ]
        p = tmp_path / "n.json"
        fn.write_notes_json(notes, p)
        back = fn.read_notes_json(p)
        assert back == notes

    def test_schema_fields_present(self, tmp_path):
        p = tmp_path / "n.json"
        fn.write_notes_json([fn.NoteEvent.from_midi(0.0, 1.0, 69.0, 100)], p)
        [item] = json.loads(p.read_text())
        assert set(item) == {"onset_s", "offset_s", "pitch_midi", "pitch_hz", "velocity"}

    def test_empty_list(self, tmp_path):
        p = tmp_path / "n.json"
        fn.write_notes_json([], p)
        assert fn.read_notes_json(p) == []

    def test_invalid_json_rejected(self, tmp_path):
        p = _write(tmp_path / "n.json", "{broken")
        with pytest.raises(ParseError):
            fn.read_notes_json(p)


class TestMidi:
    def test_header_bytes(self, tmp_path):
        p = tmp_path / "n.mid"
        fn.write_midi([fn.NoteEvent.from_midi(0.0, 0.5, 69.0, 100)], p)
        # format 0, one track, 480 ticks per quarter
        assert p.read_bytes()[:14] == b"MThd\x00\x00\x00\x06\x00\x00\x00\x01\x01\xe0"

    def test_half_second_note_spans_480_ticks(self, tmp_path):
        p = tmp_path / "n.mid"
        fn.write_midi([fn.NoteEvent.from_midi(0.0, 0.5, 69.0, 100)], p)
        [note] = fn.read_midi(p)
        assert note.onset_s == pytest.approx(0.0)
        assert note.offset_s == pytest.approx(0.5)
        assert note.pitch_midi == 69.0
        assert note.velocity == 100

    def test_round_trip_within_one_tick(self, tmp_path):
        rng = np.random.default_rng(73)
        notes = []
        cursor = 0.0
        for _ in range(40):
            cursor += float(rng.uniform(0.001, 0.3))
            duration = float(rng.uniform(0.05, 0.7))
            notes.append(
                fn.NoteEvent.from_midi(
                    cursor, cursor + duration,
                    float(rng.integers(40, 100)), int(rng.integers(1, 128)),
                )
            )
            cursor += duration
        p = tmp_path / "rt.mid"
        fn.write_midi(notes, p)
        back = fn.read_midi(p)
        assert len(back) == len(notes)
        tick = 1.0 / 960.0
        for a, b in zip(notes, back):
            assert abs(a.onset_s - b.onset_s) <= tick + 1e-9
            assert abs(a.offset_s - b.offset_s) <= tick + 1e-9
            assert b.pitch_midi == fn.round_half_up(a.pitch_midi)
            assert b.velocity == a.velocity

    def test_fractional_pitch_rounds_half_up(self, tmp_path):
        p = tmp_path / "n.mid"
        fn.write_midi([fn.NoteEvent.from_midi(0.0, 0.5, 60.4, 90),
                       fn.NoteEvent.from_midi(1.0, 1.5, 60.5, 90)], p)
        back = fn.read_midi(p)
        assert [n.pitch_midi for n in back] == [60.0, 61.0]

    def test_empty_note_list(self, tmp_path):
        p = tmp_path / "empty.mid"
        fn.write_midi([], p)
        assert fn.read_midi(p) == []

    def test_back_to_back_equal_pitch_notes_survive(self, tmp_path):
        notes = [fn.NoteEvent.from_midi(0.0, 0.5, 69.0, 100),
                 fn.NoteEvent.from_midi(0.5, 1.0, 69.0, 90)]
        p = tmp_path / "rep.mid"
        fn.write_midi(notes, p)
        back = fn.read_midi(p)
        assert len(back) == 2
        assert back[0].offset_s == pytest.approx(0.5)
        assert back[1].onset_s == pytest.approx(0.5)

    def test_out_of_range_pitch_rejected(self, tmp_path):
        with pytest.raises(InputError):
            fn.write_midi(
                [fn.NoteEvent.from_midi(0.0, 0.5, 140.0, 100)], tmp_path / "x.mid"
            )

    def test_non_midi_file_rejected(self, tmp_path):
        p = tmp_path / "x.mid"
        p.write_bytes(b"RIFFxxxx")
        with pytest.raises(ParseError):
            fn.read_midi(p)


class TestDispatchAndOnsets:
    def test_read_notes_any_by_suffix(self, tmp_path):
        notes = [fn.NoteEvent.from_midi(0.0, 0.5, 69.0, 100)]
        fn.write_notes_csv(notes, tmp_path / "n.csv")
        fn.write_notes_json(notes, tmp_path / "n.json")
        fn.write_midi(notes, tmp_path / "n.mid")
        for name in ("n.csv", "n.json", "n.mid"):
            loaded = fn.read_notes_any(tmp_path / name)
            assert len(loaded) == 1
            assert loaded[0].pitch_midi == 69.0

    def test_read_onsets_file(self, tmp_path):
        p = _write(tmp_path / "o.txt", "0.5\n1.25\n\n2.0\n")
        assert fn.read_onsets_file(p) == [0.5, 1.25, 2.0]

    def test_unsorted_onsets_are_sorted(self, tmp_path):
        p = _write(tmp_path / "o.txt", "2.0\n0.5\n")
        assert fn.read_onsets_file(p) == [0.5, 2.0]

    def test_bad_onset_line(self, tmp_path):
        p = _write(tmp_path / "o.txt", "0.5\nxyz\n")
        with pytest.raises(ParseError, match=r":2:"):
            fn.read_onsets_file(p)


class TestTrackBundle:
    def test_envelope_length_checked(self):
        fs = fn.FrameSeries([440.0] * 10, [0.9] * 10)
        env = fn.AmplitudeEnvelope(np.full(5, 0.5))
        with pytest.raises(InputError):
            fn.TrackBundle(frame_series=fs, envelope=env)

    def test_load_track(self, tmp_path):
        fs = fn.FrameSeries([440.0] * 20, [0.9] * 20)
        fn.write_f0_csv(fs, tmp_path / "t.csv")
        write_wav(tmp_path / "t.wav", 0.5 * np.ones(int(0.2 * 44100)))
        fn.write_notes_csv(
            [fn.NoteEvent.from_midi(0.0, 0.2, 69.0, 100)], tmp_path / "gt.csv"
        )
        bundle = fn.load_track(
            tmp_path / "t.csv", tmp_path / "t.wav", tmp_path / "gt.csv"
        )
        assert len(bundle.frame_series) == 20
        assert len(bundle.envelope) == 20
        assert bundle.sample_rate == 44100
        assert len(bundle.ground_truth) == 1
