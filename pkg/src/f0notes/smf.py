"""Minimal standard-MIDI-file codec for note events.

Writes format 0 files with one track, 480 ticks per quarter note, and a
fixed 120 BPM tempo, so one tick is 1/960 s.  The reader assumes the same
fixed-tempo layout (it honors the first tempo event and ignores later
ones), which covers every file this package writes.  Transcriptions carry
no tempo semantics; the tempo only fixes the tick-to-seconds mapping.
"""

from __future__ import annotations

import struct

from .core import InputError, NoteEvent, ParseError, round_half_up

TICKS_PER_QUARTER = 480
DEFAULT_TEMPO_US = 500_000  # microseconds per quarter note, i.e. 120 BPM

_NOTE_OFF = 0x80
_NOTE_ON = 0x90
_META = 0xFF
_META_TEMPO = 0x51
_META_END_OF_TRACK = 0x2F

# data byte counts for channel messages, by high status nibble
_CHANNEL_DATA_BYTES = {0x8: 2, 0x9: 2, 0xA: 2, 0xB: 2, 0xC: 1, 0xD: 1, 0xE: 2}


def encode_varlen(value: int) -> bytes:
    """Encode a nonnegative integer as a MIDI variable-length quantity."""
    if value < 0:
        raise InputError("variable-length quantities must be nonnegative")
    chunks = [value & 0x7F]
    value >>= 7
    while value:
        chunks.append(0x80 | (value & 0x7F))
        value >>= 7
    return bytes(reversed(chunks))


def seconds_to_ticks(seconds: float, tempo_us: int = DEFAULT_TEMPO_US) -> int:
    ticks_per_second = TICKS_PER_QUARTER * 1_000_000 / tempo_us
    return round_half_up(seconds * ticks_per_second)


def ticks_to_seconds(ticks: int, tempo_us: int = DEFAULT_TEMPO_US) -> float:
    return ticks * tempo_us / (TICKS_PER_QUARTER * 1_000_000)


def write_midi(notes, path) -> None:
    """Write notes as a format 0 MIDI file.

    The MIDI key is the round-half-up integer of the fractional pitch;
    velocities are written as stored.  Simultaneous off/on events at the
    same tick are ordered off-first so back-to-back equal-pitch notes
    survive a round trip.
    """
    events = []
    for note in notes:
        key = round_half_up(note.pitch_midi)
        if not 0 <= key <= 127:
            raise InputError(f"pitch_midi {note.pitch_midi} outside the MIDI key range")
        on_tick = seconds_to_ticks(note.onset_s)
        off_tick = seconds_to_ticks(note.offset_s)
        if off_tick <= on_tick:
            off_tick = on_tick + 1  # sub-tick note, keep it audible
        events.append((on_tick, 1, key, note.velocity))
        events.append((off_tick, 0, key, 0))
    events.sort()

    track = bytearray()
    track += encode_varlen(0)
    track += bytes((_META, _META_TEMPO, 3)) + DEFAULT_TEMPO_US.to_bytes(3, "big")
    previous_tick = 0
    for tick, is_on, key, velocity in events:
        track += encode_varlen(tick - previous_tick)
        status = _NOTE_ON if is_on else _NOTE_OFF
        track += bytes((status, key, velocity))
        previous_tick = tick
    track += encode_varlen(0)
    track += bytes((_META, _META_END_OF_TRACK, 0))

    with open(path, "wb") as fh:
        fh.write(b"MThd" + struct.pack(">IHHH", 6, 0, 1, TICKS_PER_QUARTER))
        fh.write(b"MTrk" + struct.pack(">I", len(track)))
        fh.write(track)


class _Reader:
    def __init__(self, data: bytes, path):
        self.data = data
        self.pos = 0
        self.path = path

    def fail(self, message: str):
        raise ParseError(message, path=self.path)

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.data):
            self.fail("truncated file")
        chunk = self.data[self.pos : self.pos + n]
        self.pos += n
        return chunk

    def byte(self) -> int:
        return self.take(1)[0]

    def varlen(self) -> int:
        value = 0
        for _ in range(4):
            b = self.byte()
            value = (value << 7) | (b & 0x7F)
            if not b & 0x80:
                return value
        self.fail("overlong variable-length quantity")


def read_midi(path) -> list[NoteEvent]:
    """Read a format 0 MIDI file back into note events sorted by onset.

    Only note on/off events are interpreted; every other message is
    skipped.  Note-on with velocity 0 counts as note-off.  Pitch is the
    integer key, so fractional pitch does not survive a round trip.
    """
    with open(path, "rb") as fh:
        reader = _Reader(fh.read(), path)

    if reader.take(4) != b"MThd":
        reader.fail("not a MIDI file (missing MThd)")
    header_length, fmt, n_tracks, division = struct.unpack(">IHHH", reader.take(10))
    if header_length != 6:
        reader.fail(f"unexpected header length {header_length}")
    if fmt != 0 or n_tracks != 1:
        reader.fail(f"expected a single-track format 0 file, got format {fmt}")
    if division & 0x8000:
        reader.fail("SMPTE time division is not supported")

    if reader.take(4) != b"MTrk":
        reader.fail("missing MTrk chunk")
    (track_length,) = struct.unpack(">I", reader.take(4))
    end = reader.pos + track_length

    tempo_us = DEFAULT_TEMPO_US
    tempo_seen = False
    tick = 0
    running_status = None
    open_notes: dict[int, tuple[int, int]] = {}  # key -> (onset tick, velocity)
    notes = []

    def close_note(key: int, off_tick: int):
        if key not in open_notes:
            return
        on_tick, velocity = open_notes.pop(key)
        if off_tick <= on_tick:
            return
        onset_s = tick_seconds(on_tick)
        offset_s = tick_seconds(off_tick)
        notes.append(NoteEvent.from_midi(onset_s, offset_s, float(key), velocity))

    def tick_seconds(t: int) -> float:
        return t * tempo_us / (division * 1_000_000)

    while reader.pos < end:
        tick += reader.varlen()
        status = reader.byte()
        if status < 0x80:
            if running_status is None:
                reader.fail("data byte without a preceding status byte")
            reader.pos -= 1
            status = running_status
        if status == _META:
            meta_type = reader.byte()
            payload = reader.take(reader.varlen())
            if meta_type == _META_TEMPO and len(payload) == 3 and not tempo_seen:
                tempo_us = int.from_bytes(payload, "big")
                tempo_seen = True
            if meta_type == _META_END_OF_TRACK:
                break
            continue
        if status in (0xF0, 0xF7):  # sysex
            reader.take(reader.varlen())
            running_status = None
            continue
        running_status = status
        kind = status >> 4
        data = reader.take(_CHANNEL_DATA_BYTES.get(kind, 0))
        if kind == 0x9 and data[1] > 0:
            if data[0] in open_notes:
                close_note(data[0], tick)  # overlapping same-key note, split
            open_notes[data[0]] = (tick, data[1])
        elif kind == 0x8 or (kind == 0x9 and data[1] == 0):
            close_note(data[0], tick)

    for key in sorted(open_notes):
        close_note(key, tick)
    notes.sort(key=lambda n: (n.onset_s, n.pitch_midi))
    return notes
