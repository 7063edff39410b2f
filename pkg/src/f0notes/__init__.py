"""Note transcription from frame-wise pitch-tracker output.

The package turns an f0/confidence track (10 ms hop) plus optional source
audio into discrete note events, and scores transcriptions against
reference notes with tolerance-based matching.
"""

from .core import (
    A4_HZ,
    A4_MIDI,
    AmplitudeEnvelope,
    FrameSeries,
    InputError,
    NoteEvent,
    ParseError,
    PipelineConfig,
    Segment,
    hz_to_midi,
    midi_to_hz,
    round_half_up,
)
from .boundaries import (
    combined_signal,
    initial_segments,
    merge_segments,
    pick_peaks,
)
from .evaluate import EvalReport, evaluate, match_notes
from .onsets import OnsetTrack, detect_onsets, onset_strength, split_repeated_notes
from .pipeline import BoundaryAnalysis, boundary_analysis, transcribe, transcribe_bundle
from .pitch import abs_gradient, midi_track, normalize_gradient
from .refine import (
    RefinementReport,
    filter_by_duration,
    filter_by_velocity,
    refine_notes,
    segments_to_notes,
    trim_by_amplitude,
)
from .trackio import (
    TrackBundle,
    compute_envelope,
    load_track,
    read_audio,
    read_f0_csv,
    read_midi,
    read_notes,
    read_notes_any,
    read_notes_json,
    read_onsets_file,
    write_f0_csv,
    write_midi,
    write_notes_csv,
    write_notes_json,
)

__version__ = "0.1.0"

__all__ = [
    "A4_HZ",
    "A4_MIDI",
    "AmplitudeEnvelope",
    "BoundaryAnalysis",
    "EvalReport",
    "FrameSeries",
    "InputError",
    "NoteEvent",
    "OnsetTrack",
    "ParseError",
    "PipelineConfig",
    "RefinementReport",
    "Segment",
    "TrackBundle",
    "abs_gradient",
    "boundary_analysis",
    "combined_signal",
    "compute_envelope",
    "detect_onsets",
    "evaluate",
    "filter_by_duration",
    "filter_by_velocity",
    "hz_to_midi",
    "initial_segments",
    "load_track",
    "match_notes",
    "merge_segments",
    "midi_to_hz",
    "midi_track",
    "normalize_gradient",
    "onset_strength",
    "pick_peaks",
    "read_audio",
    "read_f0_csv",
    "read_midi",
    "read_notes",
    "read_notes_any",
    "read_notes_json",
    "read_onsets_file",
    "refine_notes",
    "round_half_up",
    "segments_to_notes",
    "split_repeated_notes",
    "transcribe",
    "transcribe_bundle",
    "trim_by_amplitude",
    "write_f0_csv",
    "write_midi",
    "write_notes_csv",
    "write_notes_json",
    "__version__",
]
