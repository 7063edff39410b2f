"""Feature-extraction and annotation-conversion front end.

Produces the frame-wise f0/confidence CSVs (header ``time,frequency,
confidence``, one row per 10 ms) that the note-transcription package
consumes, and converts ground-truth annotations into its notes CSV
schema (header ``onset_s,offset_s,pitch_midi``).  All coupling to that
package goes through these file formats; nothing is imported from it.
"""

from .backends import BackendUnavailable, available_backends, select_backend
from .convert import CONVERT_FORMATS, convert_ground_truth
from .extract import HOP_S, ExtractionResult, extract_features, write_f0_csv

__version__ = "0.1.0"

__all__ = [
    "BackendUnavailable",
    "available_backends",
    "select_backend",
    "CONVERT_FORMATS",
    "convert_ground_truth",
    "HOP_S",
    "ExtractionResult",
    "extract_features",
    "write_f0_csv",
    "__version__",
]
