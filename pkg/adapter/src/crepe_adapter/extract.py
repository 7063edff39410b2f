"""Frame-wise f0/confidence extraction to the 10 ms CSV contract."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.io import wavfile

from .backends import HOP_S, MODEL_CAPACITIES, Backend, select_backend

F0_HEADER = "time,frequency,confidence"


class AdapterError(ValueError):
    """Invalid input or arguments (maps to CLI exit code 2)."""


@dataclass(frozen=True)
class ExtractionResult:
    """One extracted track: aligned 10 ms arrays plus provenance metadata."""

    time_s: np.ndarray
    frequency_hz: np.ndarray
    confidence: np.ndarray
    metadata: dict


def read_audio(path) -> tuple[np.ndarray, int]:
    """Decode a WAV file to mono float samples in [-1, 1] and its rate."""
    try:
        sample_rate, data = wavfile.read(path)
    except ValueError as exc:
        raise AdapterError(f"{path}: not a decodable WAV file ({exc})") from exc
    if data.ndim == 2:
        data = data.mean(axis=1)
    if data.dtype == np.int16:
        samples = data / 32768.0
    elif data.dtype == np.int32:
        samples = data / 2147483648.0
    elif data.dtype == np.uint8:
        samples = (data.astype(float) - 128.0) / 128.0
    else:
        samples = data.astype(float)
    if len(samples) == 0:
        raise AdapterError(f"{path}: audio stream is empty")
    return samples, int(sample_rate)


def extract_features(
    audio_path,
    model_capacity: str = "full",
    backend: Backend | None = None,
) -> ExtractionResult:
    """Run the pitch tracker over a WAV file.

    Emits exactly ceil(duration / 10 ms) frames with times 0.00, 0.01, ...
    regardless of the backend's native framing; backend output is trimmed
    or edge-padded to that count.  The metadata records which backend and
    model capacity produced the numbers.
    """
    if model_capacity not in MODEL_CAPACITIES:
        raise AdapterError(
            f"model capacity {model_capacity!r} not in {MODEL_CAPACITIES}"
        )
    samples, sample_rate = read_audio(audio_path)
    if backend is None:
        backend = select_backend()

    frequency, confidence = backend.predict(samples, sample_rate, model_capacity)
    frequency = np.asarray(frequency, dtype=float)
    confidence = np.asarray(confidence, dtype=float)

    n = max(1, math.ceil(len(samples) / sample_rate / HOP_S))
    if len(frequency) >= n:
        frequency, confidence = frequency[:n], confidence[:n]
    else:
        pad = n - len(frequency)
        frequency = np.concatenate([frequency, np.repeat(frequency[-1], pad)])
        confidence = np.concatenate([confidence, np.repeat(confidence[-1], pad)])

    if np.any(frequency <= 0) or not np.all(np.isfinite(frequency)):
        raise AdapterError(f"{backend.name} produced non-positive frequencies")

    metadata = {
        "source": Path(audio_path).name,
        "backend": backend.name,
        "backend_version": backend.version,
        "model_capacity": model_capacity,
        "hop_ms": round(HOP_S * 1000),
        "sample_rate": sample_rate,
        "n_frames": n,
    }
    return ExtractionResult(
        time_s=np.arange(n) * HOP_S,
        frequency_hz=frequency,
        confidence=np.clip(confidence, 0.0, 1.0),
        metadata=metadata,
    )


def write_f0_csv(result: ExtractionResult, path) -> None:
    with open(path, "w") as fh:
        fh.write(F0_HEADER + "\n")
        for t, f, c in zip(result.time_s, result.frequency_hz, result.confidence):
            fh.write(f"{t:.6f},{f:.6f},{c:.6f}\n")


def write_metadata(result: ExtractionResult, path) -> None:
    with open(path, "w") as fh:
        json.dump(result.metadata, fh, indent=2)
        fh.write("\n")
