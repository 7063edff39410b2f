"""Pitch-tracker backends, selected at runtime.

The neural backends (crepe, then torchcrepe) are used when their
packages are installed; otherwise a built-in autocorrelation tracker
takes over so the extraction contract keeps working on machines without
model weights.  Every backend emits one (frequency, confidence) pair
per 10 ms frame; which backend produced a file is recorded in the
extraction sidecar.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import signal

HOP_S = 0.01
ANALYSIS_SR = 16000
MODEL_CAPACITIES = ("tiny", "full")

# built-in tracker parameters
_WINDOW = 1024
_FMIN = 50.0
_FMAX = 2000.0
_SILENCE_RMS = 1e-6
_SILENCE_HZ = 100.0  # positive placeholder frequency for unvoiced frames


class BackendUnavailable(Exception):
    """Raised when a named backend's package is not importable."""


@dataclass(frozen=True)
class Backend:
    name: str
    version: str
    predict: Callable[[np.ndarray, int, str], tuple[np.ndarray, np.ndarray]]


def _resample(samples: np.ndarray, sample_rate: int) -> np.ndarray:
    if sample_rate == ANALYSIS_SR:
        return np.asarray(samples, dtype=float)
    g = math.gcd(int(sample_rate), ANALYSIS_SR)
    return signal.resample_poly(samples, ANALYSIS_SR // g, int(sample_rate) // g)


def _builtin_predict(samples, sample_rate, capacity):
    """Frame-wise autocorrelation pitch tracking (YIN-style).

    Windows of 64 ms centered every 10 ms; the cumulative-mean-normalized
    difference function is minimized over the 50-2000 Hz lag range with
    parabolic refinement.  Confidence is one minus the normalized
    difference at the chosen lag, so aperiodic frames score near zero.
    The capacity argument only selects a size for the neural backends;
    the built-in analysis is identical for both.
    """
    x = _resample(samples, sample_rate)
    hop = round(HOP_S * ANALYSIS_SR)
    n_frames = max(1, math.ceil(len(x) / hop))

    half = _WINDOW // 2
    needed = (n_frames - 1) * hop + _WINDOW
    right = max(0, needed - (len(x) + half))
    padded = np.concatenate([np.zeros(half), x, np.zeros(right)])
    frames = np.lib.stride_tricks.sliding_window_view(padded, _WINDOW)[::hop]
    frames = np.ascontiguousarray(frames[:n_frames])

    tau_min = int(ANALYSIS_SR / _FMAX)
    tau_max = int(ANALYSIS_SR / _FMIN)
    nfft = 1 << (_WINDOW + tau_max + 1).bit_length()
    spec = np.fft.rfft(frames, n=nfft)
    acf = np.fft.irfft(spec * np.conj(spec), n=nfft)[:, : tau_max + 2]

    # difference function d(tau) = 2 * (acf(0) - acf(tau)), then the
    # cumulative-mean normalization that flattens the energy dependence
    d = 2.0 * (acf[:, :1] - acf)
    d = np.maximum(d, 0.0)
    cums = np.cumsum(d[:, 1:], axis=1)
    taus = np.arange(1, d.shape[1])
    with np.errstate(divide="ignore", invalid="ignore"):
        cmnd = np.where(cums > 0, d[:, 1:] * taus / cums, 1.0)
    cmnd = np.concatenate([np.ones((len(frames), 1)), cmnd], axis=1)

    best = np.argmin(cmnd[:, tau_min : tau_max + 1], axis=1) + tau_min
    rows = np.arange(len(frames))
    y0 = cmnd[rows, best]
    ym = cmnd[rows, best - 1]
    yp = cmnd[rows, best + 1]
    denom = ym - 2.0 * y0 + yp
    flat = np.abs(denom) <= 1e-12
    shift = np.where(flat, 0.0, 0.5 * (ym - yp) / np.where(flat, 1.0, denom))
    shift = np.clip(shift, -1.0, 1.0)

    frequency = ANALYSIS_SR / (best + shift)
    confidence = np.clip(1.0 - y0, 0.0, 1.0)

    rms = np.sqrt(np.mean(frames**2, axis=1))
    silent = rms < _SILENCE_RMS
    frequency = np.where(silent, _SILENCE_HZ, frequency)
    confidence = np.where(silent, 0.0, confidence)
    return frequency, confidence


def _crepe_predict(samples, sample_rate, capacity):
    import crepe

    _, frequency, confidence, _ = crepe.predict(
        np.asarray(samples, dtype=np.float32),
        sample_rate,
        model_capacity=capacity,
        step_size=int(HOP_S * 1000),
        viterbi=True,
        verbose=0,
    )
    return np.asarray(frequency, dtype=float), np.clip(confidence, 0.0, 1.0)


def _torchcrepe_predict(samples, sample_rate, capacity):
    import torch
    import torchcrepe

    x = _resample(samples, sample_rate).astype(np.float32)
    audio = torch.from_numpy(x)[None]
    hop = round(HOP_S * ANALYSIS_SR)
    pitch, periodicity = torchcrepe.predict(
        audio,
        ANALYSIS_SR,
        hop,
        fmin=_FMIN,
        fmax=_FMAX,
        model=capacity,
        return_periodicity=True,
        batch_size=512,
        device="cpu",
    )
    frequency = pitch[0].cpu().numpy().astype(float)
    confidence = np.clip(periodicity[0].cpu().numpy().astype(float), 0.0, 1.0)
    return frequency, confidence


def _load_crepe() -> Backend:
    try:
        import crepe
    except ImportError as exc:
        raise BackendUnavailable("crepe is not installed") from exc
    version = getattr(crepe, "__version__", "unknown")
    return Backend("crepe", version, _crepe_predict)


def _load_torchcrepe() -> Backend:
    try:
        import torchcrepe
    except ImportError as exc:
        raise BackendUnavailable("torchcrepe is not installed") from exc
    version = getattr(torchcrepe, "__version__", "unknown")
    return Backend("torchcrepe", version, _torchcrepe_predict)


def _load_builtin() -> Backend:
    from . import __version__

    return Backend("builtin-autocorrelation", __version__, _builtin_predict)


_LOADERS = {
    "crepe": _load_crepe,
    "torchcrepe": _load_torchcrepe,
    "builtin-autocorrelation": _load_builtin,
}


def available_backends() -> list[str]:
    """Names of backends importable right now, in preference order."""
    names = []
    for name, loader in _LOADERS.items():
        try:
            loader()
        except BackendUnavailable:
            continue
        names.append(name)
    return names


def select_backend(name: str | None = None) -> Backend:
    """Return the named backend, or the best available one.

    Preference order: crepe, torchcrepe, then the built-in tracker
    (always available).
    """
    if name is not None:
        if name not in _LOADERS:
            raise BackendUnavailable(
                f"unknown backend {name!r}; known: {', '.join(_LOADERS)}"
            )
        return _LOADERS[name]()
    for loader in _LOADERS.values():
        try:
            return loader()
        except BackendUnavailable:
            continue
    raise BackendUnavailable("no pitch-tracking backend available")
