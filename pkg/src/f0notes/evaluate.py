"""Tolerance-based note matching and transcription metrics.

A reference/estimate note pair is admissible when the onsets agree within
a time tolerance and the pitches agree within a cent tolerance; optionally
the offsets must also agree within ``max(onset tolerance, 20% of the
reference duration)``.  The reported matching is the maximum-cardinality
one-to-one assignment over admissible pairs, found with augmenting paths.
Precision, recall, F-measure, and mean matched-pair overlap follow.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

from .core import InputError, PipelineConfig

OFFSET_MODES = ("ignore", "tolerance")

OFFSET_DURATION_RATIO = 0.2  # fraction of the reference duration


@dataclass(frozen=True)
class EvalReport:
    """Matched-note metrics for one reference/estimate pair of note lists."""

    precision: float
    recall: float
    f_measure: float
    avg_overlap: float
    matches: tuple[tuple[int, int], ...]


def pitch_difference_cents(ref_hz: float, est_hz: float) -> float:
    """Signed pitch difference of two frequencies in cents."""
    return 1200.0 * math.log2(est_hz / ref_hz)


def _admissible(ref, est, onset_tolerance_s, pitch_tolerance_cents, offset_mode):
    if abs(ref.onset_s - est.onset_s) > onset_tolerance_s:
        return False
    if abs(pitch_difference_cents(ref.pitch_hz, est.pitch_hz)) > pitch_tolerance_cents:
        return False
    if offset_mode == "tolerance":
        offset_tolerance = max(
            onset_tolerance_s, OFFSET_DURATION_RATIO * ref.duration_s
        )
        if abs(ref.offset_s - est.offset_s) > offset_tolerance:
            return False
    return True


def _augment(root, adjacency, match_of_est, match_of_ref):
    # Breadth-first alternating-path search from an unmatched reference.
    parent_ref_of_est = {}
    visited_refs = {root}
    queue = deque([root])
    while queue:
        r = queue.popleft()
        for e in adjacency[r]:
            if e in parent_ref_of_est:
                continue
            parent_ref_of_est[e] = r
            if match_of_est[e] is None:
                while e is not None:  # flip the path back to the root
                    r2 = parent_ref_of_est[e]
                    previous = match_of_ref[r2]
                    match_of_est[e] = r2
                    match_of_ref[r2] = e
                    e = previous
                return True
            nxt = match_of_est[e]
            if nxt not in visited_refs:
                visited_refs.add(nxt)
                queue.append(nxt)
    return False


def match_notes(
    ref,
    est,
    onset_tolerance_s: float = 0.050,
    pitch_tolerance_cents: float = 50.0,
    offset_mode: str = "ignore",
) -> list[tuple[int, int]]:
    """Maximum-cardinality one-to-one matching of admissible note pairs.

    Returns (reference index, estimate index) pairs sorted by reference
    index.  References are matched greedily in index order with augmenting
    paths, so ties between maximum matchings resolve toward earlier
    reference indices.
    """
    if onset_tolerance_s <= 0 or pitch_tolerance_cents <= 0:
        raise InputError("matching tolerances must be positive")
    if offset_mode not in OFFSET_MODES:
        raise InputError(f"offset_mode must be one of {OFFSET_MODES}")

    adjacency = [
        [
            e
            for e, est_note in enumerate(est)
            if _admissible(
                ref_note, est_note, onset_tolerance_s, pitch_tolerance_cents, offset_mode
            )
        ]
        for ref_note in ref
    ]
    match_of_est: list[int | None] = [None] * len(est)
    match_of_ref: list[int | None] = [None] * len(ref)
    for r in range(len(ref)):
        if adjacency[r]:
            _augment(r, adjacency, match_of_est, match_of_ref)
    return sorted((r, e) for e, r in enumerate(match_of_est) if r is not None)


def _check_non_overlapping(notes, label):
    ordered = sorted(notes, key=lambda n: (n.onset_s, n.offset_s))
    for a, b in zip(ordered, ordered[1:]):
        if b.onset_s < a.offset_s - 1e-9:
            raise InputError(
                f"{label} notes overlap in time: [{a.onset_s}, {a.offset_s}) and "
                f"[{b.onset_s}, {b.offset_s})"
            )


def _interval_overlap(a, b) -> float:
    intersection = max(0.0, min(a.offset_s, b.offset_s) - max(a.onset_s, b.onset_s))
    union = a.duration_s + b.duration_s - intersection
    return intersection / union


def evaluate(
    ref,
    est,
    config: PipelineConfig | None = None,
    offset_mode: str = "ignore",
) -> EvalReport:
    """Precision/recall/F-measure and mean overlap for an estimate vs. a reference.

    Both note lists must individually be non-overlapping in time.  A zero
    denominator (empty list) yields 0 for the affected metric, and the
    average overlap is 0 when nothing matched.
    """
    config = config or PipelineConfig()
    _check_non_overlapping(ref, "reference")
    _check_non_overlapping(est, "estimate")
    matches = match_notes(
        ref,
        est,
        onset_tolerance_s=config.eval_onset_tolerance_s,
        pitch_tolerance_cents=config.eval_pitch_tolerance_cents,
        offset_mode=offset_mode,
    )
    precision = len(matches) / len(est) if est else 0.0
    recall = len(matches) / len(ref) if ref else 0.0
    f_measure = (
        2.0 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    )
    overlaps = [_interval_overlap(ref[r], est[e]) for r, e in matches]
    avg_overlap = sum(overlaps) / len(overlaps) if overlaps else 0.0
    return EvalReport(
        precision=precision,
        recall=recall,
        f_measure=f_measure,
        avg_overlap=avg_overlap,
        matches=tuple(matches),
    )
