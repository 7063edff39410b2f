"""Manifest-driven batch transcription and evaluation.

A manifest is a CSV with header ``f0_csv,audio,ground_truth``; relative
paths resolve against the manifest's directory, and an empty audio cell
runs that track without the amplitude stages.  Tracks are processed
independently (optionally in a process pool) and reported in manifest
order; a failing track becomes an error row and is excluded from the
aggregate means.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import partial

from .core import ParseError, PipelineConfig
from .evaluate import EvalReport, evaluate
from .pipeline import transcribe_bundle
from .trackio import load_track

MANIFEST_HEADER = ["f0_csv", "audio", "ground_truth"]

METRIC_FIELDS = ("precision", "recall", "f_measure", "avg_overlap")


@dataclass(frozen=True)
class TrackRow:
    """Outcome for one manifest entry: metrics per offset mode, or an error."""

    index: int
    f0_csv: str
    audio: str
    ground_truth: str
    error: str | None
    n_ref: int
    n_est: int
    reports: dict[str, EvalReport]

    @property
    def ok(self) -> bool:
        return self.error is None


@dataclass(frozen=True)
class BatchResult:
    """Per-track rows in manifest order plus unweighted metric means."""

    rows: list[TrackRow]
    offset_modes: tuple[str, ...]

    @property
    def n_failed(self) -> int:
        return sum(not row.ok for row in self.rows)

    def aggregate(self) -> dict[str, dict[str, float]]:
        """Unweighted means of each metric over the successful tracks."""
        good = [row for row in self.rows if row.ok]
        means: dict[str, dict[str, float]] = {}
        for mode in self.offset_modes:
            means[mode] = {
                field: (
                    sum(getattr(row.reports[mode], field) for row in good) / len(good)
                    if good
                    else 0.0
                )
                for field in METRIC_FIELDS
            }
        return means


def read_manifest(path) -> list[dict[str, str]]:
    """Parse a manifest CSV, resolving relative paths against its directory."""
    base = os.path.dirname(os.path.abspath(path))

    def resolve(cell: str) -> str:
        cell = cell.strip()
        if not cell:
            return ""
        return cell if os.path.isabs(cell) else os.path.join(base, cell)

    entries = []
    with open(path, newline="") as fh:
        rows = csv.reader(fh)
        header = next(rows, None)
        if header is None or [h.strip() for h in header] != MANIFEST_HEADER:
            raise ParseError(f"expected header {','.join(MANIFEST_HEADER)!r}", path, 1)
        for line, row in enumerate(rows, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ParseError(f"expected 3 columns, got {len(row)}", path, line)
            if not row[0].strip() or not row[2].strip():
                raise ParseError("f0_csv and ground_truth are required", path, line)
            entries.append(
                {
                    "f0_csv": resolve(row[0]),
                    "audio": resolve(row[1]),
                    "ground_truth": resolve(row[2]),
                }
            )
    return entries


def run_track(index: int, entry: dict[str, str], config: PipelineConfig, offset_modes) -> TrackRow:
    """Transcribe and evaluate one manifest entry; errors become the row."""
    try:
        bundle = load_track(
            entry["f0_csv"],
            audio_path=entry["audio"] or None,
            ground_truth_path=entry["ground_truth"],
        )
        notes, _ = transcribe_bundle(bundle, config)
        reports = {
            mode: evaluate(bundle.ground_truth, notes, config, offset_mode=mode)
            for mode in offset_modes
        }
        return TrackRow(
            index=index,
            f0_csv=entry["f0_csv"],
            audio=entry["audio"],
            ground_truth=entry["ground_truth"],
            error=None,
            n_ref=len(bundle.ground_truth),
            n_est=len(notes),
            reports=reports,
        )
    except Exception as exc:  # keep the batch going, report per track
        return TrackRow(
            index=index,
            f0_csv=entry["f0_csv"],
            audio=entry["audio"],
            ground_truth=entry["ground_truth"],
            error=f"{type(exc).__name__}: {exc}",
            n_ref=0,
            n_est=0,
            reports={},
        )


def _run_indexed(indexed_entry, config, offset_modes):
    index, entry = indexed_entry
    return run_track(index, entry, config, offset_modes)


def run_batch(
    manifest_path,
    config: PipelineConfig | None = None,
    offset_modes=("ignore", "tolerance"),
    jobs: int = 1,
) -> BatchResult:
    """Run every manifest entry and collect rows in manifest order."""
    config = config or PipelineConfig()
    offset_modes = tuple(offset_modes)
    entries = read_manifest(manifest_path)
    worker = partial(_run_indexed, config=config, offset_modes=offset_modes)
    if jobs > 1 and len(entries) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(worker, enumerate(entries)))
    else:
        rows = [worker(item) for item in enumerate(entries)]
    return BatchResult(rows=rows, offset_modes=offset_modes)


def _row_cells(row: TrackRow, offset_modes) -> list[str]:
    cells = [
        str(row.index),
        row.f0_csv,
        row.audio,
        row.ground_truth,
        "ok" if row.ok else "error",
        row.error or "",
        str(row.n_ref),
        str(row.n_est),
    ]
    for mode in offset_modes:
        report = row.reports.get(mode)
        for field in METRIC_FIELDS:
            cells.append(f"{getattr(report, field):.6f}" if report else "")
    return cells


def write_batch_csv(result: BatchResult, path) -> None:
    """Per-track rows plus a final ``mean`` row of aggregate means."""
    header = ["index", "f0_csv", "audio", "ground_truth", "status", "error", "n_ref", "n_est"]
    for mode in result.offset_modes:
        header += [f"{mode}_{field}" for field in METRIC_FIELDS]
    aggregate = result.aggregate()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in result.rows:
            writer.writerow(_row_cells(row, result.offset_modes))
        mean_row = ["mean", "", "", "", "", "", "", ""]
        for mode in result.offset_modes:
            mean_row += [f"{aggregate[mode][field]:.6f}" for field in METRIC_FIELDS]
        writer.writerow(mean_row)


def write_batch_json(result: BatchResult, path) -> None:
    payload = {
        "offset_modes": list(result.offset_modes),
        "n_tracks": len(result.rows),
        "n_failed": result.n_failed,
        "tracks": [
            {
                "index": row.index,
                "f0_csv": row.f0_csv,
                "audio": row.audio,
                "ground_truth": row.ground_truth,
                "status": "ok" if row.ok else "error",
                "error": row.error,
                "n_ref": row.n_ref,
                "n_est": row.n_est,
                "metrics": {
                    mode: {
                        field: getattr(report, field) for field in METRIC_FIELDS
                    }
                    for mode, report in row.reports.items()
                },
            }
            for row in result.rows
        ],
        "aggregate": result.aggregate(),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")


def format_summary(result: BatchResult) -> str:
    """Human-readable mean table, metrics scaled to percentages."""
    aggregate = result.aggregate()
    lines = [
        f"tracks: {len(result.rows)}  failed: {result.n_failed}",
        f"{'offset mode':<12} {'P':>7} {'R':>7} {'F':>7} {'overlap':>8}",
    ]
    for mode in result.offset_modes:
        m = aggregate[mode]
        lines.append(
            f"{mode:<12} {100 * m['precision']:7.2f} {100 * m['recall']:7.2f} "
            f"{100 * m['f_measure']:7.2f} {100 * m['avg_overlap']:8.2f}"
        )
    return "\n".join(lines)
