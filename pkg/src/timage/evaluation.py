"""Scoring of prediction files against manifests.

Every dataset gets its own report: accuracy, default rate, and a confusion
matrix over the dataset's labels.  When an all-datasets manifest is scored
with global scope, predictions landing in other datasets' labels are
aggregated into one extra "out of dataset" column so cross-dataset confusion
stays visible.  Accuracy comparisons against third-party results are binned
into relative-difference histograms.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    IoError,
    KeyMismatch,
    MissingPredictions,
    OutputNotWritable,
    UnknownLabel,
)
from .manifest import Manifest, Prediction
from .png_io import write_gray_png
from .ucr import DatasetStats

GLOBAL = "global"
DATASET_MASKED = "dataset_masked"
SCOPES = (GLOBAL, DATASET_MASKED)

OTHER_COLUMN = "<other>"

DEFAULT_EDGES = (float("-inf"), -0.05, 0.0, 0.05, float("inf"))


@dataclass(frozen=True)
class EvalReport:
    dataset: str
    accuracy: float
    default_rate: float
    test_majority_rate: float
    confusion: np.ndarray  # rows = true, cols = labels (+ optional out-of-dataset col)
    labels: list[str]
    has_other_column: bool
    n_test: int


def _majority_label(counts: dict[str, int]) -> str | None:
    if not counts:
        return None
    best = max(counts.values())
    return min(label for label, c in counts.items() if c == best)


def default_rate(stats: DatasetStats) -> float:
    """Accuracy on the test split of always predicting the train-majority class.

    Ties on the train split break lexicographically by label token.
    """
    label = _majority_label(stats.class_counts_train)
    total = sum(stats.class_counts_test.values())
    if label is None or total == 0:
        return 0.0
    return stats.class_counts_test.get(label, 0) / total


def best_constant_rate(stats: DatasetStats) -> float:
    """Upper bound a constant predictor could reach if it saw test labels."""
    total = sum(stats.class_counts_test.values())
    if total == 0:
        return 0.0
    return max(stats.class_counts_test.values()) / total


def evaluate(
    manifest: Manifest,
    predictions: list[Prediction],
    scope: str = GLOBAL,
) -> list[EvalReport]:
    """One report per dataset in the manifest.

    Requires exactly one prediction per test record.  Predicted labels must
    exist in the manifest's label space; under ``dataset_masked`` scope they
    must additionally belong to the record's own dataset.
    """
    if scope not in SCOPES:
        raise ValueError(f"scope must be one of {SCOPES}, got {scope!r}")
    pred_by_path: dict[str, str] = {}
    for p in predictions:
        pred_by_path[p.image_path] = p.label
        if p.label not in manifest.label_index:
            raise UnknownLabel(f"predicted label {p.label!r} not in manifest labels")

    by_dataset: dict[str, list] = {}
    for rec in manifest.records:
        by_dataset.setdefault(rec.dataset, []).append(rec)

    reports = []
    for dataset in sorted(by_dataset):
        records = by_dataset[dataset]
        test_recs = [r for r in records if r.split == "test"]
        missing = [r.image_path for r in test_recs if r.image_path not in pred_by_path]
        if missing:
            raise MissingPredictions(
                f"{dataset}: {len(missing)} test record(s) without prediction, first: {missing[0]}"
            )
        labels = sorted({r.target_label for r in records})
        col_of = {label: i for i, label in enumerate(labels)}
        k = len(labels)
        foreign = set(manifest.label_index) - set(labels)
        has_other = scope == GLOBAL and bool(foreign)

        confusion = np.zeros((k, k + (1 if has_other else 0)), dtype=np.int64)
        for rec in test_recs:
            row = col_of[rec.target_label]
            predicted = pred_by_path[rec.image_path]
            if predicted in col_of:
                confusion[row, col_of[predicted]] += 1
            elif scope == DATASET_MASKED:
                raise UnknownLabel(
                    f"{dataset}: prediction {predicted!r} outside dataset under masked scope"
                )
            else:
                confusion[row, k] += 1

        n_test = len(test_recs)
        accuracy = float(np.trace(confusion[:, :k])) / n_test if n_test else 0.0

        train_counts: dict[str, int] = {}
        test_counts: dict[str, int] = {}
        for r in records:
            tgt = (train_counts if r.split == "train" else test_counts)
            tgt[r.target_label] = tgt.get(r.target_label, 0) + 1
        majority = _majority_label(train_counts)
        d_rate = test_counts.get(majority, 0) / n_test if majority and n_test else 0.0
        t_rate = max(test_counts.values()) / n_test if test_counts else 0.0

        reports.append(
            EvalReport(
                dataset=dataset,
                accuracy=accuracy,
                default_rate=d_rate,
                test_majority_rate=t_rate,
                confusion=confusion,
                labels=labels,
                has_other_column=has_other,
                n_test=n_test,
            )
        )
    return reports


# -- relative-accuracy histograms ------------------------------------------------


@dataclass(frozen=True)
class RelDiffHistogram:
    bin_edges: tuple[float, ...]
    counts: tuple[int, ...]
    better: int
    equal: int
    worse: int
    total: int
    excluded_ours: tuple[str, ...] = ()
    excluded_theirs: tuple[str, ...] = ()


def relative_accuracy_histogram(
    ours: dict[str, float],
    theirs: dict[str, float],
    edges: tuple[float, ...] = DEFAULT_EDGES,
) -> RelDiffHistogram:
    """Bin (ours - theirs) / theirs per dataset over the shared key set.

    better/equal/worse compare the accuracies exactly, independent of the
    binning.  Datasets present on only one side are listed as exclusions;
    an empty intersection is an error.
    """
    edges = tuple(float(e) for e in edges)
    if len(edges) < 2 or any(edges[i] >= edges[i + 1] for i in range(len(edges) - 1)):
        raise ValueError(f"edges must be strictly increasing, got {edges}")
    shared = sorted(set(ours) & set(theirs))
    if not shared:
        raise KeyMismatch("no datasets shared between the two accuracy tables")

    counts = [0] * (len(edges) - 1)
    better = equal = worse = 0
    for ds in shared:
        o, t = float(ours[ds]), float(theirs[ds])
        if o > t:
            better += 1
        elif o < t:
            worse += 1
        else:
            equal += 1
        if t != 0.0:
            rel = (o - t) / t
        else:
            rel = 0.0 if o == 0.0 else float("inf")
        # snap float noise onto bin edges so e.g. (0.95 - 1.0) / 1.0 lands
        # exactly on the -0.05 boundary instead of one ulp below it
        for e in edges:
            if abs(rel - e) <= 1e-12:
                rel = e
                break
        idx = bisect_right(edges, rel) - 1
        idx = min(max(idx, 0), len(counts) - 1)
        counts[idx] += 1

    return RelDiffHistogram(
        bin_edges=edges,
        counts=tuple(counts),
        better=better,
        equal=equal,
        worse=worse,
        total=len(shared),
        excluded_ours=tuple(sorted(set(ours) - set(theirs))),
        excluded_theirs=tuple(sorted(set(theirs) - set(ours))),
    )


def accuracy_table(reports: list[EvalReport]) -> dict[str, float]:
    return {r.dataset: r.accuracy for r in reports}


def read_accuracy_csv(path: Path | str) -> dict[str, float]:
    """Third-party per-dataset accuracies: CSV with header ``dataset,accuracy``."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"missing accuracy file: {path}")
    out: dict[str, float] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:2]] != ["dataset", "accuracy"]:
            raise IoError(f"{path}: expected header dataset,accuracy")
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            out[row[0].strip()] = float(row[1])
    return out


# -- report rendering -------------------------------------------------------------


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            writer.writerows(rows)
    except OSError as exc:
        raise OutputNotWritable(f"cannot write {path}: {exc}") from exc


def _heatmap(confusion: np.ndarray) -> np.ndarray:
    peak = int(confusion.max()) if confusion.size else 0
    if peak == 0:
        return np.zeros(confusion.shape, dtype=np.uint8)
    return np.floor(confusion * (255.0 / peak) + 0.5).astype(np.uint8)


def render_report(
    reports: list[EvalReport],
    histograms: dict[str, RelDiffHistogram],
    out_dir: Path | str,
) -> None:
    """Emit summary.csv, per-dataset confusion CSV + PNG heatmap, histogram CSVs.

    Deterministic: rows sorted, floats written with full-precision repr.
    """
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputNotWritable(f"cannot create {out}: {exc}") from exc

    _write_csv(
        out / "summary.csv",
        ["dataset", "n_test", "accuracy", "default_rate", "test_majority_rate"],
        [
            [r.dataset, r.n_test, repr(r.accuracy), repr(r.default_rate), repr(r.test_majority_rate)]
            for r in sorted(reports, key=lambda r: r.dataset)
        ],
    )

    for r in reports:
        cols = r.labels + ([OTHER_COLUMN] if r.has_other_column else [])
        _write_csv(
            out / "confusion" / f"{r.dataset}.csv",
            ["true\\predicted"] + cols,
            [[label] + [int(c) for c in r.confusion[i]] for i, label in enumerate(r.labels)],
        )
        write_gray_png(_heatmap(r.confusion), out / "confusion" / f"{r.dataset}.png")

    hist_rows, summary_rows = [], []
    for name in sorted(histograms):
        h = histograms[name]
        for i, count in enumerate(h.counts):
            hist_rows.append([name, repr(h.bin_edges[i]), repr(h.bin_edges[i + 1]), count])
        summary_rows.append(
            [
                name,
                h.better,
                h.equal,
                h.worse,
                h.total,
                ";".join(h.excluded_ours),
                ";".join(h.excluded_theirs),
            ]
        )
    _write_csv(out / "histogram.csv", ["comparison", "bin_lo", "bin_hi", "count"], hist_rows)
    _write_csv(
        out / "histogram_summary.csv",
        ["comparison", "better", "equal", "worse", "total", "excluded_ours", "excluded_theirs"],
        summary_rows,
    )
