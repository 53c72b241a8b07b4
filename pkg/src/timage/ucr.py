"""UCR 2018 archive ingestion.

Archive layout: one directory per dataset containing ``<Name>_TRAIN.tsv`` and
``<Name>_TEST.tsv``.  Each row is a raw class token followed by tab-separated
values; trailing ``NaN`` tokens pad variable-length series and are stripped.
Labels are kept as raw string tokens because several datasets use negative or
non-contiguous integers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import EmptyClass, EmptyDataset, IoError, MalformedRow, SeriesTooShort

SPLITS = ("train", "test")


@dataclass(frozen=True)
class TimeSeries:
    """One labeled series, padding already removed."""

    dataset_name: str
    split: str
    label: str
    values: np.ndarray
    original_length: int = field(default=-1)

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.ndim != 1 or vals.size < 2:
            raise SeriesTooShort(
                f"{self.dataset_name}/{self.split}: series needs >= 2 values, got {vals.size}"
            )
        if not np.all(np.isfinite(vals)):
            raise MalformedRow(f"{self.dataset_name}/{self.split}: non-finite value in series")
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "original_length", int(vals.size))


@dataclass(frozen=True)
class DatasetStats:
    dataset_name: str
    class_counts_train: dict[str, int]
    class_counts_test: dict[str, int]
    min_length: int
    max_length: int
    is_variable_length: bool
    z_normalized_already: bool

    def to_json_dict(self) -> dict:
        return {
            "dataset": self.dataset_name,
            "splits": {
                "train": sum(self.class_counts_train.values()),
                "test": sum(self.class_counts_test.values()),
            },
            "class_counts": {
                "train": dict(sorted(self.class_counts_train.items())),
                "test": dict(sorted(self.class_counts_test.items())),
            },
            "min_length": self.min_length,
            "max_length": self.max_length,
            "variable_length": self.is_variable_length,
            "z_normalized_already": self.z_normalized_already,
        }


@dataclass(frozen=True)
class ClassWeights:
    weights: dict[str, float]


def _parse_row(line: str, dataset: str, split: str, lineno: int) -> tuple[str, np.ndarray]:
    tokens = line.rstrip("\r\n").split("\t")
    label = tokens[0].strip()
    if not label:
        raise MalformedRow(f"{dataset}/{split} line {lineno}: empty class token")
    raw = tokens[1:]
    # strip trailing NaN padding (variable-length convention)
    end = len(raw)
    while end > 0 and raw[end - 1].strip().lower() == "nan":
        end -= 1
    values = np.empty(end, dtype=np.float64)
    for i in range(end):
        tok = raw[i].strip()
        if tok.lower() == "nan":
            raise MalformedRow(
                f"{dataset}/{split} line {lineno}: interior NaN at position {i + 1}"
            )
        try:
            values[i] = float(tok)
        except ValueError:
            raise MalformedRow(
                f"{dataset}/{split} line {lineno}: non-numeric token {tok!r}"
            ) from None
    if values.size < 2:
        raise SeriesTooShort(
            f"{dataset}/{split} line {lineno}: {values.size} finite value(s) after padding strip"
        )
    if not np.all(np.isfinite(values)):
        raise MalformedRow(f"{dataset}/{split} line {lineno}: non-finite value")
    return label, values


def parse_split_file(path: Path | str, dataset: str, split: str) -> list[TimeSeries]:
    """Parse one ``_TRAIN``/``_TEST`` file, preserving row order."""
    path = Path(path)
    if not path.is_file():
        raise IoError(f"missing archive file: {path}")
    out: list[TimeSeries] = []
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            label, values = _parse_row(line, dataset, split, lineno)
            out.append(TimeSeries(dataset, split, label, values))
    if not out:
        raise EmptyDataset(f"{dataset}/{split}: no rows in {path}")
    return out


def _looks_z_normalized(series: list[TimeSeries]) -> bool:
    # Reporting heuristic only: every non-constant series already has
    # |mean| < 1e-3 and |popstd - 1| < 1e-3.
    seen = False
    for s in series:
        sd = float(np.std(s.values))
        if sd == 0.0:
            continue
        seen = True
        if abs(float(np.mean(s.values))) >= 1e-3 or abs(sd - 1.0) >= 1e-3:
            return False
    return seen


def parse_dataset(train_path: Path | str, test_path: Path | str) -> tuple[list[TimeSeries], DatasetStats]:
    """Parse both splits of one dataset and aggregate statistics over them."""
    train_path, test_path = Path(train_path), Path(test_path)
    dataset = train_path.name.rsplit("_TRAIN", 1)[0] or train_path.parent.name
    train = parse_split_file(train_path, dataset, "train")
    test = parse_split_file(test_path, dataset, "test")
    all_series = train + test

    counts: dict[str, dict[str, int]] = {"train": {}, "test": {}}
    for s in all_series:
        counts[s.split][s.label] = counts[s.split].get(s.label, 0) + 1
    lengths = [s.original_length for s in all_series]
    stats = DatasetStats(
        dataset_name=dataset,
        class_counts_train=counts["train"],
        class_counts_test=counts["test"],
        min_length=min(lengths),
        max_length=max(lengths),
        is_variable_length=min(lengths) != max(lengths),
        z_normalized_already=_looks_z_normalized(all_series),
    )
    return all_series, stats


def z_normalize(series: TimeSeries) -> TimeSeries:
    """Shift/scale to zero mean and unit population standard deviation.

    Constant series have no defined z-score and map to all zeros, which keeps
    the downstream all-zero distance matrix meaningful.  The transform is
    idempotent within 1e-9.
    """
    centered = series.values - np.mean(series.values)
    centered -= np.mean(centered)  # second pass kills cancellation residue
    sd = float(np.std(centered))
    if sd == 0.0:
        normed = np.zeros_like(centered)
    else:
        normed = centered / sd
    return TimeSeries(series.dataset_name, series.split, series.label, normed)


def balanced_class_weights(counts: dict[str, int]) -> dict[str, float]:
    """weight_c = total / (num_classes * count_c); all 1.0 when balanced."""
    if not counts:
        raise EmptyClass("no classes declared")
    for label, c in counts.items():
        if c <= 0:
            raise EmptyClass(f"class {label!r} has count {c}")
    total = sum(counts.values())
    k = len(counts)
    return {label: total / (k * c) for label, c in sorted(counts.items())}


def compute_class_weights(stats: DatasetStats) -> ClassWeights:
    return ClassWeights(balanced_class_weights(stats.class_counts_train))


def write_split_file(series: list[TimeSeries], path: Path | str) -> None:
    """Write series back to UCR text format (tab-separated, no padding)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for s in series:
            fh.write(s.label + "\t" + "\t".join(repr(float(v)) for v in s.values) + "\n")


def split_paths(dataset_dir: Path | str) -> tuple[Path, Path]:
    """Locate ``<Name>_TRAIN.tsv`` / ``<Name>_TEST.tsv`` under a dataset dir."""
    d = Path(dataset_dir)
    name = d.name
    train, test = d / f"{name}_TRAIN.tsv", d / f"{name}_TEST.tsv"
    if not train.is_file() or not test.is_file():
        raise IoError(f"{d}: expected {name}_TRAIN.tsv and {name}_TEST.tsv")
    return train, test


def discover_datasets(archive_root: Path | str) -> list[Path]:
    """All dataset directories under an archive root, sorted by name."""
    root = Path(archive_root)
    if not root.is_dir():
        raise IoError(f"archive root is not a directory: {root}")
    found = []
    for d in sorted(root.iterdir()):
        if d.is_dir() and (d / f"{d.name}_TRAIN.tsv").is_file():
            found.append(d)
    return found


def write_stats_json(stats: DatasetStats, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(stats.to_json_dict(), fh, indent=2, sort_keys=False)
        fh.write("\n")
