"""Classification manifests for the three training regimes.

SC trains one classifier per dataset (targets = the dataset's own labels),
AC trains one classifier over every dataset's classes at once (targets
namespaced as ``<dataset>::<label>``), and DATASET_SEP relabels every series
with its dataset name so a classifier separates datasets instead of classes.

File format: JSON-lines.  First line ``{"regime": ..., "labels": [...]}``,
then one record per line with keys image_path / dataset / original_label /
target_label / split.  Predictions interchange as CSV with header
``image_path,predicted_label[,confidence]``.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path

from .encode import EncodeReport, ImageRecord
from .errors import (
    DuplicateImagePath,
    IoError,
    LabelCollision,
    MissingImages,
    UnknownLabel,
)
from .ucr import DatasetStats, balanced_class_weights

SC = "SC"
AC = "AC"
DATASET_SEP = "DATASET_SEP"
REGIMES = (SC, AC, DATASET_SEP)

AC_SEPARATOR = "::"


@dataclass(frozen=True)
class ManifestRecord:
    image_path: str
    dataset: str
    original_label: str
    target_label: str
    split: str


@dataclass
class Manifest:
    regime: str
    records: list[ManifestRecord]
    label_index: dict[str, int]
    missing_train_labels: list[str] = field(default_factory=list)

    @property
    def labels(self) -> list[str]:
        return sorted(self.label_index, key=self.label_index.get)

    def datasets(self) -> list[str]:
        return sorted({r.dataset for r in self.records})

    def test_records(self) -> list[ManifestRecord]:
        return [r for r in self.records if r.split == "test"]


def _target_label(regime: str, dataset: str, original: str) -> str:
    if regime == SC:
        return original
    if regime == AC:
        return f"{dataset}{AC_SEPARATOR}{original}"
    return dataset


def _label_index(records: list[ManifestRecord]) -> dict[str, int]:
    return {label: i for i, label in enumerate(sorted({r.target_label for r in records}))}


def _finish(regime: str, records: list[ManifestRecord]) -> Manifest:
    index = _label_index(records)
    train_labels = {r.target_label for r in records if r.split == "train"}
    missing = sorted(set(index) - train_labels)
    return Manifest(regime, records, index, missing)


def build_manifest(
    regime: str,
    datasets: list[tuple[DatasetStats, EncodeReport]],
    images_root: Path | str | None = None,
) -> list[Manifest]:
    """Build manifests covering every encoded image of the given datasets.

    Returns one manifest per dataset for SC, a single-element list otherwise.
    Labels missing from the train split are reported on the manifest, never
    dropped.
    """
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")

    per_dataset: dict[str, list[ImageRecord]] = {}
    for stats, report in datasets:
        name = stats.dataset_name
        if AC_SEPARATOR in name:
            raise LabelCollision(f"dataset name {name!r} contains {AC_SEPARATOR!r}")
        if name in per_dataset:
            raise LabelCollision(f"dataset {name!r} listed twice")
        images = [rec for rec in report.images if rec.dataset == name]
        if not images:
            raise MissingImages(f"no encoded images for dataset {name!r} in report")
        per_dataset[name] = images

    if images_root is not None:
        root = Path(images_root)
        missing = [
            rec.path
            for images in per_dataset.values()
            for rec in images
            if not (root / rec.path).is_file()
        ]
        if missing:
            raise MissingImages(
                f"{len(missing)} image file(s) missing under {root}, first: {missing[0]}"
            )

    seen_paths: set[str] = set()
    groups: dict[str, list[ManifestRecord]] = {}
    for name in sorted(per_dataset):
        records = []
        for rec in sorted(per_dataset[name], key=lambda r: (r.split != "train", r.index)):
            if rec.path in seen_paths:
                raise DuplicateImagePath(rec.path)
            seen_paths.add(rec.path)
            records.append(
                ManifestRecord(
                    image_path=rec.path,
                    dataset=name,
                    original_label=rec.label,
                    target_label=_target_label(regime, name, rec.label),
                    split=rec.split,
                )
            )
        groups[name] = records

    if regime == SC:
        return [_finish(regime, records) for records in groups.values()]
    merged = [r for name in sorted(groups) for r in groups[name]]
    return [_finish(regime, merged)]


def manifest_class_weights(manifest: Manifest) -> dict[str, float]:
    """Balanced weights over the train distribution of the target labels."""
    counts: dict[str, int] = {}
    for r in manifest.records:
        if r.split == "train":
            counts[r.target_label] = counts.get(r.target_label, 0) + 1
    return balanced_class_weights(counts)


# -- serialization -------------------------------------------------------------


def write_manifest(manifest: Manifest, path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps({"regime": manifest.regime, "labels": manifest.labels}) + "\n")
        for r in manifest.records:
            fh.write(
                json.dumps(
                    {
                        "image_path": r.image_path,
                        "dataset": r.dataset,
                        "original_label": r.original_label,
                        "target_label": r.target_label,
                        "split": r.split,
                    }
                )
                + "\n"
            )


def read_manifest(path: Path | str) -> Manifest:
    path = Path(path)
    if not path.is_file():
        raise IoError(f"missing manifest: {path}")
    with path.open("r", encoding="utf-8") as fh:
        lines = [ln for ln in fh.read().splitlines() if ln.strip()]
    if not lines:
        raise IoError(f"empty manifest: {path}")
    header = json.loads(lines[0])
    regime = header.get("regime")
    labels = header.get("labels", [])
    if regime not in REGIMES:
        raise IoError(f"{path}: bad regime {regime!r} in header")
    label_set = set(labels)
    records = []
    seen: set[str] = set()
    for ln in lines[1:]:
        d = json.loads(ln)
        rec = ManifestRecord(
            image_path=d["image_path"],
            dataset=d["dataset"],
            original_label=d["original_label"],
            target_label=d["target_label"],
            split=d["split"],
        )
        if rec.image_path in seen:
            raise DuplicateImagePath(rec.image_path)
        seen.add(rec.image_path)
        if rec.target_label not in label_set:
            raise UnknownLabel(f"{path}: record label {rec.target_label!r} not in header")
        records.append(rec)
    index = {label: i for i, label in enumerate(labels)}
    train_labels = {r.target_label for r in records if r.split == "train"}
    missing = sorted(set(index) - train_labels)
    return Manifest(regime, records, index, missing)


@dataclass(frozen=True)
class Prediction:
    image_path: str
    label: str
    confidence: float | None = None


def write_predictions(rows: list[Prediction], path: Path | str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with_conf = any(r.confidence is not None for r in rows)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_path", "predicted_label"] + (["confidence"] if with_conf else []))
        for r in rows:
            row = [r.image_path, r.label]
            if with_conf:
                row.append("" if r.confidence is None else repr(float(r.confidence)))
            writer.writerow(row)


def read_predictions(path: Path | str) -> list[Prediction]:
    path = Path(path)
    if not path.is_file():
        raise IoError(f"missing predictions file: {path}")
    rows: list[Prediction] = []
    seen: set[str] = set()
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header[:2]] != ["image_path", "predicted_label"]:
            raise IoError(f"{path}: expected header image_path,predicted_label[,confidence]")
        for row in reader:
            if not row or not any(cell.strip() for cell in row):
                continue
            image_path = row[0].strip()
            if image_path in seen:
                raise DuplicateImagePath(image_path)
            seen.add(image_path)
            conf = None
            if len(row) > 2 and row[2].strip():
                conf = float(row[2])
            rows.append(Prediction(image_path, row[1].strip(), conf))
    return rows
