"""File-format side of the trainer.

The trainer talks to the encoding kit exclusively through files: manifest
JSONL (header line with regime and ordered labels, then one record per
line), grayscale PNG trees, and predictions CSV.  Nothing here imports the
kit itself.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from PIL import Image
from torch.utils.data import Dataset


class TrainerError(Exception):
    pass


class MissingImages(TrainerError):
    pass


class IncompatibleCheckpoint(TrainerError):
    pass


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
    labels: list[str]  # index order defines the network's output order
    records: list[ManifestRecord]

    @property
    def label_index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def split_records(self, split: str) -> list[ManifestRecord]:
        return [r for r in self.records if r.split == split]


def read_manifest(path: Path | str) -> Manifest:
    path = Path(path)
    lines = [ln for ln in path.read_text(encoding="utf-8").splitlines() if ln.strip()]
    if not lines:
        raise TrainerError(f"empty manifest: {path}")
    header = json.loads(lines[0])
    labels = list(header["labels"])
    records = []
    for ln in lines[1:]:
        d = json.loads(ln)
        records.append(
            ManifestRecord(
                d["image_path"], d["dataset"], d["original_label"],
                d["target_label"], d["split"],
            )
        )
    return Manifest(header["regime"], labels, records)


def balanced_class_weights(manifest: Manifest) -> torch.Tensor:
    """total / (num_classes * count_c) over the train split, in label order.

    Labels with no train rows get weight 0 (they cannot be learned anyway).
    """
    counts = np.zeros(len(manifest.labels), dtype=np.float64)
    index = manifest.label_index
    for r in manifest.split_records("train"):
        counts[index[r.target_label]] += 1
    total = counts.sum()
    k = len(manifest.labels)
    weights = np.zeros(k, dtype=np.float64)
    present = counts > 0
    weights[present] = total / (k * counts[present])
    return torch.as_tensor(weights, dtype=torch.float32)


# channel stats of the image corpus the pretrained weights were fit on
_CHANNEL_MEAN = torch.tensor([0.485, 0.456, 0.406]).view(3, 1, 1)
_CHANNEL_STD = torch.tensor([0.229, 0.224, 0.225]).view(3, 1, 1)


def load_image_tensor(path: Path) -> torch.Tensor:
    """Grayscale PNG -> normalized 3-channel float tensor."""
    with Image.open(path) as img:
        arr = np.asarray(img.convert("L"), dtype=np.float32) / 255.0
    t = torch.from_numpy(arr).unsqueeze(0).repeat(3, 1, 1)
    return (t - _CHANNEL_MEAN) / _CHANNEL_STD


class ManifestDataset(Dataset):
    """One split of a manifest as (image tensor, label index) pairs."""

    def __init__(self, manifest: Manifest, images_root: Path | str, split: str):
        self.images_root = Path(images_root)
        self.records = manifest.split_records(split)
        if not self.records:
            raise TrainerError(f"manifest has no {split!r} records")
        index = manifest.label_index
        self.targets = [index[r.target_label] for r in self.records]
        missing = [r.image_path for r in self.records
                   if not (self.images_root / r.image_path).is_file()]
        if missing:
            raise MissingImages(
                f"{len(missing)} image(s) missing under {self.images_root}, "
                f"first: {missing[0]}"
            )

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i: int):
        rec = self.records[i]
        return load_image_tensor(self.images_root / rec.image_path), self.targets[i]


def write_predictions_csv(rows: list[tuple[str, str, float]], path: Path | str) -> None:
    """rows: (image_path, predicted_label, confidence)."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["image_path", "predicted_label", "confidence"])
        for image_path, label, confidence in rows:
            writer.writerow([image_path, label, repr(float(confidence))])
