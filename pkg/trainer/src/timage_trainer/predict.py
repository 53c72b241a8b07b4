"""Inference over a manifest's test split, exported as predictions CSV."""

from __future__ import annotations

from pathlib import Path

import torch
from torch.utils.data import DataLoader

from .data import (
    IncompatibleCheckpoint,
    Manifest,
    ManifestDataset,
    read_manifest,
    write_predictions_csv,
)
from .model import load_checkpoint

GLOBAL = "global"
DATASET_MASKED = "dataset_masked"


def predict(
    checkpoint_path: Path | str,
    manifest_path: Path | str,
    out_csv: Path | str,
    images_root: Path | str,
    scope: str = GLOBAL,
    batch_size: int = 32,
    device: str | None = None,
) -> list[tuple[str, str, float]]:
    """Argmax predictions for every test record.

    ``dataset_masked`` restricts each record's argmax to the labels of its
    own dataset, which for all-datasets networks suppresses cross-dataset
    confusions.  Confidence is the softmax mass of the chosen label.
    """
    if scope not in (GLOBAL, DATASET_MASKED):
        raise ValueError(f"scope must be global or dataset_masked, got {scope!r}")
    manifest: Manifest = read_manifest(manifest_path)
    model, _, labels = load_checkpoint(checkpoint_path)
    if labels != manifest.labels:
        raise IncompatibleCheckpoint(
            f"checkpoint was trained on {len(labels)} labels, "
            f"manifest defines {len(manifest.labels)}"
        )

    dev = torch.device(device or ("cuda" if torch.cuda.is_available() else "cpu"))
    model.to(dev)
    dataset = ManifestDataset(manifest, images_root, "test")

    masks: dict[str, torch.Tensor] = {}
    if scope == DATASET_MASKED:
        index = manifest.label_index
        for rec in manifest.records:
            if rec.dataset not in masks:
                masks[rec.dataset] = torch.full((len(labels),), float("-inf"))
            masks[rec.dataset][index[rec.target_label]] = 0.0

    rows: list[tuple[str, str, float]] = []
    loader = DataLoader(dataset, batch_size=batch_size, shuffle=False, num_workers=0)
    offset = 0
    with torch.no_grad():
        for images, _ in loader:
            logits = model(images.to(dev)).cpu()
            batch = dataset.records[offset : offset + logits.size(0)]
            offset += logits.size(0)
            if scope == DATASET_MASKED:
                logits = logits + torch.stack([masks[r.dataset] for r in batch])
            probs = torch.softmax(logits, dim=1)
            best = probs.argmax(dim=1)
            for rec, idx, p in zip(batch, best.tolist(), probs):
                rows.append((rec.image_path, labels[idx], float(p[idx])))
    write_predictions_csv(rows, out_csv)
    return rows
