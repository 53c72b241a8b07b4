"""Fine-tuning loop: class-weighted cross entropy, plain SGD."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import torch
from torch import nn
from torch.utils.data import DataLoader

from .data import Manifest, ManifestDataset, balanced_class_weights, read_manifest
from .model import INIT_RANDOM, build_model, save_checkpoint


@dataclass
class TrainConfig:
    manifest_path: str
    images_root: str
    output_dir: str
    architecture: str = "resnet50"
    init: str = INIT_RANDOM
    base_checkpoint: str | None = None
    epochs: int = 50
    batch_size: int = 32
    learning_rate: float = 0.01
    momentum: float = 0.9
    use_class_weights: bool = True
    device: str = "cuda" if torch.cuda.is_available() else "cpu"
    # stop once train accuracy has been perfect this many epochs in a row
    early_stop_perfect_epochs: int = 0


@dataclass
class EpochStats:
    epoch: int
    loss: float
    accuracy: float


@dataclass
class TrainResult:
    checkpoint_path: Path
    log_path: Path
    history: list[EpochStats] = field(default_factory=list)


def train(cfg: TrainConfig) -> TrainResult:
    """Fine-tune on the manifest's train split; write checkpoint + JSON log."""
    manifest: Manifest = read_manifest(cfg.manifest_path)
    dataset = ManifestDataset(manifest, cfg.images_root, "train")
    loader = DataLoader(dataset, batch_size=cfg.batch_size, shuffle=True, num_workers=0)

    device = torch.device(cfg.device)
    model = build_model(
        cfg.architecture, len(manifest.labels), cfg.init, cfg.base_checkpoint
    ).to(device)

    weights = balanced_class_weights(manifest).to(device) if cfg.use_class_weights else None
    criterion = nn.CrossEntropyLoss(weight=weights)
    optimizer = torch.optim.SGD(
        model.parameters(), lr=cfg.learning_rate, momentum=cfg.momentum
    )

    history: list[EpochStats] = []
    perfect_streak = 0
    model.train()
    for epoch in range(1, cfg.epochs + 1):
        total_loss = 0.0
        hits = 0
        seen = 0
        for images, targets in loader:
            images, targets = images.to(device), targets.to(device)
            optimizer.zero_grad()
            logits = model(images)
            loss = criterion(logits, targets)
            loss.backward()
            optimizer.step()
            total_loss += float(loss.detach()) * targets.size(0)
            hits += int((logits.argmax(dim=1) == targets).sum())
            seen += targets.size(0)
        stats = EpochStats(epoch, total_loss / seen, hits / seen)
        history.append(stats)
        perfect_streak = perfect_streak + 1 if stats.accuracy == 1.0 else 0
        if cfg.early_stop_perfect_epochs and perfect_streak >= cfg.early_stop_perfect_epochs:
            break

    out_dir = Path(cfg.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    checkpoint_path = out_dir / "checkpoint.pt"
    model.to("cpu")
    save_checkpoint(model, cfg.architecture, manifest.labels, checkpoint_path)

    log_path = out_dir / "training_log.json"
    with log_path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(
            {
                "config": {k: v for k, v in vars(cfg).items()},
                "labels": manifest.labels,
                "epochs": [vars(e) for e in history],
            },
            fh,
            indent=2,
        )
        fh.write("\n")
    return TrainResult(checkpoint_path, log_path, history)
