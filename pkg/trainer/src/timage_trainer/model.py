"""Network construction, weight-initialization strategies, checkpoints."""

from __future__ import annotations

from pathlib import Path

import torch
from torch import nn
from torchvision import models

from .data import IncompatibleCheckpoint, TrainerError

RESNET50 = "resnet50"
RESNET152 = "resnet152"
ARCHITECTURES = (RESNET50, RESNET152)

INIT_IMAGE_CORPUS = "image_corpus_pretrained"
INIT_AC = "ac_pretrained"
INIT_DATASET_SEP = "dataset_sep_pretrained"
INIT_RANDOM = "random"
INIT_STRATEGIES = (INIT_IMAGE_CORPUS, INIT_AC, INIT_DATASET_SEP, INIT_RANDOM)


def _backbone(architecture: str, pretrained: bool) -> nn.Module:
    if architecture == RESNET50:
        weights = models.ResNet50_Weights.IMAGENET1K_V1 if pretrained else None
        return models.resnet50(weights=weights)
    if architecture == RESNET152:
        weights = models.ResNet152_Weights.IMAGENET1K_V1 if pretrained else None
        return models.resnet152(weights=weights)
    raise TrainerError(f"architecture must be one of {ARCHITECTURES}, got {architecture!r}")


def build_model(
    architecture: str,
    num_labels: int,
    init: str = INIT_RANDOM,
    base_checkpoint: Path | str | None = None,
) -> nn.Module:
    """Residual network with its head replaced by ``num_labels`` outputs.

    ``image_corpus_pretrained`` starts from the published image-corpus
    weights; ``ac_pretrained`` / ``dataset_sep_pretrained`` copy the backbone
    from an earlier checkpoint of this trainer (head excluded, since the
    label spaces differ); ``random`` uses the default initialization.
    """
    if num_labels < 2:
        raise TrainerError(f"need at least 2 labels, got {num_labels}")
    if init not in INIT_STRATEGIES:
        raise TrainerError(f"init must be one of {INIT_STRATEGIES}, got {init!r}")

    if init in (INIT_AC, INIT_DATASET_SEP):
        if base_checkpoint is None:
            raise TrainerError(f"init {init!r} requires a base checkpoint path")
        payload = _load_payload(base_checkpoint)
        if payload["architecture"] != architecture:
            raise IncompatibleCheckpoint(
                f"base checkpoint is {payload['architecture']}, requested {architecture}"
            )
        model = _backbone(architecture, pretrained=False)
        state = {k: v for k, v in payload["state_dict"].items() if not k.startswith("fc.")}
        model.load_state_dict(state, strict=False)
    else:
        model = _backbone(architecture, pretrained=init == INIT_IMAGE_CORPUS)

    model.fc = nn.Linear(model.fc.in_features, num_labels)
    return model


def save_checkpoint(
    model: nn.Module, architecture: str, labels: list[str], path: Path | str
) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    torch.save(
        {"architecture": architecture, "labels": list(labels),
         "state_dict": model.state_dict()},
        path,
    )


def _load_payload(path: Path | str) -> dict:
    path = Path(path)
    if not path.is_file():
        raise TrainerError(f"missing checkpoint: {path}")
    payload = torch.load(path, map_location="cpu", weights_only=True)
    for key in ("architecture", "labels", "state_dict"):
        if key not in payload:
            raise IncompatibleCheckpoint(f"{path}: checkpoint lacks {key!r}")
    return payload


def load_checkpoint(path: Path | str) -> tuple[nn.Module, str, list[str]]:
    payload = _load_payload(path)
    architecture, labels = payload["architecture"], payload["labels"]
    model = _backbone(architecture, pretrained=False)
    model.fc = nn.Linear(model.fc.in_features, len(labels))
    model.load_state_dict(payload["state_dict"])
    model.eval()
    return model, architecture, labels
