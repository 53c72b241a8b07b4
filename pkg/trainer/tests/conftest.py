"""Fixtures: manifest JSONL + PNG trees written directly (not via the encoding kit).

Images mimic distance plots: |z(x)_i - z(x)_j| of a synthetic series, scaled
to [0, 1] and quantized.  Class textures are made clearly distinct so short
training runs can separate them.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest
from PIL import Image


def distance_plot(values: np.ndarray, size: int) -> np.ndarray:
    vals = np.asarray(values, dtype=np.float64)
    vals = (vals - vals.mean()) / (vals.std() or 1.0)
    d = np.abs(vals[:, None] - vals[None, :])
    d = np.minimum(d, 3.0 * d.std())
    if d.max() > 0:
        d = d / d.max()
    img = Image.fromarray(np.floor(d * 255.0 + 0.5).astype(np.uint8), mode="L")
    return np.asarray(img.resize((size, size), Image.NEAREST), dtype=np.uint8)


def class_values(rng: np.random.Generator, label: str, length: int) -> np.ndarray:
    t = np.arange(length, dtype=np.float64)
    if label == "1":  # strongly periodic -> coarse block texture
        return np.sin(2 * np.pi * t / 8.0) + 0.05 * rng.standard_normal(length)
    return rng.standard_normal(length)  # white noise -> fine grain


def build_task(
    root: Path,
    dataset: str = "Chinatown",
    n_train: dict[str, int] | None = None,
    n_test: dict[str, int] | None = None,
    size: int = 64,
    length: int = 24,
    regime: str = "SC",
) -> tuple[Path, Path]:
    """Write a manifest + image tree; returns (manifest_path, images_root)."""
    n_train = n_train or {"1": 10, "2": 10}
    n_test = n_test or {"1": 250, "2": 95}
    rng = np.random.default_rng(99)
    images_root = root / "images"
    records = []
    for split, counts in (("train", n_train), ("test", n_test)):
        index = 0
        for label in sorted(counts):
            for _ in range(counts[label]):
                rel = f"{dataset}/{split}/{index}.png"
                path = images_root / rel
                path.parent.mkdir(parents=True, exist_ok=True)
                pixels = distance_plot(class_values(rng, label, length), size)
                Image.fromarray(pixels, mode="L").save(path)
                records.append(
                    {
                        "image_path": rel,
                        "dataset": dataset,
                        "original_label": label,
                        "target_label": label if regime == "SC" else f"{dataset}::{label}",
                        "split": split,
                    }
                )
                index += 1
    labels = sorted({r["target_label"] for r in records})
    manifest_path = root / "manifest.jsonl"
    with manifest_path.open("w", encoding="utf-8") as fh:
        fh.write(json.dumps({"regime": regime, "labels": labels}) + "\n")
        for r in records:
            fh.write(json.dumps(r) + "\n")
    return manifest_path, images_root


@pytest.fixture
def small_task(tmp_path: Path) -> tuple[Path, Path]:
    """2-class task small enough for quick CPU epochs."""
    return build_task(
        tmp_path, n_train={"1": 6, "2": 6}, n_test={"1": 8, "2": 4}, size=64
    )
