"""Shared fixtures: synthetic UCR-format archives written independently of the library."""

from __future__ import annotations

import os
from pathlib import Path

import numpy as np
import pytest


def write_ucr_file(path: Path, rows: list[tuple[str, list[float]]], pad_to: int | None = None) -> None:
    """Write rows as ``label<TAB>v1<TAB>v2...``, optionally NaN-padded to a width."""
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = []
    for label, values in rows:
        tokens = [label] + [repr(float(v)) for v in values]
        if pad_to is not None:
            tokens += ["NaN"] * (pad_to - len(values))
        lines.append("\t".join(tokens))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def make_dataset(
    root: Path,
    name: str,
    train_rows: list[tuple[str, list[float]]],
    test_rows: list[tuple[str, list[float]]],
    pad_to: int | None = None,
) -> Path:
    d = root / name
    write_ucr_file(d / f"{name}_TRAIN.tsv", train_rows, pad_to)
    write_ucr_file(d / f"{name}_TEST.tsv", test_rows, pad_to)
    return d


def class_series(rng: np.random.Generator, label: int, length: int) -> list[float]:
    """Distinct per-class shapes so even weak classifiers separate them."""
    t = np.arange(length, dtype=np.float64)
    base = np.sin(2.0 * np.pi * t / (4.0 + 3.0 * label)) * (1.0 + label)
    return list(base + 0.05 * rng.standard_normal(length))


def make_archive(root: Path, spec: dict[str, dict]) -> Path:
    """spec: name -> {classes, n_train, n_test, length, (pad_to)}."""
    rng = np.random.default_rng(20240 + len(spec))
    for name, cfg in spec.items():
        classes = cfg["classes"]
        length = cfg["length"]
        train = [
            (str(c), class_series(rng, ci, length))
            for ci, c in enumerate(classes)
            for _ in range(cfg["n_train"])
        ]
        test = [
            (str(c), class_series(rng, ci, length))
            for ci, c in enumerate(classes)
            for _ in range(cfg["n_test"])
        ]
        make_dataset(root, name, train, test, cfg.get("pad_to"))
    return root


@pytest.fixture
def tiny_archive(tmp_path: Path) -> Path:
    root = tmp_path / "archive"
    make_archive(
        root,
        {
            "Alpha": {"classes": [1, 2, 3], "n_train": 4, "n_test": 3, "length": 30},
            "Beta": {"classes": [1, 2], "n_train": 5, "n_test": 4, "length": 20},
        },
    )
    return root


@pytest.fixture
def chinatown_archive(tmp_path: Path) -> Path:
    """A dataset with the published Chinatown structure.

    Balanced train split (10 + 10), skewed test split where the
    lexicographically-first label "1" holds 250 of the 345 test rows.
    """
    root = tmp_path / "archive"
    rng = np.random.default_rng(7)
    length = 24

    def series(ci: int) -> list[float]:
        return class_series(rng, ci, length)

    train = [("1", series(0)) for _ in range(10)] + [("2", series(1)) for _ in range(10)]
    test = [("1", series(0)) for _ in range(250)] + [("2", series(1)) for _ in range(95)]
    make_dataset(root, "Chinatown", train, test)
    return root


def real_archive_root() -> Path | None:
    """Full UCR 2018 archive location, when the environment provides one."""
    env = os.environ.get("UCR_ROOT")
    if env and Path(env).is_dir():
        return Path(env)
    return None


def published_results_dir() -> Path | None:
    """Directory with the externally published per-dataset accuracy CSVs."""
    env = os.environ.get("TIMAGE_RESULTS_DIR")
    if env and Path(env).is_dir():
        return Path(env)
    return None
