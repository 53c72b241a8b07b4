"""Desk-scale reference classifiers.

1-NN over three feature spaces: raw z-normalized series with Euclidean
distance, the same series under dynamic time warping, and flattened
recurrence images.  Predictions come out in the standard CSV so baselines
and trained networks are evaluated by the same code path.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, IoError, WindowInfeasible
from .manifest import Manifest, Prediction
from .png_io import read_gray_png
from .ucr import TimeSeries, parse_dataset, split_paths, z_normalize

EUCLIDEAN = "euclidean"
DTW = "dtw"
RP_IMAGE = "rp_image"
METRICS = (EUCLIDEAN, DTW, RP_IMAGE)

COST_ABS = "abs"
COST_SQUARED = "squared"


def dtw_distance(
    a: np.ndarray,
    b: np.ndarray,
    window: int | None = None,
    cost: str = COST_ABS,
) -> float:
    """Boundary-anchored dynamic-time-warping alignment cost.

    Local cost |a_i - b_j| (or squared, with a square root applied to the
    total), steps down/right/diagonal with no weights.  ``window`` is a
    Sakoe-Chiba band half-width restricting |i - j|; it must cover the
    length difference.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    n, m = a.size, b.size
    if n == 0 or m == 0:
        raise ValueError("dtw_distance requires non-empty sequences")
    if cost not in (COST_ABS, COST_SQUARED):
        raise ValueError(f"cost must be {COST_ABS!r} or {COST_SQUARED!r}")
    if window is not None:
        if window < 0:
            raise ValueError(f"window must be >= 0, got {window}")
        if abs(n - m) > window:
            raise WindowInfeasible(f"|{n} - {m}| > window {window}")

    local = np.abs(a[:, None] - b[None, :])
    if cost == COST_SQUARED:
        local = local * local

    inf = np.inf
    prev = np.full(m, inf)
    for i in range(n):
        cur = np.full(m, inf)
        if window is None:
            j_lo, j_hi = 0, m - 1
        else:
            j_lo, j_hi = max(0, i - window), min(m - 1, i + window)
        row = local[i]
        for j in range(j_lo, j_hi + 1):
            if i == 0 and j == 0:
                best = 0.0
            else:
                best = prev[j]  # (i-1, j)
                if j > 0:
                    if cur[j - 1] < best:
                        best = cur[j - 1]  # (i, j-1)
                    if prev[j - 1] < best:
                        best = prev[j - 1]  # (i-1, j-1)
            cur[j] = row[j] + best
        prev = cur
    total = float(prev[m - 1])
    if not np.isfinite(total):
        raise WindowInfeasible(f"band of width {window} admits no path for lengths {n}, {m}")
    return float(np.sqrt(total)) if cost == COST_SQUARED else total


@dataclass(frozen=True)
class NnModel:
    metric: str
    train_items: list[tuple[np.ndarray, str]]
    window: int | None = None
    dtw_cost: str = COST_ABS

    def __post_init__(self):
        if self.metric not in METRICS:
            raise ValueError(f"metric must be one of {METRICS}, got {self.metric!r}")
        if not self.train_items:
            raise ValueError("train_items must be non-empty")
        if self.metric in (EUCLIDEAN, RP_IMAGE):
            lengths = {item[0].size for item in self.train_items}
            if len(lengths) != 1:
                raise DimensionMismatch(
                    f"{self.metric} requires equal-length features, got lengths {sorted(lengths)}"
                )


def nn1_classify(model: NnModel, query: np.ndarray) -> tuple[str, float]:
    """Label of the nearest training item; ties go to the lowest index."""
    q = np.asarray(query, dtype=np.float64).ravel()
    if model.metric in (EUCLIDEAN, RP_IMAGE):
        if q.size != model.train_items[0][0].size:
            raise DimensionMismatch(
                f"query length {q.size} != train length {model.train_items[0][0].size}"
            )
        feats = np.stack([item[0] for item in model.train_items])
        dists = np.sqrt(np.sum((feats - q) ** 2, axis=1))
        best = int(np.argmin(dists))  # argmin keeps the first minimum
        return model.train_items[best][1], float(dists[best])
    best_idx, best_dist = 0, np.inf
    for idx, (feat, _) in enumerate(model.train_items):
        d = dtw_distance(feat, q, window=model.window, cost=model.dtw_cost)
        if d < best_dist:
            best_idx, best_dist = idx, d
    return model.train_items[best_idx][1], float(best_dist)


# -- running a baseline over a manifest -----------------------------------------


def parse_image_path(rel_path: str) -> tuple[str, str, int]:
    """Split ``<dataset>/<split>/<index>.png`` back into its parts."""
    parts = Path(rel_path).parts
    if len(parts) != 3 or not parts[2].endswith(".png"):
        raise IoError(f"unexpected image path layout: {rel_path!r}")
    return parts[0], parts[1], int(parts[2][: -len(".png")])


def _series_features(archive_root: Path, dataset: str) -> dict[tuple[str, int], np.ndarray]:
    train_path, test_path = split_paths(Path(archive_root) / dataset)
    series, _ = parse_dataset(train_path, test_path)
    feats: dict[tuple[str, int], np.ndarray] = {}
    counters = {"train": 0, "test": 0}
    for s in series:
        idx = counters[s.split]
        counters[s.split] += 1
        feats[(s.split, idx)] = z_normalize(s).values
    return feats


def _image_features(images_root: Path, records) -> dict[str, np.ndarray]:
    out = {}
    for rec in records:
        path = Path(images_root) / rec.image_path
        if not path.is_file():
            raise IoError(f"missing image: {path}")
        out[rec.image_path] = read_gray_png(path).astype(np.float64).ravel()
    return out


def run_baseline(
    manifest: Manifest,
    metric: str,
    archive_root: Path | str | None = None,
    images_root: Path | str | None = None,
    window: int | None = None,
    dtw_cost: str = COST_ABS,
) -> list[Prediction]:
    """1-NN predictions for every test record of a manifest.

    Series metrics need ``archive_root``; the image metric needs
    ``images_root``.  Models are fit per dataset on its own train split, so
    AC and SC manifests both reduce to per-dataset nearest neighbors (labels
    stay in the manifest's target space).
    """
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}, got {metric!r}")
    if metric in (EUCLIDEAN, DTW) and archive_root is None:
        raise ValueError(f"metric {metric!r} requires archive_root")
    if metric == RP_IMAGE and images_root is None:
        raise ValueError("metric 'rp_image' requires images_root")

    by_dataset: dict[str, list] = {}
    for rec in manifest.records:
        by_dataset.setdefault(rec.dataset, []).append(rec)

    predictions: list[Prediction] = []
    for dataset in sorted(by_dataset):
        records = by_dataset[dataset]
        if metric == RP_IMAGE:
            feats = _image_features(Path(images_root), records)
            get = lambda rec: feats[rec.image_path]  # noqa: E731
        else:
            series_feats = _series_features(Path(archive_root), dataset)
            get = lambda rec: series_feats[parse_image_path(rec.image_path)[1:]]  # noqa: E731

        train = sorted(
            (r for r in records if r.split == "train"),
            key=lambda r: parse_image_path(r.image_path)[2],
        )
        model = NnModel(
            metric=metric,
            train_items=[(get(r), r.target_label) for r in train],
            window=window,
            dtw_cost=dtw_cost,
        )
        for rec in (r for r in records if r.split == "test"):
            label, dist = nn1_classify(model, get(rec))
            predictions.append(Prediction(rec.image_path, label, confidence=1.0 / (1.0 + dist)))
    return predictions
