"""Series-to-image encoding: distance plots with 3-sigma clamping.

A series of n points becomes an n x n matrix of pairwise Euclidean distances.
The matrix is clamped at ``clamp_k`` times the population standard deviation
of all n^2 entries, min-max scaled to [0, 1], average-pooled to the target
resolution and quantized to 8-bit grayscale.  The classical thresholded
variant (binary recurrence matrix) is kept behind ``EncodeConfig.thresholded``.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import IoError, OutOfRange, OutputNotWritable, SeriesTooShort, TimageError
from .png_io import encode_gray_png, write_gray_png
from .ucr import TimeSeries, parse_dataset, split_paths, z_normalize

CLAMP_FIRST = "clamp-first"
SCALE_FIRST = "scale-first"


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise distances of a series' points plus their entry statistics."""

    n: int
    entries: np.ndarray
    sigma: float


@dataclass(frozen=True)
class RecurrenceMatrix:
    n: int
    bits: np.ndarray
    epsilon: float


@dataclass(frozen=True)
class ImageMeta:
    dataset: str = ""
    split: str = ""
    index: int = -1
    label: str = ""


@dataclass(frozen=True)
class RpImage:
    width: int
    height: int
    pixels: np.ndarray
    meta: ImageMeta = field(default_factory=ImageMeta)


@dataclass(frozen=True)
class EncodeConfig:
    """Pipeline knobs; the defaults are the plain 224px grayscale setup."""

    image_size: int = 224
    clamp_k: float = 3.0
    thresholded: bool = False
    epsilon: float | None = None
    order: str = CLAMP_FIRST

    def __post_init__(self):
        if self.image_size < 1:
            raise ValueError(f"image_size must be >= 1, got {self.image_size}")
        if self.clamp_k <= 0:
            raise ValueError(f"clamp_k must be > 0, got {self.clamp_k}")
        if self.thresholded and (self.epsilon is None or self.epsilon <= 0):
            raise ValueError("thresholded mode requires a positive epsilon")
        if self.order not in (CLAMP_FIRST, SCALE_FIRST):
            raise ValueError(f"order must be {CLAMP_FIRST!r} or {SCALE_FIRST!r}")


def distance_matrix(series: TimeSeries) -> DistanceMatrix:
    """All pairwise |x_i - x_j| distances; sigma over all n^2 entries."""
    x = series.values
    if x.size < 2:
        raise SeriesTooShort(f"need >= 2 points, got {x.size}")
    entries = np.abs(x[:, None] - x[None, :])
    return DistanceMatrix(n=int(x.size), entries=entries, sigma=float(np.std(entries)))


def _min_max(m: np.ndarray) -> np.ndarray:
    lo, hi = float(m.min()), float(m.max())
    if hi == lo:
        return np.zeros_like(m)
    return (m - lo) / (hi - lo)


def clamp_and_scale(d: DistanceMatrix, clamp_k: float = 3.0, order: str = CLAMP_FIRST) -> np.ndarray:
    """Cap entries at clamp_k * sigma, then min-max scale into [0, 1].

    ``order="scale-first"`` applies min-max first and caps afterwards at
    clamp_k times the std of the scaled entries (no rescaling), which leaves
    part of the dynamic range unused; kept for comparative experiments.
    A constant matrix (sigma == 0) maps to all zeros either way.
    """
    if order == CLAMP_FIRST:
        clamped = np.minimum(d.entries, clamp_k * d.sigma)
        return _min_max(clamped)
    scaled = _min_max(d.entries)
    return np.minimum(scaled, clamp_k * float(np.std(scaled)))


def threshold_rp(d: DistanceMatrix, epsilon: float) -> RecurrenceMatrix:
    """Classical binary recurrence matrix.

    Step convention: a pair at exactly epsilon is *not* recurrent (the step
    function is 0 at 0), so bits are ``distance < epsilon``.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    bits = (d.entries < epsilon).astype(np.uint8)
    return RecurrenceMatrix(n=d.n, bits=bits, epsilon=float(epsilon))


def _pool_bounds(n: int, target: int) -> list[tuple[int, int]]:
    # floor-based adaptive bins; identical for rows and columns so symmetry
    # survives pooling.  Empty bins (n < target) fall back to the nearest
    # source index on the same grid.
    bounds = []
    for a in range(target):
        lo = (a * n) // target
        hi = ((a + 1) * n) // target
        bounds.append((lo, max(hi, lo + 1)))
    return bounds


def resize_avg_pool(matrix: np.ndarray, target: int) -> np.ndarray:
    """Adaptive average pooling of a square matrix to target x target.

    n == target is the identity; n < target repeats source cells
    (nearest-neighbor on the same floor grid).
    """
    m = np.asarray(matrix, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if target < 1:
        raise ValueError(f"target must be >= 1, got {target}")
    n = m.shape[0]
    if n == target:
        return m.copy()
    bounds = _pool_bounds(n, target)
    rows = np.empty((target, n), dtype=np.float64)
    for a, (lo, hi) in enumerate(bounds):
        rows[a] = m[lo:hi].mean(axis=0)
    out = np.empty((target, target), dtype=np.float64)
    for b, (lo, hi) in enumerate(bounds):
        out[:, b] = rows[:, lo:hi].mean(axis=1)
    return out


def quantize(matrix: np.ndarray, meta: ImageMeta | None = None) -> RpImage:
    """Map [0, 1] entries to uint8 with half-up rounding (0.5 -> 128)."""
    m = np.asarray(matrix, dtype=np.float64)
    lo, hi = float(m.min()), float(m.max())
    if lo < -1e-12 or hi > 1.0 + 1e-12:
        raise OutOfRange(f"entries outside [0,1]: min={lo!r} max={hi!r}")
    m = np.clip(m, 0.0, 1.0)
    pixels = np.floor(m * 255.0 + 0.5).astype(np.uint8)
    h, w = pixels.shape
    return RpImage(width=w, height=h, pixels=pixels, meta=meta or ImageMeta())


def encode_series(series: TimeSeries, cfg: EncodeConfig = EncodeConfig(), index: int = -1) -> RpImage:
    """Full per-series pipeline; deterministic byte-for-byte."""
    d = distance_matrix(series)
    if cfg.thresholded:
        plane = threshold_rp(d, cfg.epsilon).bits.astype(np.float64)
    else:
        plane = clamp_and_scale(d, cfg.clamp_k, cfg.order)
    pooled = resize_avg_pool(plane, cfg.image_size)
    meta = ImageMeta(series.dataset_name, series.split, index, series.label)
    return quantize(pooled, meta)


# -- batch encoding ------------------------------------------------------------


@dataclass(frozen=True)
class ImageRecord:
    dataset: str
    split: str
    index: int
    label: str
    path: str  # relative to the encode output root
    length: int  # source series length after padding strip


@dataclass(frozen=True)
class EncodeFailure:
    dataset: str
    split: str | None
    index: int | None
    error: str


@dataclass
class EncodeReport:
    images: list[ImageRecord] = field(default_factory=list)
    failures: list[EncodeFailure] = field(default_factory=list)

    def counts(self) -> dict[str, dict[str, int]]:
        out: dict[str, dict[str, int]] = {}
        for rec in self.images:
            per = out.setdefault(rec.dataset, {"train": 0, "test": 0})
            per[rec.split] += 1
        return out

    def to_json_dict(self) -> dict:
        return {
            "counts": self.counts(),
            "images": [vars(r) for r in self.images],
            "failures": [vars(f) for f in self.failures],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EncodeReport":
        return cls(
            images=[ImageRecord(**r) for r in d.get("images", [])],
            failures=[EncodeFailure(**f) for f in d.get("failures", [])],
        )


REPORT_BASENAME = "encode_report.json"


def write_report(report: EncodeReport, out_dir: Path | str) -> Path:
    path = Path(out_dir) / REPORT_BASENAME
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        json.dump(report.to_json_dict(), fh, indent=1, sort_keys=True)
        fh.write("\n")
    return path


def read_report(out_dir: Path | str) -> EncodeReport:
    path = Path(out_dir) / REPORT_BASENAME
    if not path.is_file():
        raise IoError(f"missing encode report: {path}")
    with path.open("r", encoding="utf-8") as fh:
        return EncodeReport.from_json_dict(json.load(fh))


def _encode_one(series: TimeSeries, cfg: EncodeConfig, index: int, out_root: Path) -> ImageRecord:
    image = encode_series(z_normalize(series), cfg, index=index)
    rel = f"{series.dataset_name}/{series.split}/{index}.png"
    write_gray_png(image.pixels, out_root / rel)
    return ImageRecord(
        series.dataset_name, series.split, index, series.label, rel, series.original_length
    )


def batch_encode(
    dataset_dirs: list[Path | str],
    cfg: EncodeConfig,
    out_dir: Path | str,
    workers: int = 1,
) -> EncodeReport:
    """Encode every series of every dataset to ``<out>/<dataset>/<split>/<index>.png``.

    Series are z-normalized before encoding.  Per-series failures are
    collected in the report instead of aborting the batch; an unwritable
    output root aborts immediately.  Output bytes do not depend on the
    worker count.
    """
    out_root = Path(out_dir)
    try:
        out_root.mkdir(parents=True, exist_ok=True)
        probe = out_root / ".write_probe"
        probe.write_bytes(b"")
        probe.unlink()
    except OSError as exc:
        raise OutputNotWritable(f"output root not writable: {out_root}: {exc}") from exc

    report = EncodeReport()
    tasks: list[tuple[TimeSeries, int]] = []
    for dataset_dir in dataset_dirs:
        dataset_dir = Path(dataset_dir)
        try:
            train_path, test_path = split_paths(dataset_dir)
            series, _ = parse_dataset(train_path, test_path)
        except TimageError as exc:
            report.failures.append(EncodeFailure(dataset_dir.name, None, None, str(exc)))
            continue
        counters = {"train": 0, "test": 0}
        for s in series:
            idx = counters[s.split]
            counters[s.split] += 1
            tasks.append((s, idx))

    workers = max(1, int(workers))

    def run(task: tuple[TimeSeries, int]):
        s, idx = task
        try:
            return _encode_one(s, cfg, idx, out_root)
        except TimageError as exc:
            return EncodeFailure(s.dataset_name, s.split, idx, str(exc))

    if workers == 1:
        results = [run(t) for t in tasks]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, tasks))

    for res in results:  # submission order keeps the report deterministic
        if isinstance(res, ImageRecord):
            report.images.append(res)
        else:
            report.failures.append(res)
    return report


def encoded_bytes(series: TimeSeries, cfg: EncodeConfig = EncodeConfig()) -> bytes:
    """PNG bytes for one already-normalized series (no file I/O)."""
    return encode_gray_png(encode_series(series, cfg).pixels)
