"""timage: time series -> recurrence images -> classification benchmarks.

The pipeline parses UCR 2018 archive files, encodes each series as a
normalized grayscale distance-plot image, builds labeled manifests for
per-dataset (SC), all-datasets (AC) and dataset-separation training regimes,
runs 1-NN baselines, and scores arbitrary prediction files (accuracy,
default rate, confusion matrices, relative-accuracy histograms).
"""

__version__ = "0.1.0"

from . import errors
from .baselines import NnModel, dtw_distance, nn1_classify, run_baseline
from .encode import (
    DistanceMatrix,
    EncodeConfig,
    EncodeReport,
    ImageRecord,
    RecurrenceMatrix,
    RpImage,
    batch_encode,
    clamp_and_scale,
    distance_matrix,
    encode_series,
    quantize,
    resize_avg_pool,
    threshold_rp,
)
from .evaluation import (
    EvalReport,
    RelDiffHistogram,
    default_rate,
    evaluate,
    relative_accuracy_histogram,
    render_report,
    best_constant_rate,
)
from .manifest import (
    AC,
    DATASET_SEP,
    SC,
    Manifest,
    ManifestRecord,
    Prediction,
    build_manifest,
    manifest_class_weights,
    read_manifest,
    read_predictions,
    write_manifest,
    write_predictions,
)
from .png_io import encode_gray_png, read_gray_png, write_gray_png
from .ucr import (
    ClassWeights,
    DatasetStats,
    TimeSeries,
    compute_class_weights,
    parse_dataset,
    z_normalize,
)

__all__ = [
    "__version__",
    "errors",
    # ucr
    "TimeSeries",
    "DatasetStats",
    "ClassWeights",
    "parse_dataset",
    "z_normalize",
    "compute_class_weights",
    # encode
    "DistanceMatrix",
    "RecurrenceMatrix",
    "RpImage",
    "EncodeConfig",
    "EncodeReport",
    "ImageRecord",
    "distance_matrix",
    "clamp_and_scale",
    "threshold_rp",
    "resize_avg_pool",
    "quantize",
    "encode_series",
    "batch_encode",
    # png
    "encode_gray_png",
    "write_gray_png",
    "read_gray_png",
    # manifests
    "SC",
    "AC",
    "DATASET_SEP",
    "Manifest",
    "ManifestRecord",
    "Prediction",
    "build_manifest",
    "write_manifest",
    "read_manifest",
    "read_predictions",
    "write_predictions",
    "manifest_class_weights",
    # baselines
    "NnModel",
    "dtw_distance",
    "nn1_classify",
    "run_baseline",
    # evaluation
    "EvalReport",
    "RelDiffHistogram",
    "evaluate",
    "default_rate",
    "best_constant_rate",
    "relative_accuracy_histogram",
    "render_report",
]
