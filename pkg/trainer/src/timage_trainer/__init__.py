"""Fine-tuning harness for recurrence-image manifests.

Interop with the encoding kit is file-based: manifest JSONL + PNG tree in,
predictions CSV + JSON training log out.
"""

__version__ = "0.1.0"

from .data import (
    IncompatibleCheckpoint,
    Manifest,
    ManifestDataset,
    MissingImages,
    TrainerError,
    balanced_class_weights,
    read_manifest,
    write_predictions_csv,
)
from .model import (
    ARCHITECTURES,
    INIT_STRATEGIES,
    build_model,
    load_checkpoint,
    save_checkpoint,
)
from .predict import predict
from .train import TrainConfig, TrainResult, train

__all__ = [
    "__version__",
    "TrainerError",
    "MissingImages",
    "IncompatibleCheckpoint",
    "Manifest",
    "ManifestDataset",
    "read_manifest",
    "balanced_class_weights",
    "write_predictions_csv",
    "ARCHITECTURES",
    "INIT_STRATEGIES",
    "build_model",
    "save_checkpoint",
    "load_checkpoint",
    "TrainConfig",
    "TrainResult",
    "train",
    "predict",
]
