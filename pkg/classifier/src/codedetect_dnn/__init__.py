"""Length-adaptive neural classifier for convolutional code detection.

Consumes the JSON-lines datasets and bulk LRT decision files produced by
the `codedetect` CLI; treats each codeword length as a separate domain with
its own normalization parameters over a shared convolutional trunk, and
uses teacher-student distillation to keep earlier lengths working when new
ones are added.
"""

from .data import BitSequenceDataset, CellKey, bits_to_tensor, read_records, split_by_cell
from .evaluate import ComparisonRow, evaluate_vs_lrt, read_lrt_decisions, write_comparison_csv
from .io import load_checkpoint, save_checkpoint
from .model import DomainRegistry, LengthAdaptiveClassifier, ModelConfig
from .training import (
    ForgettingReport,
    TrainConfig,
    TrainReport,
    add_domain,
    evaluate_accuracy,
    train_domain,
)

__version__ = "0.1.0"

__all__ = [
    "BitSequenceDataset",
    "CellKey",
    "ComparisonRow",
    "DomainRegistry",
    "ForgettingReport",
    "LengthAdaptiveClassifier",
    "ModelConfig",
    "TrainConfig",
    "TrainReport",
    "add_domain",
    "bits_to_tensor",
    "evaluate_accuracy",
    "evaluate_vs_lrt",
    "load_checkpoint",
    "read_lrt_decisions",
    "read_records",
    "save_checkpoint",
    "split_by_cell",
    "train_domain",
    "write_comparison_csv",
]
