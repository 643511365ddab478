"""Fine-tuning glue for corpus artifacts: config emission and toy runs."""

from .config import (
    InferenceConfig,
    TrainConfig,
    ValidationError,
    emit_train_config,
    validate_corpus,
    validate_manifest,
)
from .tokenizer_ext import TokenCollisionError, extend_tokenizer
from .toy import EarlyStopping, ToyRunResult, toy_run

__version__ = "0.1.0"

__all__ = [
    "EarlyStopping",
    "InferenceConfig",
    "TokenCollisionError",
    "ToyRunResult",
    "TrainConfig",
    "ValidationError",
    "emit_train_config",
    "extend_tokenizer",
    "toy_run",
    "validate_corpus",
    "validate_manifest",
]
