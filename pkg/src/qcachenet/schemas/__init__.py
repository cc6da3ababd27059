"""
Pydantic schemas for experiment configuration.
"""

from .experiment import (
    ExperimentConfig,
    DecoderKind,
    MappingKind,
    QueueBackend,
    OutputFormat,
    DwellMode,
)

__all__ = [
    "ExperimentConfig",
    "DecoderKind",
    "MappingKind",
    "QueueBackend",
    "OutputFormat",
    "DwellMode",
]
