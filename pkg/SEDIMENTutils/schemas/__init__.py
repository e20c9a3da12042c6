"""Schema definitions for configs and persisted payloads."""

from .validators import (
    SCHEMA_VERSION,
    SYSTEM_MASS,
    DensitySpec,
    ExperimentConfig,
    ReflectionParamsModel,
    SystemFile,
    load_config,
    merge,
    parse_overrides,
    read_mapping,
)

__all__ = [
    "SCHEMA_VERSION",
    "SYSTEM_MASS",
    "DensitySpec",
    "ExperimentConfig",
    "ReflectionParamsModel",
    "SystemFile",
    "load_config",
    "merge",
    "parse_overrides",
    "read_mapping",
]
