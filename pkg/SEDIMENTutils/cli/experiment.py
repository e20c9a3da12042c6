"""Helpers turning parsed CLI arguments into configs and solver settings."""

from __future__ import annotations

import os

from pydantic import ValidationError as PydanticValidationError

from ..exceptions import ConfigError
from ..micro.reflections import ReflectionParams
from ..schemas.validators import ExperimentConfig, load_config, merge
from .runtime import get_default_workers


def explicit_workers(args) -> int | None:
    """--workers, else SEDIMENT_WORKERS when set, else None."""
    workers = getattr(args, "workers", None)
    if workers:
        return workers
    return get_default_workers() if os.getenv("SEDIMENT_WORKERS") else None


def resolve_workers(args) -> int:
    return explicit_workers(args) or 1


def load_experiment(args, flags: dict | None = None) -> ExperimentConfig:
    """Config file, then ``--set`` overrides, then typed flags that were given."""
    config = load_config(getattr(args, 'config', None), getattr(args, 'overrides', None))
    given = {key: value for key, value in (flags or {}).items() if value is not None}
    if not given:
        return config
    try:
        return ExperimentConfig(**merge(config.model_dump(), given))
    except PydanticValidationError as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc


def reflection_params_from_args(args) -> ReflectionParams:
    return ReflectionParams(
        k_max=args.k_max,
        tol=args.tol,
        workers=resolve_workers(args),
        deterministic=args.deterministic,
        strict=args.strict,
    )


def add_reflection_args(parser):
    group = parser.add_argument_group("Method of reflections")
    group.add_argument("--k-max", type=int, default=30, help="Maximum number of reflections")
    group.add_argument("--tol", type=float, default=1e-10, help="Relative residual tolerance")
    group.add_argument(
        "--strict",
        action="store_true",
        help="Fail with MaxIterations instead of warning when k-max is reached",
    )
