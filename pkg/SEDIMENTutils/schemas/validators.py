"""Pydantic models for experiment configs and persisted payloads."""

from __future__ import annotations

import json
import math
from pathlib import Path
from typing import Literal, Optional

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError as PydanticValidationError
from pydantic import field_validator, model_validator

from ..exceptions import ConfigError

SCHEMA_VERSION = 1
# total rescaled mass of any particle system, N * (4 pi / 3) / N
SYSTEM_MASS = 4.0 * math.pi / 3.0


class ReflectionParamsModel(BaseModel):
    """Validate method-of-reflections settings."""

    model_config = ConfigDict(extra="forbid")

    k_max: int = Field(default=30, ge=0)
    tol: float = Field(default=1e-10, gt=0)
    delta_threshold: float = Field(default=0.2, gt=0)
    workers: int = Field(default=1, ge=1)
    deterministic: bool = True
    strict: bool = False
    backend: Literal["numba", "numpy"] = "numba"

    def to_params(self):
        from ..micro.reflections import ReflectionParams

        return ReflectionParams(**self.model_dump())


class DensitySpec(BaseModel):
    """Validate an analytic initial density."""

    model_config = ConfigDict(extra="forbid")

    kind: Literal["uniform_ball", "mollified_ball", "gaussian"] = "mollified_ball"
    radius: float = Field(default=1.0, gt=0)
    amplitude: float = Field(default=1.0, ge=0)
    center: list[float] = Field(default_factory=lambda: [0.0, 0.0, 0.0], min_length=3, max_length=3)
    width: Optional[float] = Field(default=None, gt=0)
    normalize_mass: Optional[float] = Field(default=None, gt=0)

    def build(self):
        from ..macro.densities import AnalyticDensity

        density = AnalyticDensity(
            kind=self.kind,
            radius=self.radius,
            amplitude=self.amplitude,
            center=self.center,
            width=self.width,
        )
        if self.normalize_mass is not None:
            density = density.normalized(self.normalize_mass)
        return density


class ExperimentConfig(BaseModel):
    """Validate an epsilon-sweep experiment."""

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = SCHEMA_VERSION
    epsilon_ladder: list[int] = Field(default_factory=lambda: [512], min_length=1)
    c0: float = Field(default=0.1, gt=0, le=1)
    xi_target: float = Field(default=1.0, gt=0)
    beta: float = Field(default=3.0, gt=2)
    t_final: float = Field(default=0.5, gt=0)
    dt: float = Field(default=0.05, gt=0)
    snapshot_every: Optional[float] = Field(default=None, gt=0)
    delta_factor: float = Field(default=4.0, gt=0, description="delta = delta_factor * d_min(0)")
    delta_tilde_factor: int = Field(default=4, ge=1, description="delta_tilde = n * delta")
    seeds: list[int] = Field(default_factory=lambda: [7], min_length=1)
    density: DensitySpec = Field(
        default_factory=lambda: DensitySpec(kind="mollified_ball", normalize_mass=SYSTEM_MASS)
    )
    macro_h: float = Field(default=0.1, gt=0)
    blob_factor: float = Field(default=2.0, gt=0)
    kernel: Literal["stokeslet", "algebraic"] = "stokeslet"
    scheme: Literal["euler", "rk2"] = "rk2"
    cfl_frac: float = Field(default=0.1, gt=0)
    reflection: ReflectionParamsModel = Field(default_factory=ReflectionParamsModel)
    output_dir: str = "runs"
    deterministic: bool = True
    row_workers: int = Field(default=1, ge=1)

    @field_validator("epsilon_ladder")
    @classmethod
    def _increasing(cls, value):
        if any(n < 1 for n in value):
            raise ValueError("epsilon_ladder entries must be positive particle counts")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("epsilon_ladder must be strictly increasing")
        return value

    @model_validator(mode="after")
    def _seeds_match_ladder(self):
        if len(self.seeds) not in (1, len(self.epsilon_ladder)):
            raise ValueError("seeds must hold one seed or one per ladder rung")
        return self

    def seed_for(self, index: int) -> int:
        return self.seeds[0] if len(self.seeds) == 1 else self.seeds[index]


class SystemFile(BaseModel):
    """Validate a persisted particle system."""

    schema_version: Literal[1] = SCHEMA_VERSION
    radius: float = Field(gt=0)
    c0: float = Field(default=1.0, gt=0)
    drive: list[float] = Field(default_factory=lambda: [0.0, 0.0, -1.0], min_length=3, max_length=3)
    seed: Optional[int] = None
    positions: list[list[float]] = Field(min_length=1)

    @field_validator("positions")
    @classmethod
    def _triples(cls, value):
        if any(len(row) != 3 for row in value):
            raise ValueError("positions must be a list of [x, y, z] triples")
        return value

    @classmethod
    def from_system(cls, system) -> "SystemFile":
        return cls(**system.as_dict())

    def to_system(self):
        from ..micro.system import ParticleSystem

        return ParticleSystem(
            positions=self.positions, radius=self.radius, drive=self.drive, c0=self.c0, seed=self.seed
        )


# ---------------------------------------------------------------------------
# Loading and overrides
# ---------------------------------------------------------------------------
def read_mapping(path) -> dict:
    """Read a JSON or YAML mapping, raising ConfigError on any failure."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"{path}: {exc.strerror or exc}") from exc
    try:
        if path.suffix.lower() in (".yml", ".yaml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"{path}: cannot parse ({exc})") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def parse_overrides(pairs) -> dict:
    """Turn ["a.b=1", "c=[1,2]"] into a nested dict; values are parsed as YAML scalars."""
    result: dict = {}
    for token in pairs or []:
        if "=" not in token:
            raise ConfigError(f"override '{token}' is not key=value")
        key, raw = token.split("=", 1)
        try:
            value = yaml.safe_load(raw)
        except yaml.YAMLError as exc:
            raise ConfigError(f"override '{token}': {exc}") from exc
        node = result
        parts = key.strip().split(".")
        for part in parts[:-1]:
            node = node.setdefault(part, {})
        node[parts[-1]] = value
    return result


def merge(defaults: dict, overrides: dict) -> dict:
    """Recursive merge; override values win."""
    merged = dict(defaults)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(path=None, overrides=None) -> ExperimentConfig:
    """Build an ExperimentConfig from an optional file plus ``--set`` overrides."""
    data = read_mapping(path) if path else {}
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ConfigError(f"unsupported schema_version {version!r} (expected {SCHEMA_VERSION})")
    data = merge(data, parse_overrides(overrides))
    try:
        return ExperimentConfig(**data)
    except PydanticValidationError as exc:
        raise ConfigError(f"invalid experiment config: {exc}") from exc
