# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Load run settings from YAML config and the environment."""

from __future__ import annotations

import json
from collections.abc import Mapping
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

from belleff.core.errors import InputError

DEFAULT_ENUMERATION_CAP = 10**8
DEFAULT_DENSE_THRESHOLD = 500
DEFAULT_DENOMINATOR_LIMIT = 10**6
MAX_SCALE_TOLERANCE = Fraction(1, 10**15)
DEFAULT_SEED = 42
OUTPUT_FORMATS = ("json", "table")

ENV_SEED = "BELL_EFF_SEED"
ENV_CAP = "BELL_EFF_CAP"


@dataclass(frozen=True)
class Settings:
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    column_generation: bool = False
    dense_threshold: int = DEFAULT_DENSE_THRESHOLD
    denominator_limit: int = DEFAULT_DENOMINATOR_LIMIT
    scale_tolerance: Fraction = MAX_SCALE_TOLERANCE
    seed: int = DEFAULT_SEED
    output_format: str = "json"

    def __post_init__(self) -> None:
        if self.enumeration_cap < 1:
            raise InputError(f"enumeration_cap must be positive, got {self.enumeration_cap}")
        if self.dense_threshold < 1:
            raise InputError(f"dense_threshold must be positive, got {self.dense_threshold}")
        if self.denominator_limit < 1:
            raise InputError(f"denominator_limit must be positive, got {self.denominator_limit}")
        if not 0 < self.scale_tolerance <= MAX_SCALE_TOLERANCE:
            raise InputError(
                f"scale_tolerance must be in (0, {MAX_SCALE_TOLERANCE}], got {self.scale_tolerance}"
            )
        if self.seed < 0:
            raise InputError(f"seed must be non-negative, got {self.seed}")
        if self.output_format not in OUTPUT_FORMATS:
            raise InputError(f"output_format must be one of {OUTPUT_FORMATS}")

    def with_overrides(self, **changes: Any) -> Settings:
        """Copy with the given fields replaced; ``None`` values are ignored."""
        return replace(self, **{k: v for k, v in changes.items() if v is not None})


def get_schema_path() -> Path:
    """Path to the config JSON Schema (for validation of user and default configs)."""
    return Path(__file__).resolve().parent.parent / "config" / "belleff_config_schema.json"


def get_default_config_path() -> Path:
    """Path to the default config shipped with belleff."""
    return Path(__file__).resolve().parent.parent / "config" / "belleff_default.yaml"


def validate_config(raw: dict[str, Any], path: Path | None = None) -> None:
    """Validate parsed YAML against the config schema. Raises InputError on failure."""
    import jsonschema

    schema = json.loads(get_schema_path().read_text())
    try:
        jsonschema.validate(instance=raw, schema=schema)
    except jsonschema.ValidationError as e:
        loc = f" ({path})" if path else ""
        msg = getattr(e, "message", str(e))
        raise InputError(f"Config schema validation failed{loc}: {msg}") from e


def load_config(path: Path) -> Settings:
    """Load and validate a YAML config. Keys the file omits keep their defaults."""
    import yaml

    try:
        raw = yaml.safe_load(path.read_text())
    except OSError as e:
        raise InputError(f"Cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise InputError(f"Config is not valid YAML ({path}): {e}") from e
    if not raw:
        raise InputError(f"Config is empty: {path}")
    validate_config(raw, path)

    section = raw["belleff"] or {}
    rational = section.get("rationalization", {})
    changes: dict[str, Any] = {
        "enumeration_cap": section.get("enumeration_cap"),
        "column_generation": section.get("column_generation"),
        "dense_threshold": section.get("dense_threshold"),
        "denominator_limit": rational.get("denominator_limit"),
        "seed": section.get("seed"),
        "output_format": section.get("output_format"),
    }
    if "scale_tolerance" in rational:
        changes["scale_tolerance"] = Fraction(rational["scale_tolerance"])
    return Settings().with_overrides(**changes)


def _parse_env_int(name: str, value: str) -> int:
    try:
        return int(value, 0)
    except ValueError as e:
        raise InputError(f"{name} must be an integer, got {value!r}") from e


def apply_environment(settings: Settings, environ: Mapping[str, str]) -> Settings:
    """Apply BELL_EFF_SEED / BELL_EFF_CAP overrides."""
    seed = environ.get(ENV_SEED)
    cap = environ.get(ENV_CAP)
    return settings.with_overrides(
        seed=_parse_env_int(ENV_SEED, seed) if seed else None,
        enumeration_cap=_parse_env_int(ENV_CAP, cap) if cap else None,
    )
