# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for settings loading, schema validation and environment overrides."""

import subprocess
import sys
import tempfile
import tomllib
from fractions import Fraction
from pathlib import Path

import pytest

from belleff.core.config import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_SEED,
    MAX_SCALE_TOLERANCE,
    Settings,
    apply_environment,
    get_default_config_path,
    get_schema_path,
    load_config,
)
from belleff.core.errors import InputError
from belleff.core.log import configure_logging, get_logger

SCRIPT = Path(__file__).resolve().parent.parent / "scripts" / "check-config.py"
PYPROJECT = SCRIPT.parent.parent / "pyproject.toml"


def _write_config(text: str) -> Path:
    with tempfile.NamedTemporaryFile(mode="w", suffix=".yaml", delete=False) as f:
        f.write(text)
        return Path(f.name)


def test_default_config_matches_defaults():
    """The shipped YAML spells out the built-in defaults."""
    assert get_schema_path().exists()
    assert load_config(get_default_config_path()) == Settings()


def test_partial_config_keeps_other_defaults():
    path = _write_config(
        """
belleff:
  enumeration_cap: 5000
  column_generation: true
  rationalization:
    denominator_limit: 1000
"""
    )
    try:
        settings = load_config(path)
        assert settings.enumeration_cap == 5000
        assert settings.column_generation is True
        assert settings.denominator_limit == 1000
        assert settings.seed == DEFAULT_SEED
        assert settings.scale_tolerance == MAX_SCALE_TOLERANCE
    finally:
        path.unlink(missing_ok=True)


def test_scale_tolerance_is_rational_and_bounded():
    tighter = "1/" + "1" + "0" * 16
    path = _write_config(f'belleff:\n  rationalization:\n    scale_tolerance: "{tighter}"\n')
    try:
        assert load_config(path).scale_tolerance == Fraction(1, 10**16)
    finally:
        path.unlink(missing_ok=True)
    path = _write_config('belleff:\n  rationalization:\n    scale_tolerance: "1/10"\n')
    try:
        with pytest.raises(InputError, match="scale_tolerance"):
            load_config(path)
    finally:
        path.unlink(missing_ok=True)


@pytest.mark.parametrize(
    "text",
    [
        "seed: 1\n",
        "belleff:\n  seed: -1\n",
        "belleff:\n  enumeration_cap: lots\n",
        "belleff:\n  output_format: xml\n",
        "belleff:\n  colour: blue\n",
    ],
)
def test_schema_rejects_bad_configs(text):
    path = _write_config(text)
    try:
        with pytest.raises(InputError, match="schema"):
            load_config(path)
    finally:
        path.unlink(missing_ok=True)


def test_unreadable_and_empty_configs():
    with pytest.raises(InputError, match="Cannot read"):
        load_config(Path("/nonexistent/belleff.yaml"))
    path = _write_config("")
    try:
        with pytest.raises(InputError, match="empty"):
            load_config(path)
    finally:
        path.unlink(missing_ok=True)
    path = _write_config("belleff: [unclosed\n")
    try:
        with pytest.raises(InputError, match="YAML"):
            load_config(path)
    finally:
        path.unlink(missing_ok=True)


def test_environment_overrides():
    settings = apply_environment(Settings(), {"BELL_EFF_SEED": "7", "BELL_EFF_CAP": "0x100"})
    assert settings.seed == 7
    assert settings.enumeration_cap == 256
    assert apply_environment(Settings(), {}) == Settings()
    assert apply_environment(Settings(), {}).enumeration_cap == DEFAULT_ENUMERATION_CAP
    with pytest.raises(InputError, match="BELL_EFF_SEED"):
        apply_environment(Settings(), {"BELL_EFF_SEED": "seven"})


def test_settings_validation():
    with pytest.raises(InputError):
        Settings(enumeration_cap=0)
    with pytest.raises(InputError):
        Settings(output_format="xml")
    with pytest.raises(InputError):
        Settings(seed=-1)
    assert Settings().with_overrides(seed=None, enumeration_cap=10).enumeration_cap == 10


def test_logging_setup():
    log = configure_logging("info")
    assert log is get_logger()
    assert get_logger("bounds").name == "belleff.bounds"
    handlers = len(log.handlers)
    configure_logging("debug")
    assert len(log.handlers) == handlers
    with pytest.raises(ValueError):
        configure_logging("chatty")
    configure_logging("warning")


def test_check_config_script_valid(tmp_path):
    """check-config.py exits 0 and prints the resolved settings for a valid config."""
    config = tmp_path / "settings.yaml"
    config.write_text("belleff:\n  seed: 3\n")
    result = subprocess.run(
        [sys.executable, str(SCRIPT), str(config)], capture_output=True, text=True
    )
    assert result.returncode == 0
    assert "OK:" in result.stdout
    assert "seed: 3" in result.stdout


def test_check_config_script_invalid(tmp_path):
    config = tmp_path / "settings.yaml"
    config.write_text("belleff:\n  seed: many\n")
    result = subprocess.run(
        [sys.executable, str(SCRIPT), str(config)], capture_output=True, text=True
    )
    assert result.returncode == 1
    assert "Invalid config" in result.stderr
    usage = subprocess.run([sys.executable, str(SCRIPT)], capture_output=True, text=True)
    assert usage.returncode == 2


def test_hook_tooling_is_a_dev_dependency():
    project = tomllib.loads(PYPROJECT.read_text())["project"]
    assert "pre-commit" not in project["dependencies"]
    assert "pre-commit" in project["optional-dependencies"]["dev"]
