#!/usr/bin/env python3
# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Validate a belleff settings YAML against the schema and print the resolved settings.
Exit 0 if valid; 1 and a message if invalid; 2 on bad usage.
"""

from __future__ import annotations

import sys
from pathlib import Path

# Add project root so we can import belleff
_project_root = Path(__file__).resolve().parent.parent
if str(_project_root) not in sys.path:
    sys.path.insert(0, str(_project_root))


def main() -> int:
    if len(sys.argv) != 2:
        print("Usage: check-config.py <path-to-config.yaml>", file=sys.stderr)
        return 2
    path = Path(sys.argv[1])
    if not path.exists():
        print(f"Error: file not found: {path}", file=sys.stderr)
        return 1
    from belleff.core.config import load_config
    from belleff.core.errors import InputError

    try:
        settings = load_config(path)
    except InputError as e:
        print(f"Invalid config: {e}", file=sys.stderr)
        return 1
    print(f"OK: {path}")
    print(f"  enumeration cap: {settings.enumeration_cap}")
    print(f"  column generation: {'on' if settings.column_generation else 'off'}")
    print(f"  dense threshold: {settings.dense_threshold}")
    print(f"  denominator limit: {settings.denominator_limit}")
    print(f"  scale tolerance: {settings.scale_tolerance}")
    print(f"  seed: {settings.seed}")
    print(f"  output format: {settings.output_format}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
