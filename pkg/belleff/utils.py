# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Shared utilities: exact rationals and their text form."""

from __future__ import annotations

from fractions import Fraction
from typing import Any

from belleff.core.errors import InputError

Rat = Fraction
ZERO = Fraction(0)
ONE = Fraction(1)


def to_rat(value: Any) -> Fraction:
    """Coerce an int, Fraction or "num/den" string to a Fraction. Floats are refused."""
    if isinstance(value, bool):
        raise InputError(f"Expected a rational, got {value!r}")
    if isinstance(value, (int, Fraction)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"Not a rational number: {value!r}") from e
    raise InputError(f"Expected int or rational string, got {type(value).__name__}")


def format_rat(value: Fraction | int) -> str:
    """Lowest-terms text form: "2", "1/2", "-3/4"."""
    return str(Fraction(value))


def ceil_log2(n: int) -> int:
    """Smallest k with 2**k >= n (0 for n = 1)."""
    if n < 1:
        raise ValueError(f"ceil_log2 needs a positive integer, got {n}")
    return (n - 1).bit_length()


def is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0
