# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Exception types shared across belleff."""

from __future__ import annotations


class BellEffError(Exception):
    """Base class for errors raised by belleff."""


class InputError(BellEffError, ValueError):
    """Malformed input: bad file, out-of-range parameter, shape mismatch."""


class TooLargeError(BellEffError):
    """An enumeration would exceed the configured cap."""

    def __init__(self, what: str, count: int, cap: int) -> None:
        self.what = what
        self.count = count
        self.cap = cap
        super().__init__(
            f"{what}: {count} exceeds the enumeration cap {cap}; "
            "raise the cap (--cap / BELL_EFF_CAP) or use column generation (--colgen)"
        )


class InfeasibleBoundError(BellEffError):
    """A bound LP has no feasible point with positive efficiency."""
