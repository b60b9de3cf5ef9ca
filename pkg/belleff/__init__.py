# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""belleff - efficiency and partition lower bounds for conditional distributions."""

COMMAND_NAMES = (
    "dist",
    "bound",
    "cert",
    "hm",
    "sim",
)

BOUND_NAMES = (
    "eff",
    "eff-eps",
    "eff-eta",
    "eff-nc",
    "eff-oneway",
    "nu",
    "prt",
    "prt-fn",
)


def get_bound_names() -> tuple[str, ...]:
    """Return the supported bound names, as used on the command line."""
    return BOUND_NAMES
