# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

from collections.abc import Callable

from belleff.bounds.efficiency import (
    check_efficiency_point,
    eff,
    eff_eps,
    eff_eta,
    eff_nc,
    eff_oneway,
)
from belleff.bounds.normalized import nu
from belleff.bounds.partition import (
    FunctionTable,
    check_partition_point,
    prt_direct,
    prt_function,
    prt_via_eff,
)
from belleff.bounds.result import BoundResult
from belleff.core.errors import InputError

_BOUNDS: dict[str, Callable[..., BoundResult]] = {
    "eff": eff,
    "eff-eps": eff_eps,
    "eff-eta": eff_eta,
    "eff-nc": eff_nc,
    "eff-oneway": eff_oneway,
    "nu": nu,
    "prt": prt_direct,
    "prt-fn": prt_function,
}


def get_bound(name: str) -> Callable[..., BoundResult]:
    """Look up a bound function by its command-line name."""
    try:
        return _BOUNDS[name]
    except KeyError:
        raise InputError(f"Unknown bound {name!r}; expected one of {tuple(_BOUNDS)}") from None


__all__ = [
    "BoundResult",
    "FunctionTable",
    "check_efficiency_point",
    "check_partition_point",
    "eff",
    "eff_eps",
    "eff_eta",
    "eff_nc",
    "eff_oneway",
    "get_bound",
    "nu",
    "prt_direct",
    "prt_function",
    "prt_via_eff",
]
