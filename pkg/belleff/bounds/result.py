# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Bound results and helpers shared by the bound LPs."""

from __future__ import annotations

from collections.abc import Hashable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from belleff.core.exactlp import LinProgram, LinSolution
from belleff.models.distributions import Dist
from belleff.models.functional import BellFunctional
from belleff.models.strategies import StrategyClass

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class BoundResult:
    """Optimal value of one bound LP with its primal weights and dual certificate.

    For efficiency-type bounds ``bound_value * zeta == 1``; ``zeta_by_input`` holds the
    per-input efficiencies of the eta and non-constant variants. ``references`` holds values of
    other bounds this one is compared against, and ``checks`` whether each comparison holds.
    """

    kind: str
    bound_value: Fraction
    solution: LinSolution
    program: LinProgram
    primal_weights: Mapping[Hashable, Fraction] = field(default_factory=dict)
    zeta: Fraction | None = None
    zeta_by_input: Mapping[tuple[int, int], Fraction] | None = None
    certificate: BellFunctional | None = None
    strategy_class: StrategyClass | None = None
    parameters: Mapping[str, Fraction] = field(default_factory=dict)
    nonconstant: bool = False
    columns: int = 0
    references: Mapping[str, Fraction] = field(default_factory=dict)
    checks: Mapping[str, bool] = field(default_factory=dict)


def match_row(p: Dist, x: int, y: int, a: int, b: int) -> int:
    """Index of the (x, y, a, b) matching constraint; matching rows come first in every LP."""
    _, ny, na, nb = p.sizes
    return ((x * ny + y) * na + a) * nb + b


def match_row_name(x: int, y: int, a: int, b: int) -> str:
    return f"match[{x},{y},{a},{b}]"


def functional_from_rows(p: Dist, dual: Mapping[int, Fraction], factor: Fraction) -> BellFunctional:
    """B[a, b, x, y] = factor * (dual of the matching row for (x, y, a, b))."""
    nx, ny, na, nb = p.sizes
    coeffs = np.empty((na, nb, nx, ny), dtype=object)
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        coeffs[a, b, x, y] = factor * dual.get(match_row(p, x, y, a, b), ZERO)
    return BellFunctional(coeffs)


def frozen(mapping: Mapping) -> Mapping:
    return MappingProxyType(dict(mapping))
