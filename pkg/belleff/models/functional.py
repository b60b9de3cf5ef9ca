# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Bell functionals: rational coefficients B[a, b, x, y] on non-abort outcomes."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from belleff.core.errors import InputError
from belleff.models.distributions import freeze, rational_table


@dataclass(frozen=True, eq=False)
class BellFunctional:
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        coeffs = freeze(self.coeffs)
        if coeffs.ndim != 4:
            raise InputError(f"Bell functional needs a 4-index table, got shape {coeffs.shape}")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def shape(self) -> tuple[int, int, int, int]:
        """(|A|, |B|, |X|, |Y|)."""
        return self.coeffs.shape

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        """(|X|, |Y|, |A|, |B|), the order distributions use."""
        na, nb, nx, ny = self.coeffs.shape
        return (nx, ny, na, nb)

    def by_input(self) -> np.ndarray:
        """Coefficients reindexed [x, y, a, b]."""
        return self.coeffs.transpose(2, 3, 0, 1)

    def scaled(self, factor: Fraction) -> BellFunctional:
        return BellFunctional(self.coeffs * Fraction(factor))

    def restrict(self, xs: Sequence[int], ys: Sequence[int]) -> BellFunctional:
        """The functional on a sub-grid of inputs."""
        return BellFunctional(self.coeffs[:, :, list(xs), :][:, :, :, list(ys)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BellFunctional):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.coeffs, other.coeffs))

    __hash__ = None  # type: ignore[assignment]


def zero_functional(sizes: tuple[int, int, int, int]) -> BellFunctional:
    nx, ny, na, nb = sizes
    return BellFunctional(rational_table((na, nb, nx, ny)))
