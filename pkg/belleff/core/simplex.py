# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Exact two-phase primal simplex on ``A z = b, z >= 0`` with Bland's rule.

Both engines start from an artificial basis (one artificial column per row) and share the
pricing and ratio-test logic; they differ only in how ``B^-1`` is kept. ``DenseTableau`` carries
the full tableau, ``RevisedSimplex`` carries only the basis inverse and prices the sparse
columns on demand.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Sequence
from fractions import Fraction

from belleff.core.log import get_logger

ZERO = Fraction(0)
ONE = Fraction(1)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

Column = dict[int, Fraction]


class SimplexEngine(ABC):
    """Basis bookkeeping plus the Bland-rule iteration.

    Columns ``0 .. n_real-1`` are the caller's; ``n_real .. n_real+m-1`` are artificials.
    """

    def __init__(self, columns: Sequence[Column], rhs: Sequence[Fraction]) -> None:
        if any(b < 0 for b in rhs):
            raise ValueError("Right-hand side must be non-negative")
        self.m = len(rhs)
        self.n_real = len(columns)
        self.columns: list[Column] = list(columns) + [{i: ONE} for i in range(self.m)]
        self.basis: list[int] = [self.n_real + i for i in range(self.m)]
        self.values: list[Fraction] = [Fraction(b) for b in rhs]
        self.pivots = 0
        self.log = get_logger("lp")

    @abstractmethod
    def basis_inverse(self) -> list[list[Fraction]]:
        """Rows of B^-1."""

    @abstractmethod
    def entering_column(self, j: int) -> list[Fraction]:
        """B^-1 A_j."""

    @abstractmethod
    def _update(self, r: int, u: list[Fraction]) -> None:
        """Apply the row operations of a pivot on row r with column u = B^-1 A_j."""

    def is_artificial(self, j: int) -> bool:
        return j >= self.n_real

    def duals(self, costs: Sequence[Fraction]) -> list[Fraction]:
        """y = c_B B^-1."""
        binv = self.basis_inverse()
        y = [ZERO] * self.m
        for i, j in enumerate(self.basis):
            c = costs[j]
            if c:
                row = binv[i]
                for k in range(self.m):
                    if row[k]:
                        y[k] += c * row[k]
        return y

    def reduced_cost(self, j: int, costs: Sequence[Fraction], y: Sequence[Fraction]) -> Fraction:
        return costs[j] - sum((y[i] * a for i, a in self.columns[j].items()), ZERO)

    def objective(self, costs: Sequence[Fraction]) -> Fraction:
        return sum((costs[j] * v for j, v in zip(self.basis, self.values)), ZERO)

    def pivot(self, r: int, j: int, u: list[Fraction] | None = None) -> None:
        if u is None:
            u = self.entering_column(j)
        if not u[r]:
            raise RuntimeError(f"Zero pivot element at row {r}, column {j}")
        pr = u[r]
        xr = self.values[r] / pr
        for i in range(self.m):
            if i != r and u[i]:
                self.values[i] -= u[i] * xr
        self.values[r] = xr
        self._update(r, u)
        self.basis[r] = j
        self.pivots += 1

    def optimize(self, costs: Sequence[Fraction], allow_artificial: bool) -> str:
        """Maximize ``costs . z`` from the current feasible basis."""
        while True:
            y = self.duals(costs)
            in_basis = set(self.basis)
            entering = None
            for j in range(len(self.columns)):
                if j in in_basis or (self.is_artificial(j) and not allow_artificial):
                    continue
                if self.reduced_cost(j, costs, y) > 0:
                    entering = j
                    break
            if entering is None:
                return OPTIMAL
            u = self.entering_column(entering)
            leave = None
            best = ZERO
            for i, ui in enumerate(u):
                if ui <= 0:
                    continue
                ratio = self.values[i] / ui
                if (
                    leave is None
                    or ratio < best
                    or (ratio == best and self.basis[i] < self.basis[leave])
                ):
                    leave, best = i, ratio
            if leave is None:
                return UNBOUNDED
            self.pivot(leave, entering, u)

    def drive_out_artificials(self) -> int:
        """Pivot zero-valued artificials out of the basis where a real column allows it.

        Returns the number of artificials left behind; their rows are redundant and their values
        stay at zero through phase two.
        """
        stuck = 0
        for r in range(self.m):
            if not self.is_artificial(self.basis[r]):
                continue
            binv_row = self.basis_inverse()[r]
            in_basis = set(self.basis)
            for j in range(self.n_real):
                if j in in_basis:
                    continue
                entry = sum((binv_row[i] * a for i, a in self.columns[j].items()), ZERO)
                if entry:
                    self.pivot(r, j)
                    break
            else:
                stuck += 1
        return stuck

    def solution(self) -> list[Fraction]:
        z = [ZERO] * self.n_real
        for j, v in zip(self.basis, self.values):
            if j < self.n_real:
                z[j] = v
        return z

    def run(self, costs: Sequence[Fraction]) -> tuple[str, list[Fraction]]:
        """Two-phase solve of ``max costs . z``.

        Returns ``(status, y)`` where y holds the optimal duals (optimal) or the phase-one duals
        (infeasible); for unbounded problems y is empty.
        """
        full = list(costs) + [ZERO] * self.m
        phase_one = [ZERO] * self.n_real + [-ONE] * self.m
        self.optimize(phase_one, allow_artificial=True)
        infeasibility = self.objective(phase_one)
        self.log.debug(f"phase one: {self.pivots} pivots, residual {-infeasibility}")
        if infeasibility < 0:
            return INFEASIBLE, self.duals(phase_one)
        stuck = self.drive_out_artificials()
        if stuck:
            self.log.debug(f"{stuck} redundant row(s) kept with a zero artificial")
        status = self.optimize(full, allow_artificial=False)
        self.log.debug(f"phase two: {status} after {self.pivots} pivots")
        if status == UNBOUNDED:
            return UNBOUNDED, []
        return OPTIMAL, self.duals(full)


class RevisedSimplex(SimplexEngine):
    """Keeps B^-1 only; columns stay sparse."""

    def __init__(self, columns: Sequence[Column], rhs: Sequence[Fraction]) -> None:
        super().__init__(columns, rhs)
        self.binv = [[ONE if i == k else ZERO for k in range(self.m)] for i in range(self.m)]

    def basis_inverse(self) -> list[list[Fraction]]:
        return self.binv

    def entering_column(self, j: int) -> list[Fraction]:
        col = self.columns[j]
        return [sum((row[i] * a for i, a in col.items()), ZERO) for row in self.binv]

    def _update(self, r: int, u: list[Fraction]) -> None:
        pr = u[r]
        row_r = [v / pr for v in self.binv[r]]
        for i in range(self.m):
            f = u[i]
            if i == r or not f:
                continue
            self.binv[i] = [a - f * b if b else a for a, b in zip(self.binv[i], row_r)]
        self.binv[r] = row_r


class DenseTableau(SimplexEngine):
    """Full tableau ``[B^-1 A | B^-1]``; the artificial block is B^-1."""

    def __init__(self, columns: Sequence[Column], rhs: Sequence[Fraction]) -> None:
        super().__init__(columns, rhs)
        width = len(self.columns)
        self.table = [[ZERO] * width for _ in range(self.m)]
        for j, col in enumerate(self.columns):
            for i, a in col.items():
                self.table[i][j] = Fraction(a)

    def basis_inverse(self) -> list[list[Fraction]]:
        return [row[self.n_real :] for row in self.table]

    def entering_column(self, j: int) -> list[Fraction]:
        return [row[j] for row in self.table]

    def _update(self, r: int, u: list[Fraction]) -> None:
        pr = u[r]
        row_r = [v / pr for v in self.table[r]]
        nonzero = [k for k, v in enumerate(row_r) if v]
        for i in range(self.m):
            f = u[i]
            if i == r or not f:
                continue
            row = self.table[i]
            for k in nonzero:
                row[k] -= f * row_r[k]
        self.table[r] = row_r
