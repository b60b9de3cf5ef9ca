# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Partition bounds: prt^eta for distributions and the rectangle bound for functions.

Each column of the distribution program is a rectangle R = S x T with a no-abort strategy
on R. That pair is the same thing as a both-abort strategy whose non-abort set is R, so the
columns are exactly the both-abort strategies with a nonempty rectangle.
"""

from __future__ import annotations

import itertools
from collections.abc import Hashable, Mapping
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from belleff.bounds.efficiency import eff
from belleff.bounds.result import BoundResult, frozen, functional_from_rows, match_row_name
from belleff.core.config import Settings
from belleff.core.errors import InputError, TooLargeError
from belleff.core.exactlp import EQ, GE, MINIMIZE, ProgramBuilder, solve
from belleff.core.log import get_logger
from belleff.models.distributions import Dist
from belleff.models.strategies import DetStrategy, StrategyClass, enumerate_strategies

ZERO = Fraction(0)
ONE = Fraction(1)

log = get_logger("bounds")


def rectangle_strategies(p: Dist, settings: Settings) -> list[DetStrategy]:
    return [
        s
        for s in enumerate_strategies(StrategyClass.BOTH_ABORT, p.sizes, settings.enumeration_cap)
        if all(s.rectangle())
    ]


def prt_direct(p: Dist, eta: Fraction = ONE, settings: Settings | None = None) -> BoundResult:
    """min sum w over (rectangle, strategy) columns with per-input efficiency in [eta, 1].

    The matching-row duals u give an inefficiency-resistant functional; at the optimum
    sum_{x,y} min(eta * u_xy(p), u_xy(p)) equals the bound.
    """
    settings = settings or Settings()
    eta = Fraction(eta)
    if not 0 < eta <= 1:
        raise InputError(f"eta must be in (0, 1], got {eta}")
    columns = rectangle_strategies(p, settings)
    nx, ny, na, nb = p.sizes

    builder = ProgramBuilder(MINIMIZE)
    w_vars = [builder.add_variable(("w", k)) for k in range(len(columns))]
    for x, y in np.ndindex(nx, ny):
        builder.add_variable(("eta", x, y), eta, ONE)
    builder.set_objective({w: ONE for w in w_vars})
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        coeffs: dict[Hashable, Fraction] = {("eta", x, y): -p.probs[x, y, a, b]}
        for k, strategy in enumerate(columns):
            if strategy.outcome(x, y) == (a, b):
                coeffs[w_vars[k]] = ONE
        builder.add_constraint(coeffs, EQ, ZERO, match_row_name(x, y, a, b))
    program = builder.build()

    solution = solve(program, settings.dense_threshold)
    if not solution.is_optimal:
        raise RuntimeError(f"Partition LP ended {solution.status}; it is always feasible")
    weights = {
        columns[k]: solution.primal[w_vars[k]]
        for k in range(len(columns))
        if solution.primal[w_vars[k]]
    }
    etas = {(x, y): solution.primal[("eta", x, y)] for x, y in np.ndindex(nx, ny)}
    log.info(f"prt(eta={eta}): {solution.objective} over {len(columns)} rectangle columns")
    return BoundResult(
        kind="prt",
        bound_value=solution.objective,
        solution=solution,
        program=program,
        primal_weights=frozen(weights),
        zeta_by_input=frozen(etas),
        certificate=functional_from_rows(p, solution.dual, ONE),
        strategy_class=StrategyClass.BOTH_ABORT,
        parameters=frozen({"eta": eta} if eta != 1 else {}),
        columns=len(columns),
    )


def prt_via_eff(p: Dist, settings: Settings | None = None) -> BoundResult:
    """prt(p) from the eff optimum by w = q / zeta.

    The optimal q puts no weight on strategies that always abort, so the weights sum to
    1 / zeta exactly.
    """
    result = eff(p, settings)
    weights = {
        strategy: q / result.zeta
        for strategy, q in result.primal_weights.items()
        if all(strategy.rectangle())
    }
    total = sum(weights.values(), ZERO)
    if total != result.bound_value:
        raise RuntimeError(f"Change of variables gave {total}, expected {result.bound_value}")
    nx, ny, _, _ = p.sizes
    return BoundResult(
        kind="prt",
        bound_value=total,
        solution=result.solution,
        program=result.program,
        primal_weights=frozen(weights),
        zeta_by_input=frozen({(x, y): ONE for x, y in np.ndindex(nx, ny)}),
        certificate=result.certificate,
        strategy_class=StrategyClass.BOTH_ABORT,
        columns=result.columns,
    )


def check_partition_point(
    p: Dist,
    weights: Mapping[DetStrategy, Fraction],
    etas: Mapping[tuple[int, int], Fraction],
    eta: Fraction = ONE,
) -> list[str]:
    """Exact substitution of (w, eta_xy) into the prt^eta constraints; returns violations."""
    violations = []
    if any(w < 0 for w in weights.values()):
        violations.append("negative weight")
    nx, ny, na, nb = p.sizes
    for x, y in np.ndindex(nx, ny):
        e = etas.get((x, y))
        if e is None or not eta <= e <= 1:
            violations.append(f"eta[{x},{y}] = {e} outside [{eta}, 1]")
    reached = np.empty((nx, ny, na, nb), dtype=object)
    reached.fill(ZERO)
    for strategy, w in weights.items():
        for x, y in np.ndindex(nx, ny):
            outcome = strategy.outcome(x, y)
            if outcome is not None:
                reached[(x, y, *outcome)] += w
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        expected = p.probs[x, y, a, b] * etas.get((x, y), ZERO)
        if reached[x, y, a, b] != expected:
            violations.append(
                f"{match_row_name(x, y, a, b)}: {reached[x, y, a, b]} != {expected}"
            )
    return violations


@dataclass(frozen=True)
class FunctionTable:
    """A (possibly partial) two-party function; ``values[x][y]`` is None off the domain."""

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    values: tuple[tuple[Hashable, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_labels", tuple(str(v) for v in self.x_labels))
        object.__setattr__(self, "y_labels", tuple(str(v) for v in self.y_labels))
        object.__setattr__(self, "values", tuple(tuple(row) for row in self.values))
        if not self.x_labels or not self.y_labels:
            raise InputError("Function table needs at least one input on each side")
        if len(self.values) != len(self.x_labels) or any(
            len(row) != len(self.y_labels) for row in self.values
        ):
            raise InputError(
                f"Function table must be {len(self.x_labels)} x {len(self.y_labels)}"
            )
        if not self.outputs:
            raise InputError("Function is undefined everywhere")

    @property
    def outputs(self) -> tuple[Hashable, ...]:
        """Distinct defined values, sorted by their text form."""
        defined = {v for row in self.values for v in row if v is not None}
        return tuple(sorted(defined, key=str))

    @classmethod
    def from_truth_table(cls, table: Mapping[tuple[str, str], Hashable]) -> FunctionTable:
        xs = tuple(dict.fromkeys(x for x, _ in table))
        ys = tuple(dict.fromkeys(y for _, y in table))
        return cls(xs, ys, tuple(tuple(table.get((x, y)) for y in ys) for x in xs))


def _nonempty_subsets(n: int) -> list[frozenset[int]]:
    return [
        frozenset(c) for k in range(1, n + 1) for c in itertools.combinations(range(n), k)
    ]


def prt_function(
    f: FunctionTable, epsilon: Fraction = ZERO, settings: Settings | None = None
) -> BoundResult:
    """Partition bound of a function: min total weight of labelled rectangles.

    Every input is covered with total weight 1 and inputs in the domain of f are covered by
    rectangles carrying the right label with weight at least 1 - epsilon.
    """
    settings = settings or Settings()
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 1:
        raise InputError(f"epsilon must be in [0, 1], got {epsilon}")
    nx, ny = len(f.x_labels), len(f.y_labels)
    outputs = f.outputs
    count = 2 ** (nx + ny) * len(outputs)
    if count > settings.enumeration_cap:
        raise TooLargeError(
            f"rectangle columns for a {nx} x {ny} function", count, settings.enumeration_cap
        )
    rectangles = [(s, t) for s in _nonempty_subsets(nx) for t in _nonempty_subsets(ny)]
    columns = [(r, z) for r in rectangles for z in range(len(outputs))]

    builder = ProgramBuilder(MINIMIZE)
    w_vars = [builder.add_variable(("w", k)) for k in range(len(columns))]
    builder.set_objective({w: ONE for w in w_vars})
    for x, y in np.ndindex(nx, ny):
        covering = [k for k, ((s, t), _) in enumerate(columns) if x in s and y in t]
        value = f.values[x][y]
        if value is not None:
            z = outputs.index(value)
            builder.add_constraint(
                {w_vars[k]: ONE for k in covering if columns[k][1] == z},
                GE,
                1 - epsilon,
                f"correct[{x},{y}]",
            )
        builder.add_constraint({w_vars[k]: ONE for k in covering}, EQ, ONE, f"cover[{x},{y}]")
    program = builder.build()

    solution = solve(program, settings.dense_threshold)
    if not solution.is_optimal:
        raise RuntimeError(f"Function partition LP ended {solution.status}")
    weights = {}
    for k, ((s, t), z) in enumerate(columns):
        w = solution.primal[w_vars[k]]
        if w:
            rows = tuple(f.x_labels[i] for i in sorted(s))
            cols = tuple(f.y_labels[j] for j in sorted(t))
            weights[(rows, cols, outputs[z])] = w
    log.info(f"prt-fn(eps={epsilon}): {solution.objective} over {len(columns)} columns")
    return BoundResult(
        kind="prt-fn",
        bound_value=solution.objective,
        solution=solution,
        program=program,
        primal_weights=frozen(weights),
        parameters=frozen({"epsilon": epsilon}),
        columns=len(columns),
    )

