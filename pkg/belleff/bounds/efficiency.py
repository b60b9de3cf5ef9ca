# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Efficiency bounds: eff, eff_eps, eff_eta, eff_nc and the one-way eff.

All variants share one program shape: maximize zeta over mixtures q of local deterministic
strategies (with abort) whose non-abort outcomes reproduce p scaled by an efficiency. The
variants differ only in how the efficiency may vary across inputs or how far p may move.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from fractions import Fraction

import numpy as np

from belleff.bounds.result import (
    BoundResult,
    frozen,
    functional_from_rows,
    match_row,
    match_row_name,
)
from belleff.core.config import Settings
from belleff.core.errors import InfeasibleBoundError, InputError
from belleff.core.exactlp import (
    EQ,
    LE,
    MAXIMIZE,
    LinProgram,
    LinSolution,
    ProgramBuilder,
    solve,
)
from belleff.core.log import get_logger
from belleff.models.distributions import Dist
from belleff.models.functional import BellFunctional
from belleff.models.strategies import (
    DetStrategy,
    StrategyClass,
    all_abort,
    enumerate_strategies,
    max_bell_value,
)

ZERO = Fraction(0)
ONE = Fraction(1)

ZETA = "zeta"

PLAIN = "plain"
SMOOTHED = "smoothed"
ETA = "eta"
NONCONSTANT = "nonconstant"

log = get_logger("bounds")


def _build_program(
    p: Dist,
    strategies: Sequence[DetStrategy],
    variant: str,
    param: Fraction,
) -> tuple[LinProgram, int]:
    """Returns the program and the index of the normalization row."""
    nx, ny, na, nb = p.sizes
    builder = ProgramBuilder(MAXIMIZE)
    builder.add_variable(ZETA)
    q_vars = [builder.add_variable(("q", k)) for k in range(len(strategies))]
    if variant in (ETA, NONCONSTANT):
        for x, y in np.ndindex(nx, ny):
            builder.add_variable((ZETA, x, y))
    if variant == SMOOTHED:
        for idx in np.ndindex(nx, ny, na, nb):
            builder.add_variable(("s", *idx))
            builder.add_variable(("e", *idx))
    builder.set_objective({ZETA: ONE})

    rows: list[dict] = []
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        if variant == SMOOTHED:
            rows.append({("s", x, y, a, b): -ONE})
        else:
            scale = (ZETA, x, y) if variant in (ETA, NONCONSTANT) else ZETA
            rows.append({scale: -p.probs[x, y, a, b]})
    for k, strategy in enumerate(strategies):
        for x, y in np.ndindex(nx, ny):
            outcome = strategy.outcome(x, y)
            if outcome is not None:
                rows[match_row(p, x, y, *outcome)][q_vars[k]] = ONE
    for (x, y, a, b), coeffs in zip(np.ndindex(nx, ny, na, nb), rows):
        builder.add_constraint(coeffs, EQ, ZERO, match_row_name(x, y, a, b))
    norm_row = builder.add_constraint({q: ONE for q in q_vars}, EQ, ONE, "norm")

    if variant == SMOOTHED:
        for x, y in np.ndindex(nx, ny):
            s_sum = {("s", x, y, a, b): ONE for a in range(na) for b in range(nb)}
            builder.add_constraint({**s_sum, ZETA: -ONE}, EQ, ZERO, f"mass[{x},{y}]")
        for x, y, a, b in np.ndindex(nx, ny, na, nb):
            pr = p.probs[x, y, a, b]
            s, e = ("s", x, y, a, b), ("e", x, y, a, b)
            builder.add_constraint({s: ONE, ZETA: -pr, e: -ONE}, LE, ZERO, f"dev+[{x},{y},{a},{b}]")
            builder.add_constraint({s: -ONE, ZETA: pr, e: -ONE}, LE, ZERO, f"dev-[{x},{y},{a},{b}]")
        for x, y in np.ndindex(nx, ny):
            e_sum = {("e", x, y, a, b): ONE for a in range(na) for b in range(nb)}
            builder.add_constraint({**e_sum, ZETA: -param}, LE, ZERO, f"budget[{x},{y}]")
    elif variant == ETA:
        for x, y in np.ndindex(nx, ny):
            builder.add_constraint({ZETA: param, (ZETA, x, y): -ONE}, LE, ZERO, f"low[{x},{y}]")
            builder.add_constraint({(ZETA, x, y): ONE, ZETA: -ONE}, LE, ZERO, f"high[{x},{y}]")
    elif variant == NONCONSTANT:
        for x, y in np.ndindex(nx, ny):
            builder.add_constraint({ZETA: ONE, (ZETA, x, y): -ONE}, LE, ZERO, f"low[{x},{y}]")
    return builder.build(), norm_row


def _pricing_functional(p: Dist, dual: Mapping[int, Fraction]) -> BellFunctional:
    return functional_from_rows(p, dual, -ONE)


def _solve_columns(
    p: Dist,
    strategies: Sequence[DetStrategy],
    variant: str,
    param: Fraction,
    settings: Settings,
) -> tuple[LinProgram, LinSolution, int]:
    program, norm_row = _build_program(p, strategies, variant, param)
    solution = solve(program, settings.dense_threshold)
    if not solution.is_optimal:
        raise RuntimeError(
            f"Efficiency LP ended {solution.status}; it is always feasible and bounded"
        )
    return program, solution, norm_row


def _column_generation(
    p: Dist,
    strategy_class: StrategyClass,
    variant: str,
    param: Fraction,
    settings: Settings,
) -> tuple[list[DetStrategy], LinProgram, LinSolution, int]:
    columns = [all_abort(strategy_class, p.sizes)]
    known = set(columns)
    rounds = 0
    while True:
        program, solution, norm_row = _solve_columns(p, columns, variant, param, settings)
        threshold = solution.dual[norm_row]
        pricing = _pricing_functional(p, solution.dual)
        value, witness = max_bell_value(pricing, strategy_class, settings.enumeration_cap)
        rounds += 1
        log.info(
            f"column generation round {rounds}: {len(columns)} columns, "
            f"zeta {solution.primal[ZETA]}, pricing {value} vs {threshold}"
        )
        if value <= threshold:
            return columns, program, solution, norm_row
        if witness in known:
            raise RuntimeError(f"Pricing returned a column already in the master: {witness}")
        columns.append(witness)
        known.add(witness)


def _efficiency(
    p: Dist,
    kind: str,
    strategy_class: StrategyClass,
    variant: str = PLAIN,
    param: Fraction = ONE,
    settings: Settings | None = None,
) -> BoundResult:
    settings = settings or Settings()
    if settings.column_generation:
        strategies, program, solution, norm_row = _column_generation(
            p, strategy_class, variant, param, settings
        )
    else:
        strategies = list(enumerate_strategies(strategy_class, p.sizes, settings.enumeration_cap))
        program, solution, norm_row = _solve_columns(p, strategies, variant, param, settings)

    zeta = solution.primal[ZETA]
    if zeta <= 0:
        raise InfeasibleBoundError(
            f"{kind}: no {strategy_class.value} mixture reproduces p with positive efficiency"
        )
    t = solution.dual[norm_row]
    weights = {
        strategies[k]: solution.primal[("q", k)]
        for k in range(len(strategies))
        if solution.primal[("q", k)]
    }
    zeta_by_input = None
    if variant in (ETA, NONCONSTANT):
        nx, ny, _, _ = p.sizes
        zeta_by_input = frozen(
            {(x, y): solution.primal[(ZETA, x, y)] for x, y in np.ndindex(nx, ny)}
        )
    parameters = {}
    if variant == SMOOTHED:
        parameters["epsilon"] = param
    if variant == ETA:
        parameters["eta"] = param
    result = BoundResult(
        kind=kind,
        bound_value=1 / zeta,
        solution=solution,
        program=program,
        primal_weights=frozen(weights),
        zeta=zeta,
        zeta_by_input=zeta_by_input,
        certificate=functional_from_rows(p, solution.dual, -1 / t),
        strategy_class=strategy_class,
        parameters=frozen(parameters),
        nonconstant=variant == NONCONSTANT,
        columns=len(strategies),
    )
    log.info(f"{kind}: {result.bound_value} over {len(strategies)} strategies")
    return result


def eff(p: Dist, settings: Settings | None = None) -> BoundResult:
    """Inverse of the best efficiency of a local abort strategy mixture reproducing p."""
    return _efficiency(p, "eff", StrategyClass.BOTH_ABORT, settings=settings)


def eff_eps(p: Dist, epsilon: Fraction, settings: Settings | None = None) -> BoundResult:
    """eff minimized over distributions within per-input L1 distance epsilon of p."""
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 2:
        raise InputError(f"epsilon must be in [0, 2], got {epsilon}")
    return _efficiency(p, "eff-eps", StrategyClass.BOTH_ABORT, SMOOTHED, epsilon, settings)


def eff_eta(p: Dist, eta: Fraction, settings: Settings | None = None) -> BoundResult:
    """Efficiency bound where per-input efficiencies may drop to eta times the best one."""
    eta = Fraction(eta)
    if not 0 < eta <= 1:
        raise InputError(f"eta must be in (0, 1], got {eta}")
    return _efficiency(p, "eff-eta", StrategyClass.BOTH_ABORT, ETA, eta, settings)


def eff_nc(p: Dist, settings: Settings | None = None) -> BoundResult:
    """Relaxation where per-input efficiencies are only bounded below by zeta."""
    return _efficiency(p, "eff-nc", StrategyClass.BOTH_ABORT, NONCONSTANT, settings=settings)


def eff_oneway(p: Dist, settings: Settings | None = None) -> BoundResult:
    """eff with only Alice allowed to abort."""
    return _efficiency(p, "eff-oneway", StrategyClass.ALICE_ABORT, settings=settings)


def check_efficiency_point(
    p: Dist, weights: Mapping[DetStrategy, Fraction], zeta: Fraction
) -> list[str]:
    """Exact substitution of (q, zeta) into the eff constraints; returns violations."""
    violations = []
    if any(w < 0 for w in weights.values()):
        violations.append("negative weight")
    total = sum(weights.values(), ZERO)
    if total != 1:
        violations.append(f"weights sum to {total}, not 1")
    nx, ny, na, nb = p.sizes
    reached = np.empty((nx, ny, na, nb), dtype=object)
    reached.fill(ZERO)
    for strategy, w in weights.items():
        for x, y in np.ndindex(nx, ny):
            outcome = strategy.outcome(x, y)
            if outcome is not None:
                reached[(x, y, *outcome)] += w
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        expected = zeta * p.probs[x, y, a, b]
        if reached[x, y, a, b] != expected:
            violations.append(
                f"{match_row_name(x, y, a, b)}: {reached[x, y, a, b]} != {expected}"
            )
    return violations
