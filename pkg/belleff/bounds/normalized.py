# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""The nu bound: least total weight of a quasi-mixture of local strategies equal to p."""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from belleff.bounds.efficiency import eff
from belleff.bounds.result import BoundResult, frozen, functional_from_rows, match_row_name
from belleff.core.config import Settings
from belleff.core.errors import InputError
from belleff.core.exactlp import EQ, MINIMIZE, ProgramBuilder, solve
from belleff.core.log import get_logger
from belleff.models.distributions import Dist, is_nonsignaling
from belleff.models.strategies import StrategyClass, enumerate_strategies

ONE = Fraction(1)

log = get_logger("bounds")


def nu(p: Dist, settings: Settings | None = None, compare_eff: bool = True) -> BoundResult:
    """min sum |q_l| over signed combinations of no-abort strategies reproducing p.

    Weights are split as q = q+ - q-. The matching-row duals form a functional with
    |B(l)| <= 1 on every no-abort strategy and B(p) = nu(p).

    With ``compare_eff`` the result also carries eff(p) and the checks nu <= 2 eff and the
    sharper nu <= 2 eff - 1.
    """
    settings = settings or Settings()
    if not is_nonsignaling(p):
        raise InputError("nu defined for nonsignaling distributions")
    strategies = list(
        enumerate_strategies(StrategyClass.NO_ABORT, p.sizes, settings.enumeration_cap)
    )
    nx, ny, na, nb = p.sizes

    builder = ProgramBuilder(MINIMIZE)
    objective = {}
    for k in range(len(strategies)):
        for sign in ("+", "-"):
            objective[builder.add_variable(("q", sign, k))] = ONE
    builder.set_objective(objective)
    for x, y, a, b in np.ndindex(nx, ny, na, nb):
        coeffs = {}
        for k, strategy in enumerate(strategies):
            if strategy.outcome(x, y) == (a, b):
                coeffs[("q", "+", k)] = ONE
                coeffs[("q", "-", k)] = -ONE
        builder.add_constraint(coeffs, EQ, p.probs[x, y, a, b], match_row_name(x, y, a, b))
    program = builder.build()

    solution = solve(program, settings.dense_threshold)
    if not solution.is_optimal:
        raise RuntimeError(
            f"nu LP ended {solution.status}; nonsignaling p always has a decomposition"
        )
    weights = {}
    for k, strategy in enumerate(strategies):
        q = solution.primal[("q", "+", k)] - solution.primal[("q", "-", k)]
        if q:
            weights[strategy] = q
    log.info(f"nu: {solution.objective} over {len(strategies)} strategies")
    references: dict[str, Fraction] = {}
    checks: dict[str, bool] = {}
    if compare_eff:
        e = eff(p, settings).bound_value
        references = {"eff": e, "twice_eff": 2 * e, "twice_eff_minus_one": 2 * e - 1}
        checks = {
            "nu_le_twice_eff": solution.objective <= 2 * e,
            "nu_le_twice_eff_minus_one": solution.objective <= 2 * e - 1,
        }
        if not checks["nu_le_twice_eff_minus_one"]:
            log.warning(f"nu = {solution.objective} exceeds 2 eff - 1 = {2 * e - 1}")
    return BoundResult(
        kind="nu",
        bound_value=solution.objective,
        solution=solution,
        program=program,
        primal_weights=frozen(weights),
        certificate=functional_from_rows(p, solution.dual, ONE),
        strategy_class=StrategyClass.NO_ABORT,
        columns=len(strategies),
        references=frozen(references),
        checks=frozen(checks),
    )
