# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Exact rational linear programs: model, solve, certify.

A program is solved by rewriting it as ``A z = b, z >= 0`` (bounds become shifts, sign flips,
free splits and explicit upper-bound rows), running the two-phase simplex, and mapping primal
values, duals and Farkas multipliers back onto the caller's variables and constraints.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any

from belleff.core.config import DEFAULT_DENSE_THRESHOLD
from belleff.core.errors import InputError
from belleff.core.log import get_logger
from belleff.core.simplex import INFEASIBLE, OPTIMAL, DenseTableau, RevisedSimplex
from belleff.utils import format_rat

ZERO = Fraction(0)
ONE = Fraction(1)

MAXIMIZE = "maximize"
MINIMIZE = "minimize"
LE = "<="
EQ = "="
GE = ">="
RELATIONS = (LE, EQ, GE)

VarId = Hashable
Bound = tuple[Fraction | None, Fraction | None]


@dataclass(frozen=True)
class Constraint:
    coeffs: Mapping[VarId, Fraction]
    rel: str
    rhs: Fraction
    name: str | None = None

    def lhs(self, point: Mapping[VarId, Fraction]) -> Fraction:
        return sum((a * point.get(v, ZERO) for v, a in self.coeffs.items()), ZERO)

    def holds(self, value: Fraction) -> bool:
        if self.rel == LE:
            return value <= self.rhs
        if self.rel == GE:
            return value >= self.rhs
        return value == self.rhs


@dataclass(frozen=True)
class LinProgram:
    """Immutable LP. ``bounds`` maps every variable to (lower, upper); None is infinite."""

    sense: str
    objective: Mapping[VarId, Fraction]
    constraints: tuple[Constraint, ...]
    bounds: Mapping[VarId, Bound]

    @property
    def variables(self) -> tuple[VarId, ...]:
        return tuple(self.bounds)

    def objective_value(self, point: Mapping[VarId, Fraction]) -> Fraction:
        return sum((c * point.get(v, ZERO) for v, c in self.objective.items()), ZERO)

    def constraint_name(self, index: int) -> str:
        name = self.constraints[index].name
        return name if name is not None else f"c{index}"


class ProgramBuilder:
    """Mutable helper that assembles a LinProgram."""

    def __init__(self, sense: str = MAXIMIZE) -> None:
        if sense not in (MAXIMIZE, MINIMIZE):
            raise InputError(f"Unknown sense {sense!r}")
        self.sense = sense
        self._objective: dict[VarId, Fraction] = {}
        self._constraints: list[Constraint] = []
        self._bounds: dict[VarId, Bound] = {}

    def add_variable(
        self, var: VarId, lower: Fraction | int | None = 0, upper: Fraction | int | None = None
    ) -> VarId:
        if var in self._bounds:
            raise InputError(f"Variable {var!r} declared twice")
        lo = None if lower is None else Fraction(lower)
        hi = None if upper is None else Fraction(upper)
        if lo is not None and hi is not None and lo > hi:
            raise InputError(f"Empty bounds for {var!r}: [{lo}, {hi}]")
        self._bounds[var] = (lo, hi)
        return var

    def set_objective(self, coeffs: Mapping[VarId, Fraction | int]) -> None:
        self._objective = {v: Fraction(c) for v, c in coeffs.items() if c}

    def add_constraint(
        self,
        coeffs: Mapping[VarId, Fraction | int],
        rel: str,
        rhs: Fraction | int,
        name: str | None = None,
    ) -> int:
        if rel not in RELATIONS:
            raise InputError(f"Unknown relation {rel!r}")
        self._constraints.append(
            Constraint(
                MappingProxyType({v: Fraction(a) for v, a in coeffs.items() if a}),
                rel,
                Fraction(rhs),
                name,
            )
        )
        return len(self._constraints) - 1

    def build(self) -> LinProgram:
        lp = LinProgram(
            self.sense,
            MappingProxyType(dict(self._objective)),
            tuple(self._constraints),
            MappingProxyType(dict(self._bounds)),
        )
        validate_program(lp)
        return lp


def validate_program(lp: LinProgram) -> None:
    """Raise InputError if the program references undeclared variables."""
    if lp.sense not in (MAXIMIZE, MINIMIZE):
        raise InputError(f"Unknown sense {lp.sense!r}")
    for v in lp.objective:
        if v not in lp.bounds:
            raise InputError(f"Objective references undeclared variable {v!r}")
    for i, con in enumerate(lp.constraints):
        if con.rel not in RELATIONS:
            raise InputError(f"Constraint {i} has unknown relation {con.rel!r}")
        for v in con.coeffs:
            if v not in lp.bounds:
                raise InputError(f"Constraint {lp.constraint_name(i)} references undeclared {v!r}")
    for v, (lo, hi) in lp.bounds.items():
        if lo is not None and hi is not None and lo > hi:
            raise InputError(f"Empty bounds for {v!r}: [{lo}, {hi}]")


@dataclass(frozen=True)
class LinSolution:
    status: str
    primal: Mapping[VarId, Fraction] = field(default_factory=dict)
    dual: Mapping[int, Fraction] = field(default_factory=dict)
    objective: Fraction | None = None
    farkas: Mapping[int, Fraction] = field(default_factory=dict)
    pivots: int = 0
    rows: int = 0
    columns: int = 0

    @property
    def is_optimal(self) -> bool:
        return self.status == OPTIMAL


@dataclass
class _StandardForm:
    """``max costs . z`` s.t. ``rows``, z >= 0, plus the maps back to the caller's program."""

    columns: list[dict[int, Fraction]] = field(default_factory=list)
    rhs: list[Fraction] = field(default_factory=list)
    costs: list[Fraction] = field(default_factory=list)
    row_sign: list[int] = field(default_factory=list)
    user_rows: int = 0
    # x_v = shift + sum(coef * z_col)
    shifts: dict[VarId, Fraction] = field(default_factory=dict)
    var_columns: dict[VarId, list[tuple[int, int]]] = field(default_factory=dict)

    def new_column(self, cost: Fraction = ZERO) -> int:
        self.columns.append({})
        self.costs.append(cost)
        return len(self.columns) - 1


def _standard_form(lp: LinProgram) -> _StandardForm:
    sf = _StandardForm()
    sign = ONE if lp.sense == MAXIMIZE else -ONE
    for v, (lo, hi) in lp.bounds.items():
        c = sign * lp.objective.get(v, ZERO)
        if lo is not None:
            sf.shifts[v] = lo
            sf.var_columns[v] = [(sf.new_column(c), 1)]
        elif hi is not None:
            sf.shifts[v] = hi
            sf.var_columns[v] = [(sf.new_column(-c), -1)]
        else:
            sf.shifts[v] = ZERO
            sf.var_columns[v] = [(sf.new_column(c), 1), (sf.new_column(-c), -1)]

    def add_row(entries: dict[int, Fraction], rhs: Fraction) -> None:
        row = len(sf.rhs)
        flip = -1 if rhs < 0 else 1
        for j, a in entries.items():
            if a:
                sf.columns[j][row] = flip * a
        sf.rhs.append(flip * rhs)
        sf.row_sign.append(flip)

    for con in lp.constraints:
        entries: dict[int, Fraction] = {}
        rhs = con.rhs
        for v, a in con.coeffs.items():
            rhs -= a * sf.shifts[v]
            for j, coef in sf.var_columns[v]:
                entries[j] = entries.get(j, ZERO) + coef * a
        if con.rel != EQ:
            entries[sf.new_column()] = ONE if con.rel == LE else -ONE
        add_row(entries, rhs)
    sf.user_rows = len(sf.rhs)

    for v, (lo, hi) in lp.bounds.items():
        if lo is not None and hi is not None:
            j = sf.var_columns[v][0][0]
            add_row({j: ONE, sf.new_column(): ONE}, hi - lo)
    return sf


def solve(lp: LinProgram, dense_threshold: int = DEFAULT_DENSE_THRESHOLD) -> LinSolution:
    """Solve exactly. Programs with fewer variables than ``dense_threshold`` use the tableau."""
    log = get_logger("lp")
    validate_program(lp)
    sf = _standard_form(lp)
    engine_cls = DenseTableau if len(lp.bounds) < dense_threshold else RevisedSimplex
    engine = engine_cls(sf.columns, sf.rhs)
    status, y = engine.run(sf.costs)
    log.debug(
        f"{engine_cls.__name__}: {len(sf.rhs)} rows, {len(sf.columns)} columns, "
        f"{status} after {engine.pivots} pivots"
    )
    shape = {"pivots": engine.pivots, "rows": len(sf.rhs), "columns": len(sf.columns)}
    if status == INFEASIBLE:
        farkas = {
            i: sf.row_sign[i] * y[i] for i in range(sf.user_rows) if y[i]
        }
        return LinSolution(INFEASIBLE, farkas=MappingProxyType(farkas), **shape)
    if status != OPTIMAL:
        return LinSolution(status, **shape)

    z = engine.solution()
    primal = {}
    for v, cols in sf.var_columns.items():
        primal[v] = sf.shifts[v] + sum((coef * z[j] for j, coef in cols), ZERO)
    sense_sign = 1 if lp.sense == MAXIMIZE else -1
    dual = {i: sense_sign * sf.row_sign[i] * y[i] for i in range(sf.user_rows)}
    return LinSolution(
        OPTIMAL,
        MappingProxyType(primal),
        MappingProxyType(dual),
        lp.objective_value(primal),
        **shape,
    )


def reduced_costs(lp: LinProgram, dual: Mapping[int, Fraction]) -> dict[VarId, Fraction]:
    """d_v = c_v - sum_i y_i a_iv for every variable."""
    d = {v: lp.objective.get(v, ZERO) for v in lp.bounds}
    for i, con in enumerate(lp.constraints):
        y = dual.get(i, ZERO)
        if y:
            for v, a in con.coeffs.items():
                d[v] -= y * a
    return d


def check_optimality(lp: LinProgram, sol: LinSolution) -> list[str]:
    """Certify an optimal solution; returns every violated condition (empty = optimal)."""
    violations: list[str] = []
    point = sol.primal
    maximize = lp.sense == MAXIMIZE

    for v, (lo, hi) in lp.bounds.items():
        x = point.get(v, ZERO)
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            violations.append(f"primal infeasible: {v!r} = {format_rat(x)} outside bounds")
    for i, con in enumerate(lp.constraints):
        value = con.lhs(point)
        if not con.holds(value):
            violations.append(
                f"primal infeasible: {lp.constraint_name(i)}: "
                f"{format_rat(value)} {con.rel} {format_rat(con.rhs)} fails"
            )

    for i, con in enumerate(lp.constraints):
        y = sol.dual.get(i, ZERO)
        if con.rel == EQ or not y:
            continue
        positive_ok = (con.rel == LE) == maximize
        if (y > 0) != positive_ok:
            violations.append(f"dual sign: {lp.constraint_name(i)} has multiplier {format_rat(y)}")
        if con.lhs(point) != con.rhs:
            violations.append(
                f"complementary slackness: {lp.constraint_name(i)} is slack "
                f"with multiplier {format_rat(y)}"
            )

    d = reduced_costs(lp, sol.dual)
    dual_objective = sum(
        (sol.dual.get(i, ZERO) * c.rhs for i, c in enumerate(lp.constraints)), ZERO
    )
    for v, dv in d.items():
        if not dv:
            continue
        lo, hi = lp.bounds[v]
        # Which bound the variable must sit at for this sign of d.
        at_upper = (dv > 0) == maximize
        bound = hi if at_upper else lo
        if bound is None:
            violations.append(f"reduced cost: {v!r} has {format_rat(dv)} with no finite bound")
            continue
        dual_objective += dv * bound
        if point.get(v, ZERO) != bound:
            violations.append(
                f"complementary slackness: {v!r} has reduced cost {format_rat(dv)} "
                f"but is not at bound {format_rat(bound)}"
            )

    primal_objective = lp.objective_value(point)
    if sol.objective is None or primal_objective != sol.objective:
        violations.append(
            f"objective mismatch: point gives {format_rat(primal_objective)}, "
            f"claimed {sol.objective}"
        )
    if primal_objective != dual_objective:
        violations.append(
            f"objective gap: primal {format_rat(primal_objective)} "
            f"!= dual {format_rat(dual_objective)}"
        )
    return violations


def check_infeasibility(lp: LinProgram, sol: LinSolution) -> list[str]:
    """Certify an infeasibility verdict through its Farkas multipliers.

    The multipliers f combine the constraints into ``g . x <= f . b`` (signs: f >= 0 on <= rows,
    f <= 0 on >= rows); the certificate holds when the minimum of ``g . x`` over the variable box
    exceeds ``f . b``.
    """
    violations: list[str] = []
    g: dict[VarId, Fraction] = {v: ZERO for v in lp.bounds}
    rhs = ZERO
    for i, con in enumerate(lp.constraints):
        f = sol.farkas.get(i, ZERO)
        if not f:
            continue
        if (con.rel == LE and f < 0) or (con.rel == GE and f > 0):
            violations.append(f"dual sign: {lp.constraint_name(i)} has multiplier {format_rat(f)}")
        rhs += f * con.rhs
        for v, a in con.coeffs.items():
            g[v] += f * a
    box_min = ZERO
    for v, gv in g.items():
        if not gv:
            continue
        lo, hi = lp.bounds[v]
        bound = lo if gv > 0 else hi
        if bound is None:
            violations.append(f"unbounded direction: {v!r} has combined coefficient {gv}")
            continue
        box_min += gv * bound
    if not violations and box_min <= rhs:
        violations.append(
            f"no contradiction: box minimum {format_rat(box_min)} <= {format_rat(rhs)}"
        )
    return violations


def _format_term(coef: Fraction, var: Any, first: bool) -> str:
    mag = abs(coef)
    body = f"{var}" if mag == 1 else f"{format_rat(mag)}·{var}"
    if first:
        return f"-{body}" if coef < 0 else body
    return f"- {body}" if coef < 0 else f"+ {body}"


def _format_row(coeffs: Iterable[tuple[Any, Fraction]]) -> str:
    terms = [_format_term(c, v, i == 0) for i, (v, c) in enumerate(coeffs)]
    return " ".join(terms) if terms else "0"


def dump_lp(lp: LinProgram) -> str:
    """Plain-text dump: one ``name: sum c_i·x_i REL rhs`` line per constraint."""
    lines = [f"{lp.sense}: {_format_row(lp.objective.items())}"]
    for i, con in enumerate(lp.constraints):
        lines.append(
            f"{lp.constraint_name(i)}: {_format_row(con.coeffs.items())} "
            f"{con.rel} {format_rat(con.rhs)}"
        )
    for v, (lo, hi) in lp.bounds.items():
        if lo == 0 and hi is None:
            continue
        lo_text = "-inf" if lo is None else format_rat(lo)
        hi_text = "+inf" if hi is None else format_rat(hi)
        lines.append(f"vars: {lo_text} <= {v} <= {hi_text}")
    return "\n".join(lines) + "\n"
