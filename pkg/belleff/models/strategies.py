# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Local deterministic strategies, with or without the abort outcome, and Bell maximization."""

from __future__ import annotations

import enum
import itertools
from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from fractions import Fraction

from belleff.core.config import DEFAULT_ENUMERATION_CAP
from belleff.core.errors import InputError, TooLargeError
from belleff.core.log import get_logger
from belleff.models.functional import BellFunctional

ZERO = Fraction(0)
ABORT_TOKEN = "bot"

log = get_logger("strategies")

Choice = int | None  # output index, None for abort


class StrategyClass(enum.Enum):
    NO_ABORT = "NoAbort"
    BOTH_ABORT = "BothAbort"
    ALICE_ABORT = "AliceAbort"

    @property
    def alice_may_abort(self) -> bool:
        return self is not StrategyClass.NO_ABORT

    @property
    def bob_may_abort(self) -> bool:
        return self is StrategyClass.BOTH_ABORT

    @classmethod
    def parse(cls, text: str) -> StrategyClass:
        for member in cls:
            if member.value == text:
                return member
        raise InputError(f"Unknown strategy class {text!r}")


@dataclass(frozen=True)
class DetStrategy:
    """x -> alice[x], y -> bob[y]; None is the abort outcome."""

    alice: tuple[Choice, ...]
    bob: tuple[Choice, ...]
    strategy_class: StrategyClass = StrategyClass.BOTH_ABORT

    def __post_init__(self) -> None:
        object.__setattr__(self, "alice", tuple(self.alice))
        object.__setattr__(self, "bob", tuple(self.bob))
        if not self.strategy_class.alice_may_abort and None in self.alice:
            raise InputError(f"{self.strategy_class.value} strategy cannot abort on Alice's side")
        if not self.strategy_class.bob_may_abort and None in self.bob:
            raise InputError(f"{self.strategy_class.value} strategy cannot abort on Bob's side")

    def rectangle(self) -> tuple[frozenset[int], frozenset[int]]:
        """Inputs on which neither player aborts, as (rows, columns)."""
        rows = frozenset(x for x, a in enumerate(self.alice) if a is not None)
        cols = frozenset(y for y, b in enumerate(self.bob) if b is not None)
        return rows, cols

    def outcome(self, x: int, y: int) -> tuple[int, int] | None:
        a, b = self.alice[x], self.bob[y]
        if a is None or b is None:
            return None
        return a, b


def _side_options(n_out: int, may_abort: bool) -> tuple[Choice, ...]:
    # abort is listed last so ties resolve to a real output
    return tuple(range(n_out)) + ((None,) if may_abort else ())


def _check_sizes(sizes: Sequence[int]) -> tuple[int, int, int, int]:
    if len(sizes) != 4 or any(int(s) < 1 for s in sizes):
        raise InputError(f"Sizes must be four positive integers, got {tuple(sizes)}")
    nx, ny, na, nb = (int(s) for s in sizes)
    return nx, ny, na, nb


def side_counts(strategy_class: StrategyClass, sizes: Sequence[int]) -> tuple[int, int]:
    """(number of Alice maps, number of Bob maps)."""
    nx, ny, na, nb = _check_sizes(sizes)
    alice = (na + strategy_class.alice_may_abort) ** nx
    bob = (nb + strategy_class.bob_may_abort) ** ny
    return alice, bob


def strategy_count(strategy_class: StrategyClass, sizes: Sequence[int]) -> int:
    alice, bob = side_counts(strategy_class, sizes)
    return alice * bob


def enumerate_strategies(
    strategy_class: StrategyClass,
    sizes: Sequence[int],
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> Iterator[DetStrategy]:
    """Every strategy of the class, each exactly once, Alice's map varying slowest."""
    nx, ny, na, nb = _check_sizes(sizes)
    count = strategy_count(strategy_class, sizes)
    if count > cap:
        what = f"{strategy_class.value} strategies for sizes {tuple(sizes)}"
        raise TooLargeError(what, count, cap)
    return _generate(strategy_class, nx, ny, na, nb)


def _generate(
    strategy_class: StrategyClass, nx: int, ny: int, na: int, nb: int
) -> Iterator[DetStrategy]:
    alice_opts = _side_options(na, strategy_class.alice_may_abort)
    bob_opts = _side_options(nb, strategy_class.bob_may_abort)
    for alice in itertools.product(alice_opts, repeat=nx):
        for bob in itertools.product(bob_opts, repeat=ny):
            yield DetStrategy(alice, bob, strategy_class)


def all_abort(strategy_class: StrategyClass, sizes: Sequence[int]) -> DetStrategy:
    """The strategy that never produces an outcome.

    Bob outputs his first label when the class does not let him abort.
    """
    nx, ny, _, _ = _check_sizes(sizes)
    if not strategy_class.alice_may_abort:
        raise InputError("NoAbort strategies always produce an outcome")
    bob: tuple[Choice, ...] = (None,) * ny if strategy_class.bob_may_abort else (0,) * ny
    return DetStrategy((None,) * nx, bob, strategy_class)


def point_strategy(x: int, y: int, a: int, b: int, sizes: Sequence[int]) -> DetStrategy:
    """Outputs (a, b) on (x, y) only; both players abort everywhere else."""
    nx, ny, na, nb = _check_sizes(sizes)
    if not (0 <= x < nx and 0 <= y < ny and 0 <= a < na and 0 <= b < nb):
        raise InputError(f"Point ({x}, {y}, {a}, {b}) is outside sizes {tuple(sizes)}")
    alice: list[Choice] = [None] * nx
    bob: list[Choice] = [None] * ny
    alice[x], bob[y] = a, b
    return DetStrategy(alice, bob, StrategyClass.BOTH_ABORT)


def evaluate(strategy: DetStrategy, x: int, y: int, a: int, b: int) -> int:
    """l(a,b|x,y): 1 iff Alice outputs a on x and Bob outputs b on y."""
    return int(strategy.alice[x] == a and strategy.bob[y] == b)


def strategy_value(functional: BellFunctional, strategy: DetStrategy) -> Fraction:
    """B(l): sum of B[alice(x), bob(y), x, y] over inputs where neither aborts."""
    coeffs = functional.coeffs
    total = ZERO
    for x, a in enumerate(strategy.alice):
        if a is None:
            continue
        for y, b in enumerate(strategy.bob):
            if b is not None:
                total += coeffs[a, b, x, y]
    return total


def _best_choice(values: Sequence[Fraction], may_abort: bool) -> tuple[Fraction, Choice]:
    """Max over outputs, first index on ties; abort (value 0) only if strictly better."""
    best_value, best = values[0], 0
    for k in range(1, len(values)):
        if values[k] > best_value:
            best_value, best = values[k], k
    if may_abort and best_value < 0:
        return ZERO, None
    return best_value, best


def max_bell_value(
    functional: BellFunctional,
    strategy_class: StrategyClass,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Fraction, DetStrategy]:
    """Maximize B(l) over a strategy class.

    Enumerates the side with fewer maps and best-responds pointwise on the other. ``cap``
    bounds the best-response evaluations: maps on the enumerated side times the other side's
    inputs times its choices, abort included.
    """
    nx, ny, na, nb = functional.sizes
    alice_count, bob_count = side_counts(strategy_class, functional.sizes)
    outer = min(alice_count, bob_count)
    enumerate_bob = bob_count <= alice_count
    if enumerate_bob:
        inner = nx * len(_side_options(na, strategy_class.alice_may_abort))
    else:
        inner = ny * len(_side_options(nb, strategy_class.bob_may_abort))
    if outer * inner > cap:
        raise TooLargeError(
            f"best response over {strategy_class.value} ({outer} maps)", outer * inner, cap
        )
    coeffs = functional.coeffs
    log.debug(
        f"max_bell_value {strategy_class.value} sizes {functional.sizes}: "
        f"enumerating {'Bob' if enumerate_bob else 'Alice'} ({outer} maps)"
    )

    best_value: Fraction | None = None
    best_strategy: DetStrategy | None = None
    if enumerate_bob:
        for bob in itertools.product(_side_options(nb, strategy_class.bob_may_abort), repeat=ny):
            total = ZERO
            alice: list[Choice] = []
            for x in range(nx):
                values = [
                    sum((coeffs[a, b, x, y] for y, b in enumerate(bob) if b is not None), ZERO)
                    for a in range(na)
                ]
                v, choice = _best_choice(values, strategy_class.alice_may_abort)
                total += v
                alice.append(choice)
            if best_value is None or total > best_value:
                best_value, best_strategy = total, DetStrategy(alice, bob, strategy_class)
    else:
        for alice_map in itertools.product(
            _side_options(na, strategy_class.alice_may_abort), repeat=nx
        ):
            total = ZERO
            bob_map: list[Choice] = []
            for y in range(ny):
                values = [
                    sum(
                        (coeffs[a, b, x, y] for x, a in enumerate(alice_map) if a is not None),
                        ZERO,
                    )
                    for b in range(nb)
                ]
                v, choice = _best_choice(values, strategy_class.bob_may_abort)
                total += v
                bob_map.append(choice)
            if best_value is None or total > best_value:
                best_value, best_strategy = total, DetStrategy(alice_map, bob_map, strategy_class)
    assert best_value is not None and best_strategy is not None
    return best_value, best_strategy


def min_bell_value(
    functional: BellFunctional,
    strategy_class: StrategyClass,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Fraction, DetStrategy]:
    """min B(l) over the class, as -max(-B)."""
    value, witness = max_bell_value(functional.scaled(Fraction(-1)), strategy_class, cap)
    return -value, witness


def brute_force_max(
    functional: BellFunctional,
    strategy_class: StrategyClass,
    cap: int = DEFAULT_ENUMERATION_CAP,
) -> tuple[Fraction, DetStrategy]:
    """Reference maximization over every strategy of the class."""
    best_value: Fraction | None = None
    best: DetStrategy | None = None
    for strategy in enumerate_strategies(strategy_class, functional.sizes, cap):
        value = strategy_value(functional, strategy)
        if best_value is None or value > best_value:
            best_value, best = value, strategy
    assert best_value is not None and best is not None
    return best_value, best
