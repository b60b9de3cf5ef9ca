# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for deterministic strategies, enumeration and Bell maximization."""

import random
from fractions import Fraction

import numpy as np
import pytest

from belleff.certificates import chsh_functional
from belleff.core.errors import InputError, TooLargeError
from belleff.models.functional import BellFunctional, zero_functional
from belleff.models.strategies import (
    DetStrategy,
    StrategyClass,
    all_abort,
    brute_force_max,
    enumerate_strategies,
    evaluate,
    max_bell_value,
    min_bell_value,
    point_strategy,
    strategy_count,
    strategy_value,
)

CLASSES = (StrategyClass.NO_ABORT, StrategyClass.ALICE_ABORT, StrategyClass.BOTH_ABORT)


def _random_functional(rng: random.Random, sizes, low=-3, high=3) -> BellFunctional:
    nx, ny, na, nb = sizes
    coeffs = np.empty((na, nb, nx, ny), dtype=object)
    for idx in np.ndindex(coeffs.shape):
        coeffs[idx] = Fraction(rng.randint(low, high), rng.randint(1, 4))
    return BellFunctional(coeffs)


@pytest.mark.parametrize(
    "strategy_class, expected",
    [
        (StrategyClass.NO_ABORT, 16),
        (StrategyClass.BOTH_ABORT, 81),
        (StrategyClass.ALICE_ABORT, 36),
    ],
)
def test_enumeration_counts(strategy_class, expected):
    strategies = list(enumerate_strategies(strategy_class, (2, 2, 2, 2)))
    assert strategy_count(strategy_class, (2, 2, 2, 2)) == expected
    assert len(strategies) == expected
    assert len(set(strategies)) == expected
    assert all(s.strategy_class is strategy_class for s in strategies)


def test_enumeration_cap():
    with pytest.raises(TooLargeError) as info:
        enumerate_strategies(StrategyClass.BOTH_ABORT, (2, 2, 2, 2), cap=80)
    assert info.value.count == 81
    assert "--colgen" in str(info.value)


def test_best_response_cap_counts_evaluations():
    """Nine Bob maps, each answered by Alice over two inputs and three choices."""
    with pytest.raises(TooLargeError) as info:
        max_bell_value(chsh_functional(), StrategyClass.BOTH_ABORT, cap=53)
    assert info.value.count == 54
    value, _ = max_bell_value(chsh_functional(), StrategyClass.BOTH_ABORT, cap=54)
    assert value == max_bell_value(chsh_functional(), StrategyClass.BOTH_ABORT)[0]
    with pytest.raises(TooLargeError):
        max_bell_value(chsh_functional(), StrategyClass.ALICE_ABORT, cap=23)
    max_bell_value(chsh_functional(), StrategyClass.ALICE_ABORT, cap=24)


def test_class_rules():
    with pytest.raises(InputError):
        DetStrategy((None, 0), (0, 0), StrategyClass.NO_ABORT)
    with pytest.raises(InputError):
        DetStrategy((0, 0), (None, 0), StrategyClass.ALICE_ABORT)
    DetStrategy((None, 0), (0, 0), StrategyClass.ALICE_ABORT)
    with pytest.raises(InputError):
        all_abort(StrategyClass.NO_ABORT, (2, 2, 2, 2))
    assert all_abort(StrategyClass.ALICE_ABORT, (2, 2, 2, 2)).bob == (0, 0)
    assert StrategyClass.parse("AliceAbort") is StrategyClass.ALICE_ABORT
    with pytest.raises(InputError):
        StrategyClass.parse("Sometimes")


def test_evaluate():
    ell = DetStrategy((0, 0), (1, 1), StrategyClass.NO_ABORT)
    for x in range(2):
        for y in range(2):
            assert evaluate(ell, x, y, 0, 1) == 1
            assert evaluate(ell, x, y, 1, 1) == 0
    aborting = DetStrategy((None, 0), (1, 1))
    assert all(evaluate(aborting, 0, y, a, 1) == 0 for y in range(2) for a in range(2))
    assert aborting.rectangle() == (frozenset({1}), frozenset({0, 1}))


def test_point_strategy():
    s = point_strategy(1, 0, 1, 0, (2, 2, 2, 2))
    assert s.outcome(1, 0) == (1, 0)
    assert s.outcome(0, 0) is None
    assert s.outcome(1, 1) is None
    with pytest.raises(InputError):
        point_strategy(2, 0, 0, 0, (2, 2, 2, 2))


def test_max_of_zero_functional():
    value, _ = max_bell_value(zero_functional((2, 2, 2, 2)), StrategyClass.BOTH_ABORT)
    assert value == 0


def test_max_single_coefficient():
    coeffs = zero_functional((2, 2, 2, 2)).coeffs.copy()
    coeffs[1, 0, 0, 1] = Fraction(5)
    value, witness = max_bell_value(BellFunctional(coeffs), StrategyClass.BOTH_ABORT)
    assert value == 5
    assert witness.outcome(0, 1) == (1, 0)


def test_chsh_half_bounds():
    chsh = chsh_functional()
    for strategy_class in CLASSES:
        value, witness = max_bell_value(chsh, strategy_class)
        assert value == 1
        assert strategy_value(chsh, witness) == 1
    low, _ = min_bell_value(chsh, StrategyClass.NO_ABORT)
    assert low == -1


@pytest.mark.parametrize("sizes", [(2, 2, 2, 2), (3, 2, 2, 2), (2, 3, 2, 2), (3, 3, 2, 2)])
def test_best_response_matches_brute_force(sizes):
    rng = random.Random(str(sizes))
    for _ in range(5):
        functional = _random_functional(rng, sizes)
        values = []
        for strategy_class in CLASSES:
            value, witness = max_bell_value(functional, strategy_class)
            assert value == brute_force_max(functional, strategy_class)[0]
            assert strategy_value(functional, witness) == value
            assert witness.strategy_class is strategy_class
            values.append(value)
        assert values == sorted(values)


def test_aborts_do_not_help_nonnegative_functionals():
    rng = random.Random(3)
    for _ in range(5):
        functional = _random_functional(rng, (3, 2, 2, 2), low=0)
        no_abort, _ = max_bell_value(functional, StrategyClass.NO_ABORT)
        both, _ = max_bell_value(functional, StrategyClass.BOTH_ABORT)
        assert no_abort == both
