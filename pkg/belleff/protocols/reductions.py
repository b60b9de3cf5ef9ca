# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Constructive reductions from protocols to the bound LPs.

transcript_reduction: both players guess the transcript and abort when their input rules the
guess out. Exactly one guess survives on each input pair, so the players answer with
probability 2^-c and, when they do, answer like the protocol.

protocol_to_partition: every protocol leaf is a rectangle of inputs with fixed outputs, which
is a feasible point of the partition program with total weight 2^c.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from belleff.core.errors import InputError
from belleff.core.log import get_logger
from belleff.models.distributions import Dist, DistMetadata, rational_table
from belleff.models.strategies import Choice, DetStrategy, StrategyClass
from belleff.protocols.protocol import (
    CommProtocol,
    ProtocolMixture,
    is_one_way,
    require_valid,
)

ZERO = Fraction(0)
ONE = Fraction(1)

log = get_logger("protocols")


@dataclass(frozen=True)
class Reduction:
    """A mixture of abort strategies and its efficiency."""

    mixture: Mapping[DetStrategy, Fraction]
    zeta: Fraction
    strategy_class: StrategyClass


@dataclass(frozen=True)
class PartitionPoint:
    """Weights over (rectangle, strategy) columns and per-input efficiencies."""

    weights: Mapping[DetStrategy, Fraction]
    etas: Mapping[tuple[int, int], Fraction]
    objective: Fraction


def _all_transcripts(c: int) -> list[str]:
    return ["".join(bits) for bits in itertools.product("01", repeat=c)]


def _leaf_strategy(p: CommProtocol, t: str, nx: int, ny: int, bob_default: bool) -> DetStrategy:
    """Alice/Bob output per the protocol when t is consistent with their input, else abort."""
    alice: list[Choice] = [
        p.alice_out[(x, t)] if t in p.alice_view(x) else None for x in range(nx)
    ]
    bob: list[Choice] = []
    for y in range(ny):
        if t in p.bob_view(y):
            bob.append(p.bob_out[(y, t)])
        else:
            bob.append(0 if bob_default else None)
    strategy_class = StrategyClass.ALICE_ABORT if bob_default else StrategyClass.BOTH_ABORT
    return DetStrategy(alice, bob, strategy_class)


def _accumulate(
    target: dict[DetStrategy, Fraction], strategy: DetStrategy, weight: Fraction
) -> None:
    if weight:
        target[strategy] = target.get(strategy, ZERO) + weight


def transcript_reduction(mixture: ProtocolMixture) -> Reduction:
    """Abort-strategy mixture with efficiency exactly 2^-c.

    For one-way protocols Bob never rules a transcript out, so he never aborts and the
    mixture lies in the Alice-only abort class.
    """
    require_valid(mixture)
    nx, ny, _, _ = mixture.sizes
    c = mixture.c
    one_way = is_one_way(mixture)
    guess_weight = Fraction(1, 2**c)
    strategies: dict[DetStrategy, Fraction] = {}
    for w, p in mixture.components:
        for t in _all_transcripts(c):
            strategy = _leaf_strategy(p, t, nx, ny, one_way)
            _accumulate(strategies, strategy, w * guess_weight)
    strategy_class = StrategyClass.ALICE_ABORT if one_way else StrategyClass.BOTH_ABORT
    log.info(
        f"transcript reduction: c = {c}, {len(strategies)} strategies, "
        f"class {strategy_class.value}"
    )
    return Reduction(strategies, guess_weight, strategy_class)


def nonabort_probability(mixture: Mapping[DetStrategy, Fraction], x: int, y: int) -> Fraction:
    return sum((w for s, w in mixture.items() if s.outcome(x, y) is not None), ZERO)


def conditional_distribution(
    mixture: Mapping[DetStrategy, Fraction], labels: Sequence[Sequence[str]], source: str = ""
) -> Dist:
    """p(a, b | x, y, no abort) of a strategy mixture."""
    shape = tuple(len(side) for side in labels)
    nx, ny, _, _ = shape
    probs = rational_table(shape)
    for x, y in np.ndindex(nx, ny):
        total = nonabort_probability(mixture, x, y)
        if not total:
            raise InputError(f"Mixture always aborts on input ({x}, {y})")
        for strategy, w in mixture.items():
            outcome = strategy.outcome(x, y)
            if outcome is not None:
                probs[(x, y, *outcome)] += w / total
    return Dist(*labels, probs, DistMetadata(False, source or "conditional"))


def protocol_to_partition(mixture: ProtocolMixture) -> PartitionPoint:
    """Leaf rectangles of every component, each weighted by its protocol weight.

    Leaves whose rectangle is empty are kept (as the all-abort strategy) so that the total
    weight is 2^c exactly.
    """
    require_valid(mixture)
    nx, ny, _, _ = mixture.sizes
    weights: dict[DetStrategy, Fraction] = {}
    for w, p in mixture.components:
        for t in _all_transcripts(mixture.c):
            _accumulate(weights, _leaf_strategy(p, t, nx, ny, False), w)
    objective = sum(weights.values(), ZERO)
    if objective != 2**mixture.c:
        raise RuntimeError(f"Leaf weights sum to {objective}, expected {2**mixture.c}")
    etas = {(x, y): ONE for x, y in np.ndindex(nx, ny)}
    return PartitionPoint(weights, etas, objective)
