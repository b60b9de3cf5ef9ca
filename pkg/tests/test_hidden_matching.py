# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for the Hidden Matching distribution, its functional and the Fourier quantities."""

import itertools
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from belleff.core.config import Settings
from belleff.core.errors import InputError, TooLargeError
from belleff.hidden_matching import (
    Matching,
    bob_labels,
    degree2_fourier_mass,
    degree2_fourier_mass_pairwise,
    enumerate_matchings,
    hm_bell,
    hm_distribution,
    hm_objective_check,
    hm_params,
    hm_quantum_setup,
    hm_scan_table,
    kkl_scan,
    matching_count,
)
from belleff.models.distributions import from_quantum, is_nonsignaling
from belleff.models.strategies import StrategyClass, brute_force_max, max_bell_value


@pytest.mark.parametrize("n, count", [(2, 1), (4, 3), (6, 15)])
def test_matching_counts(n, count):
    matchings = enumerate_matchings(n)
    assert matching_count(n) == count
    assert len(matchings) == count
    assert len(set(matchings)) == count


def test_matchings_on_four_vertices():
    labels = [m.label for m in enumerate_matchings(4)]
    assert labels == ["(1,2)(3,4)", "(1,3)(2,4)", "(1,4)(2,3)"]


def test_matching_errors():
    with pytest.raises(InputError):
        enumerate_matchings(3)
    with pytest.raises(TooLargeError):
        enumerate_matchings(6, cap=10)
    with pytest.raises(InputError):
        Matching(4, ((1, 2), (2, 3)))


def test_hm_distribution_n4():
    """Every (x, M) has 4 values of a times 2 edges, with d forced."""
    hm = hm_distribution(4)
    assert hm.sizes == (16, 3, 4, 4)
    assert hm.b_labels == bob_labels(4) == ("0:0", "1:0", "0:1", "1:1")
    assert set(hm.probs.flat) == {Fraction(0), Fraction(1, 8)}
    for x, y in np.ndindex(16, 3):
        assert (hm.probs[x, y] != 0).sum() == 8
    assert not hm.metadata.approximate


def test_hm_distribution_n2():
    hm = hm_distribution(2)
    assert hm.sizes == (4, 1, 2, 2)
    assert set(hm.probs.flat) == {Fraction(0), Fraction(1, 2)}
    # x = "01" and edge (1,2): x_1 xor x_2 = 1, so a = 0 forces d = 1
    assert hm.prob(1, 0, 0, 1) == Fraction(1, 2)


@pytest.mark.parametrize("n", [2, 4])
def test_hm_is_nonsignaling(n):
    assert is_nonsignaling(hm_distribution(n))


def test_hm_rejects_bad_sizes():
    with pytest.raises(InputError):
        hm_distribution(6)
    with pytest.raises(TooLargeError):
        hm_distribution(4, Settings(enumeration_cap=100))


def test_hm_params_n4():
    params = hm_params(4, Fraction(1))
    assert params.matchings == 3
    assert params.mu == -params.scale / 384
    assert params.phi == params.scale / 192
    assert float(params.mu) == pytest.approx(-0.0047461, rel=1e-3)
    assert float(params.phi) == pytest.approx(0.0094922, rel=1e-3)
    assert params.scale_error <= Settings().scale_tolerance
    with pytest.raises(InputError):
        hm_params(4, Fraction(0))


def test_hm_bell_signs():
    functional, params = hm_bell(4)
    # x = 0000, first matching, first edge (1,2): d = 0 is valid, d = 1 is not
    assert functional.coeffs[0, 0, 0, 0] == params.mu + params.phi
    assert functional.coeffs[0, 1, 0, 0] == params.mu - params.phi
    assert functional.coeffs[0, 1, 0, 0] < 0


@pytest.mark.parametrize("n", [2, 4])
@pytest.mark.parametrize("C", [Fraction(1, 2), Fraction(1), Fraction(2)])
def test_objective_matches_closed_form(n, C):
    check = hm_objective_check(n, C)
    assert check.equal
    assert check.computed == check.params.scale / (2 * n)


def test_objective_matches_closed_form_n8():
    """256 x 105 x 8 x 8 entries, the largest table the suite builds."""
    check = hm_objective_check(8)
    assert check.equal
    assert check.computed == check.params.scale / 16


def test_objective_values():
    assert float(hm_objective_check(4).closed_form) == pytest.approx(0.22781, rel=1e-3)
    assert float(hm_objective_check(2).closed_form) == pytest.approx(2**0.5 / 4, rel=1e-12)


def test_scan_table_rows():
    rows = hm_scan_table(4, [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4)])
    assert [r.C for r in rows] == [Fraction(1, 2), Fraction(1), Fraction(2), Fraction(4), None]
    assert rows[-1].maximum == 0
    assert rows[-1].feasible
    for row in rows[:-1]:
        assert row.witness.strategy_class is StrategyClass.ALICE_ABORT
        assert row.feasible == (row.maximum <= 1)
    # a larger C shrinks the scale, so the functional and its maximum shrink too
    maxima = [r.maximum for r in rows[:-1]]
    assert maxima == sorted(maxima, reverse=True)


def test_scan_best_response_on_a_subgrid():
    """Exhaustive check of the best response on four of Alice's inputs."""
    functional, _ = hm_bell(4)
    small = functional.restrict(range(4), range(3))
    fast, _ = max_bell_value(small, StrategyClass.ALICE_ABORT)
    slow, _ = brute_force_max(small, StrategyClass.ALICE_ABORT)
    assert fast == slow


def test_quantum_setup_reproduces_hm():
    hm = hm_distribution(4)
    quantum = from_quantum(hm_quantum_setup(4))
    assert quantum.labels == hm.labels
    assert np.array_equal(quantum.probs, hm.probs)
    assert quantum.metadata.approximate


def _cube(n):
    return ["".join(bits) for bits in itertools.product("01", repeat=n)]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fourier_examples(n):
    cube = _cube(n)
    assert degree2_fourier_mass(cube, n) == 0
    assert degree2_fourier_mass([x for x in cube if x[0] == x[1]], n) == 1
    assert degree2_fourier_mass(["0" * n], n) == n * (n - 1) // 2


def test_fourier_two_ways_agree():
    rng = random.Random(11)
    for _ in range(100):
        subset = rng.sample(range(16), rng.randint(1, 16))
        assert degree2_fourier_mass(subset, 4) == degree2_fourier_mass_pairwise(subset, 4)


def test_fourier_rejects_bad_subsets():
    with pytest.raises(InputError):
        degree2_fourier_mass([], 4)
    with pytest.raises(InputError):
        degree2_fourier_mass(["012"], 3)
    with pytest.raises(InputError):
        degree2_fourier_mass([8], 3)


def test_kkl_scan_n2():
    """For n = 2 the best subsets are the two parity classes, with ratio exactly 1."""
    scan = kkl_scan(2)
    assert scan.subsets == 14
    assert scan.constant == 1.0
    assert scan.subset == ("01", "10")
    assert scan.mass == 1
    with pytest.raises(InputError):
        kkl_scan(5)


def test_kkl_scan_n4():
    scan = kkl_scan(4)
    assert scan.subsets == 2**16 - 2
    size = len(scan.subset)
    assert 0 < size < 16
    assert scan.mass == degree2_fourier_mass(scan.subset, 4)
    # Parseval, with the empty character carrying 1
    assert scan.mass <= Fraction(16, size) - 1
    assert float(scan.mass) == pytest.approx(scan.constant * math.log2(16 / size) ** 2)
    ceiling = max((16 / k - 1) / math.log2(16 / k) ** 2 for k in range(1, 16))
    assert scan.constant <= ceiling + 1e-9
    rng = random.Random(4)
    for _ in range(200):
        subset = rng.sample(range(16), rng.randint(1, 15))
        ratio = float(degree2_fourier_mass(subset, 4)) / math.log2(16 / len(subset)) ** 2
        assert ratio <= scan.constant + 1e-9
