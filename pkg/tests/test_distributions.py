# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for distribution construction, distances and the quantum bridge."""

import math
from fractions import Fraction

import numpy as np
import pytest

from belleff.core.errors import InputError
from belleff.models.distributions import (
    FUNCTION_NAMES,
    Dist,
    QuantumSetup,
    boolean_function,
    chsh_setup,
    from_boolean_function,
    from_quantum,
    from_table,
    is_nonsignaling,
    l1_distance,
    local_point,
    marginals,
    mixture,
    phi_plus_setup,
    pr_box,
    rational_table,
    uniform,
)

BINARY = (("0", "1"),) * 4
HALF = Fraction(1, 2)


def p_xor():
    return from_boolean_function(boolean_function("xor"))


def test_pr_box_entries():
    pr = pr_box()
    assert pr.prob(0, 0, 0, 0) == HALF
    assert pr.prob(1, 1, 0, 1) == HALF
    assert pr.prob(1, 1, 0, 0) == 0
    assert is_nonsignaling(pr)


def test_pr_box_is_p_and():
    assert np.array_equal(from_boolean_function(boolean_function("and")).probs, pr_box().probs)


def test_p_xor_and_constant_zero():
    xor = p_xor()
    for x, y, a, b in np.ndindex(2, 2, 2, 2):
        assert xor.prob(x, y, a, b) == (HALF if a ^ b == x ^ y else 0)
    zero = from_boolean_function(boolean_function("zero"))
    for x, y, a, b in np.ndindex(2, 2, 2, 2):
        assert zero.prob(x, y, a, b) == (HALF if a == b else 0)


@pytest.mark.parametrize("name", FUNCTION_NAMES)
@pytest.mark.parametrize("bits", [1, 2, 3])
def test_p_f_is_nonsignaling_with_uniform_marginals(name, bits):
    p = from_boolean_function(boolean_function(name, bits))
    assert is_nonsignaling(p)
    alice, bob = marginals(p)
    assert (alice == HALF).all()
    assert (bob == HALF).all()


def test_partial_truth_table_rejected():
    table = boolean_function("and")
    del table[("1", "1")]
    with pytest.raises(InputError):
        from_boolean_function(table)
    with pytest.raises(InputError):
        from_boolean_function({("0", "0"): 2})
    with pytest.raises(InputError):
        boolean_function("nand")


def test_dist_validation():
    probs = rational_table((1, 1, 2, 1))
    probs[0, 0, 0, 0] = Fraction(1, 3)
    with pytest.raises(InputError, match="sums to"):
        Dist(("x",), ("y",), ("0", "1"), ("0",), probs)
    probs[0, 0, 1, 0] = Fraction(2, 3)
    assert Dist(("x",), ("y",), ("0", "1"), ("0",), probs).prob(0, 0, 1, 0) == Fraction(2, 3)
    probs[0, 0, 0, 0], probs[0, 0, 1, 0] = Fraction(-1, 3), Fraction(4, 3)
    with pytest.raises(InputError, match="non-negative"):
        Dist(("x",), ("y",), ("0", "1"), ("0",), probs)
    probs[0, 0, 0, 0], probs[0, 0, 1, 0] = 0.5, 0.5
    with pytest.raises(InputError, match="rational"):
        Dist(("x",), ("y",), ("0", "1"), ("0",), probs)
    with pytest.raises(InputError, match="duplicates"):
        Dist(("x",), ("y",), ("0", "0"), ("0",), probs)


def test_dist_is_immutable():
    pr = pr_box()
    with pytest.raises(ValueError):
        pr.probs[0, 0, 0, 0] = Fraction(1)


def test_l1_distance():
    pr = pr_box()
    assert l1_distance(pr, pr) == 0
    assert l1_distance(pr, p_xor()) == 2
    point00 = local_point((0, 0), (0, 0), BINARY)
    point01 = local_point((0, 0), (1, 1), BINARY)
    assert l1_distance(point00, point01) == 2
    with pytest.raises(InputError):
        l1_distance(pr, uniform((2, 2, 2, 3)))


def test_signaling_distribution():
    """Alice's output copies Bob's input."""
    p = from_table(BINARY, lambda x, y, a, b: int(a == y and b == 0), "copy_y")
    assert not is_nonsignaling(p)


def test_mixture_is_exact():
    pr = pr_box()
    mixed = mixture([Fraction(1, 3), Fraction(2, 3)], [pr, uniform((2, 2, 2, 2))])
    assert mixed.prob(0, 0, 0, 0) == Fraction(1, 3) * HALF + Fraction(2, 3) * Fraction(1, 4)
    assert is_nonsignaling(mixed)
    with pytest.raises(InputError):
        mixture([HALF, Fraction(1, 3)], [pr, pr])


def test_quantum_phi_plus():
    p = from_quantum(phi_plus_setup())
    assert p.metadata.approximate
    assert p.sizes == (1, 1, 2, 2)
    assert p.prob(0, 0, 0, 0) == HALF
    assert p.prob(0, 0, 1, 1) == HALF
    assert p.prob(0, 0, 0, 1) == 0


def test_quantum_product_state():
    state = np.array([1, 0, 0, 0], dtype=complex)
    p = from_quantum(QuantumSetup(state, [np.eye(2)], [np.eye(2)]))
    assert p.prob(0, 0, 0, 0) == 1


def test_quantum_chsh_pattern():
    """Correlators +-1/sqrt(2): entries (2 +- sqrt(2))/8 within the rounding limit."""
    p = from_quantum(chsh_setup())
    high, low = (2 + math.sqrt(2)) / 8, (2 - math.sqrt(2)) / 8
    for x, y, a, b in np.ndindex(2, 2, 2, 2):
        expected = high if a ^ b == x & y else low
        assert float(p.prob(x, y, a, b)) == pytest.approx(expected, abs=1e-5)
    for x, y in np.ndindex(2, 2):
        assert p.probs[x, y].sum() == 1


def test_quantum_rejects_bad_setups():
    unnormalized = np.array([1, 1, 0, 0], dtype=complex)
    with pytest.raises(InputError, match="normalized"):
        from_quantum(QuantumSetup(unnormalized, [np.eye(2)], [np.eye(2)]))
    skew = np.array([[1, 0], [1, 0]], dtype=complex)
    with pytest.raises(InputError, match="orthonormal"):
        from_quantum(QuantumSetup(np.array([1, 0, 0, 0], dtype=complex), [skew], [np.eye(2)]))
