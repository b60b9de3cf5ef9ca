# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for the efficiency, normalized and partition bound LPs."""

import random
from fractions import Fraction

import pytest

from belleff.bounds import (
    FunctionTable,
    check_efficiency_point,
    check_partition_point,
    eff,
    eff_eps,
    eff_eta,
    eff_nc,
    eff_oneway,
    get_bound,
    nu,
    prt_direct,
    prt_function,
    prt_via_eff,
)
from belleff.certificates import (
    Certificate,
    chsh_functional,
    extract_certificate,
    verify_certificate,
)
from belleff.core.config import Settings
from belleff.core.errors import InfeasibleBoundError, InputError, TooLargeError
from belleff.core.exactlp import check_optimality
from belleff.models.distributions import (
    Dist,
    boolean_function,
    from_boolean_function,
    from_table,
    local_point,
    mixture,
    pr_box,
    rational_table,
    uniform,
)
from belleff.models.strategies import StrategyClass

BINARY = (("0", "1"),) * 4
ETAS = (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1))
EPSILONS = (Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(1), Fraction(2))


def p_xor():
    return from_boolean_function(boolean_function("xor"), "p_xor")


def local():
    return local_point((0, 1), (1, 1), BINARY)


def random_dist(rng: random.Random) -> Dist:
    """2x2 inputs and outputs; every input pair gets its own random rational table."""
    probs = rational_table((2, 2, 2, 2))
    for x in range(2):
        for y in range(2):
            weights = [rng.randint(0, 5) for _ in range(4)]
            if not any(weights):
                weights[rng.randrange(4)] = 1
            total = sum(weights)
            for k, w in enumerate(weights):
                probs[x, y, k // 2, k % 2] = Fraction(w, total)
    return Dist(*BINARY, probs)


def random_suite(count: int, seed: int = 2026) -> list[Dist]:
    rng = random.Random(seed)
    return [random_dist(rng) for _ in range(count)]


def optimal(result):
    """The result, after checking its LP solution against the program it came from."""
    assert check_optimality(result.program, result.solution) == [], result.kind
    return result


def nonsignaling_suite() -> list[Dist]:
    pr = pr_box()
    return [
        pr,
        p_xor(),
        local(),
        mixture([Fraction(1, 2), Fraction(1, 2)], [pr, uniform((2, 2, 2, 2))]),
        mixture([Fraction(1, 3), Fraction(2, 3)], [pr, local()]),
    ]


def test_eff_pr_box():
    result = eff(pr_box())
    assert result.bound_value == 2
    assert result.zeta == Fraction(1, 2)
    assert result.bound_value * result.zeta == 1
    assert result.columns == 81
    assert sum(result.primal_weights.values()) == 1
    assert all(w > 0 for w in result.primal_weights.values())
    assert check_optimality(result.program, result.solution) == []
    assert check_efficiency_point(pr_box(), result.primal_weights, result.zeta) == []


def test_eff_pr_box_certificates():
    cert = extract_certificate(eff(pr_box()))
    assert cert.claimed_value == 2
    report = verify_certificate(cert, pr_box())
    assert report.valid
    assert report.value == 2
    assert report.maximum <= 1
    chsh = verify_certificate(Certificate(chsh_functional(), cert.kind, Fraction(2)), pr_box())
    assert chsh.valid
    assert chsh.maximum == 1
    assert chsh.value == 2


@pytest.mark.parametrize("make", [local, p_xor])
def test_eff_of_local_distributions(make):
    p = make()
    assert eff(p).bound_value == 1
    assert eff_nc(p).bound_value == 1
    assert eff_oneway(p).bound_value == 1
    assert nu(p).bound_value == 1


def test_eff_equals_prt():
    suite = random_suite(20) + [pr_box(), p_xor()]
    for p in suite:
        efficiency = eff(p)
        partition = prt_direct(p)
        assert efficiency.bound_value == partition.bound_value
        assert check_optimality(partition.program, partition.solution) == []
        etas = dict(partition.zeta_by_input)
        assert check_partition_point(p, partition.primal_weights, etas) == []


def test_prt_via_change_of_variables():
    for p in [pr_box()] + random_suite(3):
        direct = prt_direct(p)
        via = prt_via_eff(p)
        assert via.bound_value == direct.bound_value
        assert check_partition_point(p, via.primal_weights, dict(via.zeta_by_input)) == []


def test_prt_of_point_distribution():
    result = prt_direct(local())
    assert result.bound_value == 1
    assert list(result.primal_weights.values()) == [1]


def test_nu_is_at_most_twice_eff():
    for p in nonsignaling_suite():
        value = nu(p).bound_value
        bound = eff(p).bound_value
        assert value <= 2 * bound
        assert value <= 2 * bound - 1
        assert value >= 1
    assert nu(pr_box()).bound_value == 2


def test_nu_reports_comparison_with_eff():
    """nu carries eff and both forms of the nu-against-eff inequality."""
    for p in nonsignaling_suite():
        result = nu(p)
        bound = eff(p).bound_value
        assert result.references["eff"] == bound
        assert result.references["twice_eff_minus_one"] == 2 * bound - 1
        assert result.checks == {"nu_le_twice_eff": True, "nu_le_twice_eff_minus_one": True}
    pr = nu(pr_box())
    assert pr.references["twice_eff"] == 4
    assert pr.references["twice_eff_minus_one"] == 3
    assert nu(pr_box(), compare_eff=False).references == {}


def test_nu_rejects_signaling_input():
    signaling = from_table(BINARY, lambda x, y, a, b: int(a == y and b == 0))
    with pytest.raises(InputError, match="nonsignaling"):
        nu(signaling)


def test_tradeoff_between_eta_and_nonconstant():
    for p in nonsignaling_suite() + random_suite(4, seed=5):
        full = optimal(eff(p)).bound_value
        relaxed = optimal(eff_nc(p)).bound_value
        for eta in ETAS:
            value = optimal(eff_eta(p, eta)).bound_value
            assert eta * relaxed <= value <= eta * full
        assert eff_eta(p, 1).bound_value == full


def test_eff_eta_of_local_point():
    for eta in ETAS:
        assert eff_eta(local(), eta).bound_value == eta


def test_eff_eps_monotone():
    for p in [pr_box()] + random_suite(3, seed=9):
        values = [optimal(eff_eps(p, eps)).bound_value for eps in EPSILONS]
        assert values[0] == eff(p).bound_value
        assert values == sorted(values, reverse=True)
        assert values[-1] == 1
    smoothed = eff_eps(pr_box(), Fraction(1, 2)).bound_value
    assert 1 <= smoothed <= 2


def test_dominance_chain():
    for p in nonsignaling_suite():
        oneway, full, relaxed = (optimal(f(p)) for f in (eff_oneway, eff, eff_nc))
        assert oneway.bound_value >= full.bound_value >= relaxed.bound_value
    for p in random_suite(4, seed=11):
        assert optimal(eff(p)).bound_value >= optimal(eff_nc(p)).bound_value


def test_eff_oneway_pr_box():
    result = eff_oneway(pr_box())
    assert result.bound_value == 2
    assert result.strategy_class is StrategyClass.ALICE_ABORT
    assert result.columns == 36


def test_eff_oneway_of_signaling_input_is_infeasible():
    """Only Alice aborts, so her output distribution cannot depend on y."""
    signaling = from_table(BINARY, lambda x, y, a, b: int(a == y and b == 0))
    with pytest.raises(InfeasibleBoundError):
        eff_oneway(signaling)


def test_parameter_ranges():
    with pytest.raises(InputError):
        eff_eps(pr_box(), Fraction(3))
    with pytest.raises(InputError):
        eff_eta(pr_box(), Fraction(0))
    with pytest.raises(InputError):
        prt_direct(pr_box(), Fraction(3, 2))
    with pytest.raises(InputError):
        get_bound("gamma2")


def test_dense_and_revised_bounds_agree():
    revised = eff(pr_box(), Settings(dense_threshold=1))
    dense = eff(pr_box())
    assert revised.bound_value == dense.bound_value
    assert dict(revised.primal_weights) == dict(dense.primal_weights)
    assert dict(revised.solution.dual) == dict(dense.solution.dual)
    assert revised.solution.pivots == dense.solution.pivots


def test_column_generation_matches_enumeration():
    settings = Settings(column_generation=True)
    for p in [pr_box(), p_xor()] + random_suite(3, seed=13):
        assert eff(p, settings).bound_value == eff(p).bound_value
    assert eff_oneway(pr_box(), settings).bound_value == 2


def test_enumeration_cap_is_respected():
    with pytest.raises(TooLargeError):
        eff(pr_box(), Settings(enumeration_cap=50))


def test_certificate_round_trip():
    """Every distribution bound's dual certifies exactly its own value."""
    suite = [pr_box(), p_xor()] + random_suite(2, seed=17)
    for p in suite:
        results = [eff(p), eff_nc(p), prt_direct(p), prt_direct(p, Fraction(1, 2))]
        results += [eff_eta(p, eta) for eta in ETAS]
        results += [eff_eps(p, eps) for eps in EPSILONS]
        for result in results:
            report = verify_certificate(extract_certificate(optimal(result)), p)
            assert report.valid, (result.kind, report.violations)
            assert report.value == result.bound_value
    for p in nonsignaling_suite():
        for result in (nu(p), eff_oneway(p)):
            report = verify_certificate(extract_certificate(optimal(result)), p)
            assert report.valid, (result.kind, report.violations)
            assert report.value == result.bound_value


def _and_table() -> FunctionTable:
    return FunctionTable.from_truth_table(boolean_function("and"))


def test_prt_function_examples():
    zero = FunctionTable.from_truth_table(boolean_function("zero"))
    assert prt_function(zero).bound_value == 1
    assert prt_function(_and_table()).bound_value == 3
    assert prt_function(_and_table(), Fraction(1)).bound_value == 1


def test_prt_function_monotone_and_partial():
    values = [prt_function(_and_table(), eps).bound_value for eps in EPSILONS[:4]]
    assert values == sorted(values, reverse=True)
    partial = FunctionTable(("0", "1"), ("0", "1"), ((0, None), (None, 1)))
    result = prt_function(partial)
    assert 1 <= result.bound_value <= 2
    assert all(len(key) == 3 for key in result.primal_weights)


def test_prt_function_cap_and_range():
    with pytest.raises(TooLargeError):
        prt_function(_and_table(), settings=Settings(enumeration_cap=10))
    with pytest.raises(InputError):
        prt_function(_and_table(), Fraction(2))
    with pytest.raises(InputError):
        FunctionTable(("0",), ("0",), ((None,),))
