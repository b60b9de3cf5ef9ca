# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Tests for certificate extraction, valuation, verification and the certificate file format."""

from fractions import Fraction

import numpy as np
import pytest

from belleff.bounds import FunctionTable, eff, eff_oneway, nu, prt_function
from belleff.certificates import (
    Certificate,
    CertificateKind,
    bell_value,
    chsh_functional,
    extract_certificate,
    per_input_values,
    scale_certificate,
    smoothed_bell_value,
    verify_certificate,
    weighted_bell_value,
)
from belleff.core.errors import InputError
from belleff.core.formats import certificate_from_json, certificate_to_json, verification_to_json
from belleff.models.distributions import boolean_function, from_boolean_function, from_table, pr_box
from belleff.models.functional import BellFunctional, zero_functional

IR = CertificateKind.INEFFICIENCY_RESISTANT
HALF = Fraction(1, 2)
ONE = Fraction(1)


def p_xor():
    return from_boolean_function(boolean_function("xor"))


def single_coefficient(value: Fraction) -> BellFunctional:
    coeffs = zero_functional((2, 2, 2, 2)).coeffs.copy()
    coeffs[0, 0, 0, 0] = value
    return BellFunctional(coeffs)


def test_bell_value_examples():
    chsh = chsh_functional()
    assert bell_value(chsh, pr_box()) == 2
    assert bell_value(chsh, p_xor()) == -1
    assert bell_value(zero_functional((2, 2, 2, 2)), pr_box()) == 0
    assert (per_input_values(chsh, pr_box()) == HALF).all()
    with pytest.raises(InputError):
        bell_value(zero_functional((2, 2, 2, 3)), pr_box())


def test_chsh_certificate_on_pr_box():
    report = verify_certificate(Certificate(chsh_functional(), IR, Fraction(2)), pr_box())
    assert report.valid
    assert report.maximum == 1
    assert report.value == 2
    assert report.communication_lower_bound == 1.0
    assert report.minimum is None


def test_chsh_is_a_normalized_certificate():
    cert = Certificate(chsh_functional(), CertificateKind.NORMALIZED, Fraction(2))
    report = verify_certificate(cert, pr_box())
    assert report.valid
    assert report.minimum == -1
    out = verification_to_json(report, pr_box().labels)
    assert out["min"] == "-1"
    assert out["max"] == "1"
    assert out["lower_bound_bits"] == 1.0


def test_single_coefficient_above_one_is_invalid():
    cert = Certificate(single_coefficient(Fraction(3, 2)), IR, Fraction(3, 4))
    report = verify_certificate(cert, pr_box())
    assert not report.valid
    assert report.maximum == Fraction(3, 2)
    assert report.witness.outcome(0, 0) == (0, 0)
    assert report.communication_lower_bound is None


def test_scaling_restores_validity():
    cert = Certificate(single_coefficient(Fraction(3, 2)), IR, Fraction(3, 4))
    scaled = scale_certificate(cert, Fraction(2, 3))
    assert scaled.claimed_value == HALF
    report = verify_certificate(scaled, pr_box())
    assert report.valid
    assert report.maximum == 1
    assert report.value == HALF
    with pytest.raises(InputError):
        scale_certificate(cert, Fraction(3, 2))


def test_zero_functional_cannot_claim_a_bound():
    report = verify_certificate(Certificate(zero_functional((2, 2, 2, 2)), IR, ONE), pr_box())
    assert not report.valid
    assert report.value == 0
    assert any("below claimed" in v for v in report.violations)


def test_normalized_but_not_inefficiency_resistant():
    """Bob aborting on y = 1 keeps the +2 on y = 0 and drops the -1."""
    coeffs = np.empty((2, 1, 1, 2), dtype=object)
    coeffs[0, 0, 0, 0], coeffs[1, 0, 0, 0] = Fraction(2), Fraction(0)
    coeffs[0, 0, 0, 1], coeffs[1, 0, 0, 1] = Fraction(-1), Fraction(1)
    functional = BellFunctional(coeffs)
    p = from_table((("0",), ("0", "1"), ("0", "1"), ("0",)), lambda *_: HALF)

    normalized = verify_certificate(Certificate(functional, CertificateKind.NORMALIZED, ONE), p)
    assert normalized.valid
    assert normalized.value == 1

    resistant = verify_certificate(Certificate(functional, IR, ONE), p)
    assert not resistant.valid
    assert resistant.maximum == 2
    assert resistant.witness.outcome(0, 1) is None

    oneway = Certificate(functional, CertificateKind.INEFFICIENCY_RESISTANT_ONEWAY, ONE)
    assert verify_certificate(oneway, p).valid


def test_smoothed_value_moves_mass_to_the_lowest_coefficient():
    chsh = chsh_functional()
    assert smoothed_bell_value(chsh, pr_box(), Fraction(0)) == 2
    assert smoothed_bell_value(chsh, pr_box(), HALF) == 1
    assert smoothed_bell_value(chsh, pr_box(), Fraction(2)) == -2
    with pytest.raises(InputError):
        smoothed_bell_value(chsh, pr_box(), Fraction(3))


def test_weighted_value_discounts_positive_contributions():
    chsh = chsh_functional()
    assert weighted_bell_value(chsh, pr_box(), HALF) == 1
    assert weighted_bell_value(chsh.scaled(-1), pr_box(), HALF) == -2
    assert weighted_bell_value(chsh, pr_box(), ONE) == bell_value(chsh, pr_box())


def test_nonconstant_certificate_flags_negative_contributions():
    cert = Certificate(chsh_functional(), IR, ONE, nonconstant=True)
    report = verify_certificate(cert, p_xor())
    assert not report.valid
    assert sum(v.startswith("contribution") for v in report.violations) == 3


def test_extracted_kinds():
    assert extract_certificate(eff(pr_box())).kind is IR
    oneway = extract_certificate(eff_oneway(pr_box()))
    assert oneway.kind is CertificateKind.INEFFICIENCY_RESISTANT_ONEWAY
    assert verify_certificate(oneway, pr_box()).valid
    normalized = extract_certificate(nu(pr_box()))
    assert normalized.kind is CertificateKind.NORMALIZED
    report = verify_certificate(normalized, pr_box())
    assert report.valid
    assert report.minimum >= -1


def test_extract_rejects_mismatched_kind():
    with pytest.raises(InputError):
        extract_certificate(eff(pr_box()), CertificateKind.NORMALIZED)
    table = FunctionTable.from_truth_table(boolean_function("and"))
    with pytest.raises(InputError):
        extract_certificate(prt_function(table))


def test_certificate_validation():
    with pytest.raises(InputError):
        Certificate(chsh_functional(), IR, Fraction(0))
    with pytest.raises(InputError):
        Certificate(chsh_functional(), IR, ONE, eta=Fraction(0))
    with pytest.raises(InputError):
        CertificateKind.parse("gamma2")
    assert CertificateKind.parse("normalized") is CertificateKind.NORMALIZED


def test_certificate_file_format():
    cert = Certificate(chsh_functional(), IR, Fraction(2), eta=HALF)
    raw = certificate_to_json(cert)
    assert raw["claimed_value"] == "2"
    assert raw["eta"] == "1/2"
    assert "epsilon" not in raw
    assert raw["coeffs"][0][0][1][1] == "-1/2"
    assert certificate_from_json(raw) == cert


def test_certificate_file_rejects_bad_input():
    raw = certificate_to_json(Certificate(chsh_functional(), IR, Fraction(2)))
    with pytest.raises(InputError, match="schema"):
        certificate_from_json({**raw, "kind": "gamma2"})
    with pytest.raises(InputError, match="schema"):
        certificate_from_json({**raw, "claimed_value": 0.5})
    with pytest.raises(InputError):
        certificate_from_json({**raw, "coeffs": [[["1"]]]})

