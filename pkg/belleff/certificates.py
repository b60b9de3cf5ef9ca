# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Bell-functional certificates: extraction from bound LP duals and independent verification.

A certificate is valid when its functional is at most 1 on every local strategy of its class
(and at least -1 for normalized certificates) while its value on p reaches the claimed value.
Verification always recomputes the strategy maximum; it never trusts the LP that produced B.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from belleff.bounds.result import BoundResult
from belleff.core.config import DEFAULT_ENUMERATION_CAP
from belleff.core.errors import InputError
from belleff.core.log import get_logger
from belleff.models.distributions import Dist
from belleff.models.functional import BellFunctional
from belleff.models.strategies import (
    DetStrategy,
    StrategyClass,
    max_bell_value,
    min_bell_value,
)

ZERO = Fraction(0)
ONE = Fraction(1)

log = get_logger("certificates")


class CertificateKind(enum.Enum):
    INEFFICIENCY_RESISTANT = "inefficiency_resistant"
    INEFFICIENCY_RESISTANT_ONEWAY = "inefficiency_resistant_oneway"
    NORMALIZED = "normalized"

    @property
    def strategy_class(self) -> StrategyClass:
        return _KIND_CLASSES[self]

    @classmethod
    def parse(cls, text: str) -> CertificateKind:
        for member in cls:
            if member.value == text:
                return member
        expected = [m.value for m in cls]
        raise InputError(f"Unknown certificate kind {text!r}; expected one of {expected}")

    @classmethod
    def for_class(cls, strategy_class: StrategyClass) -> CertificateKind:
        for kind, sc in _KIND_CLASSES.items():
            if sc is strategy_class:
                return kind
        raise InputError(f"No certificate kind for strategy class {strategy_class.value}")


_KIND_CLASSES = {
    CertificateKind.INEFFICIENCY_RESISTANT: StrategyClass.BOTH_ABORT,
    CertificateKind.INEFFICIENCY_RESISTANT_ONEWAY: StrategyClass.ALICE_ABORT,
    CertificateKind.NORMALIZED: StrategyClass.NO_ABORT,
}


@dataclass(frozen=True, eq=False)
class Certificate:
    """A functional with the value it claims on p.

    ``epsilon`` > 0 values B at the worst distribution within that distance of p;
    ``eta`` < 1 discounts positive per-input contributions by eta; ``nonconstant`` demands
    every per-input contribution be non-negative.
    """

    functional: BellFunctional
    kind: CertificateKind
    claimed_value: Fraction
    epsilon: Fraction = ZERO
    eta: Fraction = ONE
    nonconstant: bool = False

    def __post_init__(self) -> None:
        object.__setattr__(self, "claimed_value", Fraction(self.claimed_value))
        object.__setattr__(self, "epsilon", Fraction(self.epsilon))
        object.__setattr__(self, "eta", Fraction(self.eta))
        if self.claimed_value <= 0:
            raise InputError(f"claimed_value must be positive, got {self.claimed_value}")
        if not 0 <= self.epsilon <= 2:
            raise InputError(f"epsilon must be in [0, 2], got {self.epsilon}")
        if not 0 < self.eta <= 1:
            raise InputError(f"eta must be in (0, 1], got {self.eta}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Certificate):
            return NotImplemented
        return (
            self.functional == other.functional
            and self.kind is other.kind
            and self.claimed_value == other.claimed_value
            and self.epsilon == other.epsilon
            and self.eta == other.eta
            and self.nonconstant == other.nonconstant
        )

    __hash__ = None  # type: ignore[assignment]


def _check_shapes(functional: BellFunctional, p: Dist) -> None:
    if functional.sizes != p.sizes:
        raise InputError(f"Functional sizes {functional.sizes} do not match distribution {p.sizes}")


def per_input_values(functional: BellFunctional, p: Dist) -> np.ndarray:
    """B_xy(p) = sum_{a,b} B[a,b,x,y] p(a,b|x,y), indexed [x, y]."""
    _check_shapes(functional, p)
    return (functional.by_input() * p.probs).sum(axis=(2, 3))


def bell_value(functional: BellFunctional, p: Dist) -> Fraction:
    """B(p) = sum B[a,b,x,y] p(a,b|x,y), exactly."""
    return Fraction(per_input_values(functional, p).sum())


def smoothed_bell_value(functional: BellFunctional, p: Dist, epsilon: Fraction) -> Fraction:
    """min B(p') over distributions p' within per-input L1 distance epsilon of p.

    Per input pair, moving mass m costs 2m of L1 distance, and the cheapest move takes mass
    from the largest coefficients to the smallest one.
    """
    epsilon = Fraction(epsilon)
    if not 0 <= epsilon <= 2:
        raise InputError(f"epsilon must be in [0, 2], got {epsilon}")
    _check_shapes(functional, p)
    coeffs = functional.by_input()
    nx, ny, na, nb = p.sizes
    total = ZERO
    for x, y in np.ndindex(nx, ny):
        entries = sorted(
            ((coeffs[x, y, a, b], p.probs[x, y, a, b]) for a, b in np.ndindex(na, nb)),
            key=lambda e: e[0],
            reverse=True,
        )
        lowest = entries[-1][0]
        budget = epsilon / 2
        for c, mass in entries:
            moved = min(mass, budget) if c > lowest else ZERO
            budget -= moved
            total += c * (mass - moved) + lowest * moved
    return total


def weighted_bell_value(functional: BellFunctional, p: Dist, eta: Fraction) -> Fraction:
    """sum_{x,y} min(eta * B_xy(p), B_xy(p))."""
    eta = Fraction(eta)
    if not 0 < eta <= 1:
        raise InputError(f"eta must be in (0, 1], got {eta}")
    return sum((min(eta * v, v) for v in per_input_values(functional, p).flat), ZERO)


def certificate_value(cert: Certificate, p: Dist) -> Fraction:
    """The value a certificate proves on p, under the valuation its parameters select."""
    if cert.epsilon:
        return smoothed_bell_value(cert.functional, p, cert.epsilon)
    if cert.eta != 1:
        return weighted_bell_value(cert.functional, p, cert.eta)
    return bell_value(cert.functional, p)


def extract_certificate(result: BoundResult, kind: CertificateKind | None = None) -> Certificate:
    """Certificate from the duals of a solved bound LP, claiming the bound value."""
    if result.certificate is None or result.strategy_class is None:
        raise InputError(f"Bound {result.kind!r} does not produce a distribution certificate")
    expected = CertificateKind.for_class(result.strategy_class)
    kind = kind or expected
    if kind is not expected:
        raise InputError(
            f"Bound {result.kind!r} yields {expected.value} certificates, not {kind.value}"
        )
    return Certificate(
        functional=result.certificate,
        kind=kind,
        claimed_value=result.bound_value,
        epsilon=result.parameters.get("epsilon", ZERO),
        eta=result.parameters.get("eta", ONE),
        nonconstant=result.nonconstant,
    )


@dataclass(frozen=True)
class VerificationReport:
    maximum: Fraction
    value: Fraction
    witness: DetStrategy
    valid: bool
    minimum: Fraction | None = None
    minimum_witness: DetStrategy | None = None
    violations: tuple[str, ...] = field(default_factory=tuple)

    @property
    def communication_lower_bound(self) -> float | None:
        """log2 of the proven value, when the certificate is valid and proves more than 1."""
        if not self.valid or self.value <= 0:
            return None
        return math.log2(self.value)


def verify_certificate(
    cert: Certificate, p: Dist, cap: int = DEFAULT_ENUMERATION_CAP
) -> VerificationReport:
    """Check the strategy constraints and the claimed value of a certificate on p."""
    _check_shapes(cert.functional, p)
    strategy_class = cert.kind.strategy_class
    maximum, witness = max_bell_value(cert.functional, strategy_class, cap)
    violations = []
    if maximum > 1:
        violations.append(f"B(l) = {maximum} > 1 for a {strategy_class.value} strategy")
    minimum = minimum_witness = None
    if cert.kind is CertificateKind.NORMALIZED:
        minimum, minimum_witness = min_bell_value(cert.functional, strategy_class, cap)
        if minimum < -1:
            violations.append(f"B(l) = {minimum} < -1 for a {strategy_class.value} strategy")
    if cert.nonconstant:
        for (x, y), v in np.ndenumerate(per_input_values(cert.functional, p)):
            if v < 0:
                violations.append(f"contribution of input ({x}, {y}) is {v} < 0")
    value = certificate_value(cert, p)
    if value < cert.claimed_value:
        violations.append(f"value {value} below claimed {cert.claimed_value}")
    log.info(
        f"verify {cert.kind.value}: max {maximum}, value {value}, {len(violations)} violations"
    )
    return VerificationReport(
        maximum=maximum,
        value=value,
        witness=witness,
        valid=not violations,
        minimum=minimum,
        minimum_witness=minimum_witness,
        violations=tuple(violations),
    )


def chsh_functional(scale: Fraction = Fraction(1, 2)) -> BellFunctional:
    """scale * (-1)^(a xor b xor xy) on binary inputs and outputs."""
    coeffs = np.empty((2, 2, 2, 2), dtype=object)
    for a, b, x, y in np.ndindex(2, 2, 2, 2):
        coeffs[a, b, x, y] = Fraction(scale) * (-1) ** (a ^ b ^ (x & y))
    return BellFunctional(coeffs)


def scale_certificate(cert: Certificate, factor: Fraction) -> Certificate:
    """c * B claiming c times the value, for c in (0, 1]."""
    factor = Fraction(factor)
    if not 0 < factor <= 1:
        raise InputError(f"Scale factor must be in (0, 1], got {factor}")
    return Certificate(
        cert.functional.scaled(factor),
        cert.kind,
        cert.claimed_value * factor,
        cert.epsilon,
        cert.eta,
        cert.nonconstant,
    )
