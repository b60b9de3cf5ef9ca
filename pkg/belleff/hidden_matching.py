# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""The Hidden Matching distribution, its Bell functional, and the degree-2 Fourier quantity.

Vertices 1..n are encoded as the (log n)-bit binary form of (vertex - 1), so ``i xor j`` and
``<a, i xor j>`` are bitwise operations on those codes. Bob's output "d:k" is the bit d
together with the k-th edge of his matching in sorted order; outputs are indexed 2k + d.
"""

from __future__ import annotations

import itertools
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np
from constraint import AllDifferentConstraint, FunctionConstraint, Problem

from belleff.core.config import Settings
from belleff.core.errors import InputError, TooLargeError
from belleff.core.log import get_logger
from belleff.models.distributions import Dist, DistMetadata, QuantumSetup, bit_labels
from belleff.models.functional import BellFunctional, zero_functional
from belleff.models.strategies import DetStrategy, StrategyClass, max_bell_value
from belleff.utils import is_power_of_two

ZERO = Fraction(0)

SCALE_PRECISION = 60
KKL_SCAN_MAX_N = 4

log = get_logger("hm")


@dataclass(frozen=True)
class Matching:
    """A perfect matching on vertices 1..n; edges are (i, j) with i < j, sorted."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple(sorted(tuple(sorted(e)) for e in self.edges))
        covered = [v for e in edges for v in e]
        if sorted(covered) != list(range(1, self.n + 1)):
            raise InputError(f"Edges {edges} do not partition 1..{self.n}")
        object.__setattr__(self, "edges", edges)

    @property
    def label(self) -> str:
        return "".join(f"({i},{j})" for i, j in self.edges)


def _check_even(n: int) -> None:
    if n < 2 or n % 2:
        raise InputError(f"Matchings need an even positive vertex count, got {n}")


def _check_power_of_two(n: int) -> None:
    if n < 2 or not is_power_of_two(n):
        raise InputError(f"n must be a power of two >= 2, got {n}")


def matching_count(n: int) -> int:
    """(n - 1)!!"""
    _check_even(n)
    return math.prod(range(n - 1, 0, -2))


def enumerate_matchings(n: int, cap: int | None = None) -> list[Matching]:
    """All perfect matchings of 1..n, sorted by their edge lists."""
    _check_even(n)
    cap = cap or Settings().enumeration_cap
    count = matching_count(n)
    if count > cap:
        raise TooLargeError(f"perfect matchings on {n} vertices", count, cap)

    # partner[v] is the vertex matched to v
    problem = Problem()
    vertices = list(range(1, n + 1))
    for v in vertices:
        problem.addVariable(v, [u for u in vertices if u != v])
    problem.addConstraint(AllDifferentConstraint())
    for i, j in itertools.combinations(vertices, 2):
        problem.addConstraint(
            FunctionConstraint(lambda pi, pj, i=i, j=j: (pi == j) == (pj == i)), (i, j)
        )
    matchings = {
        Matching(n, tuple((v, s[v]) for v in vertices if v < s[v]))
        for s in problem.getSolutions()
    }
    result = sorted(matchings, key=lambda m: m.edges)
    if len(result) != count:
        raise RuntimeError(f"Found {len(result)} matchings on {n} vertices, expected {count}")
    return result


def _inner(a: int, w: int) -> int:
    return (a & w).bit_count() % 2


def bob_labels(n: int) -> tuple[str, ...]:
    return tuple(f"{d}:{k}" for k in range(n // 2) for d in (0, 1))


def _validity_mask(n: int, matchings: Sequence[Matching]) -> np.ndarray:
    """valid[x, M, a, b]: <a, i xor j> xor d == x_i xor x_j for b = (d, k-th edge)."""
    log_n = n.bit_length() - 1
    xs = np.arange(2**n)
    # x_k is the k-th character of the label, the most significant of n bits
    x_bits = (xs[:, None] >> (n - np.arange(1, n + 1))[None, :]) & 1
    inner = np.array([[_inner(a, w) for w in range(n)] for a in range(2**log_n)])
    ny = len(matchings)
    mask = np.zeros((2**n, ny, n, n), dtype=bool)
    for m, matching in enumerate(matchings):
        for k, (i, j) in enumerate(matching.edges):
            parity = x_bits[:, i - 1] ^ x_bits[:, j - 1]
            w = (i - 1) ^ (j - 1)
            for d in (0, 1):
                lhs = inner[:, w] ^ d
                mask[:, m, :, 2 * k + d] = lhs[None, :] == parity[:, None]
    return mask


def hm_labels(n: int, matchings: Sequence[Matching]) -> tuple[tuple[str, ...], ...]:
    log_n = n.bit_length() - 1
    return (
        bit_labels(n),
        tuple(m.label for m in matchings),
        bit_labels(log_n),
        bob_labels(n),
    )


def _table_size(n: int) -> int:
    return 2**n * matching_count(n) * n * n


def hm_distribution(n: int, settings: Settings | None = None) -> Dist:
    """HM(a, d, i, j | x, M) = 2/n^2 on valid tuples, 0 elsewhere."""
    settings = settings or Settings()
    _check_power_of_two(n)
    size = _table_size(n)
    if size > settings.enumeration_cap:
        raise TooLargeError(f"Hidden Matching table for n = {n}", size, settings.enumeration_cap)
    matchings = enumerate_matchings(n, settings.enumeration_cap)
    mask = _validity_mask(n, matchings)
    probs = np.empty(mask.shape, dtype=object)
    probs.fill(ZERO)
    probs[mask] = Fraction(2, n * n)
    x, y, a, b = hm_labels(n, matchings)
    log.info(f"HM distribution n = {n}: {size} entries")
    return Dist(x, y, a, b, probs, DistMetadata(False, f"hidden_matching(n={n})"))


@dataclass(frozen=True)
class HMBellParams:
    """Parameters of the Hidden Matching functional.

    ``scale`` approximates 2^(sqrt(n-1)/(2C)) with relative error ``scale_error``; every
    derived quantity uses this one rationalization.
    """

    n: int
    C: Fraction
    scale: Fraction
    scale_error: Fraction
    mu: Fraction
    phi: Fraction
    matchings: int

    @property
    def closed_form(self) -> Fraction:
        """scale / (2n), the value of the functional on HM."""
        return self.scale / (2 * self.n)


def rationalize_scale(
    n: int, C: Fraction, tolerance: Fraction, start: int
) -> tuple[Fraction, Fraction]:
    """(r, err) with r rational and |r - 2^(sqrt(n-1)/(2C))| / 2^(...) = err <= tolerance."""
    with localcontext() as ctx:
        ctx.prec = SCALE_PRECISION
        exponent = Decimal(n - 1).sqrt() / (2 * Decimal(C.numerator) / Decimal(C.denominator))
        exact = Fraction(Decimal(2) ** exponent)
    limit = start
    while True:
        r = exact.limit_denominator(limit)
        err = abs(r - exact) / exact
        if err <= tolerance:
            return r, err
        limit *= 2


def hm_params(n: int, C: Fraction = Fraction(1), settings: Settings | None = None) -> HMBellParams:
    settings = settings or Settings()
    _check_power_of_two(n)
    C = Fraction(C)
    if C <= 0:
        raise InputError(f"C must be positive, got {C}")
    scale, err = rationalize_scale(n, C, settings.scale_tolerance, settings.denominator_limit)
    count = matching_count(n)
    params = HMBellParams(
        n=n,
        C=C,
        scale=scale,
        scale_error=err,
        mu=-scale / (n * 2 ** (n + 1) * count),
        phi=scale / (n * 2**n * count),
        matchings=count,
    )
    log.debug(f"HM scale for n = {n}, C = {C}: {scale} (relative error {float(err):.3g})")
    return params


def hm_bell(
    n: int, C: Fraction = Fraction(1), settings: Settings | None = None
) -> tuple[BellFunctional, HMBellParams]:
    """B = phi' + mu with phi' = +phi on valid tuples and -phi elsewhere."""
    settings = settings or Settings()
    _check_power_of_two(n)
    size = _table_size(n)
    if size > settings.enumeration_cap:
        raise TooLargeError(
            f"Hidden Matching functional for n = {n}", size, settings.enumeration_cap
        )
    params = hm_params(n, C, settings)
    mask = _validity_mask(n, enumerate_matchings(n, settings.enumeration_cap))
    table = np.empty(mask.shape, dtype=object)
    table.fill(params.mu - params.phi)
    table[mask] = params.mu + params.phi
    # [x, M, a, b] -> [a, b, x, M]
    return BellFunctional(table.transpose(2, 3, 0, 1)), params


@dataclass(frozen=True)
class ObjectiveCheck:
    computed: Fraction
    closed_form: Fraction
    equal: bool
    params: HMBellParams


def hm_objective_check(
    n: int, C: Fraction = Fraction(1), settings: Settings | None = None
) -> ObjectiveCheck:
    """B(HM) computed entry by entry against scale / (2n)."""
    from belleff.certificates import bell_value

    functional, params = hm_bell(n, C, settings)
    computed = bell_value(functional, hm_distribution(n, settings))
    return ObjectiveCheck(computed, params.closed_form, computed == params.closed_form, params)


@dataclass(frozen=True)
class ScanRow:
    C: Fraction | None
    maximum: Fraction
    witness: DetStrategy
    feasible: bool


def hm_constraint_scan(
    n: int, C: Fraction = Fraction(1), settings: Settings | None = None
) -> ScanRow:
    """max B(l) over strategies where only Alice aborts; reported, not asserted."""
    settings = settings or Settings()
    functional, params = hm_bell(n, C, settings)
    maximum, witness = max_bell_value(
        functional, StrategyClass.ALICE_ABORT, settings.enumeration_cap
    )
    log.info(f"HM scan n = {n}, C = {params.C}: max {float(maximum):.6g}")
    return ScanRow(params.C, maximum, witness, maximum <= 1)


def hm_scan_table(
    n: int, Cs: Iterable[Fraction], settings: Settings | None = None
) -> list[ScanRow]:
    """One row per C, then the all-zero functional as a sanity row (C = None)."""
    settings = settings or Settings()
    rows = [hm_constraint_scan(n, Fraction(C), settings) for C in Cs]
    matchings = matching_count(n)
    zero = zero_functional((2**n, matchings, n, n))
    maximum, witness = max_bell_value(zero, StrategyClass.ALICE_ABORT, settings.enumeration_cap)
    rows.append(ScanRow(None, maximum, witness, maximum <= 1))
    return rows


def hm_quantum_setup(n: int) -> QuantumSetup:
    """Measurements on a maximally entangled n-dimensional pair that produce HM exactly.

    Alice applies the phase (-1)^(x_k) and measures in the Hadamard basis indexed by a; Bob
    measures in {(|i> +- |j>)/sqrt(2)} over the edges of his matching.
    """
    _check_power_of_two(n)
    matchings = enumerate_matchings(n)
    log_n = n.bit_length() - 1
    state = np.eye(n, dtype=complex).reshape(-1) / math.sqrt(n)
    alice = []
    for x in range(2**n):
        x_bits = [(x >> (n - k)) & 1 for k in range(1, n + 1)]
        basis = np.array(
            [
                [(-1) ** (x_bits[k] + _inner(a, k)) for k in range(n)]
                for a in range(2**log_n)
            ],
            dtype=complex,
        )
        alice.append(basis / math.sqrt(n))
    bob = []
    for matching in matchings:
        basis = np.zeros((n, n), dtype=complex)
        for k, (i, j) in enumerate(matching.edges):
            for d in (0, 1):
                basis[2 * k + d, i - 1] = 1
                basis[2 * k + d, j - 1] = (-1) ** d
        bob.append(basis / math.sqrt(2))
    x_labels, y_labels, a_labels, b_labels = hm_labels(n, matchings)
    return QuantumSetup(state, alice, bob, a_labels, b_labels, x_labels, y_labels)


def _as_codes(subset: Iterable[str | int], n: int) -> np.ndarray:
    codes = []
    for x in subset:
        if isinstance(x, str):
            if len(x) != n or set(x) - {"0", "1"}:
                raise InputError(f"{x!r} is not an {n}-bit string")
            x = int(x, 2)
        if not 0 <= int(x) < 2**n:
            raise InputError(f"{x} is not a point of the {n}-cube")
        codes.append(int(x))
    codes = sorted(set(codes))
    if not codes:
        raise InputError("Fourier mass needs a nonempty subset")
    return np.array(codes)


def _pair_characters(n: int, codes: np.ndarray) -> np.ndarray:
    """chi[x, S] = (-1)^(x_i + x_j) for each two-element S = {i, j}, as +-1 ints."""
    bits = (codes[:, None] >> (n - np.arange(1, n + 1))[None, :]) & 1
    pairs = list(itertools.combinations(range(n), 2))
    parity = np.array([bits[:, i] ^ bits[:, j] for i, j in pairs]).T.reshape(len(codes), len(pairs))
    return 1 - 2 * parity


def degree2_fourier_mass(subset: Iterable[str | int], n: int) -> Fraction:
    """sum over |S| = 2 of (mean over x in A of (-1)^(S.x))^2, exactly."""
    codes = _as_codes(subset, n)
    sums = _pair_characters(n, codes).sum(axis=0)
    size = len(codes)
    return sum((Fraction(int(s), size) ** 2 for s in sums), ZERO)


def degree2_fourier_mass_pairwise(subset: Iterable[str | int], n: int) -> Fraction:
    """The same mass as an average over pairs (x, y) in A of sum_S chi_S(x xor y).

    With w ones in x xor y that inner sum is ((n - 2w)^2 - n) / 2.
    """
    codes = _as_codes(subset, n)
    total = 0
    for x in codes:
        for y in codes:
            w = int(x ^ y).bit_count()
            total += ((n - 2 * w) ** 2 - n) // 2
    return Fraction(total, len(codes) ** 2)


@dataclass(frozen=True)
class KKLScan:
    n: int
    constant: float
    subset: tuple[str, ...]
    mass: Fraction
    subsets: int


def kkl_scan(n: int) -> KKLScan:
    """Largest mass / log2(2^n / |A|)^2 over nonempty proper subsets A of the n-cube."""
    if not 2 <= n <= KKL_SCAN_MAX_N:
        raise InputError(f"Exhaustive subset scan supports 2 <= n <= {KKL_SCAN_MAX_N}, got {n}")
    points = 2**n
    masks = np.arange(1, 2**points - 1, dtype=np.int64)
    members = ((masks[:, None] >> np.arange(points)[None, :]) & 1).astype(np.int64)
    sizes = members.sum(axis=1)
    sums = members @ _pair_characters(n, np.arange(points))
    mass = ((sums / sizes[:, None]) ** 2).sum(axis=1)
    ratio = mass / np.log2(points / sizes) ** 2
    best = int(np.argmax(ratio))
    codes = [x for x in range(points) if members[best, x]]
    labels = tuple(format(x, f"0{n}b") for x in codes)
    log.info(f"KKL scan n = {n}: {len(masks)} subsets, constant {ratio[best]:.6g}")
    return KKLScan(n, float(ratio[best]), labels, degree2_fourier_mass(codes, n), len(masks))
