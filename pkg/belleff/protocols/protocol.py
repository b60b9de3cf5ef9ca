# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Deterministic two-party protocols with fixed-length transcripts, and finite mixtures of them."""

from __future__ import annotations

import itertools
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from belleff.core.errors import InputError
from belleff.models.distributions import Dist, DistMetadata, rational_table
from belleff.models.strategies import DetStrategy

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)
BITS = ("0", "1")


@dataclass(frozen=True)
class CommProtocol:
    """One deterministic protocol.

    ``transcript[x][y]`` is the c-bit string exchanged on (x, y). ``alice_out[(x, T)]`` and
    ``bob_out[(y, T)]`` are output indices; they only need entries for transcripts that can
    occur with that input.
    """

    c: int
    transcript: tuple[tuple[str, ...], ...]
    alice_out: Mapping[tuple[int, str], int]
    bob_out: Mapping[tuple[int, str], int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "transcript", tuple(tuple(row) for row in self.transcript))
        object.__setattr__(self, "alice_out", dict(self.alice_out))
        object.__setattr__(self, "bob_out", dict(self.bob_out))
        if self.c < 0:
            raise InputError(f"Transcript length must be non-negative, got {self.c}")
        if not self.transcript or not self.transcript[0]:
            raise InputError("Protocol needs at least one input on each side")

    @property
    def input_sizes(self) -> tuple[int, int]:
        return len(self.transcript), len(self.transcript[0])

    def alice_view(self, x: int) -> frozenset[str]:
        """Transcripts consistent with Alice's input."""
        return frozenset(self.transcript[x])

    def bob_view(self, y: int) -> frozenset[str]:
        return frozenset(row[y] for row in self.transcript)


@dataclass(frozen=True)
class ProtocolMixture:
    """Shared randomness as an explicit finite mixture of deterministic protocols."""

    labels: tuple[tuple[str, ...], ...]
    components: tuple[tuple[Fraction, CommProtocol], ...]
    source: str = ""

    def __post_init__(self) -> None:
        labels = tuple(tuple(str(v) for v in side) for side in self.labels)
        if len(labels) != 4 or any(not side for side in labels):
            raise InputError("Protocol labels need non-empty x, y, a and b lists")
        object.__setattr__(self, "labels", labels)
        components = tuple((Fraction(w), p) for w, p in self.components)
        if not components:
            raise InputError("Protocol mixture is empty")
        if any(w < 0 for w, _ in components) or sum(w for w, _ in components) != 1:
            raise InputError("Protocol weights must be non-negative and sum to 1")
        if len({p.c for _, p in components}) != 1:
            raise InputError("All protocols in a mixture must use the same transcript length")
        object.__setattr__(self, "components", components)

    @property
    def c(self) -> int:
        return self.components[0][1].c

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return tuple(len(side) for side in self.labels)  # type: ignore[return-value]


@dataclass(frozen=True)
class ProtocolReport:
    valid: bool
    violations: tuple[str, ...] = field(default_factory=tuple)
    witness: tuple[int, int, int, int] | None = None


def _check_component(p: CommProtocol, sizes: Sequence[int]) -> list[str]:
    nx, ny, na, nb = sizes
    problems = []
    if p.input_sizes != (nx, ny) or any(len(row) != ny for row in p.transcript):
        return [f"transcript table is not {nx} x {ny}"]
    for x, y in np.ndindex(nx, ny):
        t = p.transcript[x][y]
        if len(t) != p.c or set(t) - set(BITS):
            problems.append(f"transcript({x},{y}) = {t!r} is not a {p.c}-bit string")
    for x in range(nx):
        for t in p.alice_view(x):
            a = p.alice_out.get((x, t))
            if a is None or not 0 <= a < na:
                problems.append(f"alice_out({x}, {t!r}) missing or out of range")
    for y in range(ny):
        for t in p.bob_view(y):
            b = p.bob_out.get((y, t))
            if b is None or not 0 <= b < nb:
                problems.append(f"bob_out({y}, {t!r}) missing or out of range")
    return problems


def rectangle_witness(p: CommProtocol) -> tuple[int, int, int, int] | None:
    """(x, x', y, y') with T(x, y') = T(x', y) != T(x, y), or None."""
    nx, ny = p.input_sizes
    t = p.transcript
    for x, x2 in itertools.product(range(nx), repeat=2):
        for y, y2 in itertools.product(range(ny), repeat=2):
            if t[x][y2] == t[x2][y] and t[x][y] != t[x][y2]:
                return x, x2, y, y2
    return None


def validate_protocol(mixture: ProtocolMixture) -> ProtocolReport:
    """Check shapes, output tables and the rectangle property of every component."""
    violations = []
    witness = None
    for k, (_, p) in enumerate(mixture.components):
        problems = _check_component(p, mixture.sizes)
        violations += [f"protocol {k}: {msg}" for msg in problems]
        if problems:
            continue
        found = rectangle_witness(p)
        if found is not None:
            x, x2, y, y2 = found
            violations.append(
                f"protocol {k}: rectangle property fails: T({x},{y2}) = T({x2},{y}) = "
                f"{p.transcript[x][y2]!r} but T({x},{y}) = {p.transcript[x][y]!r}"
            )
            witness = witness or found
    return ProtocolReport(not violations, tuple(violations), witness)


def require_valid(mixture: ProtocolMixture) -> None:
    report = validate_protocol(mixture)
    if not report.valid:
        raise InputError("Invalid protocol: " + "; ".join(report.violations))


def is_one_way(mixture: ProtocolMixture) -> bool:
    """True iff every transcript depends on Alice's input only."""
    return all(len(set(row)) == 1 for _, p in mixture.components for row in p.transcript)


def output_distribution(mixture: ProtocolMixture) -> Dist:
    """Exact p(a, b | x, y) produced by running the protocol."""
    require_valid(mixture)
    nx, ny, na, nb = mixture.sizes
    probs = rational_table((nx, ny, na, nb))
    for w, p in mixture.components:
        for x, y in np.ndindex(nx, ny):
            t = p.transcript[x][y]
            probs[x, y, p.alice_out[(x, t)], p.bob_out[(y, t)]] += w
    return Dist(*mixture.labels, probs, DistMetadata(False, mixture.source or "protocol"))


def single(p: CommProtocol, labels: Sequence[Sequence[str]], source: str = "") -> ProtocolMixture:
    return ProtocolMixture(tuple(tuple(side) for side in labels), ((ONE, p),), source)


def pr_protocol() -> ProtocolMixture:
    """One bit: Alice sends x. With shared bit r, Alice outputs r and Bob r xor (x and y)."""
    components = []
    for r in (0, 1):
        p = CommProtocol(
            c=1,
            transcript=tuple(tuple(str(x) for _ in range(2)) for x in range(2)),
            alice_out={(x, str(x)): r for x in range(2)},
            bob_out={(y, t): r ^ (int(t) & y) for y in range(2) for t in BITS},
        )
        components.append((HALF, p))
    return ProtocolMixture((BITS,) * 4, tuple(components), "pr_protocol")


def pad_protocol(mixture: ProtocolMixture, bits: int) -> ProtocolMixture:
    """Append ``bits`` dummy zero bits to every transcript."""
    if bits < 0:
        raise InputError(f"Padding must be non-negative, got {bits}")
    pad = "0" * bits
    components = []
    for w, p in mixture.components:
        components.append(
            (
                w,
                CommProtocol(
                    c=p.c + bits,
                    transcript=tuple(tuple(t + pad for t in row) for row in p.transcript),
                    alice_out={(x, t + pad): a for (x, t), a in p.alice_out.items()},
                    bob_out={(y, t + pad): b for (y, t), b in p.bob_out.items()},
                ),
            )
        )
    return ProtocolMixture(mixture.labels, tuple(components), f"{mixture.source}+pad{bits}")


def local_protocol(strategy: DetStrategy, labels: Sequence[Sequence[str]]) -> ProtocolMixture:
    """The zero-bit protocol of a no-abort deterministic strategy."""
    if None in strategy.alice or None in strategy.bob:
        raise InputError("A local protocol needs a strategy without aborts")
    nx, ny = len(strategy.alice), len(strategy.bob)
    p = CommProtocol(
        c=0,
        transcript=(("",) * ny,) * nx,
        alice_out={(x, ""): a for x, a in enumerate(strategy.alice)},
        bob_out={(y, ""): b for y, b in enumerate(strategy.bob)},
    )
    return single(p, labels, "local_protocol")


def xor_transcript_protocol() -> ProtocolMixture:
    """A table with T(x, y) = x xor y, which no real protocol can produce."""
    p = CommProtocol(
        c=1,
        transcript=tuple(tuple(str(x ^ y) for y in range(2)) for x in range(2)),
        alice_out={(x, t): 0 for x in range(2) for t in BITS},
        bob_out={(y, t): 0 for y in range(2) for t in BITS},
    )
    return single(p, (BITS,) * 4, "xor_transcript")
