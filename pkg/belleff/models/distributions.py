# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Finite conditional distributions p(a,b|x,y) with exact rational entries."""

from __future__ import annotations

import itertools
import math
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from belleff.core.errors import InputError

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)

QUANTUM_TOLERANCE = 1e-12


@dataclass(frozen=True)
class DistMetadata:
    approximate: bool = False
    source: str = ""


def rational_table(shape: tuple[int, ...], fill: Fraction = ZERO) -> np.ndarray:
    """Object array of the given shape, every cell the same Fraction."""
    table = np.empty(shape, dtype=object)
    table.fill(fill)
    return table


def freeze(table: np.ndarray) -> np.ndarray:
    table = np.array(table, dtype=object)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, eq=False)
class Dist:
    """p(a,b|x,y) stored as an object array indexed ``[x, y, a, b]``."""

    x_labels: tuple[str, ...]
    y_labels: tuple[str, ...]
    a_labels: tuple[str, ...]
    b_labels: tuple[str, ...]
    probs: np.ndarray
    metadata: DistMetadata = field(default_factory=DistMetadata)

    def __post_init__(self) -> None:
        for name in ("x_labels", "y_labels", "a_labels", "b_labels"):
            labels = tuple(str(v) for v in getattr(self, name))
            if not labels:
                raise InputError(f"{name} must be non-empty")
            if len(set(labels)) != len(labels):
                raise InputError(f"{name} contains duplicates: {labels}")
            object.__setattr__(self, name, labels)
        probs = freeze(self.probs)
        if probs.shape != self.sizes:
            raise InputError(f"probs has shape {probs.shape}, labels give {self.sizes}")
        for idx, v in np.ndenumerate(probs):
            if not isinstance(v, Fraction):
                if isinstance(v, int) and not isinstance(v, bool):
                    continue
                raise InputError(f"Entry {idx} is {type(v).__name__}, expected a rational")
        if (probs < 0).any():
            raise InputError("Probabilities must be non-negative")
        totals = probs.sum(axis=(2, 3))
        for (x, y), total in np.ndenumerate(totals):
            if total != 1:
                raise InputError(
                    f"p(.,.|{self.x_labels[x]},{self.y_labels[y]}) sums to {total}, not 1"
                )
        object.__setattr__(self, "probs", probs)

    @property
    def sizes(self) -> tuple[int, int, int, int]:
        return (len(self.x_labels), len(self.y_labels), len(self.a_labels), len(self.b_labels))

    @property
    def labels(self) -> tuple[tuple[str, ...], ...]:
        return (self.x_labels, self.y_labels, self.a_labels, self.b_labels)

    def prob(self, x: int, y: int, a: int, b: int) -> Fraction:
        return Fraction(self.probs[x, y, a, b])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Dist):
            return NotImplemented
        return (
            self.labels == other.labels
            and self.metadata == other.metadata
            and bool(np.array_equal(self.probs, other.probs))
        )

    __hash__ = None  # type: ignore[assignment]


def _check_same_labels(p: Dist, p2: Dist) -> None:
    if p.labels != p2.labels:
        raise InputError(f"Label sets differ: {p.sizes} vs {p2.sizes}")


def from_table(
    labels: Sequence[Sequence[str]],
    entry: Callable[[int, int, int, int], Fraction],
    source: str = "",
) -> Dist:
    """Build a Dist from a function of the label indices."""
    x_labels, y_labels, a_labels, b_labels = (tuple(ls) for ls in labels)
    shape = (len(x_labels), len(y_labels), len(a_labels), len(b_labels))
    probs = rational_table(shape)
    for idx in np.ndindex(*shape):
        probs[idx] = Fraction(entry(*idx))
    return Dist(x_labels, y_labels, a_labels, b_labels, probs, DistMetadata(False, source))


def bit_labels(bits: int) -> tuple[str, ...]:
    """All bit strings of the given length in lexicographic order."""
    if bits < 0:
        raise InputError(f"Bit length must be non-negative, got {bits}")
    return tuple("".join(t) for t in itertools.product("01", repeat=bits)) if bits else ("",)


_NAMED_FUNCTIONS: dict[str, Callable[[str, str], int]] = {
    "and": lambda x, y: int(all(c == "1" for c in x + y)),
    "or": lambda x, y: int(any(c == "1" for c in x + y)),
    "xor": lambda x, y: (x + y).count("1") % 2,
    "eq": lambda x, y: int(x == y),
    "ip": lambda x, y: sum(int(u) * int(v) for u, v in zip(x, y)) % 2,
    "gt": lambda x, y: int(int(x, 2) > int(y, 2)),
    "zero": lambda x, y: 0,
    "one": lambda x, y: 1,
}
FUNCTION_NAMES = tuple(_NAMED_FUNCTIONS)


def boolean_function(name: str, bits: int = 1) -> dict[tuple[str, str], int]:
    """Truth table of a named two-party function on ``bits``-bit inputs."""
    if name not in _NAMED_FUNCTIONS:
        raise InputError(f"Unknown function {name!r}; expected one of {FUNCTION_NAMES}")
    if bits < 1:
        raise InputError(f"Input length must be at least 1, got {bits}")
    f = _NAMED_FUNCTIONS[name]
    labels = bit_labels(bits)
    return {(x, y): f(x, y) for x in labels for y in labels}


def from_boolean_function(truth_table: Mapping[tuple[str, str], int], source: str = "") -> Dist:
    """p_f: uniform bits with a xor b = f(x, y)."""
    xs = tuple(dict.fromkeys(x for x, _ in truth_table))
    ys = tuple(dict.fromkeys(y for _, y in truth_table))
    for x in xs:
        for y in ys:
            if (x, y) not in truth_table:
                raise InputError(f"Truth table is not total: missing ({x}, {y})")
            if truth_table[(x, y)] not in (0, 1):
                raise InputError(f"f({x}, {y}) = {truth_table[(x, y)]!r} is not a bit")
    return from_table(
        (xs, ys, ("0", "1"), ("0", "1")),
        lambda x, y, a, b: HALF if a ^ b == truth_table[(xs[x], ys[y])] else ZERO,
        source or "p_f",
    )


def pr_box() -> Dist:
    """The PR box: a xor b = x and y, uniform marginals."""
    return from_table(
        (("0", "1"),) * 4,
        lambda x, y, a, b: HALF if a ^ b == x & y else ZERO,
        "pr_box",
    )


def uniform(sizes: tuple[int, int, int, int]) -> Dist:
    nx, ny, na, nb = sizes
    labels = [tuple(str(i) for i in range(k)) for k in sizes]
    return from_table(labels, lambda *_: Fraction(1, na * nb), "uniform")


def local_point(
    alice: Sequence[int], bob: Sequence[int], labels: Sequence[Sequence[str]]
) -> Dist:
    """Point distribution of the no-abort strategy x -> alice[x], y -> bob[y]."""
    return from_table(
        labels,
        lambda x, y, a, b: ONE if alice[x] == a and bob[y] == b else ZERO,
        "local_point",
    )


def mixture(weights: Sequence[Fraction], dists: Sequence[Dist]) -> Dist:
    """Exact convex combination of distributions over the same labels."""
    if len(weights) != len(dists) or not dists:
        raise InputError("mixture needs one weight per distribution")
    weights = [Fraction(w) for w in weights]
    if any(w < 0 for w in weights) or sum(weights) != 1:
        raise InputError(f"Mixture weights must be non-negative and sum to 1, got {weights}")
    for d in dists[1:]:
        _check_same_labels(dists[0], d)
    probs = sum((w * d.probs for w, d in zip(weights, dists)), rational_table(dists[0].sizes))
    first = dists[0]
    return Dist(
        first.x_labels,
        first.y_labels,
        first.a_labels,
        first.b_labels,
        probs,
        DistMetadata(any(d.metadata.approximate for d in dists), "mixture"),
    )


def l1_distance(p: Dist, p2: Dist) -> Fraction:
    """max over (x, y) of sum_{a,b} |p - p2|."""
    _check_same_labels(p, p2)
    per_input = np.abs(p.probs - p2.probs).sum(axis=(2, 3))
    return max(Fraction(v) for v in per_input.flat)


def marginals(p: Dist) -> tuple[np.ndarray, np.ndarray]:
    """(p(a|x,y) indexed [x, y, a], p(b|x,y) indexed [x, y, b])."""
    return p.probs.sum(axis=3), p.probs.sum(axis=2)


def is_nonsignaling(p: Dist) -> bool:
    alice, bob = marginals(p)
    alice_ok = all(np.array_equal(alice[:, y, :], alice[:, 0, :]) for y in range(alice.shape[1]))
    bob_ok = all(np.array_equal(bob[x, :, :], bob[0, :, :]) for x in range(bob.shape[0]))
    return alice_ok and bob_ok


@dataclass(frozen=True, eq=False)
class QuantumSetup:
    """Pure bipartite state and projective measurements, one orthonormal basis per input.

    ``alice_measurements[x][a]`` is the basis vector for outcome a on input x; likewise for Bob.
    """

    state: np.ndarray
    alice_measurements: Sequence[np.ndarray]
    bob_measurements: Sequence[np.ndarray]
    a_labels: tuple[str, ...] = ()
    b_labels: tuple[str, ...] = ()
    x_labels: tuple[str, ...] = ()
    y_labels: tuple[str, ...] = ()
    denominator_limit: int = 10**6

    @property
    def dims(self) -> tuple[int, int]:
        return (self.alice_measurements[0].shape[1], self.bob_measurements[0].shape[1])


def _check_basis(basis: np.ndarray, dim: int, who: str, index: int) -> None:
    if basis.ndim != 2 or basis.shape[1] != dim:
        raise InputError(f"{who} basis {index} has shape {basis.shape}, expected (k, {dim})")
    gram = basis.conj() @ basis.T
    if basis.shape[0] != dim or not np.allclose(gram, np.eye(dim), atol=QUANTUM_TOLERANCE):
        raise InputError(f"{who} basis {index} is not a complete orthonormal basis")


def rationalize(value: float, denominator_limit: int) -> Fraction:
    """Continued-fraction rounding of a float with a denominator cap."""
    return Fraction(value).limit_denominator(denominator_limit)


def from_quantum(setup: QuantumSetup, source: str = "quantum") -> Dist:
    """Born-rule probabilities, rationalized and renormalized per input pair."""
    alice = [np.asarray(m, dtype=complex) for m in setup.alice_measurements]
    bob = [np.asarray(m, dtype=complex) for m in setup.bob_measurements]
    if not alice or not bob:
        raise InputError("Each side needs at least one measurement")
    d_a, d_b = alice[0].shape[1], bob[0].shape[1]
    state = np.asarray(setup.state, dtype=complex).reshape(-1)
    if state.shape != (d_a * d_b,):
        raise InputError(f"State has {state.size} amplitudes, expected {d_a}*{d_b}")
    if abs(np.linalg.norm(state) - 1) > QUANTUM_TOLERANCE:
        raise InputError(f"State is not normalized (norm {np.linalg.norm(state)})")
    for i, m in enumerate(alice):
        _check_basis(m, d_a, "Alice", i)
    for i, m in enumerate(bob):
        _check_basis(m, d_b, "Bob", i)
    if setup.denominator_limit < 1:
        raise InputError("denominator_limit must be positive")

    psi = state.reshape(d_a, d_b)
    shape = (len(alice), len(bob), d_a, d_b)
    probs = rational_table(shape)
    for x, basis_a in enumerate(alice):
        for y, basis_b in enumerate(bob):
            # amplitude[a, b] = <e_a (x) f_b | psi>
            amplitudes = basis_a.conj() @ psi @ basis_b.conj().T
            raw = [
                rationalize(float(abs(v) ** 2), setup.denominator_limit) for v in amplitudes.flat
            ]
            total = sum(raw, ZERO)
            if total == 0:
                raise InputError(f"All probabilities rounded to zero for input ({x}, {y})")
            probs[x, y] = np.array([r / total for r in raw], dtype=object).reshape(d_a, d_b)

    def labels(given: tuple[str, ...], k: int) -> tuple[str, ...]:
        return given if given else tuple(str(i) for i in range(k))

    return Dist(
        labels(setup.x_labels, len(alice)),
        labels(setup.y_labels, len(bob)),
        labels(setup.a_labels, d_a),
        labels(setup.b_labels, d_b),
        probs,
        DistMetadata(True, source),
    )


def _real_basis(angle: float) -> np.ndarray:
    return np.array([[math.cos(angle), math.sin(angle)], [-math.sin(angle), math.cos(angle)]])


def phi_plus_setup() -> QuantumSetup:
    """(|00> + |11>)/sqrt(2), computational bases on both sides."""
    state = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    return QuantumSetup(state, [np.eye(2)], [np.eye(2)], ("0", "1"), ("0", "1"))


def chsh_setup(denominator_limit: int = 10**6) -> QuantumSetup:
    """Maximally entangled pair with the Tsirelson measurement angles.

    Gives p(a,b|x,y) = (2 +- sqrt(2))/8 with a xor b = x and y favoured.
    """
    state = np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2)
    alice = [_real_basis(0.0), _real_basis(math.pi / 4)]
    bob = [_real_basis(math.pi / 8), _real_basis(-math.pi / 8)]
    return QuantumSetup(
        state,
        alice,
        bob,
        ("0", "1"),
        ("0", "1"),
        ("0", "1"),
        ("0", "1"),
        denominator_limit,
    )
