# SPDX-License-Identifier: MIT
# Copyright (c) 2026 Stuart Alldred.

"""Repeated-run amplification of abort strategies and Monte Carlo validation."""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from belleff.core.errors import InputError
from belleff.core.log import get_logger
from belleff.models.distributions import Dist
from belleff.models.strategies import DetStrategy
from belleff.protocols.reductions import nonabort_probability
from belleff.utils import ceil_log2

ZERO = Fraction(0)
ONE = Fraction(1)

ABORT = -1
SIGMA_BAND = 3

log = get_logger("simulation")


class Simulator:
    """Referee for a strategy mixture run ``runs`` times per round.

    Each run draws an independent strategy; the round reports the outcome of the first run
    that does not abort, or aborts if all of them do. ``seed`` seeds the simulator's own
    generator, used when ``sample`` is not handed one.
    """

    def __init__(
        self,
        mixture: Mapping[DetStrategy, Fraction],
        sizes: tuple[int, int, int, int],
        runs: int = 1,
        seed: int | None = None,
    ) -> None:
        if runs < 1:
            raise InputError(f"Simulator needs at least one run, got {runs}")
        if not mixture:
            raise InputError("Simulator needs a non-empty strategy mixture")
        total = sum(mixture.values(), ZERO)
        if total != 1 or any(w < 0 for w in mixture.values()):
            raise InputError(f"Mixture weights must be non-negative and sum to 1, got {total}")
        self.mixture = dict(mixture)
        self.sizes = sizes
        self.runs = runs
        self.seed = seed
        self.rng = np.random.default_rng(seed)
        self._strategies = list(self.mixture)
        self._probs = np.array([float(self.mixture[s]) for s in self._strategies])
        self._probs /= self._probs.sum()
        nx, ny, _, nb = sizes
        # codes[k, x, y] = a * |B| + b, or ABORT
        self._codes = np.full((len(self._strategies), nx, ny), ABORT, dtype=np.int64)
        for k, s in enumerate(self._strategies):
            for x, y in np.ndindex(nx, ny):
                outcome = s.outcome(x, y)
                if outcome is not None:
                    self._codes[k, x, y] = outcome[0] * nb + outcome[1]

    def run_efficiency(self, x: int, y: int) -> Fraction:
        """Probability that a single run does not abort on (x, y)."""
        return nonabort_probability(self.mixture, x, y)

    def abort_probability(self, x: int, y: int) -> Fraction:
        """Exact probability that a whole round aborts on (x, y)."""
        return (1 - self.run_efficiency(x, y)) ** self.runs

    def sample(
        self, x: int, y: int, rounds: int, rng: np.random.Generator | None = None
    ) -> np.ndarray:
        """Outcome codes of ``rounds`` independent rounds; ABORT where every run aborted."""
        rng = self.rng if rng is None else rng
        picks = rng.choice(len(self._strategies), size=(rounds, self.runs), p=self._probs)
        codes = self._codes[picks, x, y]
        answered = codes != ABORT
        first = answered.argmax(axis=1)
        result = codes[np.arange(rounds), first]
        result[~answered.any(axis=1)] = ABORT
        return result


@dataclass(frozen=True)
class Amplification:
    runs: int
    zeta: Fraction
    eta: Fraction
    abort_probability: Fraction
    simultaneous_bits: int
    index_bits: int
    simulator: Simulator

    @property
    def meets_target(self) -> bool:
        return self.abort_probability <= 1 - self.eta


def run_count(zeta: Fraction, eta: Fraction) -> int:
    """N = ceil(ln(1 / (1 - eta)) / zeta), and 1 when zeta = 1."""
    zeta, eta = Fraction(zeta), Fraction(eta)
    if not 0 < eta < 1:
        raise InputError(f"eta must be in (0, 1), got {eta}")
    if not 0 < zeta <= 1:
        raise InputError(f"zeta must be in (0, 1], got {zeta}")
    if zeta == 1:
        return 1
    with localcontext() as ctx:
        ctx.prec = 50
        log_term = (Decimal(eta.denominator) / Decimal(eta.denominator - eta.numerator)).ln()
        ratio = log_term * Decimal(zeta.denominator) / Decimal(zeta.numerator)
    return max(1, math.ceil(ratio))


def amplify_sm(
    mixture: Mapping[DetStrategy, Fraction],
    zeta: Fraction,
    eta: Fraction,
    sizes: tuple[int, int, int, int],
    rng_seed: int | None = None,
) -> Amplification:
    """Repeat the mixture N times so a round aborts with probability (1 - zeta)^N <= 1 - eta.

    Simultaneous messages send every run's outcome; the one-way variant only has Alice send
    the index of her first non-aborting run.
    """
    zeta, eta = Fraction(zeta), Fraction(eta)
    runs = run_count(zeta, eta)
    _, _, na, nb = sizes
    abort = (1 - zeta) ** runs
    result = Amplification(
        runs=runs,
        zeta=zeta,
        eta=eta,
        abort_probability=abort,
        simultaneous_bits=runs * ceil_log2(na * nb),
        index_bits=ceil_log2(runs),
        simulator=Simulator(mixture, sizes, runs, rng_seed),
    )
    log.info(f"amplify: zeta {zeta}, eta {eta} -> N = {runs}, abort {abort}")
    return result


@dataclass(frozen=True)
class InputSample:
    """One input pair's sample. ``within`` is None when every round aborted, so there is no
    conditional distribution to compare."""

    x: int
    y: int
    empirical: np.ndarray
    abort_rate: float
    expected_abort: Fraction
    abort_band: float
    abort_ok: bool
    deviation: float | None
    tolerance: float | None
    within: bool | None

    @property
    def status(self) -> str:
        if not self.abort_ok:
            return "abort-rate"
        if self.within is None:
            return "no-data"
        return "ok" if self.within else "deviation"


@dataclass(frozen=True)
class MonteCarloReport:
    samples: int
    seed: int
    inputs: tuple[InputSample, ...]

    @property
    def passed(self) -> bool:
        return all(s.status in ("ok", "no-data") for s in self.inputs)


def monte_carlo(simulator: Simulator, target: Dist, samples: int, seed: int) -> MonteCarloReport:
    """Sample every input pair and compare against exact abort rates and the target."""
    if samples < 1:
        raise InputError(f"samples must be at least 1, got {samples}")
    if target.sizes != simulator.sizes:
        raise InputError(f"Target sizes {target.sizes} differ from simulator {simulator.sizes}")
    rng = np.random.default_rng(seed)
    nx, ny, na, nb = target.sizes
    reports = []
    for x, y in np.ndindex(nx, ny):
        codes = simulator.sample(x, y, samples, rng)
        answered = codes[codes != ABORT]
        abort_rate = 1 - len(answered) / samples
        expected = simulator.abort_probability(x, y)
        q = float(expected)
        band = SIGMA_BAND * math.sqrt(q * (1 - q) / samples)
        abort_ok = abs(abort_rate - q) <= band
        empirical = np.zeros((na, nb))
        deviation = tolerance = None
        within = None
        if len(answered):
            counts = np.bincount(answered, minlength=na * nb)
            empirical = (counts / len(answered)).reshape(na, nb)
            exact = np.array(target.probs[x, y], dtype=float)
            deviation = float(np.abs(empirical - exact).sum())
            tolerance = SIGMA_BAND * math.sqrt(na * nb / len(answered))
            within = deviation <= tolerance
        reports.append(
            InputSample(
                x, y, empirical, abort_rate, expected, band, abort_ok, deviation, tolerance, within
            )
        )
    report = MonteCarloReport(samples, seed, tuple(reports))
    if any(s.within is None for s in reports):
        log.warning("monte carlo: some input pairs aborted on every sample")
    log.info(f"monte carlo: {samples} samples per input, passed = {report.passed}")
    return report
