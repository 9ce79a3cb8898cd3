"""Canonical worked-example machines used throughout the tests and the CLI.

All four live on the binary alphabet "01".  The crystal never changes, the
fair coin is pure noise, the tick-tock clock alternates, and the golden-mean
process forbids consecutive ones.  Together they span the ordered / random /
structured corners of the complexity picture.
"""

from __future__ import annotations

from .symbolic import (
    CausalState,
    EpsilonMachine,
    ProbabilityDistribution,
    stationary_distribution,
)

__all__ = ["crystal", "fair_coin", "tick_tock", "golden_mean"]

ALPHABET = "01"


def _with_stationary(states: list[CausalState]) -> EpsilonMachine:
    probe = EpsilonMachine(
        states,
        ProbabilityDistribution({s.id: 1.0 / len(states) for s in states}),
        ALPHABET,
    )
    return EpsilonMachine(states, stationary_distribution(probe), ALPHABET)


def crystal() -> EpsilonMachine:
    """Perfectly ordered process: one state, always the same symbol."""
    s = CausalState(0, ProbabilityDistribution({0: 1.0}), {0: 0}, frozenset({(0,)}))
    return EpsilonMachine([s], ProbabilityDistribution({0: 1.0}), ALPHABET)


def fair_coin() -> EpsilonMachine:
    """Independent fair bits: one state, since no history helps prediction."""
    s = CausalState(0, ProbabilityDistribution({0: 0.5, 1: 0.5}), {0: 0, 1: 0})
    return EpsilonMachine([s], ProbabilityDistribution({0: 1.0}), ALPHABET)


def tick_tock() -> EpsilonMachine:
    """Period-2 clock: tick emits 1 into tock, tock emits 0 into tick."""
    tick = CausalState(0, ProbabilityDistribution({1: 1.0}), {1: 1})
    tock = CausalState(1, ProbabilityDistribution({0: 1.0}), {0: 0})
    return _with_stationary([tick, tock])


def golden_mean(p_one: float = 0.5) -> EpsilonMachine:
    """No-consecutive-ones process: emit 1 with probability ``p_one`` when allowed.

    State 0 may emit either symbol; state 1 (just emitted a one) must emit 0.
    For the default p_one = 1/2 the stationary distribution is (2/3, 1/3).
    """
    if not 0.0 < p_one < 1.0:
        raise ValueError("p_one must be in (0, 1)")
    free = CausalState(0, ProbabilityDistribution({0: 1.0 - p_one, 1: p_one}), {0: 0, 1: 1})
    after_one = CausalState(1, ProbabilityDistribution({0: 1.0}), {0: 0})
    return _with_stationary([free, after_one])
