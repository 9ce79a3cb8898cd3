"""The block-production process as a two-state machine, and its complexity.

The mining loop oscillates between a "searching" state (almost all of the
time) and a "block found" state that immediately resets the search.  With a
per-attempt success probability p, assigning state probabilities (1-p, p)
gives a statistical complexity equal to the binary entropy H(p) -- a tiny
but nonzero number for realistic difficulties, which is the quantitative
heart of this toolkit.

Note the deliberate tension, kept visible rather than resolved: strict
causal-state inference on the attempt-by-attempt symbol stream (an i.i.d.
Bernoulli process) merges everything into ONE state with complexity zero,
whereas the two-state reading assigns H(p).  ``difficulty_report`` exposes
both probability routes side by side for the same reason.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .powchain import (
    DifficultyTarget,
    Hash256,
    difficulty_to_target,
    merkle_root,
    nonce_sequence,
)
from .symbolic import (
    CausalState,
    EpsilonMachine,
    ProbabilityDistribution,
    SymbolStream,
    statistical_complexity,
)

__all__ = [
    "TwoStateModel",
    "blockchain_machine",
    "mining_symbol_stream",
    "DifficultyReport",
    "difficulty_report",
]

_HASH_SPACE = 1 << 256

#: Symbols of the mining stream: 0 = attempt missed the target, 1 = block found.
MINING_ALPHABET = "01"


@dataclass(frozen=True)
class TwoStateModel:
    """Two-state block-production machine with per-attempt success probability p.

    State 0 keeps searching (self-loop emitting 0 with probability 1-p,
    jump to state 1 emitting 1 with probability p); state 1 deterministically
    returns to the search.  State probabilities are assigned as (1-p, p);
    for p near 1/2 this deviates from the stationary distribution of the
    transition structure, which would be (1/(1+p), p/(1+p)) -- the assignment
    is kept because it is what the two-state reading of mining uses.
    """

    success_probability: float
    machine: EpsilonMachine


def blockchain_machine(p: float) -> TwoStateModel:
    if not 0.0 < p < 1.0:
        raise ValueError(f"success probability must be in (0, 1), got {p!r}")
    searching = CausalState(0, ProbabilityDistribution({0: 1.0 - p, 1: p}), {0: 0, 1: 1})
    found = CausalState(1, ProbabilityDistribution({0: 1.0}), {0: 0})
    machine = EpsilonMachine(
        [searching, found],
        ProbabilityDistribution({0: 1.0 - p, 1: p}),
        MINING_ALPHABET,
    )
    return TwoStateModel(p, machine)


def mining_symbol_stream(target: DifficultyTarget, attempts: int, seed: int) -> SymbolStream:
    """One symbol per hash attempt: 1 when the attempt beat the target.

    Runs the random-mode nonce generator against real headers, starting a
    fresh header (new parent hash and payload) after every found block.
    Deterministic for a fixed seed.
    """
    if attempts < 1:
        raise ValueError("attempts must be >= 1")
    threshold = target.target
    out = np.zeros(attempts, dtype=np.int64)
    block_index = 0
    parent = Hash256(0)
    merkle = merkle_root([b"block 0"])
    prefix = (parent.hex + merkle.hex).encode("ascii")
    nonces = nonce_sequence("random", seed=seed)
    for i in range(attempts):
        digest = hashlib.sha256(prefix + format(next(nonces), "08x").encode("ascii")).digest()
        if int.from_bytes(digest, "big") < threshold:
            out[i] = 1
            block_index += 1
            parent = Hash256.from_digest(digest)
            merkle = merkle_root([b"block %d" % block_index])
            prefix = (parent.hex + merkle.hex).encode("ascii")
    return SymbolStream(MINING_ALPHABET, out)


@dataclass(frozen=True)
class DifficultyReport:
    """End-to-end chain of values from a difficulty to a complexity figure.

    Two probability routes are reported: ``p_from_zeros`` estimates the
    per-attempt success probability from the count of leading hex zeros of
    the target (16**-zeros), ``p_exact`` is the exact ratio target / 2**256.
    ``complexity_bits`` follows the zeros route, ``complexity_bits_exact``
    the exact one.  ``assumed_zeros`` differs from ``leading_zeros`` only
    when the caller overrides the count to match an external analysis.
    """

    difficulty: float
    target: int
    target_hex: str
    leading_zeros: int
    assumed_zeros: int
    p_from_zeros: float
    p_exact: float
    state_prob_searching: float
    state_prob_found: float
    complexity_bits: float
    complexity_bits_exact: float


def difficulty_report(difficulty: float, assumed_zeros: int | None = None) -> DifficultyReport:
    """Work a difficulty through target, success probability, and complexity.

    ``assumed_zeros`` overrides the leading-zero count used for the 16**-k
    probability route (the honest count of the target's hex rendering is
    still reported as ``leading_zeros``).
    """
    dt = difficulty_to_target(difficulty)
    hexs = format(dt.target, "064x")
    zeros = len(hexs) - len(hexs.lstrip("0"))
    k = zeros if assumed_zeros is None else assumed_zeros
    if not 0 <= k <= 64:
        raise ValueError(f"assumed_zeros must be in [0, 64], got {k}")
    p_zeros = 16.0 ** (-k)
    p_exact = dt.target / _HASH_SPACE
    return DifficultyReport(
        difficulty=float(difficulty),
        target=dt.target,
        target_hex=hexs,
        leading_zeros=zeros,
        assumed_zeros=k,
        p_from_zeros=p_zeros,
        p_exact=p_exact,
        state_prob_searching=1.0 - p_zeros,
        state_prob_found=p_zeros,
        complexity_bits=statistical_complexity(blockchain_machine(p_zeros).machine),
        complexity_bits_exact=statistical_complexity(blockchain_machine(p_exact).machine),
    )
