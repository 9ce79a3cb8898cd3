"""Desk-scale proof-of-work chain: headers, Merkle roots, targets, mining.

A block header is three strings: the parent block hash, the Merkle root of
the block's transactions, and a 32-bit nonce.  A header is valid when the
SHA-256 of the ASCII concatenation ``parent_hex || merkle_hex || nonce_hex``
(64 + 64 + 8 lowercase characters) is numerically smaller than the difficulty
target.  This deliberately hashes the *hex text* once, not the 80-byte
little-endian binary header twice as the production Bitcoin client does; see
the README for the divergence note.

Also includes the birthday-bound collision arithmetic for 256-bit hashes.
"""

from __future__ import annotations

import base64
import hashlib
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, NamedTuple, Sequence

__all__ = [
    "MAX_TARGET",
    "Hash256",
    "BlockHeader",
    "Block",
    "DifficultyTarget",
    "Chain",
    "MineResult",
    "OrphanBlockError",
    "BlockValidationError",
    "header_hash",
    "merkle_root",
    "difficulty_to_target",
    "target_for_zeros",
    "leading_zero_probability",
    "mine",
    "validate_block",
    "collision_probability",
    "collision_horizon",
    "chain_to_json",
    "chain_from_json",
    "GENESIS_PAYLOAD",
]

#: Largest admissible difficulty-1 target: 0x00000000ffff << 208, i.e. the
#: 64-hex value 00000000ffff0000...0 (~2**224).
MAX_TARGET = 65535 << 208

_HASH_SPACE = 1 << 256
NONCE_BITS = 32
_NONCE_MASK = (1 << NONCE_BITS) - 1

GENESIS_PAYLOAD = b"genesis"


class OrphanBlockError(ValueError):
    """Block references a parent that is not in the chain."""


class BlockValidationError(ValueError):
    """Block failed validation; ``check`` names the failing rule."""

    def __init__(self, check: str, message: str):
        super().__init__(message)
        self.check = check


@dataclass(frozen=True)
class Hash256:
    """A 256-bit unsigned value with its canonical 64-hex rendering."""

    value: int

    def __post_init__(self):
        if not 0 <= self.value < _HASH_SPACE:
            raise ValueError("hash value out of 256-bit range")

    @property
    def hex(self) -> str:
        return format(self.value, "064x")

    @classmethod
    def from_hex(cls, text: str) -> "Hash256":
        if len(text) != 64 or text != text.lower():
            raise ValueError("expected 64 lowercase hex characters")
        return cls(int(text, 16))

    @classmethod
    def from_digest(cls, digest: bytes) -> "Hash256":
        return cls(int.from_bytes(digest, "big"))

    def __lt__(self, other) -> bool:
        return self.value < (other.value if isinstance(other, Hash256) else int(other))

    def __str__(self) -> str:
        return self.hex


ZERO_HASH = Hash256(0)


@dataclass(frozen=True)
class BlockHeader:
    parent_hash: Hash256
    merkle_root: Hash256
    nonce: int

    def __post_init__(self):
        if not 0 <= self.nonce <= _NONCE_MASK:
            raise ValueError("nonce must fit in 32 bits")

    def serialize(self) -> bytes:
        """The exact 136 ASCII bytes that get hashed."""
        return (self.parent_hash.hex + self.merkle_root.hex + format(self.nonce, "08x")).encode(
            "ascii"
        )


def header_hash(header: BlockHeader) -> Hash256:
    """Single SHA-256 over the header's 136-byte ASCII serialization."""
    return Hash256.from_digest(hashlib.sha256(header.serialize()).digest())


def merkle_root(tx_payloads: Sequence[bytes]) -> Hash256:
    """Merkle root of the payload list.

    Leaves are SHA-256 of each payload; parents hash the concatenation of the
    two 32-byte child digests; an odd level duplicates its last node.  A
    single leaf is its own root.
    """
    if not tx_payloads:
        raise ValueError("a block must carry at least one transaction payload")
    level = [hashlib.sha256(p).digest() for p in tx_payloads]
    while len(level) > 1:
        if len(level) % 2 == 1:
            level.append(level[-1])
        level = [
            hashlib.sha256(level[i] + level[i + 1]).digest() for i in range(0, len(level), 2)
        ]
    return Hash256.from_digest(level[0])


@dataclass(frozen=True)
class Block:
    header: BlockHeader
    transactions: tuple[bytes, ...]
    height: int

    @property
    def hash(self) -> Hash256:
        return header_hash(self.header)


@dataclass(frozen=True)
class DifficultyTarget:
    """256-bit acceptance threshold; hashes strictly below it validate.

    Difficulty-derived targets never exceed ``MAX_TARGET``; the constructor
    admits anything up to 2**256 so that accept-everything thresholds (k = 0
    leading zeros) remain expressible.
    """

    target: int
    difficulty: float | None = None

    def __post_init__(self):
        if not 0 < self.target <= _HASH_SPACE:
            raise ValueError("target must be in (0, 2**256]")

    @property
    def hex(self) -> str:
        return format(min(self.target, _HASH_SPACE - 1), "064x")

    def accepts(self, h: Hash256) -> bool:
        return h.value < self.target


def difficulty_to_target(difficulty: float) -> DifficultyTarget:
    """floor(MAX_TARGET / difficulty), computed in exact rational arithmetic."""
    if difficulty < 1:
        raise ValueError(f"difficulty must be >= 1, got {difficulty!r}")
    target = int(Fraction(MAX_TARGET) / Fraction(difficulty))
    return DifficultyTarget(target, float(difficulty))


def target_for_zeros(k: int) -> DifficultyTarget:
    """Threshold below which a hash shows at least ``k`` leading hex zeros: 16**(64-k)."""
    if not 0 <= k <= 64:
        raise ValueError(f"k must be in [0, 64], got {k}")
    return DifficultyTarget(16 ** (64 - k))


def leading_zero_probability(k: int) -> float:
    """Probability 16**-k that a uniform 256-bit hash has >= k leading hex zeros."""
    if not 0 <= k <= 64:
        raise ValueError(f"k must be in [0, 64], got {k}")
    return 16.0 ** (-k)


@dataclass(frozen=True)
class MineResult:
    """Outcome of a nonce search; ``found`` is False when the scan was exhausted."""

    nonce: int | None
    block_hash: Hash256 | None
    attempts: int

    @property
    def found(self) -> bool:
        return self.nonce is not None


def nonce_sequence(mode: str, start: int = 0, seed: int = 0) -> Iterator[int]:
    """Nonce scan order: wrap-around increments, or seeded uniform 32-bit draws."""
    if mode == "sequential":
        n = start & _NONCE_MASK
        while True:
            yield n
            n = (n + 1) & _NONCE_MASK
    elif mode == "random":
        rng = random.Random(seed)
        while True:
            yield rng.getrandbits(NONCE_BITS)
    else:
        raise ValueError(f"nonce_mode must be 'sequential' or 'random', got {mode!r}")


def mine(
    parent_hash: Hash256,
    merkle: Hash256,
    target: DifficultyTarget,
    nonce_start: int = 0,
    nonce_mode: str = "sequential",
    seed: int = 0,
    max_attempts: int = 10_000_000,
) -> MineResult:
    """Search nonces until the header hash drops below ``target``.

    Returns the first qualifying nonce in scan order together with the
    attempt count, or an exhausted ``MineResult`` after ``max_attempts``.
    """
    if max_attempts < 1:
        raise ValueError("max_attempts must be >= 1")
    prefix = (parent_hash.hex + merkle.hex).encode("ascii")
    threshold = target.target
    attempts = 0
    for nonce in nonce_sequence(nonce_mode, nonce_start, seed):
        attempts += 1
        digest = hashlib.sha256(prefix + format(nonce, "08x").encode("ascii")).digest()
        if int.from_bytes(digest, "big") < threshold:
            return MineResult(nonce, Hash256.from_digest(digest), attempts)
        if attempts >= max_attempts:
            return MineResult(None, None, attempts)
    raise AssertionError("unreachable")


def validate_block(block: Block, target: DifficultyTarget) -> bool:
    """True iff the header hash beats the target and the Merkle root is honest."""
    if not target.accepts(block.hash):
        return False
    return merkle_root(block.transactions) == block.header.merkle_root


def _genesis_block() -> Block:
    header = BlockHeader(ZERO_HASH, merkle_root([GENESIS_PAYLOAD]), 0)
    return Block(header, (GENESIS_PAYLOAD,), 0)


class Chain:
    """Block tree with longest-chain tip selection (first-seen tie-break).

    Every chain starts from the fixed genesis block (all-zero parent, single
    ``b"genesis"`` payload, height 0), which is exempt from target checks.
    Mutation is single-writer: ``extend`` is not safe under concurrent calls
    on the same instance.
    """

    def __init__(self):
        genesis = _genesis_block()
        ghex = genesis.hash.hex
        self.blocks: dict[str, Block] = {ghex: genesis}
        self.order: list[str] = [ghex]
        self.tips: set[str] = {ghex}
        self.active_tip: str = ghex

    @property
    def genesis_hash(self) -> Hash256:
        return Hash256.from_hex(self.order[0])

    @property
    def height(self) -> int:
        return self.blocks[self.active_tip].height

    def block(self, block_hash: Hash256 | str) -> Block:
        key = block_hash.hex if isinstance(block_hash, Hash256) else block_hash
        return self.blocks[key]

    def tip_block(self) -> Block:
        return self.blocks[self.active_tip]

    def extend(self, block: Block, target: DifficultyTarget) -> "Chain":
        """Insert a validated block; the active tip moves only on a strictly
        greater height, so a same-height fork never displaces the first-seen tip."""
        parent_key = block.header.parent_hash.hex
        if parent_key not in self.blocks:
            raise OrphanBlockError(f"unknown parent {parent_key}")
        parent = self.blocks[parent_key]
        if block.height != parent.height + 1:
            raise BlockValidationError(
                "height", f"height {block.height} != parent height {parent.height} + 1"
            )
        if merkle_root(block.transactions) != block.header.merkle_root:
            raise BlockValidationError("merkle", "stated merkle_root does not match transactions")
        if not target.accepts(block.hash):
            raise BlockValidationError(
                "pow", f"header hash {block.hash.hex} not below target {target.hex}"
            )
        key = block.hash.hex
        self.blocks[key] = block
        self.order.append(key)
        self.tips.discard(parent_key)
        self.tips.add(key)
        if block.height > self.blocks[self.active_tip].height:
            self.active_tip = key
        return self


def chain_to_json(chain: Chain, indent: int | None = 2) -> str:
    """Blocks in insertion order, hex header fields, decimal nonce, base64 payloads."""
    doc = [
        {
            "parent_hash": b.header.parent_hash.hex,
            "merkle_root": b.header.merkle_root.hex,
            "nonce": b.header.nonce,
            "payloads": [base64.b64encode(p).decode("ascii") for p in b.transactions],
            "height": b.height,
        }
        for b in (chain.blocks[k] for k in chain.order)
    ]
    return json.dumps(doc, indent=indent)


def chain_from_json(text: str) -> Chain:
    """Rebuild a chain by replaying insertions.

    Merkle roots, parent links, and heights are re-verified; proof-of-work is
    not, since per-scenario targets are not stored in the serialization.
    """
    doc = json.loads(text)
    if not doc:
        raise ValueError("empty chain document")
    chain = Chain()
    for i, entry in enumerate(doc):
        header = BlockHeader(
            Hash256.from_hex(entry["parent_hash"]),
            Hash256.from_hex(entry["merkle_root"]),
            int(entry["nonce"]),
        )
        payloads = tuple(base64.b64decode(p) for p in entry["payloads"])
        block = Block(header, payloads, int(entry["height"]))
        if i == 0:
            if block.hash.hex != chain.order[0]:
                raise ValueError("first block is not the canonical genesis block")
            continue
        chain.extend(block, DifficultyTarget(_HASH_SPACE))
    return chain


def collision_probability(k_blocks: int) -> float:
    """Birthday bound k**2 / 2**257 for k uniform 256-bit hashes.

    Evaluated through ``frexp``/``ldexp`` exponent arithmetic so the square
    cannot overflow for any representable k.
    """
    if k_blocks < 0:
        raise ValueError("k_blocks must be >= 0")
    if k_blocks == 0:
        return 0.0
    m, e = math.frexp(float(k_blocks))
    try:
        return math.ldexp(m * m, 2 * e - 257)
    except OverflowError:  # k so large even the quotient exceeds float range
        return math.inf


class CollisionHorizon(NamedTuple):
    expected_blocks: float
    years: float


_MINUTES_PER_YEAR = 60.0 * 24.0 * 365.25


def collision_horizon(block_interval_minutes: float) -> CollisionHorizon:
    """Blocks until a collision becomes expected (2**128) and the wall-clock years."""
    if block_interval_minutes <= 0:
        raise ValueError("block_interval_minutes must be > 0")
    blocks = 2.0**128
    years = blocks * block_interval_minutes / _MINUTES_PER_YEAR
    return CollisionHorizon(blocks, years)
