"""Symbol streams, causal-state machines, and information measures.

The central objects are ``SymbolStream`` (a finite record of a discrete
process), ``EpsilonMachine`` (a minimal predictive state machine whose states
are classes of histories with indistinguishable next-symbol statistics), and
the entropy functions used to score them.  ``statistical_complexity`` is the
Shannon entropy of the machine's state distribution; it is zero both for a
frozen process and for pure noise, and positive in between.

A dedicated small-probability path (``log1m_shanks`` / ``entropy_term_precise``)
keeps ``-(1-p)*log2(1-p)`` accurate down to p ~ 1e-30, far below where the
naive expression rounds to zero.
"""

from __future__ import annotations

import bisect
import json
import math
import random
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

__all__ = [
    "DistributionError",
    "InsufficientDataError",
    "ReducibleMachineError",
    "ProbabilityDistribution",
    "SymbolStream",
    "CausalState",
    "EpsilonMachine",
    "InferenceConfig",
    "shannon_entropy",
    "log1m_shanks",
    "entropy_term_precise",
    "statistical_complexity",
    "infer_causal_states",
    "generate",
    "stationary_distribution",
    "parse_stream",
    "format_stream",
    "read_stream",
    "write_stream",
    "machine_to_json",
    "machine_from_json",
]

_LN2 = math.log(2.0)

#: Absolute tolerance on the total mass of a probability distribution.
WEIGHT_SUM_TOL = 1e-12

#: Probabilities closer than this to 0 or 1 take the high-precision entropy path.
SMALL_PROB = 1e-8

MAX_ALPHABET = 16


class DistributionError(ValueError):
    """Weights are negative or do not sum to one."""


class InsufficientDataError(ValueError):
    """Stream too short to estimate conditional next-symbol statistics."""


class ReducibleMachineError(ValueError):
    """Transition structure has more than one communicating class."""


class ProbabilityDistribution:
    """Probability distribution over integer outcome indices.

    Weights are validated at construction: non-negative, summing to one
    within ``WEIGHT_SUM_TOL``.  Instances are treated as immutable.
    """

    __slots__ = ("weights",)

    def __init__(self, weights: Mapping[int, float]):
        w = {int(k): float(v) for k, v in weights.items()}
        for k, v in w.items():
            if v < 0.0 or not math.isfinite(v):
                raise DistributionError(f"weight for outcome {k} is {v!r}; must be in [0, 1]")
        total = math.fsum(w.values())
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise DistributionError(f"weights sum to {total!r}, not 1 within {WEIGHT_SUM_TOL}")
        self.weights = w

    @classmethod
    def from_sequence(cls, probs: Sequence[float]) -> "ProbabilityDistribution":
        return cls(dict(enumerate(probs)))

    def __getitem__(self, outcome: int) -> float:
        return self.weights.get(outcome, 0.0)

    def __len__(self) -> int:
        return len(self.weights)

    def __eq__(self, other) -> bool:
        return isinstance(other, ProbabilityDistribution) and self.weights == other.weights

    def __repr__(self) -> str:
        inner = ", ".join(f"{k}: {v:.6g}" for k, v in sorted(self.weights.items()))
        return f"ProbabilityDistribution({{{inner}}})"

    def items(self):
        return self.weights.items()

    def support(self) -> list[int]:
        return [k for k, v in sorted(self.weights.items()) if v > 0.0]


def log1m_shanks(x: float) -> float:
    """Rational approximation of ln(1-x) for x in [0, 1).

    Evaluates -x*(6-x)/(6-4x), which matches the Taylor series of ln(1-x)
    through third order; the leading error term is x**4/36.  Unlike the
    naive ``log(1-x)`` it involves no cancellation, so it stays accurate
    for x far below machine epsilon.
    """
    if not 0.0 <= x < 1.0:
        raise ValueError(f"x must be in [0, 1), got {x!r}")
    return -x * (6.0 - x) / (6.0 - 4.0 * x)


def entropy_term_precise(p: float) -> float:
    """The complement entropy term -(1-p)*log2(1-p), in bits.

    Below ``SMALL_PROB`` the logarithm is evaluated with ``log1m_shanks``;
    above it, with ``math.log1p`` (the plain ``log(1-p)`` form loses ~8
    digits near the switchover and would break continuity).
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must be in [0, 1], got {p!r}")
    if p == 0.0 or p == 1.0:
        return 0.0
    if p < SMALL_PROB:
        return -(1.0 - p) * log1m_shanks(p) / _LN2
    return -(1.0 - p) * math.log1p(-p) / _LN2


def shannon_entropy(dist: ProbabilityDistribution) -> float:
    """Shannon entropy of ``dist`` in bits, with 0*log(0) == 0.

    Any weight within ``SMALL_PROB`` of one contributes through
    ``entropy_term_precise`` applied to the total mass of the *other*
    outcomes, which is known accurately even when the near-one weight
    itself has rounded to exactly 1.0.
    """
    if not isinstance(dist, ProbabilityDistribution):
        dist = ProbabilityDistribution(dist)
    total = 0.0
    for k, w in sorted(dist.weights.items()):
        if w == 0.0:
            continue
        if w > 1.0 - SMALL_PROB:
            rest = math.fsum(v for j, v in dist.weights.items() if j != k)
            total += entropy_term_precise(rest)
        else:
            total -= w * math.log2(w)
    return total


class SymbolStream:
    """Finite sequence of symbols over a small ordered alphabet.

    ``alphabet`` is a string of distinct symbol characters (1 to 16 of
    them); ``data`` holds symbol *indices* into it.  The single-character
    alphabet is admitted so that a frozen, one-symbol record can be
    represented directly.
    """

    __slots__ = ("alphabet", "data")

    def __init__(self, alphabet: str, data: Iterable[int] | np.ndarray):
        if not 1 <= len(alphabet) <= MAX_ALPHABET:
            raise ValueError(f"alphabet size must be in [1, {MAX_ALPHABET}], got {len(alphabet)}")
        if len(set(alphabet)) != len(alphabet):
            raise ValueError("alphabet has duplicate symbols")
        arr = np.asarray(data, dtype=np.int64)
        if arr.ndim != 1:
            raise ValueError("data must be one-dimensional")
        if arr.size and (arr.min() < 0 or arr.max() >= len(alphabet)):
            raise ValueError("data contains indices outside the alphabet")
        arr.flags.writeable = False
        self.alphabet = alphabet
        self.data = arr

    def __len__(self) -> int:
        return int(self.data.size)

    @property
    def length(self) -> int:
        return len(self)

    def symbols(self) -> str:
        """The stream rendered as its symbol characters."""
        return "".join(self.alphabet[i] for i in self.data)

    @classmethod
    def from_symbols(cls, alphabet: str, text: str) -> "SymbolStream":
        index = {c: i for i, c in enumerate(alphabet)}
        try:
            data = [index[c] for c in text]
        except KeyError as exc:
            raise ValueError(f"symbol {exc.args[0]!r} not in alphabet {alphabet!r}") from None
        return cls(alphabet, data)

    def relabel(self, permutation: Sequence[int]) -> "SymbolStream":
        """Consistently permute symbol codes: index i becomes permutation[i]."""
        perm = list(permutation)
        if sorted(perm) != list(range(len(self.alphabet))):
            raise ValueError("permutation must be a bijection on alphabet indices")
        new_alpha = [""] * len(self.alphabet)
        for i, c in enumerate(self.alphabet):
            new_alpha[perm[i]] = c
        mapped = np.asarray(perm, dtype=np.int64)[self.data]
        return SymbolStream("".join(new_alpha), mapped)


# -- stream file format -------------------------------------------------------
# One header line `alphabet: <chars>`, then symbol characters; whitespace and
# newlines between symbols are ignored.

def parse_stream(text: str) -> SymbolStream:
    lines = text.splitlines()
    if not lines or not lines[0].lower().startswith("alphabet:"):
        raise ValueError("missing 'alphabet:' header line")
    alphabet = lines[0].split(":", 1)[1].strip()
    if not alphabet:
        raise ValueError("empty alphabet in header")
    body = "".join("".join(line.split()) for line in lines[1:])
    return SymbolStream.from_symbols(alphabet, body)


def format_stream(stream: SymbolStream, width: int = 80) -> str:
    chars = stream.symbols()
    rows = [chars[i : i + width] for i in range(0, len(chars), width)] or [""]
    return f"alphabet: {stream.alphabet}\n" + "\n".join(rows) + "\n"


def read_stream(path) -> SymbolStream:
    with open(path, "r", encoding="ascii") as fh:
        return parse_stream(fh.read())


def write_stream(stream: SymbolStream, path) -> None:
    with open(path, "w", encoding="ascii") as fh:
        fh.write(format_stream(stream))


@dataclass
class CausalState:
    """One predictive state: a class of histories with a shared next-symbol law.

    ``emission`` maps symbol indices to probabilities, ``successor`` maps each
    positively-emitted symbol to the id of the state reached after emitting it.
    """

    id: int
    emission: ProbabilityDistribution
    successor: dict[int, int]
    histories: frozenset = field(default_factory=frozenset)


class EpsilonMachine:
    """A set of causal states with a probability distribution over them."""

    def __init__(
        self,
        states: Sequence[CausalState],
        state_probabilities: ProbabilityDistribution,
        alphabet: str,
    ):
        ids = [s.id for s in states]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate state ids")
        id_set = set(ids)
        if set(state_probabilities.weights) != id_set:
            raise ValueError("state_probabilities must cover exactly the state ids present")
        for s in states:
            for sym, p in s.emission.items():
                if p > 0.0 and sym not in s.successor:
                    raise ValueError(f"state {s.id} emits symbol {sym} but has no successor for it")
                if p > 0.0 and s.successor[sym] not in id_set:
                    raise ValueError(f"state {s.id} transitions to unknown state {s.successor[sym]}")
        self.states = {s.id: s for s in states}
        self.state_probabilities = state_probabilities
        self.alphabet = alphabet

    @property
    def n_states(self) -> int:
        return len(self.states)

    def state(self, state_id: int) -> CausalState:
        return self.states[state_id]

    def state_ids(self) -> list[int]:
        return sorted(self.states)

    def transition_matrix(self) -> np.ndarray:
        """T[i, j] = probability of moving from state i to state j (ids in sorted order)."""
        ids = self.state_ids()
        pos = {sid: i for i, sid in enumerate(ids)}
        T = np.zeros((len(ids), len(ids)))
        for sid, s in self.states.items():
            for sym, p in s.emission.items():
                if p > 0.0:
                    T[pos[sid], pos[s.successor[sym]]] += p
        return T

    def stationarity_residual(self) -> float:
        """max |pi - pi T| over states; ~0 when state_probabilities is stationary.

        Analytically built machines should sit below 1e-12.  Machines whose
        probabilities are empirical visit frequencies carry an O(1/N)
        boundary residual from the finite stream.
        """
        ids = self.state_ids()
        pi = np.array([self.state_probabilities[sid] for sid in ids])
        return float(np.max(np.abs(pi - pi @ self.transition_matrix())))


def statistical_complexity(machine: EpsilonMachine) -> float:
    """Shannon entropy, in bits, of the machine's state distribution."""
    return shannon_entropy(machine.state_probabilities)


def stationary_distribution(machine: EpsilonMachine) -> ProbabilityDistribution:
    """Solve pi = pi T for the machine's transition structure.

    Requires the positive-probability transition graph to be strongly
    connected; otherwise the communicating classes are reported in the error.
    """
    ids = machine.state_ids()
    T = machine.transition_matrix()
    comps = _strongly_connected_components(T > 0.0)
    if len(comps) > 1:
        named = "; ".join("{" + ", ".join(str(ids[i]) for i in sorted(c)) + "}" for c in comps)
        raise ReducibleMachineError(f"transition structure is reducible; state sets: {named}")
    n = len(ids)
    A = T.T - np.eye(n)
    A[-1, :] = 1.0
    b = np.zeros(n)
    b[-1] = 1.0
    pi = np.linalg.solve(A, b)
    return ProbabilityDistribution({sid: float(p) for sid, p in zip(ids, pi)})


def _strongly_connected_components(adj: np.ndarray) -> list[set[int]]:
    """Tarjan-free SCC for the small machines involved: iterated reach/co-reach."""
    n = adj.shape[0]
    remaining = set(range(n))
    comps = []
    while remaining:
        root = min(remaining)
        fwd = _reachable(adj, root)
        bwd = _reachable(adj.T, root)
        comp = (fwd & bwd) & remaining
        comps.append(comp)
        remaining -= comp
    return comps


def _reachable(adj: np.ndarray, start: int) -> set[int]:
    seen = {start}
    frontier = [start]
    while frontier:
        u = frontier.pop()
        for v in np.nonzero(adj[u])[0]:
            if int(v) not in seen:
                seen.add(int(v))
                frontier.append(int(v))
    return seen


def generate(machine: EpsilonMachine, length: int, seed: int) -> SymbolStream:
    """Sample a stream of ``length`` symbols by walking the machine.

    The initial state is drawn from ``state_probabilities``; thereafter each
    step draws a symbol from the current state's emission law and follows the
    successor map.  Deterministic for a fixed seed.
    """
    if length < 1:
        raise ValueError("length must be >= 1")
    rng = random.Random(seed)

    def cumulative(dist: ProbabilityDistribution):
        outcomes, cum, acc = [], [], 0.0
        for k, p in sorted(dist.weights.items()):
            if p > 0.0:
                acc += p
                outcomes.append(k)
                cum.append(acc)
        cum[-1] = 1.0 + 1e-15  # guard against the draw landing above a rounded total
        return outcomes, cum

    def draw(outcomes, cum, u):
        return outcomes[bisect.bisect_right(cum, u)] if u < cum[-1] else outcomes[-1]

    state_outcomes, state_cum = cumulative(machine.state_probabilities)
    current = draw(state_outcomes, state_cum, rng.random())
    emit_tables = {sid: cumulative(s.emission) for sid, s in machine.states.items()}

    out = np.empty(length, dtype=np.int64)
    for i in range(length):
        outcomes, cum = emit_tables[current]
        sym = draw(outcomes, cum, rng.random())
        out[i] = sym
        current = machine.states[current].successor[sym]
    return SymbolStream(machine.alphabet, out)


@dataclass(frozen=True)
class InferenceConfig:
    """Knobs for causal-state reconstruction.

    ``max_history_length`` bounds the suffix length examined;
    ``merge_tolerance`` is the total-variation radius within which two
    histories' next-symbol laws count as the same prediction (this is where
    the finite accuracy of the measurement enters); histories seen fewer than
    ``min_history_count`` times are attached to the nearest class instead of
    seeding their own.
    """

    max_history_length: int = 3
    merge_tolerance: float = 0.05
    min_history_count: int = 10

    def __post_init__(self):
        if self.max_history_length < 1:
            raise ValueError("max_history_length must be >= 1")
        if not 0.0 < self.merge_tolerance < 1.0:
            raise ValueError("merge_tolerance must be in (0, 1)")
        if self.min_history_count < 1:
            raise ValueError("min_history_count must be >= 1")


def _total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(p - q).sum())


def infer_causal_states(
    stream: SymbolStream, config: InferenceConfig | None = None
) -> EpsilonMachine:
    """Reconstruct the minimal predictive machine from a symbol stream.

    Every suffix history of length 1..max_history_length gets an empirical
    next-symbol distribution; histories are greedily clustered (most frequent
    first, deterministic tie-breaks) so that within a class the distributions
    agree within ``merge_tolerance`` total variation and across classes they
    do not.  The state sequence is then read off the full-length suffixes:
    state probabilities are visit frequencies, emissions and successors are
    counted along the walk (appending a symbol to a history lands in the
    successor class).

    Raises ``InsufficientDataError`` when the stream is shorter than
    ``10 * min_history_count`` or no history clears the count threshold.
    A single-symbol alphabet yields the trivial one-state machine, with a
    warning rather than an error.
    """
    cfg = config or InferenceConfig()
    A = len(stream.alphabet)
    N = len(stream)
    if N < 10 * cfg.min_history_count:
        raise InsufficientDataError(
            f"stream length {N} < 10 * min_history_count = {10 * cfg.min_history_count}"
        )
    if A == 1:
        warnings.warn(
            "single-symbol alphabet: the process is trivially one-state",
            stacklevel=2,
        )
    L = min(cfg.max_history_length, N - 1)
    data = stream.data

    # Window codes per history length: windows[l][i] encodes data[i:i+l].
    windows: dict[int, np.ndarray] = {1: data.copy()}
    for l in range(2, L + 1):
        windows[l] = windows[l - 1][:-1] * A + data[l - 1 :]

    # Per-history next-symbol counts, keyed by (length, window code).
    entries = {}
    for l in range(1, L + 1):
        w = windows[l]
        pair = w[:-1] * A + data[l:]
        codes, first, counts = np.unique(pair, return_index=True, return_counts=True)
        for code, fi, cnt in zip(codes, first, counts):
            hist_code, sym = divmod(int(code), A)
            key = (l, hist_code)
            if key not in entries:
                entries[key] = [np.zeros(A), int(fi)]
            entries[key][0][sym] += cnt
            entries[key][1] = min(entries[key][1], int(fi))

    def sort_key(item):
        (l, _code), (vec, first_idx) = item
        return (-int(vec.sum()), l, first_idx)

    ordered = sorted(entries.items(), key=sort_key)
    pool = [it for it in ordered if it[1][0].sum() >= cfg.min_history_count]
    rare = [it for it in ordered if it[1][0].sum() < cfg.min_history_count]
    if not pool:
        raise InsufficientDataError(
            f"no history of length <= {L} occurs at least {cfg.min_history_count} times"
        )

    cluster_counts: list[np.ndarray] = []
    members: list[list[tuple[int, int]]] = []

    def nearest_cluster(vec: np.ndarray) -> tuple[int, float]:
        p = vec / vec.sum()
        best, best_d = -1, math.inf
        for j, cc in enumerate(cluster_counts):
            d = _total_variation(p, cc / cc.sum())
            if d < best_d - 1e-15:  # ties go to the lower id
                best, best_d = j, d
        return best, best_d

    for (l, code), (vec, _fi) in pool:
        j, d = nearest_cluster(vec)
        if j >= 0 and d <= cfg.merge_tolerance:
            cluster_counts[j] = cluster_counts[j] + vec
            members[j].append((l, code))
        else:
            cluster_counts.append(vec.copy())
            members.append([(l, code)])
    for (l, code), (vec, _fi) in rare:
        j, _d = nearest_cluster(vec)
        members[j].append((l, code))

    # Aggregates drift as counts accumulate, so two clusters can end up
    # within tolerance of each other; merge until no such pair remains.
    merged = True
    while merged and len(cluster_counts) > 1:
        merged = False
        for a in range(len(cluster_counts)):
            for b in range(a + 1, len(cluster_counts)):
                pa = cluster_counts[a] / cluster_counts[a].sum()
                pb = cluster_counts[b] / cluster_counts[b].sum()
                if _total_variation(pa, pb) <= cfg.merge_tolerance:
                    cluster_counts[a] = cluster_counts[a] + cluster_counts[b]
                    members[a].extend(members[b])
                    del cluster_counts[b]
                    del members[b]
                    merged = True
                    break
            if merged:
                break

    # Walk the stream through the classes of its full-length suffixes.
    class_of_window = {}
    for j, ms in enumerate(members):
        for l, code in ms:
            if l == L:
                class_of_window[code] = j
    wL = windows[L]
    # The very last window may never have had a next symbol anywhere; drop it then.
    tail = wL if int(wL[-1]) in class_of_window else wL[:-1]
    known, known_cls = zip(*sorted(class_of_window.items()))
    lookup_codes = np.asarray(known, dtype=np.int64)
    lookup_cls = np.asarray(known_cls, dtype=np.int64)
    class_seq = lookup_cls[np.searchsorted(lookup_codes, tail)]

    K = len(cluster_counts)
    visits = np.bincount(class_seq, minlength=K).astype(np.int64)
    emit_counts = np.bincount(
        class_seq[: len(wL) - 1] * A + data[L:], minlength=K * A
    ).reshape(K, A)

    # Majority successor for every (state, symbol) seen along the walk.
    succ_pair = (class_seq[:-1] * A + data[L : L + len(class_seq) - 1]) * K + class_seq[1:]
    succ_codes, succ_counts = np.unique(succ_pair, return_counts=True)
    succ_votes: dict[tuple[int, int], tuple[int, int]] = {}
    for code, cnt in zip(succ_codes, succ_counts):
        cs, nxt = divmod(int(code), K)
        c, sym = divmod(cs, A)
        cur = succ_votes.get((c, sym))
        if cur is None or cnt > cur[1] or (cnt == cur[1] and nxt < cur[0]):
            succ_votes[(c, sym)] = (nxt, int(cnt))

    # Keep only classes actually visited with at least one observed emission.
    keep = [j for j in range(K) if visits[j] > 0 and emit_counts[j].sum() > 0]
    remap = {old: new for new, old in enumerate(keep)}

    code_to_tuple_cache: dict[tuple[int, int], tuple[int, ...]] = {}

    def decode(l: int, code: int) -> tuple[int, ...]:
        if (l, code) not in code_to_tuple_cache:
            syms = []
            c = code
            for _ in range(l):
                c, s = divmod(c, A)
                syms.append(s)
            code_to_tuple_cache[(l, code)] = tuple(reversed(syms))
        return code_to_tuple_cache[(l, code)]

    states = []
    for old in keep:
        new_id = remap[old]
        row = emit_counts[old].astype(float)
        emission = ProbabilityDistribution(
            {sym: row[sym] / row.sum() for sym in range(A) if row[sym] > 0}
        )
        successor = {}
        for sym in range(A):
            if row[sym] > 0:
                nxt_old = succ_votes[(old, sym)][0]
                successor[sym] = remap.get(nxt_old, remap[keep[0]])
        histories = frozenset(decode(l, code) for l, code in members[old])
        states.append(CausalState(new_id, emission, successor, histories))

    kept_visits = visits[keep].astype(float)
    probs = ProbabilityDistribution(
        {remap[old]: float(v / kept_visits.sum()) for old, v in zip(keep, kept_visits)}
    )
    return EpsilonMachine(states, probs, stream.alphabet)


# -- machine serialization ----------------------------------------------------
# JSON schema: {"alphabet": "...", "states": [{"id", "emission": {symbol char:
# prob}, "successor": {symbol char: state id}}], "state_probabilities":
# {state id (str): prob}}.  History sets are working data and are not stored.

def machine_to_json(machine: EpsilonMachine, indent: int | None = 2) -> str:
    doc = {
        "alphabet": machine.alphabet,
        "states": [
            {
                "id": sid,
                "emission": {
                    machine.alphabet[sym]: p for sym, p in sorted(s.emission.items())
                },
                "successor": {
                    machine.alphabet[sym]: tgt for sym, tgt in sorted(s.successor.items())
                },
            }
            for sid, s in sorted(machine.states.items())
        ],
        "state_probabilities": {
            str(sid): p for sid, p in sorted(machine.state_probabilities.items())
        },
    }
    return json.dumps(doc, indent=indent, sort_keys=True)


def machine_from_json(text: str) -> EpsilonMachine:
    doc = json.loads(text)
    alphabet = doc["alphabet"]
    index = {c: i for i, c in enumerate(alphabet)}
    states = [
        CausalState(
            int(entry["id"]),
            ProbabilityDistribution({index[c]: p for c, p in entry["emission"].items()}),
            {index[c]: int(t) for c, t in entry["successor"].items()},
        )
        for entry in doc["states"]
    ]
    probs = ProbabilityDistribution(
        {int(k): v for k, v in doc["state_probabilities"].items()}
    )
    return EpsilonMachine(states, probs, alphabet)
