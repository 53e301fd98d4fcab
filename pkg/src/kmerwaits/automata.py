"""Pattern automata: single-track occurrence automaton and two-track product.

The single-track automaton is the classical KMP prefix automaton recognizing
"the word b occurs somewhere". The two-track automaton runs one copy on the
ancestral sequence (which must avoid b) and one on the mutated sequence
(which must contain b), over the paired alphabet of (ancestral, mutated)
letter pairs; all states whose ancestral track has seen b are merged into a
single absorbing sink.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .seqmodel import Alphabet, KMer


class StateClass(enum.Enum):
    SUCCESS = "success"  # mutated track contains b, ancestral track avoids it
    SINK = "sink"        # ancestral track contains b
    FAILURE = "failure"  # neither track contains b


@dataclass(frozen=True, eq=False)
class MatchAutomaton:
    """Deterministic complete automaton over single letters.

    States 0..k; state i means the longest prefix of the pattern that is a
    suffix of the input has length i; state k is absorbing.
    """

    kmer: KMer
    delta: np.ndarray  # (k+1, |alphabet|) int64
    finals: frozenset[int]
    initial: int = 0

    @property
    def state_count(self) -> int:
        return self.delta.shape[0]

    @property
    def alphabet(self) -> Alphabet:
        return self.kmer.alphabet

    def run(self, word) -> int:
        state = self.initial
        for a in word:
            state = int(self.delta[state, a])
        return state

    def accepts(self, word) -> bool:
        return self.run(word) in self.finals


def build_match_automaton(b: KMer) -> MatchAutomaton:
    """KMP prefix automaton recognizing all words containing b.

    Built in O(k * |alphabet|): row i copies the row of the failure state,
    then the matching letter advances; the final state k loops on itself.
    """
    k = b.k
    size = b.alphabet.size
    delta = np.zeros((k + 1, size), dtype=np.int64)
    delta[0, b.indices[0]] = 1
    fail = 0
    for i in range(1, k):
        delta[i, :] = delta[fail, :]
        delta[i, b.indices[i]] = i + 1
        fail = int(delta[fail, b.indices[i]])
    delta[k, :] = k
    delta.flags.writeable = False
    return MatchAutomaton(kmer=b, delta=delta, finals=frozenset({k}))


def complement_finals(m: MatchAutomaton) -> MatchAutomaton:
    """Same transition graph, complemented final set (recognizes avoidance)."""
    all_states = frozenset(range(m.state_count))
    return MatchAutomaton(kmer=m.kmer, delta=m.delta, finals=all_states - m.finals,
                          initial=m.initial)


@dataclass(frozen=True, eq=False)
class PairAutomaton:
    """Sink-merged two-track product automaton.

    Paired letters are indexed a * |alphabet| + b where a is the ancestral
    letter and b the mutated one. State ids: pair (p, q) with ancestral-track
    state p < k and mutated-track state q <= k maps to p*(k+1)+q; the merged
    sink (ancestral track reached k) is the last id, k*(k+1).
    """

    kmer: KMer
    delta: np.ndarray  # (k^2+k+1, |alphabet|^2) int64
    initial: int
    finals: frozenset[int]
    sink: int

    @property
    def state_count(self) -> int:
        return self.delta.shape[0]

    @property
    def alphabet(self) -> Alphabet:
        return self.kmer.alphabet

    def classify(self, state: int) -> StateClass:
        if state == self.sink:
            return StateClass.SINK
        if state in self.finals:
            return StateClass.SUCCESS
        return StateClass.FAILURE


def build_pair_automaton(b: KMer) -> PairAutomaton:
    """Product of the avoidance and occurrence automata with sink merging.

    The full (k+1)^2 product is formed and every state whose ancestral track
    sits at k collapses to one absorbing sink, leaving exactly k^2+k+1
    states; no reachability pruning is applied.
    """
    k = b.k
    size = b.alphabet.size
    single = build_match_automaton(b).delta  # shared by both tracks
    sink = k * (k + 1)

    # ancestral-track targets (rows p < k) and mutated-track targets (q <= k)
    tp = single[:k, :]          # (k, size)
    tq = single                 # (k+1, size)
    merged = np.where(
        tp[:, None, :, None] == k,
        sink,
        tp[:, None, :, None] * (k + 1) + tq[None, :, None, :],
    )                           # (k, k+1, size, size)
    delta = np.empty((k * k + k + 1, size * size), dtype=np.int64)
    delta[:sink, :] = merged.reshape(k * (k + 1), size * size)
    delta[sink, :] = sink
    delta.flags.writeable = False

    finals = frozenset(p * (k + 1) + k for p in range(k))
    return PairAutomaton(kmer=b, delta=delta, initial=0, finals=finals, sink=sink)


def run_and_classify(a: PairAutomaton, pairs) -> StateClass:
    """Read a sequence of (ancestral, mutated) letter-index pairs.

    Success: the mutated word contains the pattern and the ancestral word
    avoids it. Sink: the ancestral word contains it. Failure: neither does.
    """
    size = a.alphabet.size
    state = a.initial
    for alpha, beta in pairs:
        if not (0 <= alpha < size and 0 <= beta < size):
            raise ValueError(f"invalid letter pair ({alpha}, {beta})")
        state = int(a.delta[state, alpha * size + beta])
    return a.classify(state)


def edge_list_text(automaton) -> str:
    """Debug export: header lines for finals (and sink), then one
    `state TAB letter TAB state` line per transition."""
    lines = ["#finals " + " ".join(str(s) for s in sorted(automaton.finals))]
    letters = automaton.alphabet.letters
    if isinstance(automaton, PairAutomaton):
        lines.append(f"#sink {automaton.sink}")
        labels = [f"{x}{y}" for x in letters for y in letters]
    else:
        labels = list(letters)
    for state in range(automaton.state_count):
        for j, label in enumerate(labels):
            lines.append(f"{state}\t{label}\t{int(automaton.delta[state, j])}")
    return "\n".join(lines) + "\n"
