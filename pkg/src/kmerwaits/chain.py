"""Markov chain over the two-track automaton and the emergence probability.

Reading one random (ancestral, mutated) letter pair per position turns the
pair automaton into a Markov chain; after n steps the state distribution
yields the probability that the pattern occurs in the mutated sequence given
it is absent from the ancestral one, and hence the expected waiting time.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .automata import PairAutomaton, build_match_automaton, build_pair_automaton
from .seqmodel import Alphabet, KMer, M0Params

ORACLE_CAP = 2 ** 24
UNDERFLOW_FLOOR = 1e-300


@dataclass(frozen=True, eq=False)
class SparseChain:
    """Row-stochastic transition matrix in CSR form plus state metadata."""

    automaton: PairAutomaton
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    initial: int
    finals: frozenset[int]
    sink: int

    @property
    def state_count(self) -> int:
        return len(self.indptr) - 1

    @property
    def nnz(self) -> int:
        return len(self.data)

    def row_sums(self) -> np.ndarray:
        return np.add.reduceat(self.data, self.indptr[:-1])

    def to_dense(self) -> np.ndarray:
        m = self.state_count
        out = np.zeros((m, m))
        for i in range(m):
            for j in range(self.indptr[i], self.indptr[i + 1]):
                out[i, self.indices[j]] = self.data[j]
        return out


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probability weights over chain states after `steps` letters read."""

    weights: np.ndarray
    steps: int


def build_chain(a: PairAutomaton, params: M0Params) -> SparseChain:
    """Aggregate paired-letter probabilities nu(alpha) * p1[alpha, beta]
    into a CSR matrix; parallel edges between two states are summed."""
    if a.alphabet != params.alphabet:
        raise ValueError("automaton and params use different alphabets")
    size = params.alphabet.size
    m = a.state_count
    letter_prob = (params.nu[:, None] * params.p1).ravel()  # index alpha*size+beta

    cols = a.delta.ravel()
    rows = np.repeat(np.arange(m, dtype=np.int64), size * size)
    vals = np.tile(letter_prob, m)
    # aggregate duplicate (row, col) cells; lexsort is stable so value order
    # within a cell is the paired-letter order, fixed for reproducibility
    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    boundary = np.ones(len(rows), dtype=bool)
    boundary[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
    starts = np.flatnonzero(boundary)
    agg_vals = np.add.reduceat(vals, starts)
    agg_rows = rows[starts]
    agg_cols = cols[starts]
    keep = agg_vals != 0.0  # letters with zero probability leave hollow cells
    agg_vals, agg_rows, agg_cols = agg_vals[keep], agg_rows[keep], agg_cols[keep]
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.add.at(indptr, agg_rows + 1, 1)
    indptr = np.cumsum(indptr)
    return SparseChain(
        automaton=a,
        indptr=indptr,
        indices=agg_cols.astype(np.int64),
        data=agg_vals,
        initial=a.initial,
        finals=a.finals,
        sink=a.sink,
    )


def chain_for(b: KMer, params: M0Params) -> SparseChain:
    """Convenience: pair automaton + chain in one call."""
    return build_chain(build_pair_automaton(b), params)


def evolve(chain: SparseChain, n: int) -> Distribution:
    """Point mass at the initial state pushed through n steps of the chain."""
    if n < 0:
        raise ValueError("length must be non-negative")
    v0 = np.zeros(chain.state_count)
    v0[chain.initial] = 1.0
    weights = kernels.csr_vector_power(chain.indptr, chain.indices, chain.data, v0, n)
    return Distribution(weights=weights, steps=n)


def emergence_probability(chain: SparseChain, n: int) -> float:
    """Probability the pattern occurs at generation 1 in a length-n sequence
    given it is absent at generation 0.

    Numerator: mass on success states (mutated track matched, ancestral
    avoided). Denominator: mass off the sink, i.e. the probability the
    ancestral sequence avoids the pattern.
    """
    k = chain.automaton.kmer.k
    if n < k:
        raise ValueError("pattern longer than sequence")
    dist = evolve(chain, n)
    final_idx = np.fromiter(sorted(chain.finals), dtype=np.int64)
    numerator = float(dist.weights[final_idx].sum())
    denominator = 1.0 - float(dist.weights[chain.sink])
    if denominator < UNDERFLOW_FLOOR:
        raise ValueError("avoidance probability underflow")
    return min(max(numerator / denominator, 0.0), 1.0)


def emergence_probability_for(b: KMer, params: M0Params, n: int) -> float:
    return emergence_probability(chain_for(b, params), n)


def expected_waiting_time(p: float) -> float:
    """Expected generations until first occurrence, 1/p for a geometric law."""
    if p <= 0.0:
        raise ValueError("waiting time undefined for probability <= 0")
    if p > 1.0:
        raise ValueError("probability above 1")
    return 1.0 / p


def single_track_occurrence_probability(b: KMer, params: M0Params, n: int) -> float:
    """Probability a length-n iid nu-sequence contains b, via the one-track
    occurrence automaton alone (independent of the two-track machinery)."""
    auto = build_match_automaton(b)
    size = b.alphabet.size
    k = b.k
    weights = np.zeros((k + 1, k + 1))
    for s in range(k + 1):
        for a in range(size):
            weights[s, int(auto.delta[s, a])] += params.nu[a]
    v = np.zeros(k + 1)
    v[0] = 1.0
    for _ in range(n):
        v = v @ weights
    return float(v[k])


def brute_force_buckets(b: KMer, params: M0Params, n: int) -> tuple[float, float, float]:
    """Exhaustive enumeration of every (ancestral, mutated) word pair.

    Classifies each pair by direct substring tests and returns the
    (success, failure, sink) probability masses. Test oracle; exponential
    in n, hence the hard cap.
    """
    size = b.alphabet.size
    if size ** (2 * n) > ORACLE_CAP:
        raise ValueError("enumeration cap exceeded")
    letters = b.alphabet.letters
    target = b.text
    success = failure = sink = 0.0
    for v in itertools.product(range(size), repeat=n):
        pv = 1.0
        for x in v:
            pv *= params.nu[x]
        v_contains = target in "".join(letters[x] for x in v)
        for w in itertools.product(range(size), repeat=n):
            pw = pv
            for x, y in zip(v, w):
                pw *= params.p1[x, y]
            if v_contains:
                sink += pw
            elif target in "".join(letters[y] for y in w):
                success += pw
            else:
                failure += pw
    return success, failure, sink


def brute_force_oracle(b: KMer, params: M0Params, n: int) -> float:
    """Emergence probability by direct enumeration: success/(success+failure)."""
    success, failure, _ = brute_force_buckets(b, params, n)
    return success / (success + failure)


@dataclass(frozen=True)
class ScanRow:
    kmer: str
    k: int
    n: int
    probability: float
    waiting_generations: float
    rank: int


def all_kmers(k: int, alphabet: Alphabet):
    """All words of length k in lexicographic (alphabet-index) order."""
    for combo in itertools.product(range(alphabet.size), repeat=k):
        yield KMer(combo, alphabet)


def scan_all(k: int, n: int, params: M0Params, jobs: int = 1) -> list[ScanRow]:
    """Emergence probability and waiting time for every k-mer, ranked.

    Rank 1 is the smallest waiting time; ties break by lexicographic k-mer
    order. Rows come back sorted by rank. Workers share nothing mutable, so
    the result is identical for any job count.
    """
    if not 1 <= k <= 12:
        raise ValueError("k must be between 1 and 12")
    if n < k:
        raise ValueError("pattern longer than sequence")
    words = list(all_kmers(k, params.alphabet))

    def compute(b: KMer) -> float:
        return emergence_probability(chain_for(b, params), n)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            probs = list(pool.map(compute, words))
    else:
        probs = [compute(b) for b in words]

    waits = [expected_waiting_time(p) for p in probs]
    by_wait = sorted(range(len(words)), key=lambda i: (waits[i], words[i].text))
    rows = [None] * len(words)
    for rank0, i in enumerate(by_wait):
        rows[rank0] = ScanRow(
            kmer=words[i].text, k=k, n=n,
            probability=probs[i], waiting_generations=waits[i],
            rank=rank0 + 1,
        )
    return rows


TSV_HEADER = "kmer\tk\tn\tp_n\tE_Tn_generations\tE_Tn_Mgen\trank"


def format_tsv_row(kmer: str, k: int, n: int, p: float, e_generations: float,
                   rank, years_per_generation: float | None = None) -> str:
    """One output row; p with 9 significant digits, Mgen with 3 decimals."""
    cells = [
        kmer, str(k), str(n),
        f"{p:.8e}",
        f"{e_generations:.3f}",
        f"{e_generations / 1e6:.3f}",
        str(rank),
    ]
    if years_per_generation is not None:
        cells.append(f"{e_generations * years_per_generation:.3f}")
    return "\t".join(cells)
