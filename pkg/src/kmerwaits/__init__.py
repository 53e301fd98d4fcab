"""Waiting times for k-mer emergence under the M0 substitution model.

Computes, for a pattern b and sequence length n, the probability that b
occurs at generation 1 given it is absent at generation 0, via a sink-merged
two-track pattern automaton turned into a sparse Markov chain; plus word
periodicity analytics, PCM-based binding-site extraction, an enrichment
test, and a two-anchor linear model of the probability in n.
"""

from .automata import (
    MatchAutomaton,
    PairAutomaton,
    StateClass,
    build_match_automaton,
    build_pair_automaton,
    complement_finals,
    edge_list_text,
    run_and_classify,
)
from .chain import (
    Distribution,
    ScanRow,
    SparseChain,
    brute_force_buckets,
    brute_force_oracle,
    build_chain,
    chain_for,
    emergence_probability,
    emergence_probability_for,
    evolve,
    expected_waiting_time,
    scan_all,
    single_track_occurrence_probability,
)
from .fit import LinearModel, fit_two_anchors, predict
from .kernels import BACKEND as KERNEL_BACKEND
from .pcm import PCM, consensus, extract_kmers, load_pcm, max_score, parse_pcm, pcm_score
from .periodicity import (
    BackgroundCounts,
    ContingencyTable2x2,
    PeriodProfile,
    background_counts,
    background_profile,
    fisher_greater,
    minimal_period,
    period_set,
    profile,
)
from .seqmodel import (
    DNA,
    Alphabet,
    KMer,
    M0Params,
    RateMatrix,
    ValidationReport,
    default_params,
    format_params,
    load_params,
    matrix_exponential,
    parse_kmer,
    parse_params,
    reverse_complement,
    validate_model,
)

__version__ = "0.1.0"
