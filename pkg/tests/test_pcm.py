import itertools

import numpy as np
import pytest

from kmerwaits.pcm import PCM, consensus, extract_kmers, max_score, parse_pcm, pcm_score
from kmerwaits.seqmodel import parse_kmer

SP1_BARE = """\
>SP1
0 0 0 4 2 0 1 0 6 3
32 30 35 27 5 28 31 24 25 26
1 1 0 0 15 1 0 3 0 3
2 4 0 4 13 6 3 8 4 3
"""

SP1_BRACKETED = """\
>SP1
A [ 0 0 0 4 2 0 1 0 6 3 ]
C [ 32 30 35 27 5 28 31 24 25 26 ]
G [ 1 1 0 0 15 1 0 3 0 3 ]
T [ 2 4 0 4 13 6 3 8 4 3 ]
"""


@pytest.fixture
def sp1():
    return parse_pcm(SP1_BARE)


def test_parse_both_formats_identical(sp1):
    other = parse_pcm(SP1_BRACKETED)
    assert sp1.id == other.id == "SP1"
    assert np.array_equal(sp1.counts, other.counts)
    assert sp1.k == 10


@pytest.mark.parametrize("text, fragment", [
    ("1 2\n3 4\n5 6", "4 count rows"),
    ("1 2\n3 4\n5 6\n7 8\n9 10", "4 count rows"),
    ("1 2\n3 4\n5 6\n7", "ragged"),
    ("1 2\n3 4\n5 6\n7 -8", "negative"),
    ("1 2\n3 4\n5 6\n7 x", "non-integer"),
    ("0 1\n0 1\n0 1\n0 1", "all-zero column"),
    ("C [ 1 2 ]\nA [ 1 2 ]\nG [ 1 2 ]\nT [ 1 2 ]", "expected row"),
])
def test_parse_rejects_malformed(text, fragment):
    with pytest.raises(ValueError, match=fragment):
        parse_pcm(text)


def test_scores_on_sp1(sp1):
    assert pcm_score(sp1, parse_kmer("CCCCGCCCCC")) == 273
    assert pcm_score(sp1, parse_kmer("CCCCACCCCC")) == 260
    assert pcm_score(sp1, parse_kmer("CCCCCCCCCC")) == 263
    assert pcm_score(sp1, parse_kmer("CCCCTCCCCC")) == 271
    assert pcm_score(sp1, parse_kmer("AAAAAAAAAA")) == 16
    assert max_score(sp1) == 273


def test_score_length_mismatch(sp1):
    with pytest.raises(ValueError):
        pcm_score(sp1, parse_kmer("CCC"))


def test_consensus(sp1):
    assert consensus(sp1).text == "CCCCGCCCCC"


def test_extract_sp1_at_published_threshold(sp1):
    words = {w.text for w in extract_kmers(sp1, 0.95)}
    assert words == {"CCCCACCCCC", "CCCCCCCCCC", "CCCCGCCCCC", "CCCCTCCCCC"}


def test_extract_sp1_tight_threshold(sp1):
    assert [w.text for w in extract_kmers(sp1, 0.999)] == ["CCCCGCCCCC"]


def test_extract_single_letter_columns():
    m = PCM(id="", counts=np.array([
        [9, 0, 0],
        [0, 9, 0],
        [0, 0, 0],
        [0, 0, 9],
    ]))
    assert [w.text for w in extract_kmers(m, 0.9)] == ["ACT"]


def test_extract_theta_validation(sp1):
    for theta in (0.0, -0.5, 1.0001):
        with pytest.raises(ValueError):
            extract_kmers(sp1, theta)


def _random_pcm(rng, k):
    counts = rng.integers(0, 30, size=(4, k))
    counts[rng.integers(0, 4), counts.sum(axis=0) == 0] = 1
    return PCM(id="rand", counts=counts)


def _all_scores(m):
    # vectorized brute force over the full 4^k space
    k = m.k
    idx = np.arange(4 ** k, dtype=np.int64)
    letters = np.stack([(idx >> (2 * (k - 1 - i))) & 3 for i in range(k)], axis=1)
    scores = np.zeros(len(idx), dtype=np.int64)
    for i in range(k):
        scores += m.counts[letters[:, i], i]
    return letters, scores


def test_branch_and_bound_equals_brute_force():
    rng = np.random.default_rng(31)
    for k, theta in [(3, 0.8), (5, 0.9), (8, 0.95)]:
        m = _random_pcm(rng, k)
        letters, scores = _all_scores(m)
        cutoff = theta * max_score(m)
        expect = {tuple(row) for row, s in zip(letters, scores) if s > cutoff}
        got = {w.indices for w in extract_kmers(m, theta)}
        assert got == expect


def test_consensus_always_extracted_and_monotone():
    rng = np.random.default_rng(37)
    for _ in range(10):
        m = _random_pcm(rng, int(rng.integers(2, 7)))
        cons = consensus(m)
        low = {w.indices for w in extract_kmers(m, 0.8)}
        high = {w.indices for w in extract_kmers(m, 0.97)}
        assert cons.indices in low
        assert cons.indices in high
        assert high <= low


def test_output_is_lexicographic(sp1):
    words = [w.text for w in extract_kmers(sp1, 0.95)]
    assert words == sorted(words)
