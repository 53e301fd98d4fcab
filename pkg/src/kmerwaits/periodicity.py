"""Word periods, period-class profiles, background census and enrichment test.

A period p of a word b is a shift under which b matches itself
(b[i] == b[i+p] for all valid i). Words with no period are non-autocorrelated;
a word is p-periodic when its minimal period is exactly p. The census
enumerates all DNA words of given lengths, and the enrichment test is the
one-sided (greater) Fisher exact test on a 2x2 table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .seqmodel import KMer

CENSUS_MAX_K = 12


def period_set(b: KMer) -> frozenset[int]:
    """All shifts p in 1..k-1 under which b matches itself (direct check)."""
    idx = b.indices
    k = b.k
    return frozenset(
        p for p in range(1, k)
        if all(idx[i] == idx[i + p] for i in range(k - p))
    )


def minimal_period(b: KMer) -> int | None:
    """Smallest period, or None for a non-autocorrelated word."""
    periods = period_set(b)
    return min(periods) if periods else None


def class_label(p: int | None) -> str:
    return "non-periodic" if p is None else f"{p}-periodic"


@dataclass(frozen=True)
class PeriodProfile:
    """Counts per minimal-period class for a set of equal-length words."""

    k: int
    counts: dict[int | None, int]  # keys: 1..k-1 and None (non-periodic)

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    @property
    def proportions(self) -> dict[int | None, float]:
        total = self.total
        return {c: n / total for c, n in self.counts.items()}

    def classes(self):
        """Class keys in report order: 1-periodic .. (k-1)-periodic, non-periodic."""
        return [*range(1, self.k), None]


def profile(words) -> PeriodProfile:
    """Partition words by minimal period; every word lands in one class."""
    words = list(words)
    if not words:
        raise ValueError("empty word set")
    k = words[0].k
    if any(w.k != k for w in words):
        raise ValueError("profile needs words of equal length")
    counts: dict[int | None, int] = {p: 0 for p in range(1, k)}
    counts[None] = 0
    for w in words:
        counts[minimal_period(w)] += 1
    return PeriodProfile(k=k, counts=counts)


def _dna_letter_columns(k: int) -> np.ndarray:
    """All 4^k DNA words as an (4^k, k) index array (2 bits per letter)."""
    n = 4 ** k
    idx = np.arange(n, dtype=np.int64)
    cols = [(idx >> (2 * (k - 1 - i))) & 3 for i in range(k)]
    return np.stack(cols, axis=1).astype(np.int8)


def background_minimal_periods(k: int) -> np.ndarray:
    """Minimal period of every DNA k-mer in lexicographic order (0 = none)."""
    if not 1 <= k <= CENSUS_MAX_K:
        raise ValueError(f"k must be between 1 and {CENSUS_MAX_K}")
    arr = _dna_letter_columns(k)
    minp = np.zeros(len(arr), dtype=np.int8)
    for p in range(1, k):
        hit = np.all(arr[:, : k - p] == arr[:, p:], axis=1)
        minp[hit & (minp == 0)] = p
    return minp


def background_profile(k: int) -> PeriodProfile:
    """Minimal-period class counts over all 4^k DNA words."""
    minp = background_minimal_periods(k)
    label_counts = np.bincount(minp, minlength=k)
    counts: dict[int | None, int] = {p: int(label_counts[p]) for p in range(1, k)}
    counts[None] = int(label_counts[0])
    return PeriodProfile(k=k, counts=counts)


@dataclass(frozen=True)
class BackgroundCounts:
    autocorrelated: int
    non_autocorrelated: int
    per_k: dict[int, tuple[int, int]]  # k -> (autocorrelated, non-autocorrelated)


def background_counts(k_min: int, k_max: int) -> BackgroundCounts:
    """Exact autocorrelated / non-autocorrelated counts over all DNA words
    with k_min <= k <= k_max."""
    if not 1 <= k_min <= k_max <= CENSUS_MAX_K:
        raise ValueError(f"need 1 <= k_min <= k_max <= {CENSUS_MAX_K}")
    per_k = {}
    for k in range(k_min, k_max + 1):
        minp = background_minimal_periods(k)
        auto = int(np.count_nonzero(minp))
        per_k[k] = (auto, len(minp) - auto)
    return BackgroundCounts(
        autocorrelated=sum(a for a, _ in per_k.values()),
        non_autocorrelated=sum(n for _, n in per_k.values()),
        per_k=per_k,
    )


@dataclass(frozen=True)
class ContingencyTable2x2:
    """Row 1: study set (in-class, out-of-class); row 2: background."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        cells = (self.a, self.b, self.c, self.d)
        if any(not isinstance(x, (int, np.integer)) or x < 0 for x in cells):
            raise ValueError("table cells must be non-negative integers")
        if sum(cells) == 0:
            raise ValueError("table is all zero")


def _log_choose(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def fisher_greater(t: ContingencyTable2x2) -> float:
    """One-sided Fisher exact test, alternative "greater".

    Hypergeometric tail P(X >= a) with all margins fixed: draws = a+b,
    successes in the population = a+c, population N = a+b+c+d. Terms are
    exp(log-gamma combinations) accumulated with exact summation; fine for
    tails down to ~1e-300.
    """
    n_draws = t.a + t.b
    n_success = t.a + t.c
    total = t.a + t.b + t.c + t.d
    lo = max(0, n_draws - (total - n_success))
    hi = min(n_draws, n_success)
    if t.a <= lo:
        return 1.0
    log_denom = _log_choose(total, n_draws)
    terms = [
        math.exp(_log_choose(n_success, x)
                 + _log_choose(total - n_success, n_draws - x)
                 - log_denom)
        for x in range(t.a, hi + 1)
    ]
    return min(math.fsum(terms), 1.0)
