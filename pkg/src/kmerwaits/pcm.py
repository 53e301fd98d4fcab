"""Position count matrices: parsing, additive scoring, k-mer extraction.

A PCM holds per-position letter counts from aligned binding sites. A word's
score is the sum of its letters' counts, one per column; extraction returns
every word scoring strictly above a fraction theta of the best achievable
score.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .seqmodel import DNA, KMer


@dataclass(frozen=True, eq=False)
class PCM:
    """4 x k count matrix, rows in A,C,G,T order."""

    id: str
    counts: np.ndarray

    def __post_init__(self):
        counts = np.array(self.counts, dtype=np.int64)
        if counts.ndim != 2 or counts.shape[0] != 4 or counts.shape[1] < 1:
            raise ValueError("PCM must be 4 rows by >= 1 columns")
        if np.any(counts < 0):
            raise ValueError("PCM counts must be non-negative")
        if np.any(counts.sum(axis=0) == 0):
            raise ValueError("PCM has an all-zero column")
        counts.flags.writeable = False
        object.__setattr__(self, "counts", counts)

    @property
    def k(self) -> int:
        return self.counts.shape[1]


def parse_pcm(text: str) -> PCM:
    """Parse a JASPAR-style matrix.

    Accepts an optional '>' header, then four count rows in A,C,G,T order,
    each either `A [ 1 2 3 ]` or bare whitespace-separated integers.
    """
    name = ""
    rows = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if rows:
                raise ValueError("header after matrix rows")
            name = line[1:].strip()
            continue
        tokens = line.replace("[", " ").replace("]", " ").split()
        expected = "ACGT"[len(rows)] if len(rows) < 4 else None
        if tokens and tokens[0].isalpha():
            if tokens[0] != expected:
                raise ValueError(f"expected row {expected!r}, got {tokens[0]!r}")
            tokens = tokens[1:]
        try:
            values = [int(x) for x in tokens]
        except ValueError:
            raise ValueError(f"non-integer count in row: {line!r}") from None
        if any(v < 0 for v in values):
            raise ValueError("negative count")
        rows.append(values)
    if len(rows) != 4:
        raise ValueError(f"expected 4 count rows, got {len(rows)}")
    if len({len(r) for r in rows}) != 1:
        raise ValueError("ragged count rows")
    return PCM(id=name, counts=np.array(rows, dtype=np.int64))


def load_pcm(path) -> PCM:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_pcm(fh.read())


def pcm_score(m: PCM, b: KMer) -> int:
    """Sum of the word's per-column counts."""
    if b.k != m.k:
        raise ValueError("k-mer length does not match matrix width")
    return int(sum(m.counts[b.indices[i], i] for i in range(m.k)))


def max_score(m: PCM) -> int:
    return int(m.counts.max(axis=0).sum())


def consensus(m: PCM) -> KMer:
    """Column-wise argmax word, ties to the earlier letter."""
    return KMer(tuple(int(i) for i in m.counts.argmax(axis=0)), DNA)


def extract_kmers(m: PCM, theta: float = 0.95) -> list[KMer]:
    """All words scoring strictly above theta * max_score, lexicographic.

    Depth-first over columns with a deficit bound: a partial word is pruned
    as soon as even perfect remaining columns cannot beat the threshold, so
    the 4^k space is never enumerated blindly.
    """
    if not 0.0 < theta <= 1.0:
        raise ValueError("theta must be in (0, 1]")
    best = max_score(m)
    threshold = theta * best
    colmax = m.counts.max(axis=0)
    k = m.k
    out: list[KMer] = []
    word = [0] * k

    def descend(col: int, deficit: int):
        if best - deficit <= threshold:
            return
        if col == k:
            out.append(KMer(tuple(word), DNA))
            return
        cm = int(colmax[col])
        for letter in range(4):
            word[col] = letter
            descend(col + 1, deficit + cm - int(m.counts[letter, col]))

    descend(0, 0)
    return out
