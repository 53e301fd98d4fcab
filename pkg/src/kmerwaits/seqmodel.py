"""Alphabet, k-mer and M0 substitution-model primitives.

The M0 model is an independent-site model: letters of the ancestral sequence
are iid with distribution nu, and each site mutates independently per
generation according to a 4x4 transition matrix p1. Everything downstream
(automata, chains) only needs nu and p1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

DNA_LETTERS = ("A", "C", "G", "T")

NU_SUM_TOL = 1e-12
ROW_SUM_TOL = 1e-7
SYMMETRY_TOL = 1e-12


@dataclass(frozen=True)
class Alphabet:
    """Ordered alphabet; letter index i is position i in `letters`."""

    letters: tuple[str, ...] = DNA_LETTERS

    def __post_init__(self):
        if len(self.letters) < 2:
            raise ValueError("alphabet needs at least 2 letters")
        if len(set(self.letters)) != len(self.letters):
            raise ValueError("alphabet letters must be distinct")

    @property
    def size(self) -> int:
        return len(self.letters)

    def index(self, letter: str) -> int:
        try:
            return self.letters.index(letter)
        except ValueError:
            raise ValueError(f"letter {letter!r} not in alphabet") from None

    @property
    def is_dna(self) -> bool:
        return self.letters == DNA_LETTERS


DNA = Alphabet()
# complement partner of DNA letter index i (A<->T, C<->G)
_DNA_COMPLEMENT = (3, 2, 1, 0)


@dataclass(frozen=True)
class KMer:
    """A word over an alphabet, stored as letter indices."""

    indices: tuple[int, ...]
    alphabet: Alphabet = DNA

    def __post_init__(self):
        if len(self.indices) < 1:
            raise ValueError("empty k-mer")
        if any(not 0 <= i < self.alphabet.size for i in self.indices):
            raise ValueError("k-mer index out of alphabet range")

    @property
    def k(self) -> int:
        return len(self.indices)

    @property
    def text(self) -> str:
        return "".join(self.alphabet.letters[i] for i in self.indices)

    def __str__(self) -> str:
        return self.text


def parse_kmer(text: str, alphabet: Alphabet = DNA) -> KMer:
    """Parse a word into a KMer; rejects empty input and foreign letters."""
    if not text:
        raise ValueError("empty k-mer")
    return KMer(tuple(alphabet.index(c) for c in text), alphabet)


def reverse_complement(b: KMer) -> KMer:
    """Reversed, letter-complemented word (DNA alphabet only)."""
    if not b.alphabet.is_dna:
        raise ValueError("reverse complement needs the DNA alphabet")
    return KMer(tuple(_DNA_COMPLEMENT[i] for i in reversed(b.indices)), b.alphabet)


@dataclass(frozen=True, eq=False)
class M0Params:
    """Stationary letter distribution nu and one-generation transitions p1.

    p1 diagonals are renormalized on construction to 1 - sum(off-diagonal):
    published parameter tables are rounded and their rows miss exact
    stochasticity by ~1e-8, which would otherwise leak into long products.
    The matrix as given is kept in `p1_raw` for validation reporting.
    """

    nu: np.ndarray
    p1: np.ndarray
    alphabet: Alphabet = DNA
    p1_raw: np.ndarray = field(repr=False, default=None)

    def __post_init__(self):
        a = self.alphabet.size
        nu = np.array(self.nu, dtype=np.float64)
        p1 = np.array(self.p1, dtype=np.float64)
        if nu.shape != (a,):
            raise ValueError(f"nu must have shape ({a},)")
        if p1.shape != (a, a):
            raise ValueError(f"p1 must have shape ({a}, {a})")
        if np.any(nu < 0) or np.any(p1 < 0):
            raise ValueError("probabilities must be non-negative")
        if abs(nu.sum() - 1.0) > NU_SUM_TOL:
            raise ValueError("nu does not sum to 1")
        row_sums = p1.sum(axis=1)
        if np.any(np.abs(row_sums - 1.0) > ROW_SUM_TOL):
            raise ValueError("p1 rows do not sum to 1 within tolerance")
        raw = p1.copy()
        for i in range(a):
            off = p1[i].sum() - p1[i, i]
            p1[i, i] = 1.0 - off
        nu.flags.writeable = False
        p1.flags.writeable = False
        raw.flags.writeable = False
        object.__setattr__(self, "nu", nu)
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p1_raw", raw)


@dataclass(frozen=True, eq=False)
class RateMatrix:
    """Instantaneous substitution rates; rows sum to zero."""

    q: np.ndarray

    def __post_init__(self):
        q = np.array(self.q, dtype=np.float64)
        if q.ndim != 2 or q.shape[0] != q.shape[1]:
            raise ValueError("rate matrix must be square")
        off = q.copy()
        np.fill_diagonal(off, 0.0)
        if np.any(off < 0):
            raise ValueError("off-diagonal rates must be non-negative")
        if np.any(np.abs(q.sum(axis=1)) > 1e-12):
            raise ValueError("rate matrix rows must sum to 0")
        q.flags.writeable = False
        object.__setattr__(self, "q", q)


@dataclass(frozen=True)
class Finding:
    check: str
    severity: str  # "info" | "warning" | "error"
    detail: str


@dataclass(frozen=True)
class ValidationReport:
    findings: tuple[Finding, ...]

    @property
    def ok(self) -> bool:
        return all(f.severity != "error" for f in self.findings)


# the six strand-symmetry identities on p1, as (from, to) index pairs
_SYMMETRY_PAIRS = (
    ((0, 3), (3, 0)),  # A->T == T->A
    ((1, 2), (2, 1)),  # C->G == G->C
    ((0, 1), (3, 2)),  # A->C == T->G
    ((1, 0), (2, 3)),  # C->A == G->T
    ((0, 2), (3, 1)),  # A->G == T->C
    ((2, 0), (1, 3)),  # G->A == C->T
)


def validate_arrays(nu, p1, alphabet: Alphabet = DNA) -> ValidationReport:
    """Report on raw parameter arrays, before any renormalization.

    Symmetry violations are warnings, not errors: the stationary
    distribution estimated from real promoters is itself not
    reverse-complement symmetric, so symmetry is advisory.
    """
    nu = np.asarray(nu, dtype=np.float64)
    p1 = np.asarray(p1, dtype=np.float64)
    a = alphabet.size
    if nu.shape != (a,) or p1.shape != (a, a):
        raise ValueError("parameter arrays have wrong dimensions")
    findings = []
    L = alphabet.letters

    nu_dev = abs(nu.sum() - 1.0)
    negatives = bool(np.any(nu < 0) or np.any(p1 < 0))
    findings.append(Finding(
        "nu-simplex",
        "info" if nu_dev <= NU_SUM_TOL and not np.any(nu < 0) else "error",
        f"sum(nu) deviates from 1 by {nu_dev:.3e}",
    ))
    if negatives:
        findings.append(Finding("non-negative", "error", "negative entries present"))

    row_dev = float(np.abs(p1.sum(axis=1) - 1.0).max())
    findings.append(Finding(
        "p1-row-stochastic",
        "info" if row_dev <= ROW_SUM_TOL else "error",
        f"max row-sum deviation before renormalization {row_dev:.3e}",
    ))

    if alphabet.is_dna:
        for (i, j), (u, v) in _SYMMETRY_PAIRS:
            gap = abs(p1[i, j] - p1[u, v])
            name = f"symmetry-{L[i]}{L[j]}-{L[u]}{L[v]}"
            if gap <= SYMMETRY_TOL:
                findings.append(Finding(name, "info", "pair equal"))
            else:
                findings.append(Finding(
                    name, "warning",
                    f"p[{L[i]},{L[j]}]={p1[i, j]!r} != p[{L[u]},{L[v]}]={p1[u, v]!r}",
                ))
    return ValidationReport(tuple(findings))


def validate_model(params: M0Params) -> ValidationReport:
    """Validate a constructed model; row sums are judged on the raw matrix."""
    return validate_arrays(params.nu, params.p1_raw, params.alphabet)


def matrix_exponential(q: RateMatrix, t: float) -> np.ndarray:
    """exp(t*Q) by scaling-and-squaring with a truncated Taylor series.

    With the scaled norm kept below 1/2, 24 Taylor terms leave a truncation
    error far under 1e-12 for these small stochastic generators.
    """
    if t < 0:
        raise ValueError("time must be non-negative")
    m = q.q * float(t)
    norm = float(np.abs(m).sum(axis=1).max())
    s = max(0, math.frexp(norm)[1] + 1) if norm > 0 else 0
    a = m / (2.0 ** s)
    size = m.shape[0]
    out = np.eye(size)
    term = np.eye(size)
    for i in range(1, 25):
        term = term @ a / i
        out = out + term
    for _ in range(s):
        out = out @ out
    return np.clip(out, 0.0, 1.0)


# Shipped defaults: stationary distribution and per-generation transition
# probabilities estimated from human promoter sequences (chimp/macaque
# alignments), A/C/G/T order.
HUMAN_PROMOTER_NU = (0.23889, 0.26242, 0.25865, 0.24004)
HUMAN_PROMOTER_P1 = (
    (9.99999996e-01, 4.54999995e-09, 1.57499996e-08, 3.40000002e-09),
    (6.14999993e-09, 9.99999996e-01, 7.14999985e-09, 2.17499994e-08),
    (2.17499994e-08, 7.14999985e-09, 9.99999996e-01, 6.14999993e-09),
    (3.40000002e-09, 1.57499996e-08, 4.54999995e-09, 9.99999998e-01),
)

YEARS_PER_GENERATION = 20.0


def default_params() -> M0Params:
    """The shipped human-promoter M0 parameters."""
    return M0Params(np.array(HUMAN_PROMOTER_NU), np.array(HUMAN_PROMOTER_P1))


def parse_params(text: str, alphabet: Alphabet = DNA) -> M0Params:
    """Parse the plain-text parameter format.

    '#' starts a comment; one `nu v v v v` line; one `p LETTER v v v v`
    line per source letter, value columns in alphabet order.
    """
    nu = None
    rows: dict[str, list[float]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        try:
            if tokens[0] == "nu":
                if nu is not None:
                    raise ValueError("duplicate nu line")
                values = [float(x) for x in tokens[1:]]
                if len(values) != alphabet.size:
                    raise ValueError(f"nu needs {alphabet.size} values")
                nu = values
            elif tokens[0] == "p":
                letter = tokens[1]
                if letter not in alphabet.letters:
                    raise ValueError(f"unknown source letter {letter!r}")
                if letter in rows:
                    raise ValueError(f"duplicate p line for {letter!r}")
                values = [float(x) for x in tokens[2:]]
                if len(values) != alphabet.size:
                    raise ValueError(f"p {letter} needs {alphabet.size} values")
                rows[letter] = values
            else:
                raise ValueError(f"unknown directive {tokens[0]!r}")
        except (ValueError, IndexError) as exc:
            raise ValueError(f"parameter file line {lineno}: {exc}") from None
    if nu is None:
        raise ValueError("parameter file has no nu line")
    missing = [c for c in alphabet.letters if c not in rows]
    if missing:
        raise ValueError(f"parameter file missing p lines for {', '.join(missing)}")
    p1 = np.array([rows[c] for c in alphabet.letters])
    return M0Params(np.array(nu), p1, alphabet)


def load_params(path) -> M0Params:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_params(fh.read())


def format_params(params: M0Params) -> str:
    """Render params in the text format; values use shortest exact repr."""
    lines = ["# kmerwaits M0 parameters"]
    lines.append("nu " + " ".join(repr(float(x)) for x in params.nu))
    for i, letter in enumerate(params.alphabet.letters):
        lines.append(f"p {letter} " + " ".join(repr(float(x)) for x in params.p1_raw[i]))
    return "\n".join(lines) + "\n"
