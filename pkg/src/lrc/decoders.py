"""GRAND-style ML decoders for the LRC, guesswork ranks and a Monte-Carlo BLER harness.

A guess order streams putative noise effects from most to least likely:
the soft order sorts by logistic weight under the channel use's reliability
permutation, the hard order by Hamming weight.  Ties inside a weight class
follow the colex order used by :mod:`lrc.weights`.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import accumulate
from typing import Iterator

import numpy as np
from scipy import stats

from .model import BitSequence, LengthMismatch, LrcParams, ReliabilityPermutation, sample_noise, sample_permutation
from .weights import (
    EXACT_N_MAX,
    colex_rank_by_size,
    colex_rank_by_sum,
    hamming_class_parts,
    landslide_parts,
    logistic_weight,
    max_weight,
    subset_counts,
)

log = logging.getLogger(__name__)

SOFT, HARD = "soft", "hard"
DECODER_KINDS = (SOFT, HARD)
ENGINES = ("auto", "explicit", "ensemble")

# the ensemble engine switches to exact sequential sampling once codewords are this dense
_DENSE_BOOK = 1e-3
EXPLICIT_N_MAX = 20


@lru_cache(maxsize=16)
def _soft_offsets(n: int) -> tuple[int, ...]:
    # offsets[w] = number of sequences with logistic weight < w
    if n > EXACT_N_MAX:
        raise ValueError(f"soft ranks need exact coefficients, available for n <= {EXACT_N_MAX}")
    counts = subset_counts(n)[n]
    return (0,) + tuple(accumulate(counts))


@lru_cache(maxsize=16)
def _hard_offsets(n: int) -> tuple[int, ...]:
    return (0,) + tuple(accumulate(math.comb(n, k) for k in range(n + 1)))


@dataclass(frozen=True)
class GuessOrder:
    """Query order over noise effects; ``tau`` is required for the soft order."""

    kind: str
    n: int
    tau: ReliabilityPermutation | None = None

    def __post_init__(self):
        if self.kind not in DECODER_KINDS:
            raise ValueError(f"decoder kind must be one of {DECODER_KINDS}, got {self.kind!r}")
        if self.kind == SOFT:
            if self.tau is None:
                raise ValueError("the soft order needs a reliability permutation")
            if self.tau.n != self.n:
                raise LengthMismatch(f"permutation length {self.tau.n} != n = {self.n}")

    @classmethod
    def soft(cls, tau: ReliabilityPermutation) -> "GuessOrder":
        return cls(SOFT, tau.n, tau)

    @classmethod
    def hard(cls, n: int) -> "GuessOrder":
        return cls(HARD, n)

    def words(self) -> Iterator[int]:
        """Packed noise-effect words in guess order."""
        n = self.n
        if self.kind == HARD:
            for k in range(n + 1):
                for parts in hamming_class_parts(n, k):
                    yield sum(1 << (p - 1) for p in parts)
            return
        # rank r lives at position inv[r-1]
        masks = [0] + [1 << (p - 1) for p in self.tau.inverse()]
        for w in range(max_weight(n) + 1):
            for parts in landslide_parts(n, w):
                yield sum(masks[r] for r in parts)

    def __iter__(self) -> Iterator[BitSequence]:
        for word in self.words():
            yield BitSequence(self.n, word)

    def class_of(self, x: BitSequence) -> int:
        """Logistic weight (soft) or Hamming weight (hard) of ``x``."""
        if self.kind == SOFT:
            return logistic_weight(x, self.tau)
        return x.word.bit_count()


def guess_rank(x: BitSequence, order: GuessOrder) -> int:
    """1-based position of ``x`` in ``order``, computed without streaming."""
    if x.n != order.n:
        raise LengthMismatch(f"sequence length {x.n} != n = {order.n}")
    if order.kind == SOFT:
        ranks = order.tau.ranks_of(x)
        w = sum(ranks)
        return _soft_offsets(order.n)[w] + colex_rank_by_sum(ranks, subset_counts(order.n)) + 1
    positions = x.positions()
    return _hard_offsets(order.n)[len(positions)] + colex_rank_by_size(positions) + 1


# ---------------------------------------------------------------------------
# codebooks and decoding


@dataclass(frozen=True)
class Codebook:
    """``2^ceil(nR)`` distinct words; ``members[m]`` is the code word of message ``m``."""

    n: int
    rate: float
    members: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "_index", frozenset(self.members))
        if len(self._index) != len(self.members):
            raise ValueError("code words must be distinct")

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, x) -> bool:
        word = x.word if isinstance(x, BitSequence) else x
        return word in self._index

    def word(self, message: int) -> BitSequence:
        return BitSequence(self.n, self.members[message])


def codebook_size_bits(n: int, rate: float) -> int:
    if not 0.0 < rate < 1.0:
        raise ValueError(f"code rate must lie in (0, 1), got {rate}")
    return math.ceil(n * rate - 1e-12)


def _uniform_words(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    if n <= 62:
        return rng.integers(0, 1 << n, size=count, dtype=np.int64)
    chunks = -(-n // 32)
    raw = rng.integers(0, 1 << 32, size=(count, chunks), dtype=np.int64)
    out = np.empty(count, dtype=object)
    mask = (1 << n) - 1
    for i, row in enumerate(raw):
        out[i] = sum(int(v) << (32 * j) for j, v in enumerate(row)) & mask
    return out


def build_codebook(n: int, rate: float, rng: np.random.Generator) -> Codebook:
    """Uniformly random codebook of ``2^ceil(nR)`` distinct words (rejection on duplicates)."""
    k = codebook_size_bits(n, rate)
    size = 1 << k
    if k > 24:
        raise ValueError(f"explicit codebook of 2^{k} words is too large; use the ensemble engine")
    seen: dict[int, None] = {}
    while len(seen) < size:
        for w in _uniform_words(n, size - len(seen), rng):
            seen.setdefault(int(w), None)
    return Codebook(n, rate, tuple(seen))


@dataclass(frozen=True)
class DecodeResult:
    decoded: BitSequence | None
    queries: int
    abandoned: bool
    correct: bool | None = None


def grand_decode(y: BitSequence, book: Codebook, order: GuessOrder, max_queries: int | None = None,
                 truth: BitSequence | None = None) -> DecodeResult:
    """Query noise effects in ``order`` until ``y XOR z`` is a code word.

    Abandons (``decoded=None``) once ``max_queries`` guesses have failed.
    """
    if max_queries is not None and max_queries < 1:
        raise ValueError("max_queries must be >= 1")
    if y.n != book.n or y.n != order.n:
        raise LengthMismatch("received word, codebook and guess order disagree on n")
    queries = 0
    for z in order.words():
        queries += 1
        c = y.word ^ z
        if c in book:
            decoded = BitSequence(y.n, c)
            return DecodeResult(decoded, queries, False, None if truth is None else decoded == truth)
        if max_queries is not None and queries >= max_queries:
            break
    return DecodeResult(None, queries, True, None if truth is None else False)


# ---------------------------------------------------------------------------
# Monte-Carlo block error rate


def wilson_interval(errors: int, trials: int, confidence: float = 0.95) -> tuple[float, float]:
    z = stats.norm.ppf(0.5 + confidence / 2.0)
    p = errors / trials
    denom = 1.0 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if errors == 0 else max(0.0, centre - half)
    hi = 1.0 if errors == trials else min(1.0, centre + half)
    return float(lo), float(hi)


@dataclass(frozen=True)
class BlerReport:
    n: int
    beta: float
    rate: float
    decoder: str
    trials: int
    errors: int
    bler: float
    ci_low: float
    ci_high: float
    mean_queries: float
    median_queries: float
    seed: int

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in ("n", "beta", "rate", "decoder", "trials", "errors", "bler",
                                              "ci_low", "ci_high", "mean_queries", "median_queries", "seed")}


def default_max_queries(n: int) -> int:
    return 1 << min(n, 24)


def trial_rng(seed: int, trial: int) -> np.random.Generator:
    """Private stream of one trial; depends only on ``(seed, trial)``."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(trial,)))


def _first_spurious(n_other: int, m: int, rng: np.random.Generator) -> int:
    """Position of the first code word among ``n_other`` non-transmitted guesses.

    The ``m`` other code words form a uniform ``m``-subset of those guesses.
    Sparse books use ``P(S > k) ~ (1 - k/N_eff)^m`` with a midpoint-corrected
    ``N_eff``; dense books are sampled exactly one guess at a time.
    """
    if m == 0:
        return n_other + 1
    if m / n_other <= _DENSE_BOOK:
        u = rng.random()
        n_eff = n_other - (m - 1) / 2.0
        k = n_eff * -math.expm1(math.log(u) / m) if u > 0 else n_eff
        return min(int(k) + 1, n_other - m + 1)
    k = 0
    while True:
        batch = 256
        u = rng.random(batch)
        idx = np.arange(k, k + batch)
        hit = u * (n_other - idx) < m
        if hit.any():
            return int(k + np.argmax(hit) + 1)
        k += batch


def _ensemble_trial(params: LrcParams, size_bits: int, kind: str, seed: int, trial: int) -> tuple[bool, int]:
    # the transmitted word is irrelevant by symmetry: only the noise rank and the book density matter
    rng = trial_rng(seed, trial)
    n = params.n
    tau = sample_permutation(n, rng)
    noise = sample_noise(tau, params, rng)
    order = GuessOrder.soft(tau) if kind == SOFT else GuessOrder.hard(n)
    g = guess_rank(noise, order)
    s = _first_spurious((1 << n) - 1, (1 << size_bits) - 1, rng)
    if s < g:
        return False, s
    return True, g


def _explicit_trial(params: LrcParams, rate: float, kind: str, seed: int, trial: int,
                    book: Codebook | None) -> tuple[bool, int]:
    rng = trial_rng(seed, trial)
    n = params.n
    if book is None:
        book = build_codebook(n, rate, rng)
    x = book.word(int(rng.integers(len(book))))
    tau = sample_permutation(n, rng)
    y = x ^ sample_noise(tau, params, rng)
    order = GuessOrder.soft(tau) if kind == SOFT else GuessOrder.hard(n)
    res = grand_decode(y, book, order, None, truth=x)
    return bool(res.correct), res.queries


def _run_chunk(args) -> list[tuple[bool, int]]:
    params, rate, kind, seed, trials, engine, book = args
    if engine == "ensemble":
        size_bits = codebook_size_bits(params.n, rate)
        return [_ensemble_trial(params, size_bits, kind, seed, t) for t in trials]
    return [_explicit_trial(params, rate, kind, seed, t, book) for t in trials]


def _resolve_engine(engine: str, n: int, rate: float) -> str:
    if engine not in ENGINES:
        raise ValueError(f"engine must be one of {ENGINES}, got {engine!r}")
    if engine != "auto":
        return engine
    return "explicit" if n <= 16 and codebook_size_bits(n, rate) <= 12 else "ensemble"


def monte_carlo_bler(params: LrcParams, rate: float, trials: int, seed: int, decoder_kind: str,
                     max_queries: int | None = -1, *, engine: str = "auto", fresh_codebook: bool = True,
                     workers: int = 1) -> BlerReport:
    """Block error rate of the soft or hard GRAND decoder over random codebooks.

    ``max_queries=-1`` selects the default cap ``2^min(n, 24)``; ``None`` never
    abandons.  Abandoned trials count as errors.  The ``ensemble`` engine never
    materializes the codebook: it samples where the first non-transmitted
    code word falls in the guess order and compares it with the exact rank of
    the true noise effect.  Results depend only on ``(seed, trials)``, not on
    ``workers``.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if decoder_kind not in DECODER_KINDS:
        raise ValueError(f"decoder must be one of {DECODER_KINDS}, got {decoder_kind!r}")
    codebook_size_bits(params.n, rate)
    if max_queries == -1:
        max_queries = default_max_queries(params.n)
    if max_queries is not None and max_queries < 1:
        raise ValueError("max_queries must be >= 1")
    engine = _resolve_engine(engine, params.n, rate)
    if engine == "explicit" and params.n > EXPLICIT_N_MAX:
        raise ValueError(f"explicit engine limited to n <= {EXPLICIT_N_MAX}")
    book = None
    if engine == "explicit" and not fresh_codebook:
        book = build_codebook(params.n, rate, np.random.default_rng(np.random.SeedSequence(seed)))
    elif engine == "ensemble" and not fresh_codebook:
        log.warning("the ensemble engine always averages over codebooks; fresh_codebook=False ignored")

    idx = list(range(trials))
    if workers > 1:
        size = -(-trials // (4 * workers))
        chunks = [idx[i:i + size] for i in range(0, trials, size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_run_chunk, [(params, rate, decoder_kind, seed, c, engine, book) for c in chunks])
            outcomes = [o for part in parts for o in part]
    else:
        outcomes = _run_chunk((params, rate, decoder_kind, seed, idx, engine, book))

    errors = 0
    queries = []
    for ok, q in outcomes:
        if max_queries is not None and q > max_queries:
            ok, q = False, max_queries
        errors += not ok
        queries.append(q)
    lo, hi = wilson_interval(errors, trials)
    qs = np.array([float(q) for q in queries])
    return BlerReport(n=params.n, beta=params.beta, rate=rate, decoder=decoder_kind, trials=trials,
                      errors=errors, bler=errors / trials, ci_low=lo, ci_high=hi,
                      mean_queries=float(qs.mean()), median_queries=float(np.median(qs)), seed=seed)
