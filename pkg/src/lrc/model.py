"""Linear reliability channel: parameters, sampling and exact noise-effect PMFs.

Position ``i`` (1-based) of a channel use is sent through a BSC whose
reliability rank is ``tau(i)``; the rank-``j`` BSC flips with probability
``q_j = e^{-beta j/n} / (1 + e^{-beta j/n})``.  All probabilities are kept in
the natural-log domain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy.special import logsumexp


class LengthMismatch(ValueError):
    """Raised when a sequence length disagrees with the governing block length."""


@dataclass(frozen=True)
class LrcParams:
    n: int
    beta: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"block length n must be a positive integer, got {self.n!r}")
        if not (self.beta > 0) or not math.isfinite(self.beta):
            raise ValueError(f"beta must be a positive finite real, got {self.beta!r}")


@dataclass(frozen=True)
class BitSequence:
    """A length-``n`` binary word packed into an integer.

    Bit ``i`` (1-based) lives at integer bit ``i - 1``.
    """

    n: int
    word: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("BitSequence needs n >= 1")
        if self.word < 0 or self.word >> self.n:
            raise ValueError(f"word {self.word} does not fit in {self.n} bits")

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> "BitSequence":
        bits = [int(b) for b in bits]
        if any(b not in (0, 1) for b in bits):
            raise ValueError("bits must be 0 or 1")
        word = 0
        for i, b in enumerate(bits):
            word |= b << i
        return cls(len(bits), word)

    @classmethod
    def zeros(cls, n: int) -> "BitSequence":
        return cls(n, 0)

    @classmethod
    def from_positions(cls, n: int, positions: Iterable[int]) -> "BitSequence":
        """Word with ones exactly at the given 1-based positions."""
        word = 0
        for p in positions:
            if not 1 <= p <= n:
                raise ValueError(f"position {p} outside 1..{n}")
            word |= 1 << (p - 1)
        return cls(n, word)

    @property
    def bits(self) -> tuple[int, ...]:
        return tuple((self.word >> i) & 1 for i in range(self.n))

    def positions(self) -> list[int]:
        """1-based positions holding a one, ascending."""
        out = []
        w, i = self.word, 1
        while w:
            if w & 1:
                out.append(i)
            w >>= 1
            i += 1
        return out

    def __xor__(self, other: "BitSequence") -> "BitSequence":
        if other.n != self.n:
            raise LengthMismatch(f"lengths {self.n} and {other.n} differ")
        return BitSequence(self.n, self.word ^ other.word)

    def __len__(self) -> int:
        return self.n

    def to_hex(self) -> dict:
        return {"n": self.n, "hex": format(self.word, "x")}

    @classmethod
    def from_hex(cls, payload: dict) -> "BitSequence":
        return cls(int(payload["n"]), int(payload["hex"], 16))


@dataclass(frozen=True)
class ReliabilityPermutation:
    """``perm[i - 1] = tau(i)``: the reliability rank of position ``i``."""

    perm: tuple[int, ...]

    def __post_init__(self):
        perm = tuple(int(p) for p in self.perm)
        object.__setattr__(self, "perm", perm)
        if sorted(perm) != list(range(1, len(perm) + 1)):
            raise ValueError("perm must be a permutation of 1..n")

    @classmethod
    def identity(cls, n: int) -> "ReliabilityPermutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.perm)

    def __call__(self, i: int) -> int:
        return self.perm[i - 1]

    def inverse(self) -> tuple[int, ...]:
        """``inv[j - 1]`` is the position whose rank is ``j``."""
        inv = [0] * self.n
        for i, j in enumerate(self.perm, start=1):
            inv[j - 1] = i
        return tuple(inv)

    def ranks_of(self, x: BitSequence) -> list[int]:
        """Reliability ranks of the one-positions of ``x`` (the reindexed support)."""
        if x.n != self.n:
            raise LengthMismatch(f"sequence length {x.n} != permutation length {self.n}")
        return [self.perm[p - 1] for p in x.positions()]


def _check_same_length(x: BitSequence, params: LrcParams) -> None:
    if x.n != params.n:
        raise LengthMismatch(f"sequence length {x.n} != n = {params.n}")


def bit_flip_probability(i: int, params: LrcParams) -> float:
    """Flip probability of the BSC with reliability rank ``i``."""
    if not 1 <= i <= params.n:
        raise IndexError(f"index {i} outside 1..{params.n}")
    return float(1.0 / (1.0 + math.exp(params.beta * i / params.n)))


def flip_probabilities(params: LrcParams) -> np.ndarray:
    """All ``q_1..q_n`` as an array (index ``j - 1`` holds ``q_j``)."""
    ranks = np.arange(1, params.n + 1)
    return 1.0 / (1.0 + np.exp(params.beta * ranks / params.n))


def log_normalizer(params: LrcParams) -> float:
    """``sum_i ln(1 + e^{-beta i/n})``, shared by both PMFs."""
    ranks = np.arange(1, params.n + 1)
    return float(np.sum(np.log1p(np.exp(-params.beta * ranks / params.n))))


def sample_permutation(n: int, rng: np.random.Generator) -> ReliabilityPermutation:
    if n < 1:
        raise ValueError("n must be >= 1")
    return ReliabilityPermutation(tuple(int(v) + 1 for v in rng.permutation(n)))


def sample_noise(tau: ReliabilityPermutation, params: LrcParams, rng: np.random.Generator) -> BitSequence:
    """Noise effect of one channel use given the reliability permutation."""
    if tau.n != params.n:
        raise LengthMismatch(f"permutation length {tau.n} != n = {params.n}")
    q = flip_probabilities(params)[np.asarray(tau.perm) - 1]
    flips = rng.random(params.n) < q
    return BitSequence.from_bits(flips.astype(int))


def transmit(x: BitSequence, tau: ReliabilityPermutation, params: LrcParams,
             rng: np.random.Generator) -> BitSequence:
    """Pass ``x`` through the LRC; position ``i`` flips with probability ``q_{tau(i)}``."""
    _check_same_length(x, params)
    return x ^ sample_noise(tau, params, rng)


def soft_noise_log_pmf(x: BitSequence, tau: ReliabilityPermutation, params: LrcParams) -> float:
    _check_same_length(x, params)
    w = sum(tau.ranks_of(x))
    return -params.beta * w / params.n - log_normalizer(params)


def elementary_symmetric_log(params: LrcParams) -> np.ndarray:
    """``ln a^n_k(beta)`` for ``k = 0..n`` over the variables ``e^{-beta i/n}``."""
    n = params.n
    log_vars = -params.beta * np.arange(1, n + 1) / n
    la = np.full(n + 1, -np.inf)
    la[0] = 0.0
    for m, lv in enumerate(log_vars, start=1):
        # right-hand side is evaluated from the previous row before assignment
        la[1:m + 1] = np.logaddexp(la[1:m + 1], la[0:m] + lv)
    return la


def log_binomial(n: int, k: int) -> float:
    return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)


def hard_noise_log_pmf(x: BitSequence, params: LrcParams, esl: Sequence[float] | None = None) -> float:
    """Prior (permutation-averaged) log-PMF; depends on ``x`` only via its Hamming weight.

    ``esl`` may carry a precomputed :func:`elementary_symmetric_log` table.
    """
    _check_same_length(x, params)
    if esl is None:
        esl = elementary_symmetric_log(params)
    k = x.word.bit_count()
    return float(esl[k]) - log_binomial(params.n, k) - log_normalizer(params)


def hard_log_pmf_by_weight(params: LrcParams) -> np.ndarray:
    """Per-sequence hard log-PMF for each Hamming weight ``k = 0..n``."""
    esl = elementary_symmetric_log(params)
    lb = np.array([log_binomial(params.n, k) for k in range(params.n + 1)])
    return esl - lb - log_normalizer(params)


def total_log_mass(log_pmfs: Iterable[float]) -> float:
    return float(logsumexp(np.fromiter(log_pmfs, dtype=float)))
