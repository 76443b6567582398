"""Logistic and Hamming weights, constant-weight enumeration and logistic coefficients.

The logistic coefficient ``a(n, w)`` counts subsets of ``{1..n}`` summing to
``w`` (partitions of ``w`` into distinct parts no larger than ``n``).  Within a
weight class, subsets are ordered colexicographically: by largest element
first, which for equal-sum sets is the lexicographic order of their
descending part tuples.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np
from scipy import integrate, optimize
from scipy.special import expit

from .model import BitSequence, LengthMismatch, ReliabilityPermutation

BRIDGES_T_MIN = math.sqrt(2.0)
BRIDGES_BETA_MAX = math.pi / (2.0 * math.sqrt(3.0))

EXACT_N_MAX = 128


def max_weight(n: int) -> int:
    return n * (n + 1) // 2


def logistic_weight(x: BitSequence, tau: ReliabilityPermutation) -> int:
    if x.n != tau.n:
        raise LengthMismatch(f"sequence length {x.n} != permutation length {tau.n}")
    return sum(tau.ranks_of(x))


def hamming_weight(x: BitSequence) -> int:
    return x.word.bit_count()


def _subsets_with_sum(m: int, s: int) -> Iterator[tuple[int, ...]]:
    # colex: sets avoiding m come before sets containing m
    if s == 0:
        yield ()
        return
    if m <= 0 or s > m * (m + 1) // 2:
        return
    yield from _subsets_with_sum(m - 1, s)
    if s >= m:
        for rest in _subsets_with_sum(m - 1, s - m):
            yield rest + (m,)


def landslide_parts(n: int, w: int) -> Iterator[tuple[int, ...]]:
    """Ascending part tuples of every subset of ``{1..n}`` summing to ``w``, colex order."""
    if not 0 <= w <= max_weight(n):
        raise ValueError(f"logistic weight {w} outside [0, {max_weight(n)}]")
    return _subsets_with_sum(n, w)


def landslide_enumerate(n: int, w: int) -> Iterator[BitSequence]:
    """Stream every length-``n`` sequence of logistic weight ``w`` (identity permutation)."""
    for parts in landslide_parts(n, w):
        yield BitSequence.from_positions(n, parts)


def _subsets_with_size(m: int, k: int) -> Iterator[tuple[int, ...]]:
    if k == 0:
        yield ()
        return
    if k > m:
        return
    yield from _subsets_with_size(m - 1, k)
    for rest in _subsets_with_size(m - 1, k - 1):
        yield rest + (m,)


def hamming_class_parts(n: int, k: int) -> Iterator[tuple[int, ...]]:
    """Ascending position tuples of all ``k``-subsets of ``{1..n}``, colex order."""
    if not 0 <= k <= n:
        raise ValueError(f"Hamming weight {k} outside [0, {n}]")
    return _subsets_with_size(n, k)


@dataclass(frozen=True)
class LogisticCoefficientTable:
    n: int
    counts: tuple[int, ...]

    def __getitem__(self, w: int) -> int:
        return self.counts[w]

    def __len__(self) -> int:
        return len(self.counts)

    def log_counts(self) -> np.ndarray:
        return np.array([_log_int(c) for c in self.counts])


def _log_int(c: int) -> float:
    if c <= 0:
        return -math.inf
    if c < 2**1000:
        return math.log(c)
    shift = c.bit_length() - 900
    return math.log(c >> shift) + shift * math.log(2.0)


@lru_cache(maxsize=8)
def _count_rows(n: int) -> tuple[tuple[int, ...], ...]:
    # rows[m][s] = a(m, s); row m has m(m+1)/2 + 1 entries
    rows: list[tuple[int, ...]] = [(1,)]
    cur = [1]
    for part in range(1, n + 1):
        nxt = cur + [0] * part
        for s in range(len(nxt) - 1, part - 1, -1):
            nxt[s] += nxt[s - part]
        cur = nxt
        rows.append(tuple(cur))
    return tuple(rows)


def logistic_coefficient_exact(n: int) -> LogisticCoefficientTable:
    """Exact ``a(n, w)`` for all ``w`` by the distinct-parts subset-sum DP."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > EXACT_N_MAX:
        raise ValueError(f"exact table limited to n <= {EXACT_N_MAX}; use logistic_coefficient_log")
    return LogisticCoefficientTable(n, _count_rows(n)[n])


def logistic_coefficient_log(n: int) -> np.ndarray:
    """``ln a(n, w)`` via a float log-domain DP, usable beyond the exact range."""
    if n < 1:
        raise ValueError("n must be >= 1")
    W = max_weight(n)
    la = np.full(W + 1, -np.inf)
    la[0] = 0.0
    top = 0
    for part in range(1, n + 1):
        top += part
        la[part:top + 1] = np.logaddexp(la[part:top + 1], la[0:top + 1 - part])
    return la


def subset_counts(n: int) -> tuple[tuple[int, ...], ...]:
    """``a(m, s)`` rows for ``m = 0..n`` (exact); used for within-class ranking."""
    return _count_rows(n)


def colex_rank_by_sum(parts: list[int] | tuple[int, ...], rows) -> int:
    """0-based position of a distinct-part set within its sum class, colex order."""
    s = sum(parts)
    rank = 0
    for e in sorted(parts, reverse=True):
        row = rows[e - 1]
        if s < len(row):
            rank += row[s]
        s -= e
    return rank


def colex_rank_by_size(parts: list[int] | tuple[int, ...]) -> int:
    """0-based position of a ``k``-subset within all ``k``-subsets, colex order."""
    return sum(math.comb(c - 1, i) for i, c in enumerate(sorted(parts), start=1))


# ---------------------------------------------------------------------------
# Bridges' asymptotic estimate


def _bridges_integral(beta: float, t: float) -> float:
    val, _ = integrate.quad(lambda u: u * expit(-beta * u), 0.0, t, epsabs=1e-13, epsrel=1e-13, limit=200)
    return val


def _bridges_dbeta_integral(beta: float, t: float) -> float:
    def integrand(u):
        p = expit(-beta * u)
        return u * u * p * (1.0 - p)

    val, _ = integrate.quad(integrand, 0.0, t, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def bridges_beta(t: float) -> tuple[float, float]:
    """Solve ``1 = int_0^t u e^{-beta u}/(1 + e^{-beta u}) du`` for ``beta``.

    Returns:
        ``(beta, dbeta/dt)``; the derivative comes from implicit
        differentiation of the defining integral.
    """
    if not t > BRIDGES_T_MIN:
        raise ValueError(f"bridges_beta needs t > sqrt(2), got {t}")

    def residual(b):
        return _bridges_integral(b, t) - 1.0

    hi = BRIDGES_BETA_MAX
    lo = -1.0
    while residual(lo) <= 0.0:
        lo *= 2.0
        if lo < -1e8:
            raise ArithmeticError(f"could not bracket bridges_beta at t={t}")
    beta = optimize.brentq(residual, lo, hi, xtol=1e-13, rtol=4 * np.finfo(float).eps, maxiter=300)
    # Newton polish on the defining equation
    d = _bridges_dbeta_integral(beta, t)
    if d > 0:
        beta = beta + residual(beta) / d
        d = _bridges_dbeta_integral(beta, t)
    dbeta = t * expit(-beta * t) / d
    return float(beta), float(dbeta)


@dataclass(frozen=True)
class BridgesEstimate:
    log_count: float
    t: float
    beta_of_t: float
    A_of_t: float
    B_of_t: float
    w_used: int


def _log_cosh(x: float) -> float:
    ax = abs(x)
    return ax + math.log1p(math.exp(-2.0 * ax)) - math.log(2.0)


def bridges_log_approx(n: int, w: int) -> BridgesEstimate:
    """Natural log of Bridges' approximation to ``a(n, w)``.

    Weights above ``n(n+1)/4`` are reflected to ``n(n+1)/2 - w``.  This covers
    every ``w`` with ``n / sqrt(w) <= sqrt(2)`` and makes mirrored weights give
    identical estimates.
    """
    W = max_weight(n)
    if not 1 <= w <= W - 1:
        raise ValueError(f"Bridges' approximation needs 1 <= w <= {W - 1}, got {w}")
    if 2 * w > W:
        w = W - w
    t = n / math.sqrt(w)
    beta, dbeta = bridges_beta(t)
    log_A = _log_cosh(beta * t / 2.0) + 0.5 * math.log(dbeta / (math.pi * t))
    B = 2.0 * beta + t * float(np.logaddexp(0.0, -beta * t))
    log_count = log_A - 0.75 * math.log(w) + B * math.sqrt(w)
    return BridgesEstimate(log_count=log_count, t=t, beta_of_t=beta, A_of_t=math.exp(log_A), B_of_t=B, w_used=w)
