"""Exhaustive finite-n guesswork moments bracketed by the Arikan bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import logsumexp

from ..model import LrcParams, hard_log_pmf_by_weight, log_normalizer
from ..weights import logistic_coefficient_exact
from .scgf import HARD, SOFT

SANDWICH_N_MAX = 12


@dataclass(frozen=True)
class Sandwich:
    lower: float
    empirical: float
    upper: float

    @property
    def holds(self) -> bool:
        return self.lower <= self.empirical <= self.upper


def _class_structure(params: LrcParams, mode: str) -> tuple[np.ndarray, np.ndarray]:
    # (per-sequence log-probability, class size), classes in decreasing probability
    n = params.n
    if mode == SOFT:
        counts = logistic_coefficient_exact(n).counts
        w = np.arange(len(counts))
        logp = -params.beta * w / n - log_normalizer(params)
        return logp, np.array(counts, dtype=float)
    if mode == HARD:
        sizes = np.array([math.comb(n, k) for k in range(n + 1)], dtype=float)
        return hard_log_pmf_by_weight(params), sizes
    raise ValueError(f"unknown mode {mode!r}")


def guesswork_log_moment(params: LrcParams, alpha: float, mode: str = SOFT) -> float:
    """``ln E[G^alpha]`` for the optimal guessing order, by exhaustive enumeration."""
    if params.n > SANDWICH_N_MAX:
        raise ValueError(f"exhaustive moments need n <= {SANDWICH_N_MAX}, got {params.n}")
    if alpha == 0:
        return 0.0
    logp, sizes = _class_structure(params, mode)
    ranks = np.arange(1, 2**params.n + 1, dtype=float)
    # every sequence of a class shares its probability, so ranks are assigned class by class
    seq_logp = np.repeat(logp, sizes.astype(int))
    return float(logsumexp(seq_logp + alpha * np.log(ranks)))


def finite_n_sandwich(params: LrcParams, alpha: float, mode: str = SOFT) -> Sandwich:
    """``(1/n) ln E[G^alpha]`` together with its Arikan upper and lower bounds.

    The reliability permutation is fixed to the identity for the soft order.
    Upper bound: ``(1+alpha)/n ln sum_x P(x)^{1/(1+alpha)}``; the lower bound
    subtracts ``(alpha/n) ln(1 + n ln 2)``.
    """
    if params.n > SANDWICH_N_MAX:
        raise ValueError(f"exhaustive sandwich needs n <= {SANDWICH_N_MAX}, got {params.n}")
    if alpha < 0:
        raise ValueError("the guesswork sandwich is stated for alpha >= 0")
    n = params.n
    logp, sizes = _class_structure(params, mode)
    upper = (1.0 + alpha) / n * float(logsumexp(logp / (1.0 + alpha) + np.log(sizes)))
    lower = upper - alpha / n * math.log1p(n * math.log(2.0))
    empirical = guesswork_log_moment(params, alpha, mode) / n
    return Sandwich(lower=lower, empirical=empirical, upper=upper)
