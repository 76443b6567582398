"""Scaled cumulant generating functions of the soft- and hard-decision guesswork.

Everything here is in nats.  An sCGF object exposes ``value(alpha)``,
``slope(alpha)`` and ``h_min``; the rate-function and exponent code only
relies on that surface, so the BSC reference model plugs in unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .special import j_integral

LN2 = math.log(2.0)
SOFT, HARD = "soft", "hard"
MODES = (SOFT, HARD)

# interior window for the hard-mode Hamming fraction
T_EDGE = 1e-9
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def binary_entropy(p: float) -> float:
    """``h(p)`` in nats; ``h(0) = h(1) = 0``."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return -p * math.log(p) - (1.0 - p) * math.log1p(-p)


def _log_expm1(a: float) -> float:
    # ln(e^a - 1) for a > 0
    if a > 1.0:
        return a + math.log1p(-math.exp(-a))
    return math.log(math.expm1(a))


def _log_one_minus_exp_neg(b: float) -> float:
    # ln(1 - e^{-b}) for b > 0
    return math.log(-math.expm1(-b))


def log_saddle_r(t: float, beta: float) -> float:
    """``ln r_{t,beta}`` with ``r = (e^{beta t} - 1) / (1 - e^{beta (t - 1)})``."""
    if not 0.0 < t < 1.0:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    return _log_expm1(beta * t) - _log_one_minus_exp_neg(beta * (1.0 - t))


def saddle_r(t: float, beta: float) -> float:
    return math.exp(log_saddle_r(t, beta))


@dataclass(frozen=True)
class SaddleState:
    t: float
    r: float


@dataclass(frozen=True)
class ScgfSpec:
    mode: str
    beta: float

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if not (self.beta > 0) or not math.isfinite(self.beta):
            raise ValueError(f"beta must be positive and finite, got {self.beta!r}")

    @property
    def h_min(self) -> float:
        """Min-entropy rate ``J(1; beta)``; equal for both modes."""
        return j_integral(1.0, self.beta)

    def value(self, alpha: float) -> float:
        if alpha <= -1.0:
            return -self.h_min
        if self.mode == SOFT:
            return _soft_value(alpha, self.beta)
        return _hard_value(alpha, self.beta)

    def slope(self, alpha: float) -> float:
        """``Lambda'(alpha)``; zero on the flat branch."""
        if alpha <= -1.0:
            return 0.0
        if self.mode == SOFT:
            return _soft_slope(alpha, self.beta)
        return binary_entropy(hard_maximizer(alpha, self.beta).t)


def scgf(spec: ScgfSpec, alpha: float) -> float:
    """sCGF of the guesswork exponent in nats."""
    return spec.value(alpha)


# ---------------------------------------------------------------------------
# soft decision


def _soft_value(alpha: float, beta: float) -> float:
    return (1.0 + alpha) * j_integral(1.0, beta / (1.0 + alpha)) - j_integral(1.0, beta)


def _soft_slope(alpha: float, beta: float) -> float:
    gamma = beta / (1.0 + alpha)
    return 2.0 * j_integral(1.0, gamma) - math.log1p(math.exp(-gamma))


# ---------------------------------------------------------------------------
# hard decision


def hard_objective(t: float, alpha: float, beta: float) -> float:
    """``alpha h(t) + J(r_t; beta) - t ln r_t``, the function maximized over ``t``."""
    log_r = log_saddle_r(t, beta)
    return alpha * binary_entropy(t) + j_integral(math.exp(log_r), beta) - t * log_r


def hard_objective_dt(t: float, alpha: float, beta: float) -> float:
    # envelope theorem: d/dt [J(r_t) - t ln r_t] = -ln r_t
    return alpha * (math.log1p(-t) - math.log(t)) - log_saddle_r(t, beta)


def hard_objective_dt2(t: float, alpha: float, beta: float) -> float:
    return (-alpha / (t * (1.0 - t))
            - beta * (1.0 / -math.expm1(-beta * t) + 1.0 / math.expm1(beta * (1.0 - t))))


def _golden_max(f, a: float, b: float, tol: float) -> tuple[float, float]:
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return a, b


@lru_cache(maxsize=65536)
def hard_maximizer(alpha: float, beta: float) -> SaddleState:
    """Maximizing Hamming fraction ``t`` (and its ``r_{t,beta}``) for ``alpha > -1``.

    Golden-section search localizes the maximum of the strictly concave
    objective; Newton steps on its derivative, kept inside a sign-change
    bracket, polish it.
    """
    if alpha <= -1.0:
        raise ValueError("the hard-decision maximizer is defined for alpha > -1")
    lo, hi = T_EDGE, 1.0 - T_EDGE
    if hard_objective_dt(lo, alpha, beta) <= 0.0:
        return SaddleState(lo, saddle_r(lo, beta))
    if hard_objective_dt(hi, alpha, beta) >= 0.0:
        return SaddleState(hi, saddle_r(hi, beta))

    a, b = _golden_max(lambda t: hard_objective(t, alpha, beta), lo, hi, 1e-4)
    # widen to a bracket on which the derivative changes sign
    width = b - a
    a = max(lo, a - width)
    b = min(hi, b + width)
    while a > lo and hard_objective_dt(a, alpha, beta) <= 0.0:
        a = max(lo, a - 2.0 * (b - a))
    while b < hi and hard_objective_dt(b, alpha, beta) >= 0.0:
        b = min(hi, b + 2.0 * (b - a))

    t = 0.5 * (a + b)
    for _ in range(100):
        g = hard_objective_dt(t, alpha, beta)
        if g == 0.0:
            break
        if g > 0.0:
            a = t
        else:
            b = t
        step = g / hard_objective_dt2(t, alpha, beta)
        t_new = t - step
        if not a < t_new < b:
            t_new = 0.5 * (a + b)
        if abs(t_new - t) <= 1e-15 * max(1.0, t) or b - a <= 4e-16 * max(t, 1e-300):
            t = t_new
            break
        t = t_new
    return SaddleState(t, saddle_r(t, beta))


def _hard_value(alpha: float, beta: float) -> float:
    t = hard_maximizer(alpha, beta).t
    return hard_objective(t, alpha, beta) - j_integral(1.0, beta)
