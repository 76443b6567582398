"""Binary symmetric channel baseline and matching of LRC noise levels to BSC flip rates."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import optimize

from .scgf import LN2, ScgfSpec, binary_entropy


@dataclass(frozen=True)
class BscScgf:
    """Guesswork sCGF (nats) of i.i.d. Bernoulli(``p``) noise."""

    p: float

    def __post_init__(self):
        if not 0.0 < self.p <= 0.5:
            raise ValueError(f"BSC flip probability must lie in (0, 1/2], got {self.p}")

    mode = "bsc"

    @property
    def h_min(self) -> float:
        return -math.log1p(-self.p)

    def _tilt(self, alpha: float) -> tuple[float, float]:
        s = 1.0 / (1.0 + alpha)
        a, b = s * math.log(self.p), s * math.log1p(-self.p)
        m = max(a, b)
        log_z = m + math.log(math.exp(a - m) + math.exp(b - m))
        return log_z, math.exp(a - log_z)

    def value(self, alpha: float) -> float:
        if alpha <= -1.0:
            return -self.h_min
        log_z, _ = self._tilt(alpha)
        return (1.0 + alpha) * log_z

    def slope(self, alpha: float) -> float:
        if alpha <= -1.0:
            return 0.0
        _, q = self._tilt(alpha)
        return binary_entropy(q)


def bsc_h_half(p: float) -> float:
    """Order-1/2 Renyi entropy of Bernoulli(``p``) in nats."""
    return 2.0 * math.log(math.sqrt(p) + math.sqrt(1.0 - p))


def bsc_reference(p: float):
    """sCGF, rate function and exponent curve of the BSC(``p``) guesswork process."""
    from .exponents import exponent_curve
    from .rates import rate_function

    model = BscScgf(p)
    return {
        "scgf": model.value,
        "rate_function": lambda x: rate_function(model, x),
        "exponent_curve": lambda grid_size=256: exponent_curve(model, grid_size),
        "model": model,
    }


def match_beta_to_bsc(beta: float, mode: str) -> float:
    """BSC flip probability whose ``H_1/2`` equals that of the LRC(``beta``) under ``mode``."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    target = ScgfSpec(mode, beta).value(1.0)
    if target >= LN2:
        return 0.5
    return optimize.brentq(lambda p: bsc_h_half(p) - target, 1e-300, 0.5, xtol=1e-300, rtol=8.9e-16, maxiter=500)


@dataclass(frozen=True)
class MatchReport:
    beta: float
    mode: str
    p: float
    h_half: float
    log10_beta: float
    log10_p: float
    heuristic_p: float

    @property
    def decades_off(self) -> float:
        """``log10(p / heuristic_p)``: how far the order-of-magnitude rule misses."""
        return self.log10_p - math.log10(self.heuristic_p)


def match_report(beta: float, mode: str) -> MatchReport:
    """Matched ``p`` plus the rule of thumb ``beta ~ 10^x  <->  p ~ 10^-(x+1)``."""
    p = match_beta_to_bsc(beta, mode)
    x = math.log10(beta)
    return MatchReport(beta=beta, mode=mode, p=p, h_half=bsc_h_half(p), log10_beta=x,
                       log10_p=math.log10(p), heuristic_p=10.0 ** (-(x + 1.0)))
