"""Capacities, critical rates and random-coding error/success exponents (bits)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import lambertw

from .rates import RATE_CAP, rate_point
from .scgf import HARD, LN2, SOFT, ScgfSpec, binary_entropy
from .special import spence


def soft_slope_at_one(beta: float) -> float:
    """``Lambda_N'(1)`` in nats from the dilogarithm closed form.

    ``pi^2/(3 beta) - ln(1 + s) + (4/beta) * spence(1 + s)`` with
    ``s = e^{-beta/2}``, where ``spence(x) = int_1^x ln(u)/(1-u) du``.
    """
    s = math.exp(-beta / 2.0)
    return math.pi**2 / (3.0 * beta) - math.log1p(s) + 4.0 / beta * spence(1.0 + s)


def hard_critical_fraction_residual(t: float, beta: float) -> float:
    """``e^{beta(1-t)} - 1 - (e^beta - 1) t``, divided through by ``e^beta``."""
    return math.exp(-beta * t) - math.exp(-beta) - (-math.expm1(-beta)) * t


def hard_critical_fraction(beta: float) -> float:
    """Unique ``t`` in ``(0, 1/2)`` with ``e^{beta(1-t)} = 1 + (e^beta - 1) t``, by bisection."""
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    lo, hi = 0.0, 0.5
    # residual is strictly decreasing, positive at 0 and negative at 1/2
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        if hard_critical_fraction_residual(mid, beta) > 0.0:
            lo = mid
        else:
            hi = mid
    candidates = (lo, hi)
    return min(candidates, key=lambda t: abs(hard_critical_fraction_residual(t, beta)))


def hard_critical_fraction_lambertw(beta: float) -> float:
    """Same root through the principal Lambert W branch (cross-check only)."""
    a = math.expm1(beta)
    z = beta / a * math.exp(beta + beta / a)
    return float(lambertw(z, 0).real) / beta - 1.0 / a


def hard_slope_at_one(beta: float) -> float:
    """``Lambda_Z'(1) = h(t(beta))`` in nats."""
    return binary_entropy(hard_critical_fraction(beta))


def slope_at_one(spec) -> float:
    if isinstance(spec, ScgfSpec):
        if spec.mode == SOFT:
            return soft_slope_at_one(spec.beta)
        if spec.mode == HARD:
            return hard_slope_at_one(spec.beta)
    return spec.slope(1.0)


def critical_rate(spec) -> float:
    """``R_cr = 1 - Lambda_2'(1)`` in bits."""
    return 1.0 - slope_at_one(spec) / LN2


def capacity(spec) -> float:
    """``C = 1 - H_1`` in bits."""
    return 1.0 - spec.slope(0.0) / LN2


_ZPOS_SERIES_CUTOFF = 0.2
# Taylor coefficients of f(1 + e) / e^4, constant term first
_ZPOS_SERIES = np.array([
    1 / 96, -1 / 96, 13 / 1440, -11 / 1440, 6271 / 967680, -199 / 35840, 139709 / 29030400, -15307 / 3628800,
    2044883 / 547430400, -511705 / 153280512, 15732857051 / 5230697472000, -58752457 / 21525504000,
    2503267165279 / 1004293914624000, -4265110619 / 1863254016000, 1082113123890751 / 512189896458240000,
    -31350823355959 / 16005934264320000, 186300613900480537 / 102181884343418880000,
    -1768487265681 / 1038275510272000,
])


def zpos_check(z: float) -> float:
    """``((z^2 - 1)/ln z) ln((1+z)/2) - (3z^2 - 2z - 1)/4``, positive for every ``z > 1``."""
    if not z > 1.0:
        raise ValueError(f"zpos_check needs z > 1, got {z}")
    e = z - 1.0
    if e < _ZPOS_SERIES_CUTOFF:
        # f vanishes like e^4/96; the direct form cancels catastrophically here
        return float(e**4 * np.polyval(_ZPOS_SERIES[::-1], e))
    return (z * z - 1.0) / math.log(z) * math.log((1.0 + z) / 2.0) - (3.0 * z * z - 2.0 * z - 1.0) / 4.0


@dataclass(frozen=True)
class ExponentCurve:
    rates: np.ndarray = field(repr=False)
    error: np.ndarray = field(repr=False)
    success: np.ndarray = field(repr=False)
    capacity: float
    critical_rate: float
    h_half: float


def error_exponent(spec, rate: float, *, cap: float = RATE_CAP, markers=None) -> float:
    """Random-coding error exponent in bits at code rate ``rate``."""
    c, r_cr, h_half = markers or (capacity(spec), critical_rate(spec), spec.value(1.0) / LN2)
    if rate >= c:
        return 0.0
    if rate < r_cr:
        return 1.0 - rate - h_half
    p = rate_point(spec, (1.0 - rate) * LN2, cap)
    return cap if p.diverged else p.value / LN2


def success_exponent(spec, rate: float, *, cap: float = RATE_CAP, markers=None) -> float:
    """Decay rate (bits) of the probability of correct decoding above capacity."""
    c = markers[0] if markers else capacity(spec)
    if rate <= c:
        return 0.0
    p = rate_point(spec, (1.0 - rate) * LN2, cap)
    return cap if p.diverged else p.value / LN2


def exponent_markers(spec) -> tuple[float, float, float]:
    return capacity(spec), critical_rate(spec), spec.value(1.0) / LN2


def exponent_curve(spec, grid_size: int) -> ExponentCurve:
    """Error and success exponents on ``R_i = i / (grid_size + 1)``, ``i = 1..grid_size``."""
    if grid_size < 2:
        raise ValueError("grid_size must be >= 2")
    markers = exponent_markers(spec)
    rates = np.arange(1, grid_size + 1) / (grid_size + 1)
    err = np.array([error_exponent(spec, r, markers=markers) for r in rates])
    suc = np.array([success_exponent(spec, r, markers=markers) for r in rates])
    return ExponentCurve(rates=rates, error=err, success=suc, capacity=markers[0],
                         critical_rate=markers[1], h_half=markers[2])
