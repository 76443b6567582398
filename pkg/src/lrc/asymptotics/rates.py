"""Entropy rates and Legendre-Fenchel rate functions of the guesswork sCGFs."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import optimize

from .scgf import LN2, binary_entropy, j_integral, log_saddle_r

RATE_CAP = 1e6
_ALPHA_LO = -1.0 + 1e-12
_ALPHA_HI_MAX = 1e12


@dataclass(frozen=True)
class EntropyRates:
    mode: str
    beta: float
    h_min: float
    h_1: float
    h_half: float

    @property
    def h_min_bits(self) -> float:
        return self.h_min / LN2

    @property
    def h_1_bits(self) -> float:
        return self.h_1 / LN2

    @property
    def h_half_bits(self) -> float:
        return self.h_half / LN2


def entropy_rates(spec) -> EntropyRates:
    """Min-entropy, Shannon and order-1/2 Renyi entropy rates (nats).

    ``H_1`` is the slope of the sCGF at zero: the closed derivative for the
    soft decoder and ``h(t*)`` at the hard maximizer (envelope theorem).
    """
    return EntropyRates(
        mode=getattr(spec, "mode", "bsc"),
        beta=getattr(spec, "beta", float("nan")),
        h_min=spec.h_min,
        h_1=spec.slope(0.0),
        h_half=spec.value(1.0),
    )


def richardson_slope(spec, alpha: float, h1: float = 1e-4, h2: float = 5e-5) -> float:
    """Richardson-combined central differences of ``spec.value`` at ``alpha``."""
    d1 = (spec.value(alpha + h1) - spec.value(alpha - h1)) / (2 * h1)
    d2 = (spec.value(alpha + h2) - spec.value(alpha - h2)) / (2 * h2)
    ratio = (h1 / h2) ** 2
    return (ratio * d2 - d1) / (ratio - 1.0)


@dataclass(frozen=True)
class RatePoint:
    x: float
    value: float
    alpha: float
    diverged: bool


def rate_point(spec, x: float, cap: float = RATE_CAP) -> RatePoint:
    """``sup_alpha {x alpha - Lambda(alpha)}`` with its maximizing ``alpha`` (nats).

    ``x = ln 2`` is the edge of the effective domain: the maximizing ``alpha``
    runs off to infinity there, and the point is reported as ``cap`` with
    ``diverged=True``.  See :func:`rate_edge_limit` for the finite left limit.
    """
    if not 0.0 <= x <= LN2:
        raise ValueError(f"rate function argument must lie in [0, ln 2], got {x}")
    h_min = spec.h_min
    if x == 0.0:
        return RatePoint(x, h_min, -1.0, False)
    if x >= LN2:
        return RatePoint(x, cap, math.inf, True)

    if spec.slope(_ALPHA_LO) >= x:
        # maximizer sits against alpha = -1
        return RatePoint(x, -x + h_min, -1.0, False)

    hi = 1.0
    while spec.slope(hi) <= x:
        hi *= 4.0
        if hi > _ALPHA_HI_MAX:
            return RatePoint(x, cap, math.inf, True)
    lo = _ALPHA_LO if hi <= 1.0 else hi / 4.0
    alpha = optimize.brentq(lambda a: spec.slope(a) - x, lo, hi, xtol=1e-14, rtol=8.9e-16, maxiter=500)
    value = x * alpha - spec.value(alpha)
    if value > cap:
        return RatePoint(x, cap, alpha, True)
    return RatePoint(x, max(value, 0.0), alpha, False)


def rate_function(spec, x: float, cap: float = RATE_CAP) -> float:
    """Rate function of the guesswork exponent (nats); ``cap`` at the ``x = ln 2`` edge."""
    return rate_point(spec, x, cap).value


def rate_function_bits(spec, x_bits: float, cap: float = RATE_CAP) -> float:
    """Base-2 rate function ``I_2(x) = I(x ln 2) / ln 2`` for ``x`` in bits."""
    if not 0.0 <= x_bits <= 1.0:
        raise ValueError(f"rate function argument must lie in [0, 1] bits, got {x_bits}")
    p = rate_point(spec, x_bits * LN2, cap)
    return cap if p.diverged else p.value / LN2


def inverse_rate_transform(rate, alpha: float, x_max: float = LN2) -> float:
    """``sup_x {alpha x - rate(x)}`` over ``[0, x_max]`` for a convex callable ``rate``.

    Recovers the sCGF from a rate function on ``alpha >= -1``.
    """
    res = optimize.minimize_scalar(lambda x: rate(x) - alpha * x, bounds=(0.0, x_max),
                                   method="bounded", options={"xatol": 1e-10})
    best = -res.fun
    # the bounded search never evaluates the endpoint itself
    return max(best, -rate(0.0))


def hard_rate_closed_form(beta: float, x: float) -> float:
    """Hard-decision rate function via ``t = h^{-1}(x)``: ``J(1) - J(r_t) + t ln r_t``.

    Only valid for ``0 < x < ln 2``.  Serves as an independent check on the
    generic root-finding transform.
    """
    t = optimize.brentq(lambda u: binary_entropy(u) - x, 1e-300, 0.5, xtol=1e-300, rtol=8.9e-16, maxiter=500)
    log_r = log_saddle_r(t, beta)
    return j_integral(1.0, beta) - j_integral(math.exp(log_r), beta) + t * log_r


def hard_alpha_of_t(t: float, beta: float) -> float:
    """The ``alpha`` at which the hard maximizer equals ``t``."""
    return log_saddle_r(t, beta) / (math.log1p(-t) - math.log(t))



def rate_edge_limit(spec) -> float:
    """``lim_{x -> ln 2^-} I(x)`` in nats, i.e. ``lim_{alpha -> inf} alpha ln 2 - Lambda(alpha)``.

    The value stays finite; it is the slope ``I'(x)`` that diverges at the
    edge, which is why :func:`rate_point` flags ``x = ln 2`` itself.
    """
    mode = getattr(spec, "mode", None)
    if mode == "soft":
        return j_integral(1.0, spec.beta) + spec.beta / 4.0 - LN2
    if mode == "hard":
        return j_integral(1.0, spec.beta) + spec.beta / 4.0 - j_integral(math.exp(spec.beta / 2.0), spec.beta)
    if mode == "bsc":
        return -math.log(2.0 * math.sqrt(spec.p * (1.0 - spec.p)))
    raise ValueError(f"no edge limit known for {spec!r}")
