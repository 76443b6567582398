"""Real dilogarithm and the integral ``J(r; gamma) = int_0^1 ln(1 + r e^{-gamma x}) dx``."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

PI2_6 = math.pi**2 / 6.0

# below this gamma the closed form loses digits to cancellation
_J_SMALL_GAMMA = 1e-2
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(40)


def _dilog_series(x: float) -> float:
    # |x| <= 1/2: terms shrink at least as 2^-k
    total = 0.0
    term = x
    k = 1
    while True:
        add = term / (k * k)
        total += add
        if abs(add) < 1e-18 * max(1.0, abs(total)):
            return total
        k += 1
        term *= x


def dilog(x: float) -> float:
    """Real dilogarithm ``Li2(x) = sum_k x^k / k^2`` continued to ``x <= 1``.

    Uses the power series on ``[-1/2, 1/2]``, Euler reflection on ``(1/2, 1]``,
    the Landen identity on ``[-1, -1/2)`` and inversion below ``-1``.
    """
    x = float(x)
    if x > 1.0:
        raise ValueError(f"dilog is only real-valued here for x <= 1, got {x}")
    if x == 1.0:
        return PI2_6
    if x < -1.0:
        return -PI2_6 - 0.5 * math.log(-x) ** 2 - dilog(1.0 / x)
    if x < -0.5:
        return -_dilog_series(x / (x - 1.0)) - 0.5 * math.log1p(-x) ** 2
    if x <= 0.5:
        return _dilog_series(x)
    return PI2_6 - math.log(x) * math.log1p(-x) - _dilog_series(1.0 - x)


def spence(x: float) -> float:
    """``int_1^x ln(u) / (1 - u) du``, which equals ``Li2(1 - x)``."""
    return dilog(1.0 - x)


def _j_quadrature(r: float, gamma: float) -> float:
    x = 0.5 * (_GL_NODES + 1.0)
    return float(0.5 * np.sum(_GL_WEIGHTS * np.log1p(r * np.exp(-gamma * x))))


def j_integral_quad(r: float, gamma: float) -> float:
    """Adaptive-quadrature evaluation of ``J``; an independent check on the closed form."""
    val, _ = integrate.quad(lambda x: math.log1p(r * math.exp(-gamma * x)), 0.0, 1.0,
                            epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def j_integral(r: float, gamma: float, method: str = "closed") -> float:
    """``J(r; gamma) = int_0^1 ln(1 + r e^{-gamma x}) dx``.

    ``method="closed"`` uses ``[Li2(-r e^{-gamma}) - Li2(-r)] / gamma`` (with a
    Gauss-Legendre rule for small ``gamma``); ``method="quad"`` integrates
    adaptively.
    """
    if r < 0:
        raise ValueError(f"J needs r >= 0, got {r}")
    if not gamma > 0:
        raise ValueError(f"J needs gamma > 0, got {gamma}")
    if r == 0:
        return 0.0
    if method == "quad":
        return j_integral_quad(r, gamma)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    if gamma < _J_SMALL_GAMMA:
        return _j_quadrature(r, gamma)
    return (dilog(-r * math.exp(-gamma)) - dilog(-r)) / gamma
