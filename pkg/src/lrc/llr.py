"""Empirical check of linear reliabilities for BPSK over additive location-scale noise.

Symbols ``X`` in ``{-1, +1}`` are sent through ``Y = X + N`` where ``N`` has
mean zero and standard deviation ``sigma``.  The LLR map of a family is
``phi(y) = ln f(y - 1) - ln f(y + 1)``; sorting ``|phi(Y)|`` over many channel
uses gives the reliability profile, which is close to a straight line for
smooth log-concave noise at large ``sigma``.  Laplace noise is the
counterexample: its LLR saturates at ``+-2/b`` once ``|y| > 1``, so the
profile ends in a flat tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import stats

FAMILIES = ("normal", "logistic", "laplace")


@dataclass(frozen=True)
class NoiseFamily:
    kind: str
    sigma: float

    def __post_init__(self):
        if self.kind not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.kind!r}")
        if not (self.sigma > 0) or not math.isfinite(self.sigma):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")

    @property
    def scale(self) -> float:
        """Native scale parameter giving variance ``sigma^2``."""
        if self.kind == "normal":
            return self.sigma
        if self.kind == "logistic":
            return self.sigma * math.sqrt(3.0) / math.pi
        return self.sigma / math.sqrt(2.0)

    @property
    def dist(self):
        base = {"normal": stats.norm, "logistic": stats.logistic, "laplace": stats.laplace}[self.kind]
        return base(loc=0.0, scale=self.scale)

    def logpdf(self, u):
        return self.dist.logpdf(u)

    def sample(self, size: int, rng: np.random.Generator) -> np.ndarray:
        if self.kind == "normal":
            return rng.normal(0.0, self.scale, size)
        if self.kind == "logistic":
            return rng.logistic(0.0, self.scale, size)
        return rng.laplace(0.0, self.scale, size)


def llr_map(y, family: NoiseFamily):
    """``phi(y) = ln f(y - 1) - ln f(y + 1)``; scalar in, scalar out."""
    y_arr = np.asarray(y, dtype=float)
    out = family.logpdf(y_arr - 1.0) - family.logpdf(y_arr + 1.0)
    return float(out) if out.ndim == 0 else out


def normal_llr(y, sigma: float):
    """Closed form ``2y / sigma^2`` of the Gaussian LLR map."""
    return 2.0 * np.asarray(y, dtype=float) / sigma**2


@dataclass(frozen=True)
class ReliabilityProfile:
    values: np.ndarray = field(repr=False)
    family: NoiseFamily | None = None

    @property
    def n(self) -> int:
        return len(self.values)

    @property
    def index(self) -> np.ndarray:
        """Normalized positions ``i/n`` for ``i = 1..n``."""
        return np.arange(1, self.n + 1) / self.n


def reliability_profile(n: int, family: NoiseFamily, rng: np.random.Generator,
                        symbol: int | None = None) -> ReliabilityProfile:
    """Sorted ``|phi(Y)|`` over ``n`` channel uses.

    ``symbol`` pins the transmitted symbol to ``+1`` or ``-1``; by default it
    is uniform.
    """
    if n < 2:
        raise ValueError("a profile needs n >= 2 samples")
    if symbol is None:
        x = rng.choice(np.array([-1.0, 1.0]), size=n)
    elif symbol in (-1, 1):
        x = np.full(n, float(symbol))
    else:
        raise ValueError("symbol must be -1, +1 or None")
    y = x + family.sample(n, rng)
    rel = np.sort(np.abs(llr_map(y, family)))
    return ReliabilityProfile(rel, family)


@dataclass(frozen=True)
class LinearityReport:
    slope: float
    intercept: float
    max_abs_residual: float
    r_squared: float
    fraction: float
    points: int

    def to_dict(self) -> dict:
        return {"slope": self.slope, "intercept": self.intercept, "max_abs_residual": self.max_abs_residual,
                "r_squared": self.r_squared, "fraction": self.fraction, "points": self.points}


def linearity_report(profile: ReliabilityProfile, initial_fraction: float = 0.5) -> LinearityReport:
    """Least-squares line through ``(i/n, profile_i)`` over the leading ``initial_fraction``."""
    if not 0.0 < initial_fraction <= 1.0:
        raise ValueError(f"initial_fraction must lie in (0, 1], got {initial_fraction}")
    m = int(math.floor(initial_fraction * profile.n))
    if m < 2:
        raise ValueError("selection holds fewer than two points")
    x = profile.index[:m]
    y = profile.values[:m]
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else (1.0 if ss_res == 0 else 0.0)
    return LinearityReport(float(slope), float(intercept), float(np.max(np.abs(resid))), r2,
                           initial_fraction, m)


def flat_tail_fraction(profile: ReliabilityProfile, rtol: float = 1e-9) -> float:
    """Share of the profile sitting at its maximum (nonzero only for saturating LLRs)."""
    top = profile.values[-1]
    at_top = np.isclose(profile.values, top, rtol=rtol, atol=0.0)
    # the profile is sorted, so the plateau is a suffix
    return float(np.count_nonzero(at_top)) / profile.n


def normal_llr_density(l, sigma: float):
    """Density of ``L = 2Y/sigma^2`` when ``Y`` is an equiprobable BPSK symbol plus Gaussian noise."""
    mu, s = 2.0 / sigma**2, 2.0 / sigma
    return 0.5 * (stats.norm.pdf(l, mu, s) + stats.norm.pdf(l, -mu, s))


def fl_derivatives(sigma: float, rel_step: float = 1e-3) -> tuple[float, float, float]:
    """``(f_L(0), f_L'(0), f_L''(0))`` by central differences of the exact mixture density."""
    h = rel_step * 2.0 / sigma
    f_m, f_0, f_p = (float(normal_llr_density(v, sigma)) for v in (-h, 0.0, h))
    return f_0, (f_p - f_m) / (2 * h), (f_p - 2 * f_0 + f_m) / (h * h)


def fl_curvature_probe(family: NoiseFamily | str, sigma: float | None = None) -> float:
    """``f_L''(0) / sigma^3`` for Gaussian noise; tends to ``-1/(8 sqrt(2 pi))``."""
    if isinstance(family, NoiseFamily):
        kind, sigma = family.kind, family.sigma if sigma is None else sigma
    else:
        kind = family
    if kind != "normal":
        raise ValueError("the curvature probe needs the closed-form Gaussian LLR density")
    if sigma is None or not sigma > 0:
        raise ValueError("sigma must be positive")
    return fl_derivatives(sigma)[2] / sigma**3
