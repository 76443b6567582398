import math

import numpy as np
import pytest

from lrc.asymptotics import (
    LN2,
    BscScgf,
    ScgfSpec,
    bsc_h_half,
    bsc_reference,
    critical_rate,
    error_exponent,
    match_beta_to_bsc,
    match_report,
)

# 40-digit reference for 2 ln(sqrt(1/4) + sqrt(3/4))
H_HALF_QUARTER = 0.62381071636487139921


def test_fair_coin_is_linear():
    ref = bsc_reference(0.5)
    for a in np.linspace(-0.99, 5, 50):
        assert ref["scgf"](a) / LN2 == pytest.approx(a, abs=1e-10)
    for a in (-1.0, -2.0, -10.0):
        assert ref["scgf"](a) / LN2 == pytest.approx(-1.0, abs=1e-15)


def test_quarter_renyi_half():
    assert bsc_h_half(0.25) == pytest.approx(H_HALF_QUARTER, abs=1e-14)
    assert BscScgf(0.25).value(1.0) == pytest.approx(H_HALF_QUARTER, abs=1e-14)
    assert abs(bsc_h_half(0.25) - 0.6237) < 2e-4


def test_validation():
    for p in (0.0, -0.1, 0.51):
        with pytest.raises(ValueError):
            BscScgf(p)
    with pytest.raises(ValueError):
        match_beta_to_bsc(0.0, "soft")


@pytest.mark.parametrize("p", [0.01, 0.1, 0.3])
def test_bsc_scgf_properties(p):
    m = BscScgf(p)
    assert m.value(0.0) == pytest.approx(0.0, abs=1e-15)
    assert m.value(-1.0) == pytest.approx(math.log1p(-p))
    assert abs(m.value(-1 + 1e-9) - m.value(-1.0)) < 1e-5
    for a in (-0.5, 0.0, 1.0, 4.0):
        h = 1e-6
        assert m.slope(a) == pytest.approx((m.value(a + h) - m.value(a - h)) / (2 * h), abs=1e-7)
    curve = bsc_reference(p)["exponent_curve"](64)
    assert 0 < curve.critical_rate < curve.capacity
    assert curve.capacity == pytest.approx(1 + (p * math.log2(p) + (1 - p) * math.log2(1 - p)), abs=1e-12)


def test_match_small_beta_is_fair_coin():
    for mode in ("soft", "hard"):
        assert abs(match_beta_to_bsc(1e-3, mode) - 0.5) < 1e-3


@pytest.mark.parametrize("mode", ["soft", "hard"])
@pytest.mark.parametrize("beta", [0.1, 1.0, 5.0, 30.0])
def test_match_round_trip_and_exponents(mode, beta):
    lrc = ScgfSpec(mode, beta)
    p = match_beta_to_bsc(beta, mode)
    assert 0 < p <= 0.5
    ref = bsc_reference(p)
    assert bsc_h_half(p) == pytest.approx(lrc.value(1.0), abs=1e-9)
    rmin = min(critical_rate(lrc), critical_rate(ref["model"]))
    for r in np.linspace(rmin * 0.01, rmin * 0.99, 20):
        assert error_exponent(lrc, r) == pytest.approx(error_exponent(ref["model"], r), abs=1e-6)


def test_match_report_heuristic_fields():
    r = match_report(10.0, "soft")
    assert r.log10_beta == pytest.approx(1.0)
    assert r.heuristic_p == pytest.approx(1e-2)
    assert r.decades_off == pytest.approx(math.log10(r.p) + 2)
