import numpy as np
import pytest
from scipy import integrate

from epigrowth.growth_models import RectShockParams, SeasonalParams
from epigrowth.intervention import (
    rect_integral,
    seasonal_integral,
    swab_integral,
    swab_stats,
    swab_weight,
)

# From tools/oracles.py.
RECT_PROBES = {5.0: 5.0, 12.5: 14.5, 20.0: 28.0, 33.25: 41.25}
SEASONAL_PROBES = {3.0: 2.796040575727, 9.5: 9.353304036133, 21.0: 21.0}
SWAB_SCHEDULE = [3.0, 8.0, 15.0, 10.0, 6.0, 9.0, 14.0, 4.0]
SWAB_MU, SWAB_SIGMA = 8.625, 4.3404246006912405
SWAB_W3 = 3.0100796590253019


def test_rect_integral_probe_values():
    shock = RectShockParams(a=10.0, b=20.0, c=0.8)
    for t, expected in RECT_PROBES.items():
        assert rect_integral(t, shock) == pytest.approx(expected, abs=1e-12)


def test_rect_integral_matches_quadrature():
    rng = np.random.default_rng(11)
    for _ in range(20):
        a = rng.uniform(1, 30)
        b = a + rng.uniform(1, 25)
        c = rng.uniform(-0.9, 2.0)
        t = rng.uniform(0, 70)
        num, _ = integrate.quad(
            lambda u: 1.0 + (c if a <= u <= b else 0.0), 0, t,
            points=[a, b], limit=200,
        )
        assert rect_integral(t, RectShockParams(a, b, c)) == pytest.approx(num, abs=1e-8)


def test_rect_integral_slopes():
    # slope 1 outside the shock window, 1+c inside
    shock = RectShockParams(a=10.0, b=20.0, c=0.8)
    h = 1e-6
    for t, slope in [(5.0, 1.0), (15.0, 1.8), (25.0, 1.0)]:
        fd = (rect_integral(t + h, shock) - rect_integral(t - h, shock)) / (2 * h)
        assert fd == pytest.approx(slope, abs=1e-6)


def test_seasonal_integral_probe_values():
    seas = SeasonalParams(alpha1=0.06, alpha2=-0.11, s=7.0)
    for t, expected in SEASONAL_PROBES.items():
        assert seasonal_integral(t, seas) == pytest.approx(expected, abs=1e-10)


def test_seasonal_integral_matches_quadrature():
    rng = np.random.default_rng(12)
    for _ in range(20):
        a1, a2 = rng.uniform(-0.3, 0.3, size=2)
        s = rng.uniform(3, 14)
        t = rng.uniform(0, 70)
        num, _ = integrate.quad(
            lambda u: 1.0 + a1 * np.cos(2 * np.pi * u / s) + a2 * np.sin(2 * np.pi * u / s),
            0, t, limit=200,
        )
        got = seasonal_integral(t, SeasonalParams(a1, a2, s))
        assert got == pytest.approx(num, abs=1e-8)


def test_seasonal_integral_whole_periods_are_exact():
    # over k full periods the oscillating parts cancel exactly
    seas = SeasonalParams(alpha1=0.25, alpha2=-0.17, s=7.0)
    for k in (1, 3, 10):
        assert seasonal_integral(7.0 * k, seas) == pytest.approx(7.0 * k, abs=1e-9)


def test_swab_stats_sample_and_population():
    stats = swab_stats(SWAB_SCHEDULE)
    assert stats.mu_B == pytest.approx(SWAB_MU, abs=1e-12)
    assert stats.sigma_B == pytest.approx(SWAB_SIGMA, rel=1e-12)
    pop = swab_stats(SWAB_SCHEDULE, sample=False)
    assert pop.sigma_B < stats.sigma_B


def test_swab_stats_rejects_degenerate_input():
    with pytest.raises(ValueError):
        swab_stats([5.0])
    with pytest.raises(ValueError):
        swab_stats([4.0, 4.0, 4.0])


def test_swab_weight_is_one_at_the_mean():
    stats = swab_stats(SWAB_SCHEDULE)
    assert swab_weight(stats.mu_B, stats, xi=0.7) == pytest.approx(1.0)
    assert swab_weight(stats.mu_B + stats.sigma_B, stats, xi=0.7) == pytest.approx(1.7)


def test_swab_integral_probe_and_mean_centering_identity():
    stats = swab_stats(SWAB_SCHEDULE)
    xi = 0.35
    assert swab_integral(3, SWAB_SCHEDULE, stats, xi) == pytest.approx(SWAB_W3, rel=1e-12)
    n = len(SWAB_SCHEDULE)
    # weights standardized by the schedule's own mean sum to n exactly
    assert swab_integral(n, SWAB_SCHEDULE, stats, xi) == pytest.approx(float(n), abs=1e-9)
    assert swab_integral(0, SWAB_SCHEDULE, stats, xi) == 0.0


def test_swab_integral_reduces_to_t_when_xi_zero():
    stats = swab_stats(SWAB_SCHEDULE)
    for t in range(len(SWAB_SCHEDULE) + 1):
        assert swab_integral(t, SWAB_SCHEDULE, stats, 0.0) == pytest.approx(float(t))


def test_swab_integral_rejects_days_outside_schedule():
    stats = swab_stats(SWAB_SCHEDULE)
    with pytest.raises(ValueError):
        swab_integral(len(SWAB_SCHEDULE) + 1, SWAB_SCHEDULE, stats, 0.1)
    with pytest.raises(ValueError):
        swab_integral(-1, SWAB_SCHEDULE, stats, 0.1)
