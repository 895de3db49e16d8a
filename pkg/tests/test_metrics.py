import math

import numpy as np
import pytest

from conftest import synthetic_series
from epigrowth import estimation
from epigrowth.metrics import (
    bic,
    compute_metrics,
    forecast,
    r_squared,
    rho_squared,
    saturation_fraction,
)


def test_r_squared_perfect_and_known():
    y = np.array([1.0, 4.0, 9.0, 16.0])
    assert r_squared(y, y) == 1.0
    fitted = np.array([2.0, 4.0, 8.0, 16.0])
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    assert r_squared(y, fitted) == pytest.approx(1.0 - ss_res / ss_tot, rel=1e-14)


def test_bic_formula_and_convention():
    # n ln(rss/n) + k ln(n); the alternative convention counts the error
    # variance as one more parameter
    rss, n, k = 250.0, 70, 5
    base = n * math.log(rss / n) + k * math.log(n)
    assert bic(rss, n, k) == pytest.approx(base, rel=1e-14)
    assert bic(rss, n, k, variance_as_parameter=True) == pytest.approx(
        base + math.log(n), rel=1e-14
    )
    with pytest.raises(ValueError):
        bic(-1.0, n, k)


def test_rho_squared_is_squared_pearson():
    rng = np.random.default_rng(5)
    obs = rng.uniform(1, 100, size=40)
    fit = 0.8 * obs + rng.normal(0, 5, size=40)
    r = np.corrcoef(obs, fit)[0, 1]
    assert rho_squared(obs, fit) == pytest.approx(r * r, rel=1e-12)
    # invariant under any positive affine map of the fitted values
    assert rho_squared(obs, 3.0 * fit + 17.0) == pytest.approx(r * r, rel=1e-12)


def test_compute_metrics_daily_correlation_skips_first_day():
    cum = np.array([5.0, 12.0, 30.0, 70.0, 120.0, 190.0])
    data = synthetic_series(cum)
    fit = estimation.nls_fit(
        estimation.model_spec("log", data), data, estimation.FitConfig()
    )
    rep = compute_metrics(fit, data)
    obs_d = np.diff(data.cumulative_cases)
    fit_d = np.diff(fit.fitted_cumulative)
    assert rep.rho_squared == pytest.approx(rho_squared(obs_d, fit_d), rel=1e-12)
    rep_all = compute_metrics(fit, data, include_first_day=True)
    assert rep_all.rho_squared != rep.rho_squared
    assert rep.n == data.n and rep.k == 3
    assert rep.bic == pytest.approx(bic(fit.rss, data.n, 3), rel=1e-12)


def logistic_fixture():
    t = np.arange(1.0, 41.0)
    cum = 5000.0 / (1.0 + np.exp(-(t - 18.0) / 4.0))
    data = synthetic_series(cum)
    fit = estimation.nls_fit(
        estimation.model_spec("log", data), data, estimation.FitConfig()
    )
    return data, fit


def test_forecast_continues_the_curve():
    data, fit = logistic_fixture()
    fc = forecast(fit, data, horizon=14)
    assert fc.horizon_days == 14
    assert len(fc.predicted_cumulative) == 14
    assert len(fc.predicted_daily) == 14
    # entries start one day past the sample and continue the same curve
    spec = fit.model
    next_day = spec.predict(fit.estimates, np.array([spec.t_grid[-1] + 1.0]))[0]
    assert fc.predicted_cumulative[0] == pytest.approx(next_day, rel=1e-12)
    assert fc.predicted_cumulative[0] >= fit.fitted_cumulative[-1]
    assert fc.predicted_daily[0] == pytest.approx(
        next_day - fit.fitted_cumulative[-1], rel=1e-9
    )
    assert np.all(np.diff(fc.predicted_cumulative) >= 0)
    m_hat = fit.estimates[0]
    assert fc.saturation_fraction == pytest.approx(
        data.cumulative_cases[-1] / m_hat, rel=1e-12
    )


def test_forecast_horizon_zero_is_empty_but_valid():
    data, fit = logistic_fixture()
    fc = forecast(fit, data, horizon=0)
    assert fc.horizon_days == 0
    assert fc.predicted_cumulative.size == 0
    assert fc.predicted_daily.size == 0
    assert np.isfinite(fc.saturation_fraction)
    with pytest.raises(ValueError):
        forecast(fit, data, horizon=-1)


def test_forecast_swab_model_tiles_last_week():
    t = np.arange(1.0, 41.0)
    cum = 9000.0 / (1.0 + np.exp(-(t - 20.0) / 5.0))
    data = synthetic_series(cum)
    fit = estimation.nls_fit(
        estimation.model_spec("dmpsw", data), data, estimation.FitConfig()
    )
    fc = forecast(fit, data, horizon=10)
    week = data.daily_swabs[-7:]
    np.testing.assert_allclose(fc.assumed_swabs[:7], week)
    np.testing.assert_allclose(fc.assumed_swabs[7:10], week[:3])
    assert len(fc.predicted_cumulative) == 10


def test_saturation_fraction():
    assert saturation_fraction(90.0, 100.0) == pytest.approx(0.9)
    with pytest.raises(ValueError):
        saturation_fraction(90.0, 0.0)
