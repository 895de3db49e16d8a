"""Fit-quality metrics, three-week-ahead forecasts, saturation estimates.

The comparison metrics are computed on the cumulative series (R-squared,
BIC) and on the daily increments (squared Pearson correlation). The
forecast assumes the swab volume of the final observed week repeats over
the horizon.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .growth_models import DmpParams, daily_increments, eval_dmp_perturbed
from .intervention import swab_integral

__all__ = [
    "MetricsReport",
    "ForecastResult",
    "r_squared",
    "bic",
    "rho_squared",
    "compute_metrics",
    "forecast",
    "saturation_fraction",
]


@dataclass(frozen=True)
class MetricsReport:
    """Comparison metrics for one fitted model on one series."""

    r_squared: float
    bic: float
    rho_squared: float
    n: int
    k: int
    bic_convention: str = "k"


@dataclass(frozen=True)
class ForecastResult:
    """Out-of-window continuation of a fitted curve.

    Day 0 of every sequence is the last in-sample day, so the forecast
    joins the fitted curve continuously. assumed_swabs holds the swab
    schedule the projection assumes for the horizon.
    """

    horizon_days: int
    assumed_swabs: np.ndarray
    predicted_cumulative: np.ndarray
    predicted_daily: np.ndarray
    saturation_fraction: float


def r_squared(observed_cumulative, fitted_cumulative) -> float:
    """1 - RSS/TSS with TSS taken about the observed mean."""
    y = np.asarray(observed_cumulative, dtype=float)
    f = np.asarray(fitted_cumulative, dtype=float)
    if y.size != f.size or y.size < 2:
        raise ValueError("series must have equal length >= 2")
    tss = float(np.sum((y - y.mean()) ** 2))
    if tss == 0.0:
        raise ValueError("observed series is constant; R^2 undefined")
    return 1.0 - float(np.sum((y - f) ** 2)) / tss


def bic(rss, n, k, variance_as_parameter=False) -> float:
    """Gaussian BIC: n*ln(rss/n) + k*ln(n), up to the variance-counting flag.

    The default counts only the k curve parameters; this is the
    convention the bundled reference table follows (calibrated against
    it). variance_as_parameter=True adds ln(n) for the concentrated
    error variance.
    """
    if rss <= 0:
        raise ValueError("rss must be positive")
    if n <= k:
        raise ValueError(f"need n > k, got n={n}, k={k}")
    count = k + 1 if variance_as_parameter else k
    return n * math.log(rss / n) + count * math.log(n)


def rho_squared(observed_daily, fitted_daily) -> float:
    """Squared Pearson correlation between the two daily-increment series."""
    x = np.asarray(observed_daily, dtype=float)
    y = np.asarray(fitted_daily, dtype=float)
    if x.size != y.size or x.size < 3:
        raise ValueError("daily series must have equal length >= 3")
    if float(np.var(x)) == 0.0 or float(np.var(y)) == 0.0:
        raise ValueError("zero variance; correlation undefined")
    return float(np.corrcoef(x, y)[0, 1]) ** 2


def compute_metrics(fit, data, variance_as_parameter=False, include_first_day=False):
    """MetricsReport for a fit: R^2 and BIC on cumulative data, rho^2 on daily.

    The first daily increment (which equals the first cumulative value,
    not a true one-day difference) is excluded from rho^2 by default;
    include_first_day=True keeps it.
    """
    y = np.asarray(data.cumulative_cases, dtype=float)
    f = np.asarray(fit.fitted_cumulative, dtype=float)
    if include_first_day:
        obs_daily = daily_increments(y)
        fit_daily = daily_increments(f)
    else:
        obs_daily = np.diff(y)
        fit_daily = np.diff(f)
    return MetricsReport(
        r_squared=r_squared(y, f),
        bic=bic(fit.rss, fit.n, fit.k, variance_as_parameter),
        rho_squared=rho_squared(obs_daily, fit_daily),
        n=fit.n,
        k=fit.k,
        bic_convention="k+1" if variance_as_parameter else "k",
    )


def _tiled_swabs(daily_swabs, horizon):
    if horizon == 0:
        return np.empty(0)
    week = np.asarray(daily_swabs, dtype=float)[-7:]
    reps = -(-horizon // week.size)
    return np.tile(week, reps)[:horizon]


def forecast(fit, data, horizon: int = 21) -> ForecastResult:
    """Project a fitted curve `horizon` days past the last in-sample day.

    Entries cover days +1 .. +horizon after the last observation, so the
    default reaches exactly three weeks ahead. The swab-reweighted model
    extends its schedule by tiling the final observed week
    (standardization constants stay frozen at their fitting-window
    values); the other curve models and the compartmental model evaluate
    their curves directly. The first daily increment is taken against the
    last fitted in-sample value.
    """
    if horizon < 0:
        raise ValueError("horizon must be >= 0")
    model = fit.model
    assumed = _tiled_swabs(data.daily_swabs, horizon)
    m_index = model.param_names.index("m") if "m" in model.param_names else None
    sat = (
        saturation_fraction(float(data.cumulative_cases[-1]), fit.estimates[m_index])
        if m_index is not None
        else math.nan
    )
    if horizon == 0:
        empty = np.empty(0)
        return ForecastResult(0, assumed, empty, empty, sat)

    t_last = float(model.t_grid[-1])
    t_ext = t_last + np.arange(1, horizon + 1, dtype=float)
    if model.name == "dmpsw":
        schedule = np.concatenate([data.daily_swabs, assumed])
        stats = model.context["stats"]
        xi = fit.estimates[5]
        cumulative = eval_dmp_perturbed(
            t_ext,
            DmpParams(*fit.estimates[:5]),
            lambda tt: swab_integral(tt, schedule, stats, xi),
        )
    else:
        cumulative = np.asarray(model.predict(fit.estimates, t_ext), dtype=float)
    daily = np.diff(cumulative, prepend=float(fit.fitted_cumulative[-1]))
    return ForecastResult(
        horizon_days=horizon,
        assumed_swabs=assumed,
        predicted_cumulative=cumulative,
        predicted_daily=daily,
        saturation_fraction=sat,
    )


def saturation_fraction(last_cumulative, m_hat) -> float:
    """Fraction of the estimated final size already observed."""
    if m_hat <= 0:
        raise ValueError("m_hat must be positive")
    return float(last_cumulative) / float(m_hat)
