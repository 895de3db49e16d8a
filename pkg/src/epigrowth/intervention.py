"""Intervention weights w(t) and their cumulative integrals W(t).

W(t) = integral of w from 0 to t. The rectangular and seasonal weights
integrate in closed form; the swab-driven weight is a step function over
daily counts, so its integral is a running sum with unit-day steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .growth_models import RectShockParams, SeasonalParams

__all__ = [
    "SwabStats",
    "rect_integral",
    "seasonal_integral",
    "swab_stats",
    "swab_weight",
    "swab_integral",
]


@dataclass(frozen=True)
class SwabStats:
    """Mean and standard deviation of daily swab counts over the fitting window."""

    mu_B: float
    sigma_B: float

    def __post_init__(self):
        if self.sigma_B <= 0:
            raise ValueError(f"sigma_B must be positive, got {self.sigma_B}")


def rect_integral(t, shock: RectShockParams):
    """W(t) = t + c * max(0, min(t, b) - a): piecewise linear, kinks at a and b."""
    t = np.asarray(t, dtype=float)
    return t + shock.c * np.maximum(0.0, np.minimum(t, shock.b) - shock.a)


def seasonal_integral(t, params: SeasonalParams):
    """W(t) = t + a1*(s/2pi)*sin(2pi t/s) + a2*(s/2pi)*(1 - cos(2pi t/s)).

    Equals t at every integer multiple of the period s.
    """
    t = np.asarray(t, dtype=float)
    s = params.s
    u = 2.0 * math.pi * t / s
    k = s / (2.0 * math.pi)
    return t + params.alpha1 * k * np.sin(u) + params.alpha2 * k * (1.0 - np.cos(u))


def swab_stats(daily_swabs, sample=True) -> SwabStats:
    """Mean and standard deviation of the given daily-swab values.

    Computed over exactly the values supplied (the fitting window; never
    forecast days). `sample=True` uses the n-1 denominator, which is the
    convention the bundled reference statistics follow; `sample=False`
    switches to the population form.
    """
    x = np.asarray(daily_swabs, dtype=float)
    if x.size < 2:
        raise ValueError("need at least two daily swab values")
    sd = float(x.std(ddof=1 if sample else 0))
    if sd == 0.0:
        raise ValueError("daily swab series is constant; sigma_B would be zero")
    return SwabStats(mu_B=float(x.mean()), sigma_B=sd)


def swab_weight(B_t, stats: SwabStats, xi):
    """w_B(t) = 1 + xi * (B(t) - mu_B) / sigma_B; equals 1 when B(t) = mu_B."""
    return 1.0 + xi * (np.asarray(B_t, dtype=float) - stats.mu_B) / stats.sigma_B


def swab_integral(t, daily_swabs, stats: SwabStats, xi):
    """W(t) = sum_{u=1..t} w_B(B_u), with W(0) = 0.

    t indexes days 1..len(daily_swabs); the integrand is a step function
    so the integral is exactly additive over day boundaries. Reduces to
    W(t) = t when xi = 0, and W(n) = n whenever mu_B is the mean of the
    supplied values.
    """
    B = np.asarray(daily_swabs, dtype=float)
    tt = np.asarray(t)
    idx = np.rint(tt).astype(int)
    if np.any(idx < 0) or np.any(idx > B.size):
        raise ValueError(
            f"t must lie within 0..{B.size} (length of the swab schedule)"
        )
    W = np.concatenate([[0.0], np.cumsum(swab_weight(B, stats, xi))])
    out = W[idx]
    return out if isinstance(tt, np.ndarray) and tt.ndim else float(out)
