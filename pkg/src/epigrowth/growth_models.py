"""Closed-form cumulative growth curves for epidemic case series.

Six models share the same shape: a cumulative curve z(t) that starts at
zero, rises monotonically while the intervention weight stays positive,
and saturates at a final size m. All evaluators are pure functions of
their arguments and accept scalar or array time inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "LogisticParams",
    "BassCoreParams",
    "RectShockParams",
    "BemmaorParams",
    "DmpParams",
    "SeasonalParams",
    "SwabShockParams",
    "eval_logistic",
    "eval_gbm",
    "eval_begbm",
    "eval_dmp",
    "eval_dmp_perturbed",
    "daily_increments",
]

# Exponent clamp: beyond +-700 exp() over/underflows in double precision.
# Only far-extrapolation queries are affected.
_EXP_CLAMP = 700.0


def _exp(x):
    return np.exp(np.clip(x, -_EXP_CLAMP, _EXP_CLAMP))


@dataclass(frozen=True)
class LogisticParams:
    """Parameters of the logistic curve.

    m: final epidemic size (cases, > 0)
    lam: location of the midpoint (days)
    eta: shape parameter (days, > 0)
    """

    m: float
    lam: float
    eta: float

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.eta <= 0:
            raise ValueError(f"eta must be positive, got {self.eta}")


@dataclass(frozen=True)
class BassCoreParams:
    """Core diffusion parameters.

    m: final size (cases, > 0)
    p: innovation coefficient (1/day, > 0; it divides q)
    q: imitation coefficient (1/day; may be negative, p + q must be > 0)
    """

    m: float
    p: float
    q: float

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.p + self.q <= 0:
            raise ValueError(f"p + q must be positive, got {self.p + self.q}")


@dataclass(frozen=True)
class RectShockParams:
    """Rectangular intervention: constant intensity c on the interval [a, b].

    a: shock start (days, >= 0)
    b: shock end (days, > a)
    c: shock intensity (dimensionless, any sign)
    """

    a: float
    b: float
    c: float

    def __post_init__(self):
        if self.a < 0:
            raise ValueError(f"a must be nonnegative, got {self.a}")
        if self.a >= self.b:
            raise ValueError(f"a < b required, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class BemmaorParams:
    """Asymmetric diffusion curve: exponent A on the denominator.

    A > 1 gives positive asymmetry, A < 1 negative; A = 1 recovers the
    symmetric form exactly.
    """

    core: BassCoreParams
    A: float

    def __post_init__(self):
        if self.A <= 0:
            raise ValueError(f"A must be positive, got {self.A}")


@dataclass(frozen=True)
class DmpParams:
    """Dynamic-market-potential parameters.

    The ceiling m is approached through its own diffusion dynamic with
    coefficients (p_c, q_c) while adoption follows (p, q). q and q_c may
    be estimated negative; only m, p_c, p are sign-constrained.
    """

    m: float
    p_c: float
    q_c: float
    p: float
    q: float

    def __post_init__(self):
        if self.m <= 0:
            raise ValueError(f"m must be positive, got {self.m}")
        if self.p_c <= 0:
            raise ValueError(f"p_c must be positive, got {self.p_c}")
        if self.p <= 0:
            raise ValueError(f"p must be positive, got {self.p}")
        if self.p + self.q <= 0:
            raise ValueError(f"p + q must be positive, got {self.p + self.q}")
        if self.p_c + self.q_c <= 0:
            raise ValueError(
                f"p_c + q_c must be positive, got {self.p_c + self.q_c}"
            )


@dataclass(frozen=True)
class SeasonalParams:
    """Cyclic intervention weights: w(t) = 1 + alpha1*cos(2*pi*t/s) + alpha2*sin(2*pi*t/s).

    alpha1, alpha2: amplitudes (dimensionless)
    s: period (days, > 0)
    """

    alpha1: float
    alpha2: float
    s: float

    def __post_init__(self):
        if self.s <= 0:
            raise ValueError(f"s must be positive, got {self.s}")


@dataclass(frozen=True)
class SwabShockParams:
    """Sensitivity of the adoption clock to standardized daily swab counts."""

    xi: float


def _bass_fraction(x, p, q):
    """(1 - e^{-(p+q)x}) / (1 + (q/p) e^{-(p+q)x}), the normalized adoption path."""
    e = _exp(-(p + q) * np.asarray(x, dtype=float))
    return (1.0 - e) / (1.0 + (q / p) * e)


def eval_logistic(t, params: LogisticParams):
    """z(t) = m * e^{(t-lam)/eta} / (1 + e^{(t-lam)/eta})."""
    u = (np.asarray(t, dtype=float) - params.lam) / params.eta
    return params.m / (1.0 + _exp(-u))


def eval_gbm(t, core: BassCoreParams, W):
    """z(t) = m * (1 - e^{-(p+q)W(t)}) / (1 + (q/p) e^{-(p+q)W(t)}).

    W is the cumulative intervention integral with W(0) = 0; W(t) = t
    recovers the plain symmetric curve.
    """
    return core.m * _bass_fraction(W(t), core.p, core.q)


def eval_begbm(t, params: BemmaorParams, W):
    """z(t) = m * (1 - e^{-(p+q)W(t)}) / [1 + (q/p) e^{-(p+q)W(t)}]^A.

    The exponent acts on the denominator only, so A = 1 reduces to
    eval_gbm exactly.
    """
    core = params.core
    e = _exp(-(core.p + core.q) * np.asarray(W(t), dtype=float))
    return core.m * (1.0 - e) / (1.0 + (core.q / core.p) * e) ** params.A


def eval_dmp(t, params: DmpParams):
    """z(t) = m * sqrt(bass(t; p_c, q_c)) * bass(t; p, q).

    The square-root factor is the dynamic ceiling, the second factor the
    adoption path; both vanish at t = 0 and approach 1 as t grows.
    """
    t = np.asarray(t, dtype=float)
    pot = _bass_fraction(t, params.p_c, params.q_c)
    return params.m * np.sqrt(np.maximum(pot, 0.0)) * _bass_fraction(t, params.p, params.q)


def eval_dmp_perturbed(t, params: DmpParams, W):
    """Dynamic-ceiling curve with a perturbed adoption clock.

    The ceiling factor keeps the raw clock t; only the adoption factor
    runs on W(t). W(t) = t recovers eval_dmp exactly.
    """
    t = np.asarray(t, dtype=float)
    pot = _bass_fraction(t, params.p_c, params.q_c)
    return params.m * np.sqrt(np.maximum(pot, 0.0)) * _bass_fraction(
        np.asarray(W(t), dtype=float), params.p, params.q
    )


def daily_increments(cumulative):
    """First differences of a cumulative series; element 0 is kept as-is.

    [0, 5, 12] -> [0, 5, 7]. Length is preserved.
    """
    cumulative = np.asarray(cumulative, dtype=float)
    if cumulative.size == 0:
        raise ValueError("cumulative series is empty")
    return np.diff(cumulative, prepend=0.0)
