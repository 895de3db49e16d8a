"""SIRD compartmental model: derivative field, fixed-step integration, likelihood.

The system is

    S' = -beta*I*S/N
    I' =  beta*I*S/N - gamma*I - delta*I
    R' =  gamma*I
    D' =  delta*I

with N = S + I + R + D conserved. Integration uses classical fourth-order
Runge-Kutta with a fixed step, sampled at integer days, which keeps runs
bit-reproducible and is verified by step-halving.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "SirdParams",
    "SirdTransformedParams",
    "SirdState",
    "IntegrationError",
    "sird_derivatives",
    "integrate",
    "neg_log_likelihood",
    "total_cases",
    "DEFAULT_STEP",
]

DEFAULT_STEP = 0.05

# Rounding slack before a slightly negative compartment counts as blow-up.
_NEGATIVE_TOL = 1e-9


@dataclass(frozen=True)
class SirdParams:
    """Rates in (0, 1) plus population size and initial infected count.

    beta may be exactly zero (transmission switched off), in which case
    the infected pool just decays at rate gamma + delta.
    """

    beta: float
    gamma: float
    delta: float
    N: float
    I0: float

    def __post_init__(self):
        if not 0.0 <= self.beta < 1.0:
            raise ValueError(f"beta must lie in [0, 1), got {self.beta}")
        for name in ("gamma", "delta"):
            v = getattr(self, name)
            if not 0.0 < v < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {v}")
        if self.N <= 0:
            raise ValueError(f"N must be positive, got {self.N}")
        if self.I0 <= 0:
            raise ValueError(f"I0 must be positive, got {self.I0}")

    def transformed(self) -> "SirdTransformedParams":
        logit = lambda v: math.log(v / (1.0 - v))
        return SirdTransformedParams(
            logit_beta=logit(self.beta),
            logit_gamma=logit(self.gamma),
            logit_delta=logit(self.delta),
            ln_N=math.log(self.N),
            ln_I0=math.log(self.I0),
        )


@dataclass(frozen=True)
class SirdTransformedParams:
    """Unconstrained parametrization: logits of the rates, logs of N and I0."""

    logit_beta: float
    logit_gamma: float
    logit_delta: float
    ln_N: float
    ln_I0: float

    def natural(self) -> SirdParams:
        expit = lambda v: 1.0 / (1.0 + math.exp(-v))
        return SirdParams(
            beta=expit(self.logit_beta),
            gamma=expit(self.logit_gamma),
            delta=expit(self.logit_delta),
            N=math.exp(self.ln_N),
            I0=math.exp(self.ln_I0),
        )

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.logit_beta, self.logit_gamma, self.logit_delta, self.ln_N, self.ln_I0]
        )

    @staticmethod
    def from_array(x) -> "SirdTransformedParams":
        return SirdTransformedParams(*(float(v) for v in x))


@dataclass(frozen=True)
class SirdState:
    """Compartment occupancies at one time point."""

    S: float
    I: float
    R: float
    D: float
    t: float = 0.0

    @property
    def total(self) -> float:
        return self.S + self.I + self.R + self.D


class IntegrationError(RuntimeError):
    """A compartment went negative beyond rounding tolerance."""


def sird_derivatives(state: SirdState, params: SirdParams):
    """Right-hand side (dS, dI, dR, dD); the four components sum to zero."""
    force = params.beta * state.I * state.S / params.N
    dI = force - (params.gamma + params.delta) * state.I
    return (-force, dI, params.gamma * state.I, params.delta * state.I)


def integrate(params: SirdParams, init: SirdState, horizon: int, h: float = DEFAULT_STEP):
    """Trajectory at integer days 0..horizon from the given initial state.

    Fixed-step RK4. Raises IntegrationError if a compartment drops below
    -1e-9*N (genuine blow-up rather than rounding noise) or leaves the
    finite range. Returns an array of shape (horizon+1, 4) with columns
    S, I, R, D. The stage arithmetic is written out on scalars because
    this loop dominates the likelihood evaluations.
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    if not 0.0 < h <= 1.0:
        raise ValueError(f"step must be in (0, 1], got {h}")
    steps_per_day = int(round(1.0 / h))
    beta, gamma, delta, N = params.beta, params.gamma, params.delta, params.N
    s, i, r, d = float(init.S), float(init.I), float(init.R), float(init.D)
    out = np.empty((horizon + 1, 4))
    out[0] = (s, i, r, d)
    tol = -_NEGATIVE_TOL * N
    sixth = h / 6.0
    for day in range(horizon):
        for _ in range(steps_per_day):
            f1 = beta * i * s / N
            k1s, k1i = -f1, f1 - (gamma + delta) * i
            k1r, k1d = gamma * i, delta * i
            s2 = s + 0.5 * h * k1s
            i2 = i + 0.5 * h * k1i
            f2 = beta * i2 * s2 / N
            k2s, k2i = -f2, f2 - (gamma + delta) * i2
            k2r, k2d = gamma * i2, delta * i2
            s3 = s + 0.5 * h * k2s
            i3 = i + 0.5 * h * k2i
            f3 = beta * i3 * s3 / N
            k3s, k3i = -f3, f3 - (gamma + delta) * i3
            k3r, k3d = gamma * i3, delta * i3
            s4 = s + h * k3s
            i4 = i + h * k3i
            f4 = beta * i4 * s4 / N
            k4s, k4i = -f4, f4 - (gamma + delta) * i4
            k4r, k4d = gamma * i4, delta * i4
            s = s + sixth * (k1s + 2.0 * k2s + 2.0 * k3s + k4s)
            i = i + sixth * (k1i + 2.0 * k2i + 2.0 * k3i + k4i)
            r = r + sixth * (k1r + 2.0 * k2r + 2.0 * k3r + k4r)
            d = d + sixth * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        if not (
            math.isfinite(s) and math.isfinite(i) and math.isfinite(r) and math.isfinite(d)
        ) or min(s, i, r, d) < tol:
            raise IntegrationError(
                f"compartment went negative at day {day + 1}: {(s, i, r, d)}"
            )
        out[day + 1] = (s, i, r, d)
    return out


def _fitted_series(tparams: SirdTransformedParams, observed, h):
    nat = tparams.natural()
    R0 = float(observed.recovered[0])
    D0 = float(observed.deaths[0])
    S0 = nat.N - nat.I0 - R0 - D0
    if S0 <= 0:
        raise IntegrationError(
            f"N={nat.N:.6g} cannot support I0+R0+D0={nat.I0 + R0 + D0:.6g}"
        )
    init = SirdState(S=S0, I=nat.I0, R=R0, D=D0, t=0.0)
    n = len(observed.infected)
    return integrate(nat, init, n - 1, h=h)


def neg_log_likelihood(tparams: SirdTransformedParams, observed, per_series_sigma=True,
                       h: float = DEFAULT_STEP):
    """Gaussian negative log-likelihood of the observed I, R, D series.

    With per-series variances (the default) each series gets its own
    sigma concentrated out:

        sum_series (n/2) * ln(SSE_series / n).

    With a single pooled variance the value is (3n/2) * ln(SSE_pooled / 3n).
    Constants independent of the parameters are dropped. A perfect fit
    (zero SSE) is degenerate and raises ValueError.
    """
    traj = _fitted_series(tparams, observed, h)
    n = len(observed.infected)
    sse = [
        float(np.sum((traj[:, 1] - np.asarray(observed.infected, dtype=float)) ** 2)),
        float(np.sum((traj[:, 2] - np.asarray(observed.recovered, dtype=float)) ** 2)),
        float(np.sum((traj[:, 3] - np.asarray(observed.deaths, dtype=float)) ** 2)),
    ]
    if per_series_sigma:
        if any(s <= 0.0 for s in sse):
            raise ValueError("zero residual sum of squares; likelihood is degenerate")
        return sum((n / 2.0) * math.log(s / n) for s in sse)
    pooled = sum(sse)
    if pooled <= 0.0:
        raise ValueError("zero residual sum of squares; likelihood is degenerate")
    return (3.0 * n / 2.0) * math.log(pooled / (3.0 * n))


def total_cases(trajectory):
    """Per-day I + R + D: the cumulative confirmed series implied by a trajectory."""
    trajectory = np.asarray(trajectory, dtype=float)
    return trajectory[:, 1] + trajectory[:, 2] + trajectory[:, 3]
