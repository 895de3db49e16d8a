"""Parameter estimation for the growth curves and the compartmental model.

Nonlinear least squares via damped normal equations (Levenberg-Marquardt)
for the six curve models, run in a smooth transformed parameter space so
that sign and box constraints never need active-set logic; quasi-Newton
maximum likelihood for the compartmental model; asymptotic (Wald) and
profile-likelihood confidence intervals; deterministic multistart with
heuristic starts plus Latin-hypercube jitters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize, stats
from scipy.interpolate import CubicSpline

from . import sird
from .growth_models import (
    BassCoreParams,
    BemmaorParams,
    DmpParams,
    LogisticParams,
    RectShockParams,
    SeasonalParams,
    daily_increments,
    eval_begbm,
    eval_dmp,
    eval_dmp_perturbed,
    eval_gbm,
    eval_logistic,
)
from .intervention import rect_integral, seasonal_integral, swab_integral, swab_stats

__all__ = [
    "MODEL_NAMES",
    "FitConfig",
    "FitResult",
    "ModelSpec",
    "model_spec",
    "default_starts",
    "numeric_jacobian",
    "nls_fit",
    "mle_fit",
    "fit_model",
    "asymptotic_ci",
    "profile_ci",
]

MODEL_NAMES = ("log", "gbm", "begbm", "dmp", "dmpseas", "dmpsw", "sird")

_PENALTY = 1e12


@dataclass
class FitConfig:
    """Optimizer settings shared by the least-squares and likelihood fits.

    The stopping rule is: relative objective decrease below
    objective_tolerance on an accepted step, or gradient infinity-norm
    below gradient_tolerance, or max_iterations. bounds optionally
    overrides the per-parameter default boxes by name.

    multistart_count adds that many seeded Latin-hypercube jitters on
    top of the deterministic heuristic start grid. The default of zero
    keeps the search reproducible without a seed; raise it to probe
    for alternative basins.
    """

    max_iterations: int = 500
    gradient_tolerance: float = 1e-8
    step_tolerance: float = 1e-15
    objective_tolerance: float = 1e-12
    finite_difference_step: float = 1e-6
    multistart_count: int = 0
    seed: int = 0
    bounds: dict = None
    per_series_sigma: bool = True

    def __post_init__(self):
        for name in (
            "gradient_tolerance",
            "step_tolerance",
            "objective_tolerance",
            "finite_difference_step",
        ):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.bounds:
            for key, (lo, hi) in self.bounds.items():
                if not lo < hi:
                    raise ValueError(f"bounds for {key}: need lo < hi, got [{lo}, {hi}]")


class ParamTransform:
    """Bijection between the natural parameter vector and all of R^k.

    Each parameter is mapped by one of: identity, log (positive
    parameters), or a scaled logit (box-bounded parameters). One pair of
    parameters may be coupled as b = a + exp(raw_b), which enforces
    a < b without a constraint.
    """

    def __init__(self, specs, ab_pair=None):
        self.specs = tuple(specs)
        self.ab_pair = ab_pair
        for spec in self.specs:
            if spec[0] not in ("id", "log", "logit"):
                raise ValueError(f"unknown transform kind {spec[0]!r}")
            if spec[0] == "logit" and not spec[1] < spec[2]:
                raise ValueError(f"empty box {spec[1:]} in logit transform")

    @property
    def k(self) -> int:
        return len(self.specs)

    def to_raw(self, theta):
        theta = np.asarray(theta, dtype=float)
        x = np.empty_like(theta)
        for i, spec in enumerate(self.specs):
            if self.ab_pair is not None and i == self.ab_pair[1]:
                gap = theta[i] - theta[self.ab_pair[0]]
                if gap <= 0:
                    raise ValueError(f"coupled pair requires b > a, got gap {gap}")
                x[i] = math.log(gap)
            elif spec[0] == "id":
                x[i] = theta[i]
            elif spec[0] == "log":
                if theta[i] <= 0:
                    raise ValueError(f"parameter {i} must be positive, got {theta[i]}")
                x[i] = math.log(theta[i])
            else:
                lo, hi = spec[1], spec[2]
                ratio = (theta[i] - lo) / (hi - theta[i])
                x[i] = math.log(min(max(ratio, 1e-12), 1e12))
        return x

    def to_natural(self, x):
        x = np.asarray(x, dtype=float)
        theta = np.empty_like(x)
        for i, spec in enumerate(self.specs):
            if self.ab_pair is not None and i == self.ab_pair[1]:
                continue
            if spec[0] == "id":
                theta[i] = x[i]
            elif spec[0] == "log":
                theta[i] = math.exp(min(x[i], 700.0))
            else:
                lo, hi = spec[1], spec[2]
                theta[i] = lo + (hi - lo) / (1.0 + math.exp(-min(max(x[i], -700.0), 700.0)))
        if self.ab_pair is not None:
            ia, ib = self.ab_pair
            theta[ib] = theta[ia] + math.exp(min(x[ib], 700.0))
        return theta


@dataclass(frozen=True)
class ModelSpec:
    """One fittable model bound to a particular observed series.

    predict maps (natural parameter vector, day grid) to the cumulative
    curve. t_grid is the in-sample day grid; the curve models count days
    1..n while the compartmental model counts 0..n-1 from the first
    observed day. context carries series-derived objects (swab
    standardization, the series itself) needed beyond the sample.
    """

    name: str
    param_names: tuple
    transform: ParamTransform
    predict: object
    starts: tuple
    t_grid: np.ndarray
    kind: str = "nls"
    context: dict = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.param_names)


def _heuristics(data):
    last = float(data.cumulative_cases[-1])
    n = data.n
    daily = np.diff(data.cumulative_cases, prepend=0.0)
    t_peak = int(np.argmax(daily)) + 1
    a0 = max(1.0, t_peak - 7.0)
    b0 = min(n - 1.0, t_peak + 7.0)
    if b0 <= a0:
        b0 = a0 + 7.0
    return {
        "last": last,
        "n": n,
        "m": [1.1 * last, 1.5 * last, 3.0 * last],
        "lam": float(t_peak),
        "eta": n / 8.0,
        "p": [1e-3, 1e-2],
        "q": [0.05, 0.15],
        "a": a0,
        "b": b0,
        "c": [0.5, 1.0],
        "A": [1.0, 2.5],
        "s": 7.0,
        "alpha": 0.05,
        "xi": [0.1, 0.5],
    }


def default_starts(model, data):
    """Deterministic heuristic start vectors for one model on one series.

    The jittered multistart copies are added by the fitting routines,
    not here. `model` may be a ModelSpec or a model name.
    """
    name = model.name if isinstance(model, ModelSpec) else model
    h = _heuristics(data)
    starts = []
    if name == "log":
        for m0 in h["m"]:
            starts.append([m0, h["lam"], h["eta"]])
    elif name == "gbm":
        for m0, p0, q0, c0 in itertools.product(h["m"], h["p"], h["q"], h["c"]):
            starts.append([m0, p0, q0, h["a"], h["b"], c0])
    elif name == "begbm":
        for m0, p0, q0, c0, A0 in itertools.product(
            h["m"], h["p"], h["q"], h["c"], h["A"]
        ):
            starts.append([m0, p0, q0, h["a"], h["b"], c0, A0])
    elif name == "dmp":
        for m0, pc0, qc0, p0, q0 in itertools.product(
            h["m"], h["p"], h["q"], h["p"], h["q"]
        ):
            starts.append([m0, pc0, qc0, p0, q0])
    elif name == "dmpseas":
        for m0, pc0, qc0, p0, q0 in itertools.product(
            h["m"], h["p"], h["q"], h["p"], h["q"]
        ):
            starts.append([m0, pc0, qc0, p0, q0, h["s"], h["alpha"], h["alpha"]])
    elif name == "dmpsw":
        for m0, pc0, qc0, p0, q0, xi0 in itertools.product(
            h["m"], h["p"], h["q"], h["p"], h["q"], h["xi"]
        ):
            starts.append([m0, pc0, qc0, p0, q0, xi0])
    elif name == "sird":
        I00 = max(float(data.infected[0]), 1.0)
        for beta0, N0 in itertools.product([0.15, 0.35], [1.3, 3.0]):
            nat = sird.SirdParams(
                beta=beta0, gamma=0.03, delta=0.02, N=N0 * h["last"], I0=I00
            )
            starts.append(list(nat.transformed().as_array()))
    else:
        raise ValueError(f"unknown model {name!r}")
    return [np.array(s, dtype=float) for s in starts]


def _box(bounds, key, default):
    if bounds and key in bounds:
        return tuple(bounds[key])
    return default


def model_spec(name, data, bounds=None) -> ModelSpec:
    """Build the ModelSpec for `name` bound to the observed series `data`.

    Default boxes: m in (0.5x, 100x) the observed maximum; a in [0, n]
    with b = a + exp(raw); s in [2, n/2]; the innovation-type rates
    (p, p_c) and eta live on a log scale. The imitation-type coefficients
    q and q_c are unconstrained: several series are best described with
    q slightly below zero. All reference optima are interior.
    """
    n = data.n
    obs_max = float(np.max(data.cumulative_cases))
    t_curve = np.arange(1.0, n + 1.0)
    m_box = ("logit", *_box(bounds, "m", (0.5 * obs_max, 100.0 * obs_max)))
    a_box = ("logit", *_box(bounds, "a", (0.0, float(n))))

    if name == "log":
        def predict(theta, t):
            return eval_logistic(t, LogisticParams(m=theta[0], lam=theta[1], eta=theta[2]))

        transform = ParamTransform([m_box, ("id",), ("log",)])
        names = ("m", "lambda", "eta")
    elif name == "gbm":
        def predict(theta, t):
            shock = RectShockParams(a=theta[3], b=theta[4], c=theta[5])
            core = BassCoreParams(m=theta[0], p=theta[1], q=theta[2])
            return eval_gbm(t, core, lambda tt: rect_integral(tt, shock))

        transform = ParamTransform(
            [m_box, ("log",), ("id",), a_box, ("log",), ("id",)], ab_pair=(3, 4)
        )
        names = ("m", "p", "q", "a", "b", "c")
    elif name == "begbm":
        def predict(theta, t):
            shock = RectShockParams(a=theta[3], b=theta[4], c=theta[5])
            core = BassCoreParams(m=theta[0], p=theta[1], q=theta[2])
            params = BemmaorParams(core=core, A=theta[6])
            return eval_begbm(t, params, lambda tt: rect_integral(tt, shock))

        transform = ParamTransform(
            [m_box, ("log",), ("id",), a_box, ("log",), ("id",), ("id",)],
            ab_pair=(3, 4),
        )
        names = ("m", "p", "q", "a", "b", "c", "A")
    elif name == "dmp":
        def predict(theta, t):
            return eval_dmp(t, DmpParams(*theta))

        transform = ParamTransform(
            [m_box, ("log",), ("id",), ("log",), ("id",)]
        )
        names = ("m", "p_c", "q_c", "p", "q")
    elif name == "dmpseas":
        s_box = ("logit", *_box(bounds, "s", (2.0, n / 2.0)))

        def predict(theta, t):
            seas = SeasonalParams(alpha1=theta[6], alpha2=theta[7], s=theta[5])
            return eval_dmp_perturbed(
                t, DmpParams(*theta[:5]), lambda tt: seasonal_integral(tt, seas)
            )

        transform = ParamTransform(
            [m_box, ("log",), ("id",), ("log",), ("id",), s_box, ("id",), ("id",)]
        )
        names = ("m", "p_c", "q_c", "p", "q", "s", "alpha1", "alpha2")
    elif name == "dmpsw":
        stats_B = swab_stats(data.daily_swabs[1:])
        schedule = np.array(data.daily_swabs)

        def predict(theta, t):
            return eval_dmp_perturbed(
                t,
                DmpParams(*theta[:5]),
                lambda tt: swab_integral(tt, schedule, stats_B, theta[5]),
            )

        transform = ParamTransform(
            [m_box, ("log",), ("id",), ("log",), ("id",), ("id",)]
        )
        names = ("m", "p_c", "q_c", "p", "q", "xi")
        return ModelSpec(
            name=name,
            param_names=names,
            transform=transform,
            predict=predict,
            starts=tuple(default_starts(name, data)),
            t_grid=t_curve,
            context={"stats": stats_B, "series": data},
        )
    elif name == "sird":
        R0 = float(data.recovered[0])
        D0 = float(data.deaths[0])

        def predict(x, t):
            nat = sird.SirdTransformedParams.from_array(x).natural()
            S0 = nat.N - nat.I0 - R0 - D0
            if S0 <= 0:
                raise ValueError("N cannot support the initial compartments")
            init = sird.SirdState(S=S0, I=nat.I0, R=R0, D=D0)
            idx = np.rint(np.asarray(t, dtype=float)).astype(int)
            traj = sird.integrate(nat, init, int(idx.max()))
            return sird.total_cases(traj)[idx]

        return ModelSpec(
            name=name,
            param_names=("logit_beta", "logit_gamma", "logit_delta", "ln_N", "ln_I0"),
            transform=ParamTransform([("id",)] * 5),
            predict=predict,
            starts=tuple(default_starts(name, data)),
            t_grid=np.arange(0.0, float(n)),
            kind="mle",
            context={"series": data},
        )
    else:
        raise ValueError(f"unknown model {name!r}")

    return ModelSpec(
        name=name,
        param_names=names,
        transform=transform,
        predict=predict,
        starts=tuple(default_starts(name, data)),
        t_grid=t_curve,
        context={"series": data},
    )


@dataclass
class FitResult:
    """Point estimates with uncertainty and fitted curves for one model."""

    model: ModelSpec
    estimates: np.ndarray
    standard_errors: np.ndarray
    confidence_intervals: np.ndarray
    rss: float
    n: int
    fitted_cumulative: np.ndarray
    fitted_daily: np.ndarray
    converged: bool
    iterations: int
    covariance: np.ndarray = None
    condition_number: float = math.nan
    nll: float = math.nan
    natural_estimates: np.ndarray = None
    objective: object = None
    objective_trace: tuple = ()
    ci_level: float = 0.95

    @property
    def k(self) -> int:
        return len(self.estimates)

    @property
    def param_names(self) -> tuple:
        return self.model.param_names if self.model is not None else tuple(
            f"p{i}" for i in range(self.k)
        )


def numeric_jacobian(model, theta, t, rel_step=1e-6):
    """Central-difference Jacobian of the model curve in natural parameters.

    Step for parameter i is rel_step * max(|theta_i|, 1). When the
    estimate sits against a feasibility boundary one of the probes can
    be infeasible; that side falls back to a one-sided difference.
    Raises only if neither side is evaluable.
    """
    theta = np.asarray(theta, dtype=float)
    t = np.asarray(t, dtype=float)

    def probe(x):
        try:
            z = np.asarray(model.predict(x, t), dtype=float)
        except (ValueError, FloatingPointError):
            return None
        return z if np.all(np.isfinite(z)) else None

    z0 = None
    cols = []
    for i in range(theta.size):
        h = rel_step * max(abs(theta[i]), 1.0)
        up, down = theta.copy(), theta.copy()
        up[i] += h
        down[i] -= h
        z_up, z_down = probe(up), probe(down)
        if z_up is not None and z_down is not None:
            cols.append((z_up - z_down) / (2.0 * h))
            continue
        if z0 is None:
            z0 = probe(theta)
        if z0 is None or (z_up is None and z_down is None):
            raise ValueError(
                f"non-finite model value when perturbing {model.param_names[i]}"
            )
        one_sided = z_up if z_up is not None else z_down
        sign = 1.0 if z_up is not None else -1.0
        cols.append(sign * (one_sided - z0) / h)
    return np.column_stack(cols)


def _fd_jacobian(fn, x, rel_step):
    cols = []
    for i in range(x.size):
        h = rel_step * max(abs(x[i]), 1.0)
        up, down = x.copy(), x.copy()
        up[i] += h
        down[i] -= h
        cols.append((fn(up) - fn(down)) / (2.0 * h))
    return np.column_stack(cols)


def _fd_gradient(fn, x, rel_step):
    g = np.empty_like(x)
    for i in range(x.size):
        h = rel_step * max(abs(x[i]), 1.0)
        up, down = x.copy(), x.copy()
        up[i] += h
        down[i] -= h
        g[i] = (fn(up) - fn(down)) / (2.0 * h)
    return g


@dataclass
class _LocalRun:
    x: np.ndarray
    objective: float
    converged: bool
    iterations: int
    trace: tuple = ()


def _lm_minimize(residual, x0, config) -> _LocalRun:
    """Damped least squares on an unconstrained residual function.

    The damping parameter multiplies the diagonal of the normal
    equations (Marquardt scaling); it shrinks on accepted steps and
    grows on rejected ones, so the objective never increases.
    """
    x = np.array(x0, dtype=float)
    r = residual(x)
    if not np.all(np.isfinite(r)):
        return None
    rss = float(r @ r)
    trace = [rss]
    mu = 1e-3
    converged = False
    iterations = 0
    for iterations in range(1, config.max_iterations + 1):
        J = _fd_jacobian(residual, x, config.finite_difference_step)
        if not np.all(np.isfinite(J)):
            break
        g = J.T @ r
        if float(np.max(np.abs(2.0 * g))) < config.gradient_tolerance:
            converged = True
            break
        JtJ = J.T @ J
        scale = np.maximum(np.diag(JtJ), 1e-12)
        accepted = False
        while mu < 1e15:
            try:
                step = np.linalg.solve(JtJ + mu * np.diag(scale), -g)
            except np.linalg.LinAlgError:
                mu *= 10.0
                continue
            x_try = x + step
            r_try = residual(x_try)
            if np.all(np.isfinite(r_try)):
                with np.errstate(over="ignore"):
                    rss_try = float(r_try @ r_try)
                if rss_try < rss:
                    relative_decrease = (rss - rss_try) / rss
                    step_size = float(np.linalg.norm(step)) / max(
                        float(np.linalg.norm(x)), 1.0
                    )
                    x, r, rss = x_try, r_try, rss_try
                    trace.append(rss)
                    mu = max(mu / 3.0, 1e-12)
                    accepted = True
                    if (
                        relative_decrease < config.objective_tolerance
                        or step_size < config.step_tolerance
                    ):
                        converged = True
                    break
            mu *= 10.0
        if converged or not accepted:
            break
    return _LocalRun(
        x=x, objective=rss, converged=converged, iterations=iterations, trace=tuple(trace)
    )


def _lhs_unit(rng, count, dim):
    """Latin-hypercube sample in [0, 1)^dim: one point per stratum per axis."""
    strata = np.tile(np.arange(count, dtype=float), (dim, 1))
    strata = rng.permuted(strata, axis=1).T
    return (strata + rng.random((count, dim))) / count


def _start_pool(model, config):
    raw = [model.transform.to_raw(s) for s in model.starts]
    count = int(config.multistart_count)
    if count > 0:
        rng = np.random.default_rng(config.seed)
        offsets = (_lhs_unit(rng, count, model.transform.k) - 0.5) * 1.5
        for j in range(count):
            raw.append(raw[j % len(model.starts)] + offsets[j])
    return raw


def _better(candidate, incumbent):
    if incumbent is None:
        return True
    if candidate[0] != incumbent[0]:
        return candidate[0] < incumbent[0]
    return candidate[1] < incumbent[1]


def asymptotic_ci(fit: FitResult, level: float = 0.95):
    """Wald intervals: estimate +/- quantile * SE.

    Least-squares fits use the Student-t quantile with n - k degrees of
    freedom (this is what reproduces the reference interval endpoints);
    likelihood fits use the normal quantile.
    """
    if not 0.0 < level < 1.0:
        raise ValueError(f"level must be in (0, 1), got {level}")
    se = np.asarray(fit.standard_errors, dtype=float)
    est = np.asarray(fit.estimates, dtype=float)
    if fit.model is not None and fit.model.kind == "nls":
        dof = fit.n - len(est)
        quantile = float(stats.t.ppf(0.5 + level / 2.0, dof))
    else:
        quantile = float(stats.norm.ppf(0.5 + level / 2.0))
    return np.column_stack([est - quantile * se, est + quantile * se])


def _nls_uncertainty(model, theta, rss, n, rel_step):
    J = numeric_jacobian(model, theta, model.t_grid, rel_step)
    JtJ = J.T @ J
    condition = float(np.linalg.cond(JtJ))
    sigma2 = rss / (n - len(theta))
    try:
        inv = np.linalg.inv(JtJ)
    except np.linalg.LinAlgError:
        inv = np.linalg.pinv(JtJ)
    cov = sigma2 * inv
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    return se, cov, condition


def nls_fit(model: ModelSpec, data, config: FitConfig = None) -> FitResult:
    """Least-squares fit of a curve model to the cumulative case series.

    Runs the damped least-squares iteration from every heuristic start
    plus the seeded Latin-hypercube jitters and keeps the lowest residual
    sum of squares (ties broken by lexicographically smallest parameter
    vector). Deterministic for a fixed config.
    """
    config = config or FitConfig()
    if model.kind != "nls":
        raise ValueError(f"model {model.name} requires mle_fit")
    if config.bounds:
        model = model_spec(model.name, data, bounds=config.bounds)
    if data.n < model.k + 2:
        raise ValueError(
            f"need at least {model.k + 2} observations, got {data.n}"
        )
    y = np.asarray(data.cumulative_cases, dtype=float)
    t = model.t_grid

    def residual(x):
        theta = model.transform.to_natural(x)
        try:
            with np.errstate(all="ignore"):
                z = model.predict(theta, t)
        except (ValueError, FloatingPointError):
            return np.full(y.shape, np.nan)
        return y - np.asarray(z, dtype=float)

    best = None
    for x0 in _start_pool(model, config):
        run = _lm_minimize(residual, x0, config)
        if run is None:
            continue
        theta = model.transform.to_natural(run.x)
        if _better((run.objective, tuple(theta)), best):
            best = (run.objective, tuple(theta), run)
    if best is None:
        raise RuntimeError(f"every start failed for model {model.name}")
    rss, theta, run = best[0], np.array(best[1]), best[2]
    se, cov, condition = _nls_uncertainty(
        model, theta, rss, data.n, config.finite_difference_step
    )
    fitted = np.asarray(model.predict(theta, t), dtype=float)
    result = FitResult(
        model=model,
        estimates=theta,
        standard_errors=se,
        confidence_intervals=None,
        rss=rss,
        n=data.n,
        fitted_cumulative=fitted,
        fitted_daily=daily_increments(fitted),
        converged=run.converged,
        iterations=run.iterations,
        covariance=cov,
        condition_number=condition,
        objective_trace=run.trace,
    )
    result.confidence_intervals = asymptotic_ci(result)
    return result


def _guarded(objective, center):
    """Wrap a likelihood so infeasible points return a smooth large penalty."""
    center = np.asarray(center, dtype=float)

    def fn(x):
        try:
            value = objective(x)
        except (ValueError, OverflowError, sird.IntegrationError):
            return _PENALTY * (1.0 + float(np.sum((x - center) ** 2)))
        if not math.isfinite(value):
            return _PENALTY * (1.0 + float(np.sum((x - center) ** 2)))
        return value

    return fn


def _quasi_newton(fn, x0, config):
    res = optimize.minimize(
        fn,
        x0,
        method="BFGS",
        jac=lambda x: _fd_gradient(fn, x, config.finite_difference_step),
        options={"gtol": config.gradient_tolerance, "maxiter": config.max_iterations},
    )
    converged = bool(res.success)
    if not converged and res.jac is not None:
        # BFGS with a numeric gradient often ends with "precision loss"
        # once the line search runs into finite-difference noise. If the
        # final gradient sits at that noise floor the point is a minimum
        # for all practical purposes, so do not flag it.
        floor = 1e-4 * (1.0 + abs(float(res.fun)))
        converged = bool(np.max(np.abs(res.jac)) <= floor)
    return _LocalRun(
        x=np.asarray(res.x, dtype=float),
        objective=float(res.fun),
        converged=converged,
        iterations=int(res.nit),
    )


def mle_fit(data, config: FitConfig = None) -> FitResult:
    """Maximum-likelihood fit of the compartmental model.

    Minimizes the Gaussian negative log-likelihood of the infected,
    recovered and dead series over the transformed parameters
    (logit rates, log sizes) by quasi-Newton iteration with a numeric
    gradient. Estimates are reported on the transformed scale; the
    back-transformed values are attached as natural_estimates.
    """
    config = config or FitConfig()
    model = model_spec("sird", data)

    def raw_objective(x):
        return sird.neg_log_likelihood(
            sird.SirdTransformedParams.from_array(x),
            data,
            per_series_sigma=config.per_series_sigma,
        )

    best = None
    for x0 in _start_pool(model, config):
        fn = _guarded(raw_objective, x0)
        run = _quasi_newton(fn, x0, config)
        if not math.isfinite(run.objective) or run.objective >= _PENALTY:
            continue
        if _better((run.objective, tuple(run.x)), best):
            best = (run.objective, tuple(run.x), run)
    if best is None:
        raise RuntimeError("every start failed for the compartmental model")
    nll, x_hat, run = best[0], np.array(best[1]), best[2]

    objective = _guarded(raw_objective, x_hat)
    hessian = _fd_jacobian(
        lambda x: _fd_gradient(objective, x, config.finite_difference_step),
        x_hat,
        config.finite_difference_step,
    )
    hessian = 0.5 * (hessian + hessian.T)
    condition = float(np.linalg.cond(hessian))
    try:
        cov = np.linalg.inv(hessian)
    except np.linalg.LinAlgError:
        cov = np.linalg.pinv(hessian)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))

    fitted = np.asarray(model.predict(x_hat, model.t_grid), dtype=float)
    rss = float(np.sum((np.asarray(data.cumulative_cases) - fitted) ** 2))
    nat = sird.SirdTransformedParams.from_array(x_hat).natural()
    result = FitResult(
        model=model,
        estimates=x_hat,
        standard_errors=se,
        confidence_intervals=None,
        rss=rss,
        n=data.n,
        fitted_cumulative=fitted,
        fitted_daily=daily_increments(fitted),
        converged=run.converged,
        iterations=run.iterations,
        covariance=cov,
        condition_number=condition,
        nll=nll,
        natural_estimates=np.array([nat.beta, nat.gamma, nat.delta, nat.N, nat.I0]),
        objective=objective,
    )
    result.confidence_intervals = asymptotic_ci(result)
    return result


def fit_model(name, data, config: FitConfig = None) -> FitResult:
    """Fit one model by name, dispatching to the right estimator."""
    if name == "sird":
        return mle_fit(data, config)
    return nls_fit(model_spec(name, data), data, config)


def _profile_point(objective, x_hat, index, value, x_warm, config):
    free = [j for j in range(x_hat.size) if j != index]
    if not free:
        x = x_hat.copy()
        x[index] = value
        return float(objective(x)), x

    def reduced(xr):
        x = x_hat.copy()
        x[free] = xr
        x[index] = value
        return objective(x)

    run = _quasi_newton(reduced, x_warm[free], config)
    x = x_hat.copy()
    x[free] = run.x
    x[index] = value
    return run.objective, x


def profile_ci(fit: FitResult, param_index: int, level: float = 0.95,
               points_per_side: int = 16, span: float = 4.0):
    """Profile-likelihood interval for one parameter of a likelihood fit.

    Walks a grid outward from the estimate (at least 15 points per
    side), re-optimizing the remaining parameters at every grid value,
    fits a cubic spline through the profiled objective and inverts it at
    the chi-square(1) threshold above the minimum. A side whose profile
    never reaches the threshold within the (twice-extended) bracket is
    reported as unbounded (infinite endpoint).
    """
    if fit.objective is None:
        raise ValueError("fit carries no objective to profile")
    if points_per_side < 15:
        raise ValueError("need at least 15 grid points per side")
    x_hat = np.asarray(fit.estimates, dtype=float)
    f_min = float(fit.objective(x_hat))
    threshold = float(stats.chi2.ppf(level, 1)) / 2.0
    target = f_min + threshold
    config = FitConfig()
    se = float(fit.standard_errors[param_index])
    if not math.isfinite(se) or se <= 0:
        se = max(abs(x_hat[param_index]), 1.0) * 0.1

    def walk(direction, width):
        values, profiles = [], []
        warm = x_hat.copy()
        for j in range(1, points_per_side + 1):
            v = x_hat[param_index] + direction * width * j / points_per_side
            f_v, warm = _profile_point(fit.objective, x_hat, param_index, v, warm, config)
            values.append(v)
            profiles.append(f_v)
        return values, profiles

    bounds = []
    for direction in (-1.0, 1.0):
        width = span * se
        crossing = None
        for _ in range(3):
            values, profiles = walk(direction, width)
            above = [j for j, f_v in enumerate(profiles) if f_v >= target]
            if above:
                crossing = (values, profiles, above[0])
                break
            width *= 2.0
        if crossing is None:
            bounds.append(direction * math.inf)
            continue
        values, profiles, first_above = crossing
        grid = np.array([x_hat[param_index]] + values)
        prof = np.array([f_min] + profiles)
        order = np.argsort(grid)
        spline = CubicSpline(grid[order], prof[order])
        lo, hi = sorted((x_hat[param_index], values[first_above]))
        root = optimize.brentq(
            lambda v: float(spline(v)) - target, lo, hi, xtol=1e-12, rtol=8.9e-16
        )
        bounds.append(root)
    return tuple(sorted(bounds))
