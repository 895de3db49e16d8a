"""Command-line front end.

Three subcommands: `fit` writes parameter tables and fitted curves,
`compare` writes the model-comparison matrix, `forecast` writes
three-week projections and plot files. All outputs are deterministic
for a fixed seed; numeric CSV cells carry 6 significant digits while
JSON keeps full precision.

Exit codes: 0 all fits converged, 1 hard error, 3 finished but at least
one fit was flagged non-converged.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

from .data_ingest import DEFAULT_WINDOW, REGION_ALIASES, REGIONS, load_region
from .estimation import MODEL_NAMES, FitConfig, fit_model
from .metrics import compute_metrics, forecast as run_forecast

__all__ = ["RunConfig", "main", "cmd_fit", "cmd_compare", "cmd_forecast"]

_EXIT_OK = 0
_EXIT_ERROR = 1
_EXIT_FLAGGED = 3


@dataclass
class RunConfig:
    """Resolved invocation settings shared by the three subcommands."""

    regions: list
    models: list
    data_path: str = None
    patch_path: str = None
    window: tuple = DEFAULT_WINDOW
    horizon: int = 21
    output_dir: Path = Path(".")
    format: str = "csv"
    seed: int = 0
    multistarts: int = 0
    per_series_sigma: bool = True
    bic_variance_parameter: bool = False
    fit_overrides: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.regions or not self.models:
            raise ValueError("need at least one region and one model")
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")

    def fit_config(self) -> FitConfig:
        return FitConfig(
            multistart_count=self.multistarts,
            seed=self.seed,
            per_series_sigma=self.per_series_sigma,
            **self.fit_overrides,
        )


def _fmt(value) -> str:
    """One numeric cell: 6 significant digits, empty for missing."""
    if value is None:
        return ""
    value = float(value)
    if np.isnan(value):
        return ""
    return f"{value:.6g}"


def _slug(region: str) -> str:
    return region.lower()


def _resolve_regions(text: str):
    if text.lower() == "all":
        return list(REGIONS)
    out = []
    for part in text.split(","):
        key = part.strip().lower()
        if key not in REGION_ALIASES:
            raise ValueError(f"unknown region {part!r}")
        out.append(REGION_ALIASES[key])
    return out


def _resolve_models(text: str):
    if text.lower() == "all":
        return list(MODEL_NAMES)
    out = []
    for part in text.split(","):
        key = part.strip().lower()
        if key not in MODEL_NAMES:
            raise ValueError(f"unknown model {part!r}")
        out.append(key)
    return out


def _load(config: RunConfig, region: str):
    return load_region(
        region,
        data_path=config.data_path,
        patch_path=config.patch_path,
        start=config.window[0],
        end=config.window[1],
    )


def _jobs(config: RunConfig):
    """Fit every requested (region, model) pair, merged in key order.

    The pairs are independent; results are collected into a dict keyed
    by (region, model) so output order never depends on completion
    order.
    """
    results = {}
    for region in config.regions:
        data = _load(config, region)
        for model in config.models:
            results[(region, model)] = (data, fit_model(model, data, config.fit_config()))
    return results


def _write_csv(path: Path, header, rows):
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _params_payload(region, model, data, fit, config):
    report = compute_metrics(fit, data, config.bic_variance_parameter)
    payload = {
        "region": _slug(region),
        "model": model,
        "n": fit.n,
        "k": fit.k,
        "converged": bool(fit.converged),
        "iterations": fit.iterations,
        "rss": fit.rss,
        "condition_number": fit.condition_number,
        "seed": config.seed,
        "parameters": [
            {
                "name": name,
                "estimate": float(fit.estimates[i]),
                "standard_error": float(fit.standard_errors[i]),
                "ci_low": float(fit.confidence_intervals[i, 0]),
                "ci_high": float(fit.confidence_intervals[i, 1]),
            }
            for i, name in enumerate(fit.model.param_names)
        ],
        "metrics": {
            "r_squared": report.r_squared,
            "bic": report.bic,
            "rho_squared": report.rho_squared,
            "bic_convention": report.bic_convention,
        },
    }
    if fit.natural_estimates is not None:
        payload["nll"] = fit.nll
        payload["natural_parameters"] = {
            name: float(v)
            for name, v in zip(("beta", "gamma", "delta", "N", "I0"), fit.natural_estimates)
        }
    return payload


def _write_params(path_base: Path, payload, config):
    if config.format == "json":
        path = path_base.with_suffix(".json")
        with path.open("w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        return path
    path = path_base.with_suffix(".csv")
    rows = [
        [
            p["name"],
            _fmt(p["estimate"]),
            _fmt(p["standard_error"]),
            _fmt(p["ci_low"]),
            _fmt(p["ci_high"]),
        ]
        for p in payload["parameters"]
    ]
    for name, value in payload.get("natural_parameters", {}).items():
        rows.append([name, _fmt(value), "", "", ""])
    _write_csv(path, ["parameter", "estimate", "standard_error", "ci_low", "ci_high"], rows)
    return path


def cmd_fit(config: RunConfig) -> int:
    """Write one parameter table and one fitted-curve file per pair."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    flagged = False
    for (region, model), (data, fit) in sorted(_jobs(config).items()):
        flagged |= not fit.converged
        payload = _params_payload(region, model, data, fit, config)
        base = config.output_dir / f"params_{_slug(region)}_{model}"
        _write_params(base, payload, config)
        curve_rows = [
            [
                data.dates[i].isoformat(),
                _fmt(data.cumulative_cases[i]),
                _fmt(fit.fitted_cumulative[i]),
                _fmt(fit.fitted_daily[i]),
            ]
            for i in range(data.n)
        ]
        _write_csv(
            config.output_dir / f"fitted_{_slug(region)}_{model}.csv",
            ["date", "observed_cumulative", "fitted_cumulative", "fitted_daily"],
            curve_rows,
        )
    return _EXIT_FLAGGED if flagged else _EXIT_OK


def cmd_compare(config: RunConfig) -> int:
    """Write compare.csv: one row per (region, model) with best-per-region flags."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    results = _jobs(config)
    reports = {
        key: compute_metrics(fit, data, config.bic_variance_parameter)
        for key, (data, fit) in results.items()
    }
    best = {}
    for region in config.regions:
        rows = {m: reports[(region, m)] for m in config.models}
        best[region] = {
            "r_squared": max(rows, key=lambda m: rows[m].r_squared),
            "bic": min(rows, key=lambda m: rows[m].bic),
            "rho_squared": max(rows, key=lambda m: rows[m].rho_squared),
        }
    out_rows = []
    flagged = False
    for region in config.regions:
        for model in config.models:
            report = reports[(region, model)]
            fit = results[(region, model)][1]
            flagged |= not fit.converged
            out_rows.append(
                [
                    _slug(region),
                    model,
                    _fmt(report.r_squared),
                    _fmt(report.bic),
                    _fmt(report.rho_squared),
                    str(int(best[region]["r_squared"] == model)),
                    str(int(best[region]["bic"] == model)),
                    str(int(best[region]["rho_squared"] == model)),
                    str(int(fit.converged)),
                ]
            )
    _write_csv(
        config.output_dir / "compare.csv",
        [
            "region",
            "model",
            "r_squared",
            "bic",
            "rho_squared",
            "best_r_squared",
            "best_bic",
            "best_rho_squared",
            "converged",
        ],
        out_rows,
    )
    return _EXIT_FLAGGED if flagged else _EXIT_OK


def _svg_plot(data, fit, fc, title):
    """Minimal static chart: observed daily points, fitted and forecast lines."""
    width, height, margin = 800, 500, 55
    obs = np.diff(data.cumulative_cases)
    t_obs = np.arange(2, data.n + 1, dtype=float)
    t_fit = fit.model.t_grid[1:]
    fit_daily = fit.fitted_daily[1:]
    if fc.horizon_days > 0:
        # prepend the anchor day so the projected line touches the fit
        t_fc = fit.model.t_grid[-1] + np.arange(fc.horizon_days + 1, dtype=float)
        fc_daily = np.concatenate([fit.fitted_daily[-1:], fc.predicted_daily])
    else:
        t_fc = np.empty(0)
        fc_daily = np.empty(0)
    xs = np.concatenate([t_obs, t_fit, t_fc])
    ys = np.concatenate([obs, fit_daily, fc_daily])
    x_lo, x_hi = float(xs.min()), float(xs.max())
    y_lo, y_hi = min(0.0, float(ys.min())), float(ys.max()) * 1.05

    def sx(x):
        return margin + (x - x_lo) / (x_hi - x_lo) * (width - 2 * margin)

    def sy(y):
        return height - margin - (y - y_lo) / (y_hi - y_lo) * (height - 2 * margin)

    def polyline(ts, vs, style):
        points = " ".join(f"{sx(t):.2f},{sy(v):.2f}" for t, v in zip(ts, vs))
        return f'<polyline fill="none" {style} points="{points}"/>'

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.0f}" y="24" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
        f'<line x1="{margin}" y1="{height - margin}" x2="{width - margin}" '
        f'y2="{height - margin}" stroke="black"/>',
        f'<line x1="{margin}" y1="{margin}" x2="{margin}" y2="{height - margin}" '
        f'stroke="black"/>',
        f'<text x="{margin}" y="{height - margin + 18}" font-family="sans-serif" '
        f'font-size="11" text-anchor="middle">{x_lo:.0f}</text>',
        f'<text x="{width - margin}" y="{height - margin + 18}" font-family="sans-serif" '
        f'font-size="11" text-anchor="middle">{x_hi:.0f}</text>',
        f'<text x="{margin - 6}" y="{sy(y_hi):.2f}" font-family="sans-serif" '
        f'font-size="11" text-anchor="end">{y_hi:.0f}</text>',
        f'<text x="{margin - 6}" y="{height - margin}" font-family="sans-serif" '
        f'font-size="11" text-anchor="end">{y_lo:.0f}</text>',
    ]
    for t, v in zip(t_obs, obs):
        parts.append(f'<circle cx="{sx(t):.2f}" cy="{sy(v):.2f}" r="2.5" fill="#444"/>')
    parts.append(polyline(t_fit, fit_daily, 'stroke="#d62728" stroke-width="1.8"'))
    if t_fc.size:
        parts.append(
            polyline(
                t_fc, fc_daily, 'stroke="#1f77b4" stroke-width="1.8" stroke-dasharray="6,4"'
            )
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def cmd_forecast(config: RunConfig) -> int:
    """Write per-day projections plus one SVG chart per (region, model)."""
    config.output_dir.mkdir(parents=True, exist_ok=True)
    flagged = False
    for (region, model), (data, fit) in sorted(_jobs(config).items()):
        flagged |= not fit.converged
        fc = run_forecast(fit, data, config.horizon)
        last_day = data.dates[-1]
        # row 0 anchors the table on the last observed day; projected
        # rows follow at offsets 1..horizon
        anchor = [
            [
                "0",
                last_day.isoformat(),
                _fmt(fit.fitted_cumulative[-1]),
                _fmt(fit.fitted_daily[-1]),
                _fmt(data.daily_swabs[-1]),
                _fmt(fc.saturation_fraction),
            ]
        ]
        rows = (anchor if config.horizon > 0 else []) + [
            [
                str(j),
                (last_day + timedelta(days=j)).isoformat(),
                _fmt(fc.predicted_cumulative[j - 1]),
                _fmt(fc.predicted_daily[j - 1]),
                _fmt(fc.assumed_swabs[j - 1]),
                _fmt(fc.saturation_fraction),
            ]
            for j in range(1, config.horizon + 1)
        ]
        base = config.output_dir / f"forecast_{_slug(region)}_{model}"
        if config.format == "json":
            payload = {
                "region": _slug(region),
                "model": model,
                "horizon_days": fc.horizon_days,
                "last_observed_day": last_day.isoformat(),
                "saturation_fraction": None
                if np.isnan(fc.saturation_fraction)
                else fc.saturation_fraction,
                "assumed_swabs": [float(v) for v in fc.assumed_swabs],
                "predicted_cumulative": [float(v) for v in fc.predicted_cumulative],
                "predicted_daily": [float(v) for v in fc.predicted_daily],
            }
            with base.with_suffix(".json").open("w", encoding="utf-8") as fh:
                json.dump(payload, fh, indent=2, sort_keys=True)
                fh.write("\n")
        else:
            _write_csv(
                base.with_suffix(".csv"),
                [
                    "day_offset",
                    "date",
                    "predicted_cumulative",
                    "predicted_daily",
                    "swabs_on_date",
                    "saturation_fraction",
                ],
                rows,
            )
        svg = _svg_plot(data, fit, fc, f"{_slug(region)} {model}: daily cases")
        (config.output_dir / f"plot_{_slug(region)}_{model}.svg").write_text(
            svg, encoding="utf-8"
        )
    return _EXIT_FLAGGED if flagged else _EXIT_OK


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="epigrowth",
        description="Fit epidemic growth models to regional case series.",
        epilog="Exit codes: 0 ok, 1 hard error, 3 some fit flagged non-converged.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, doc in (
        ("fit", "write parameter tables and fitted curves"),
        ("compare", "write the model comparison matrix"),
        ("forecast", "write three-week projections and charts"),
    ):
        p = sub.add_parser(name, help=doc)
        p.add_argument("--data", default=None, help="regional feed CSV (default: bundled)")
        p.add_argument("--patches", default=None, help="patch CSV (default: bundled)")
        p.add_argument("--region", default="all", help="region name(s), comma-separated, or 'all'")
        p.add_argument("--model", default="all", help="model name(s), comma-separated, or 'all'")
        p.add_argument("--start", default=None, help="window start (ISO date)")
        p.add_argument("--end", default=None, help="window end (ISO date)")
        p.add_argument("--horizon", type=int, default=21, help="forecast days (default 21)")
        p.add_argument("--out", default=".", help="output directory")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0, help="multistart seed")
        p.add_argument("--multistarts", type=int, default=0, help="jittered extra starts")
        p.add_argument(
            "--per-series-sigma",
            action=argparse.BooleanOptionalAction,
            default=True,
            help="one error variance per observed series in the compartmental likelihood",
        )
        p.add_argument(
            "--bic-convention",
            choices=("k", "k+1"),
            default="k",
            help="count the error variance as a BIC parameter or not",
        )
    return parser


def _config_from_args(args) -> RunConfig:
    window = (
        date.fromisoformat(args.start) if args.start else DEFAULT_WINDOW[0],
        date.fromisoformat(args.end) if args.end else DEFAULT_WINDOW[1],
    )
    return RunConfig(
        regions=_resolve_regions(args.region),
        models=_resolve_models(args.model),
        data_path=args.data,
        patch_path=args.patches,
        window=window,
        horizon=args.horizon,
        output_dir=Path(args.out),
        format=args.format,
        seed=args.seed,
        multistarts=args.multistarts,
        per_series_sigma=args.per_series_sigma,
        bic_variance_parameter=args.bic_convention == "k+1",
    )


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = _config_from_args(args)
        command = {"fit": cmd_fit, "compare": cmd_compare, "forecast": cmd_forecast}[
            args.command
        ]
        return command(config)
    except (ValueError, OSError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
