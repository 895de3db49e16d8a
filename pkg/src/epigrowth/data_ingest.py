"""Ingestion of the national civil-protection regional CSV feed.

Loads the bundled (or an external) snapshot, selects a region and date
window, applies documented patch values for days the feed does not
cover, repairs non-monotone cumulative series, and derives daily swab
counts. The loaded series is immutable and safe to share.
"""

from __future__ import annotations

import csv
import importlib.resources
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np

__all__ = [
    "RegionSeries",
    "PatchRow",
    "REGIONS",
    "REGION_ALIASES",
    "DEFAULT_WINDOW",
    "parse_regional_csv",
    "select_window",
    "load_patches",
    "apply_patches",
    "enforce_monotone",
    "daily_swabs",
    "load_region",
    "write_clean_csv",
    "read_clean_csv",
    "read_table",
    "bundled_snapshot_path",
    "bundled_patches_path",
]

_REQUIRED_COLUMNS = (
    "data",
    "denominazione_regione",
    "totale_positivi",
    "dimessi_guariti",
    "deceduti",
    "totale_casi",
    "tamponi",
)

_NUMERIC_FIELDS = {
    "cumulative_cases": "totale_casi",
    "infected": "totale_positivi",
    "recovered": "dimessi_guariti",
    "deaths": "deceduti",
    "cumulative_swabs": "tamponi",
}

_CUMULATIVE_FIELDS = ("cumulative_cases", "recovered", "deaths", "cumulative_swabs")

REGIONS = ("Veneto", "Lombardia", "Piemonte", "Toscana", "Emilia-Romagna")

REGION_ALIASES = {
    "veneto": "Veneto",
    "lombardia": "Lombardia",
    "lombardy": "Lombardia",
    "piemonte": "Piemonte",
    "piedmont": "Piemonte",
    "toscana": "Toscana",
    "tuscany": "Toscana",
    "emilia-romagna": "Emilia-Romagna",
    "emilia romagna": "Emilia-Romagna",
}

DEFAULT_WINDOW = (date(2020, 2, 24), date(2020, 5, 3))


def bundled_snapshot_path() -> Path:
    return Path(
        importlib.resources.files("epigrowth.data") / "dpc_regioni_20200224_20200503.csv"
    )


def bundled_patches_path() -> Path:
    return Path(importlib.resources.files("epigrowth.data") / "patches.csv")


@dataclass(frozen=True, eq=False)
class RegionSeries:
    """Day-indexed observed series for one region.

    cumulative_cases, recovered, deaths, cumulative_swabs are cumulative
    counts (nondecreasing after cleaning); infected is the currently
    positive count and may fluctuate. daily_swabs holds the first
    differences of cumulative_swabs with element 0 equal to the first
    cumulative value.
    """

    region: str
    dates: tuple
    cumulative_cases: np.ndarray
    infected: np.ndarray
    recovered: np.ndarray
    deaths: np.ndarray
    cumulative_swabs: np.ndarray
    daily_swabs: np.ndarray = field(default=None)
    patched_dates: tuple = ()
    repaired: tuple = ()

    def __post_init__(self):
        for name in (
            "cumulative_cases",
            "infected",
            "recovered",
            "deaths",
            "cumulative_swabs",
            "daily_swabs",
        ):
            arr = getattr(self, name)
            if arr is None:
                continue
            arr = np.asarray(arr, dtype=float)
            arr.flags.writeable = False
            object.__setattr__(self, name, arr)

    @property
    def n(self) -> int:
        return len(self.dates)

    def replace(self, **changes) -> "RegionSeries":
        data = {
            "region": self.region,
            "dates": self.dates,
            "cumulative_cases": self.cumulative_cases,
            "infected": self.infected,
            "recovered": self.recovered,
            "deaths": self.deaths,
            "cumulative_swabs": self.cumulative_swabs,
            "daily_swabs": self.daily_swabs,
            "patched_dates": self.patched_dates,
            "repaired": self.repaired,
        }
        data.update(changes)
        return RegionSeries(**data)


@dataclass(frozen=True)
class PatchRow:
    region: str
    date: date
    field: str
    value: float
    note: str = ""


def _parse_date(text, where):
    try:
        return date.fromisoformat(text[:10])
    except ValueError as exc:
        raise ValueError(f"malformed date {text!r} at {where}") from exc


def parse_regional_csv(path):
    """Read the feed CSV into typed records, validating columns and values."""
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in _REQUIRED_COLUMNS if c not in header]
        if missing:
            raise ValueError(f"{path}: missing required columns {missing}")
        records = []
        for lineno, row in enumerate(reader, start=2):
            rec = {
                "date": _parse_date(row["data"], f"{path}:{lineno}"),
                "region": row["denominazione_regione"],
            }
            for out_name, col in _NUMERIC_FIELDS.items():
                raw = row[col]
                if raw is None or raw.strip() == "":
                    raise ValueError(f"{path}:{lineno}: empty value in column {col}")
                try:
                    rec[out_name] = float(raw)
                except ValueError as exc:
                    raise ValueError(
                        f"{path}:{lineno}: non-numeric value {raw!r} in column {col}"
                    ) from exc
            records.append(rec)
    return records


def select_window(records, region, start=None, end=None) -> RegionSeries:
    """Extract one region's rows in [start, end] as a contiguous daily series.

    Also checks the feed identity cumulative_cases = infected + recovered
    + deaths on every row.
    """
    start = start or DEFAULT_WINDOW[0]
    end = end or DEFAULT_WINDOW[1]
    rows = sorted(
        (r for r in records if r["region"] == region and start <= r["date"] <= end),
        key=lambda r: r["date"],
    )
    if not rows:
        raise ValueError(f"no rows for region {region!r} between {start} and {end}")
    for prev, cur in zip(rows, rows[1:]):
        gap = (cur["date"] - prev["date"]).days
        if gap == 0:
            raise ValueError(f"{region}: duplicate rows for {cur['date']}")
        if gap > 1:
            raise ValueError(
                f"{region}: missing day(s) between {prev['date']} and {cur['date']}"
            )
    for r in rows:
        total = r["infected"] + r["recovered"] + r["deaths"]
        if total != r["cumulative_cases"]:
            raise ValueError(
                f"{region} {r['date']}: cumulative_cases={r['cumulative_cases']:.0f} "
                f"but infected+recovered+deaths={total:.0f}"
            )
    return RegionSeries(
        region=region,
        dates=tuple(r["date"] for r in rows),
        cumulative_cases=np.array([r["cumulative_cases"] for r in rows]),
        infected=np.array([r["infected"] for r in rows]),
        recovered=np.array([r["recovered"] for r in rows]),
        deaths=np.array([r["deaths"] for r in rows]),
        cumulative_swabs=np.array([r["cumulative_swabs"] for r in rows]),
    )


def load_patches(path):
    """Read the sidecar patch CSV (region, date, field, value, note)."""
    path = Path(path)
    patches = []
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            fieldname = row["field"]
            if fieldname not in ("infected", *_CUMULATIVE_FIELDS):
                raise ValueError(f"{path}:{lineno}: unknown field {fieldname!r}")
            patches.append(
                PatchRow(
                    region=row["region"],
                    date=_parse_date(row["date"], f"{path}:{lineno}"),
                    field=fieldname,
                    value=float(row["value"]),
                    note=row.get("note", ""),
                )
            )
    return patches


def apply_patches(series: RegionSeries, patches) -> RegionSeries:
    """Overwrite patched cells and prepend rows for days before the window.

    Prepended days must be contiguous with the series start and carry all
    five observed fields. Two patches addressing the same cell conflict.
    """
    mine = [p for p in patches if p.region == series.region]
    if not mine:
        return series
    seen = set()
    for p in mine:
        key = (p.date, p.field)
        if key in seen:
            raise ValueError(f"conflicting patches for {series.region} {p.date} {p.field}")
        seen.add(key)

    first = series.dates[0]
    inside = [p for p in mine if p.date >= first]
    before = [p for p in mine if p.date < first]
    for p in inside:
        if p.date > series.dates[-1]:
            raise ValueError(f"patch date {p.date} is after the series end")

    arrays = {
        name: np.array(getattr(series, name))
        for name in ("cumulative_cases", "infected", "recovered", "deaths", "cumulative_swabs")
    }
    index = {d: i for i, d in enumerate(series.dates)}
    for p in inside:
        arrays[p.field][index[p.date]] = p.value

    new_dates = list(series.dates)
    patched = {p.date for p in mine}
    if before:
        days = sorted({p.date for p in before})
        if days[-1] != first - timedelta(days=1) or any(
            (b - a).days != 1 for a, b in zip(days, days[1:])
        ):
            raise ValueError(
                f"prepended patch days {days} are not contiguous with {first}"
            )
        by_day = {d: {} for d in days}
        for p in before:
            by_day[p.date][p.field] = p.value
        for d in days:
            missing = [f for f in arrays if f not in by_day[d]]
            if missing:
                raise ValueError(f"prepended day {d} is missing fields {missing}")
        for name in arrays:
            arrays[name] = np.concatenate(
                [[by_day[d][name] for d in days], arrays[name]]
            )
        new_dates = days + new_dates

    return RegionSeries(
        region=series.region,
        dates=tuple(new_dates),
        patched_dates=tuple(sorted(patched)),
        repaired=series.repaired,
        **arrays,
    )


def enforce_monotone(series: RegionSeries, fieldname: str):
    """Repair isolated non-monotone values in a cumulative field.

    An interior value inconsistent with its neighbors (below the former,
    or above the latter, while former <= latter) is replaced by the mean
    of the two neighbors. Returns (repaired series, tuple of repaired
    dates). Raises if a violation sits at the boundary or survives the
    pass.
    """
    if fieldname not in _CUMULATIVE_FIELDS:
        raise ValueError(f"{fieldname!r} is not a cumulative field")
    x = np.array(getattr(series, fieldname))
    repaired = []
    for i in range(1, len(x) - 1):
        if (x[i] < x[i - 1] or x[i] > x[i + 1]) and x[i - 1] <= x[i + 1]:
            x[i] = (x[i - 1] + x[i + 1]) / 2.0
            repaired.append(series.dates[i])
    diffs = np.diff(x)
    if np.any(diffs < 0):
        bad = int(np.argmax(diffs < 0))
        where = "boundary" if bad in (0, len(x) - 2) else "interior"
        raise ValueError(
            f"{series.region} {fieldname}: unresolved {where} violation at "
            f"{series.dates[bad + 1]}"
        )
    out = series.replace(
        **{fieldname: x},
        repaired=series.repaired + tuple((fieldname, d) for d in repaired),
    )
    return out, tuple(repaired)


def daily_swabs(cumulative_swabs):
    """First differences; element 0 equals the first cumulative value."""
    cs = np.asarray(cumulative_swabs, dtype=float)
    d = np.diff(cs, prepend=0.0)
    if np.any(d[1:] < 0):
        raise ValueError("cumulative swab series decreases; clean it first")
    return d


def load_region(
    region,
    data_path=None,
    patch_path=None,
    start=None,
    end=None,
    drop_leading_zero_cases=True,
) -> RegionSeries:
    """Full ingestion pipeline for one region.

    Parse, window, patch, repair every cumulative field, derive daily
    swabs. Leading rows with zero cumulative cases are dropped by
    default so each series starts on its first reporting day.
    """
    region = REGION_ALIASES.get(region.lower(), region)
    records = parse_regional_csv(data_path or bundled_snapshot_path())
    series = select_window(records, region, start=start, end=end)
    patches = load_patches(patch_path or bundled_patches_path())
    series = apply_patches(series, patches)
    if drop_leading_zero_cases:
        keep = int(np.argmax(series.cumulative_cases > 0))
        if series.cumulative_cases[keep] == 0:
            raise ValueError(f"{region}: series is all zeros")
        if keep:
            series = RegionSeries(
                region=series.region,
                dates=series.dates[keep:],
                cumulative_cases=series.cumulative_cases[keep:],
                infected=series.infected[keep:],
                recovered=series.recovered[keep:],
                deaths=series.deaths[keep:],
                cumulative_swabs=series.cumulative_swabs[keep:],
                patched_dates=series.patched_dates,
                repaired=series.repaired,
            )
    for fieldname in _CUMULATIVE_FIELDS:
        series, _ = enforce_monotone(series, fieldname)
    return series.replace(daily_swabs=daily_swabs(series.cumulative_swabs))


def write_clean_csv(series: RegionSeries, path):
    """Emit the cleaned per-region series in a stable, re-parseable format."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            [
                "date",
                "cumulative_cases",
                "infected",
                "recovered",
                "deaths",
                "cumulative_swabs",
                "daily_swabs",
            ]
        )
        for i, d in enumerate(series.dates):
            writer.writerow(
                [
                    d.isoformat(),
                    repr(float(series.cumulative_cases[i])),
                    repr(float(series.infected[i])),
                    repr(float(series.recovered[i])),
                    repr(float(series.deaths[i])),
                    repr(float(series.cumulative_swabs[i])),
                    repr(float(series.daily_swabs[i])),
                ]
            )


def read_table(path):
    """Generic CSV reader: header plus uniform rows, all values as strings.

    Returns (fieldnames, list of row dicts). Every CSV this package
    emits parses through here.
    """
    path = Path(path)
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames:
            raise ValueError(f"{path}: no header row")
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if None in row or any(v is None for v in row.values()):
                raise ValueError(f"{path}:{lineno}: ragged row")
            rows.append(dict(row))
    return list(reader.fieldnames), rows


def read_clean_csv(path, region="") -> RegionSeries:
    """Parse a file produced by write_clean_csv back into a RegionSeries."""
    path = Path(path)
    cols = {k: [] for k in (
        "date",
        "cumulative_cases",
        "infected",
        "recovered",
        "deaths",
        "cumulative_swabs",
        "daily_swabs",
    )}
    with path.open(newline="", encoding="utf-8") as fh:
        for lineno, row in enumerate(csv.DictReader(fh), start=2):
            for k in cols:
                if row.get(k) is None:
                    raise ValueError(f"{path}:{lineno}: missing column {k}")
            cols["date"].append(_parse_date(row["date"], f"{path}:{lineno}"))
            for k in cols:
                if k != "date":
                    cols[k].append(float(row[k]))
    return RegionSeries(
        region=region,
        dates=tuple(cols["date"]),
        cumulative_cases=np.array(cols["cumulative_cases"]),
        infected=np.array(cols["infected"]),
        recovered=np.array(cols["recovered"]),
        deaths=np.array(cols["deaths"]),
        cumulative_swabs=np.array(cols["cumulative_swabs"]),
        daily_swabs=np.array(cols["daily_swabs"]),
    )
