from datetime import date

import numpy as np
import pytest

from epigrowth.data_ingest import (
    RegionSeries,
    apply_patches,
    bundled_patches_path,
    bundled_snapshot_path,
    daily_swabs,
    enforce_monotone,
    load_patches,
    load_region,
    parse_regional_csv,
    read_clean_csv,
    read_table,
    select_window,
    write_clean_csv,
)

# Daily-swab moments of the cleaned series (mean, sample SD of the first
# differences). These pin down the whole cleaning pipeline: the three
# prepended days for Veneto and Lombardy, the mean repair of dipping
# cumulative values, and the press-based swab patches.
SWAB_MOMENTS = {
    "veneto": (5250.03, 3517.83),
    "lombardia": (5704.68, 3948.13),
    "piemonte": (2493.72, 2169.88),
    "toscana": (2214.97, 1687.47),
    "emilia-romagna": (2854.01, 1975.41),
}

EXPECTED_SHAPE = {
    # region: (n, first date, last cumulative cases)
    "veneto": (73, date(2020, 2, 21), 18318.0),
    "lombardia": (73, date(2020, 2, 21), 77528.0),
    "piemonte": (70, date(2020, 2, 24), 27430.0),
    "toscana": (69, date(2020, 2, 25), 9563.0),
    "emilia-romagna": (70, date(2020, 2, 24), 26016.0),
}


@pytest.mark.parametrize("region", sorted(EXPECTED_SHAPE))
def test_window_patching_and_shape(region_series, region):
    s = region_series(region)
    n, first, last_cases = EXPECTED_SHAPE[region]
    assert s.n == n
    assert s.dates[0] == first
    assert s.dates[-1] == date(2020, 5, 3)
    assert s.cumulative_cases[-1] == last_cases
    assert s.cumulative_cases[0] > 0  # leading zero-case rows dropped


@pytest.mark.parametrize("region", sorted(SWAB_MOMENTS))
def test_daily_swab_moments(region_series, region):
    s = region_series(region)
    diffs = np.diff(s.cumulative_swabs)
    mu, sigma = SWAB_MOMENTS[region]
    assert diffs.mean() == pytest.approx(mu, abs=5e-3)
    assert diffs.std(ddof=1) == pytest.approx(sigma, abs=5e-3)


def test_cleaned_series_are_monotone(region_series):
    for region in EXPECTED_SHAPE:
        s = region_series(region)
        for field in ("cumulative_cases", "recovered", "deaths", "cumulative_swabs"):
            assert np.all(np.diff(getattr(s, field)) >= 0), (region, field)


def test_piemonte_case_dips_get_repaired(region_series):
    # raw feed has two days where cumulative cases decrease
    records = parse_regional_csv(bundled_snapshot_path())
    raw = select_window(records, "Piemonte")
    assert np.any(np.diff(raw.cumulative_cases) < 0)
    s = region_series("piemonte")
    assert np.all(np.diff(s.cumulative_cases) >= 0)
    assert any(f == "cumulative_cases" for f, _ in s.repaired)


def test_enforce_monotone_uses_neighbour_mean():
    base = RegionSeries(
        region="x",
        dates=tuple(date(2020, 3, d) for d in range(1, 6)),
        cumulative_cases=np.array([10.0, 20.0, 16.0, 30.0, 40.0]),
        infected=np.zeros(5),
        recovered=np.zeros(5),
        deaths=np.zeros(5),
        cumulative_swabs=np.arange(5.0),
    )
    fixed, touched = enforce_monotone(base, "cumulative_cases")
    # the day sticking out above its successor is the one replaced
    assert touched == (date(2020, 3, 2),)
    assert fixed.cumulative_cases[1] == pytest.approx((10.0 + 16.0) / 2.0)
    assert np.all(np.diff(fixed.cumulative_cases) >= 0)
    again, touched2 = enforce_monotone(fixed, "cumulative_cases")
    assert touched2 == ()


def test_patches_prepend_rows():
    records = parse_regional_csv(bundled_snapshot_path())
    windowed = select_window(records, "Veneto")
    assert windowed.dates[0] == date(2020, 2, 24)
    patched = apply_patches(windowed, load_patches(bundled_patches_path()))
    assert patched.dates[0] == date(2020, 2, 21)
    assert patched.n == windowed.n + 3
    assert len(patched.patched_dates) == 3
    # patch rows must splice seamlessly into the official series
    np.testing.assert_allclose(patched.cumulative_cases[3:], windowed.cumulative_cases)


def test_select_window_subrange():
    records = parse_regional_csv(bundled_snapshot_path())
    s = select_window(records, "Toscana", start=date(2020, 3, 1), end=date(2020, 3, 31))
    assert s.dates[0] == date(2020, 3, 1)
    assert s.dates[-1] == date(2020, 3, 31)
    assert s.n == 31
    with pytest.raises(ValueError):
        select_window(records, "Atlantide")


def test_region_aliases():
    assert load_region("Piedmont").region == "Piemonte"
    assert load_region("LOMBARDY").region == "Lombardia"


def test_daily_swabs_semantics():
    d = daily_swabs([100.0, 250.0, 250.0, 400.0])
    np.testing.assert_allclose(d, [100.0, 150.0, 0.0, 150.0])
    with pytest.raises(ValueError):
        daily_swabs([100.0, 90.0, 120.0])


def test_clean_csv_round_trip(tmp_path, region_series):
    s = region_series("veneto")
    path = tmp_path / "veneto.csv"
    write_clean_csv(s, path)
    back = read_clean_csv(path, region="Veneto")
    assert back.dates == s.dates
    for field in ("cumulative_cases", "infected", "recovered", "deaths",
                  "cumulative_swabs", "daily_swabs"):
        np.testing.assert_allclose(getattr(back, field), getattr(s, field))


def test_read_table_generic(tmp_path):
    p = tmp_path / "t.csv"
    p.write_text("a,b\n1,x\n2.5,y\n")
    fields, rows = read_table(p)
    assert fields == ["a", "b"]
    assert rows == [{"a": "1", "b": "x"}, {"a": "2.5", "b": "y"}]
    ragged = tmp_path / "r.csv"
    ragged.write_text("a,b\n1\n")
    with pytest.raises(ValueError):
        read_table(ragged)


def test_series_arrays_are_read_only(region_series):
    s = region_series("veneto")
    with pytest.raises(ValueError):
        s.cumulative_cases[0] = -1.0
