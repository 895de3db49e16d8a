import numpy as np
import pytest
from datetime import date, timedelta

from epigrowth.data_ingest import RegionSeries, daily_swabs, load_region

REGIONS = ["veneto", "lombardia", "piemonte", "toscana", "emilia-romagna"]


@pytest.fixture(scope="session")
def region_series():
    """Loader over the bundled snapshot, cached per region."""
    cache = {}

    def get(region):
        if region not in cache:
            cache[region] = load_region(region)
        return cache[region]

    return get


def synthetic_series(cumulative, swabs=None, infected=None, recovered=None,
                     deaths=None, start=date(2020, 2, 21)):
    """RegionSeries around a given cumulative-case curve.

    Unless given, the observed compartments split the cumulative count
    60/30/10 and the swab schedule ramps linearly; enough structure for
    any model to be fit against the result.
    """
    cum = np.asarray(cumulative, dtype=float)
    n = cum.size
    if swabs is None:
        swabs = np.cumsum(np.linspace(300.0, 4000.0, n))
    return RegionSeries(
        region="synthetic",
        dates=tuple(start + timedelta(days=i) for i in range(n)),
        cumulative_cases=cum,
        infected=cum * 0.6 if infected is None else np.asarray(infected, float),
        recovered=cum * 0.3 if recovered is None else np.asarray(recovered, float),
        deaths=cum * 0.1 if deaths is None else np.asarray(deaths, float),
        cumulative_swabs=np.asarray(swabs, dtype=float),
        daily_swabs=daily_swabs(swabs),
    )
