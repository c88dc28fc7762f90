from __future__ import annotations

import pytest

from gridcarbon import GridMix, SourceRegistry


@pytest.fixture(scope="session")
def sources() -> SourceRegistry:
    return SourceRegistry.default()


@pytest.fixture()
def toy() -> GridMix:
    return GridMix(region="toy", generation={"wind": 500.0, "coal": 500.0})


@pytest.fixture()
def displaced_coal_mix() -> GridMix:
    # 20 MWh solar feeding a grid where coal scaled back to keep 1000 MWh.
    return GridMix(region="local", generation={"wind": 500.0, "solar": 20.0, "coal": 480.0})
