"""Shared fixtures: small grids reused across the suite."""

import numpy as np
import pytest

from czlab import GridFunction, GridSpec


@pytest.fixture
def spec2() -> GridSpec:
    return GridSpec(d=2, N=32, S=1.0)


@pytest.fixture
def spec3() -> GridSpec:
    return GridSpec(d=3, N=16, S=1.0)


@pytest.fixture
def rand2(spec2) -> GridFunction:
    rng = np.random.default_rng(7)
    return GridFunction(spec2, rng.normal(size=spec2.shape))
