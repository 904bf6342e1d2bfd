import os
from pathlib import Path

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=25, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SCENARIOS = Path(__file__).resolve().parents[1] / "src" / "hexfinsler" / "scenarios"


@pytest.fixture
def scenario_dir():
    return SCENARIOS


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)

