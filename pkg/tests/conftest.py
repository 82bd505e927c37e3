"""Shared fixtures: HR(4) front data and the standard 2D corrugated run."""

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from pushfront.harness import ExperimentConfig, standard_2d_run
from pushfront.profile import exact_hadeler_rothe, find_min_speed, solve_profile
from pushfront.reaction_terms import make_hadeler_rothe, make_kpp

settings.register_profile("pushfront", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("pushfront")

# closed form for nu = 4: b = sqrt(2), c* = b + 1/b
HR4_CSTAR = 3.0 / np.sqrt(2.0)


@pytest.fixture(scope="session")
def hr4():
    return make_hadeler_rothe(4.0)


@pytest.fixture(scope="session")
def kpp():
    return make_kpp()


@pytest.fixture(scope="session")
def hr4_cstar(hr4):
    return find_min_speed(hr4)


@pytest.fixture(scope="session")
def hr4_profile(hr4, hr4_cstar):
    return solve_profile(hr4, hr4_cstar)


@pytest.fixture(scope="session")
def hr4_exact():
    return exact_hadeler_rothe(4.0)


@pytest.fixture(scope="session")
def kpp_profile_25(kpp):
    return solve_profile(kpp, 2.5)


@pytest.fixture(scope="session")
def standard_2d():
    """``(c, profile, Run2D)`` for the corrugated HR(4) run (shared with E6/E7)."""
    return standard_2d_run(ExperimentConfig.default("E6").params)
