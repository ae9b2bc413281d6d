"""Shared fixtures: ground-state solves are cached per session."""

import pytest

from gslab.core import Params, make_params
from gslab.shooting import find_ground_state


@pytest.fixture(scope="session")
def p313():
    # N=3, alpha=1, gamma=1, omega=1, p=3
    return make_params(dim=3, gamma=1.0, alpha=1.0, omega=1.0, p=3.0)


@pytest.fixture(scope="session")
def gs313(p313):
    return find_ground_state(p313)


@pytest.fixture(scope="session")
def p2w3():
    # N=2 workhorse; omega=3 sits well above omega0 = 1
    return make_params(dim=2, gamma=1.0, alpha=1.0, omega=3.0, p=3.0)


@pytest.fixture(scope="session")
def gs2w3(p2w3):
    return find_ground_state(p2w3)


@pytest.fixture(scope="session")
def pal15():
    # stronger singularity, subcritical p, N=3
    return make_params(dim=3, gamma=0.5, alpha=1.5, omega=2.0, p=2.0)


@pytest.fixture(scope="session")
def gsal15(pal15):
    return find_ground_state(pal15)


@pytest.fixture(scope="session")
def p1d_free():
    # gamma = 0 oracle path: direct construction bypasses validation
    return Params(dim=1, gamma=0.0, alpha=0.5, omega=1.0, p=3.0)


@pytest.fixture(scope="session")
def gs1d_free(p1d_free):
    return find_ground_state(p1d_free)
