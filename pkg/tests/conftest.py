import numpy as np
import pytest

from wlp.cli import Instance, analyze
from wlp.graded import random_instance

# The two golden instances: generic maps with twists (7,2,2,2)->(1,0) and
# (8,2,2,2,2)->(1,0,0).  Seeds are arbitrary; any generic draw works.
K1_SOURCE, K1_TARGET, K1_SEED = (7, 2, 2, 2), (1, 0), 42
K0_SOURCE, K0_TARGET, K0_SEED = (8, 2, 2, 2, 2), (1, 0, 0), 7


@pytest.fixture(scope="session")
def k1_map():
    return random_instance(K1_SOURCE, K1_TARGET, np.random.default_rng(K1_SEED))


@pytest.fixture(scope="session")
def k0_map():
    return random_instance(K0_SOURCE, K0_TARGET, np.random.default_rng(K0_SEED))


@pytest.fixture(scope="session")
def k1_report():
    return analyze(Instance(source=K1_SOURCE, target=K1_TARGET, seed=K1_SEED))


@pytest.fixture(scope="session")
def k0_report():
    return analyze(Instance(source=K0_SOURCE, target=K0_TARGET, seed=K0_SEED))
