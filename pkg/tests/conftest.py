import numpy as np
import pytest

from curlkit.data_managers.catalog import instantiate
from curlkit.utilities.configuration import Configuration
from curlkit.utilities.performance_handling import Performance


@pytest.fixture
def rng():
    return np.random.default_rng(7)


@pytest.fixture
def config():
    return Configuration(seed=7, samples=5)


@pytest.fixture(autouse=True)
def quiet_performance():
    # every test starts from a fresh, silent timing table
    Performance.set_up_performance_with_path(None, write_console=False)
    yield
    Performance().close()


@pytest.fixture
def flat():
    return instantiate("darboux-flat")


@pytest.fixture
def round_sphere():
    return instantiate("s3-round")


@pytest.fixture
def tabachnikov():
    return instantiate("s3-tabachnikov")


@pytest.fixture
def ellipsoid():
    return instantiate("ellipsoid-3d")
