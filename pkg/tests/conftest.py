import warnings

import pytest


@pytest.fixture(autouse=True, scope="session")
def _quiet_numba_threading():
    # the sandbox TBB is too old for numba's TBB layer; the fallback layer
    # is fine and the warning is noise
    warnings.filterwarnings("ignore", message=".*TBB.*", module="numba.*")
    yield
