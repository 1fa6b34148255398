import numpy as np
import pytest

from mottfefet.ferroelectric import PreisachParams
from mottfefet.network import ImtParams


@pytest.fixture
def fe_params():
    return PreisachParams()


@pytest.fixture
def imt_params():
    return ImtParams()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
