import numpy as np
import pytest

from mmwsec import ArrayConfig, vehicular_scenario


@pytest.fixture
def cfg32():
    """Fig-7/8 array: 32 antennas, 10 RF chains, 6-bit shifters, groups of 8."""
    return ArrayConfig(n_antennas=32, n_rf=10, phase_bits=6, group_size=8)


@pytest.fixture
def scenario():
    """60 GHz vehicular defaults: 37 dBm, 50 m receiver, 10 m eavesdropper."""
    return vehicular_scenario()


@pytest.fixture
def rng():
    return np.random.default_rng(202401)
