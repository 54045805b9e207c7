import numpy as np
import pytest

from vmsplit.grid import PhaseSpaceGrid


@pytest.fixture
def landau_grid():
    """Coarse strong-Landau geometry used across flow tests."""
    return PhaseSpaceGrid(nx=32, lx=2 * np.pi / 0.4, nv1=64, nv2=64, v1max=8.0, v2max=8.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
