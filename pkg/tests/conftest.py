"""Pytest configuration and fixtures."""

import numpy as np
import pytest
from spacelike_dirac import Grid1D
from spacelike_dirac.core import Species
from spacelike_dirac.planewave import bispinor_basis


@pytest.fixture
def rng():
    """Fixture providing a seeded random generator."""
    return np.random.default_rng(20240611)


@pytest.fixture
def plane_grid():
    """256 sites with dz = 0.025: mode 2 has k ~ 1.9635 > m_s = 1."""
    return Grid1D(n_points=256, dz=0.025)


@pytest.fixture
def small_grid():
    """64 sites with dz = 0.2 (box length 12.8)."""
    return Grid1D(n_points=64, dz=0.2)


@pytest.fixture
def basis_p10():
    """Antineutrino basis at p = 10 m_s with m_s = 1."""
    return bispinor_basis(10.0, 1.0, Species.ANTINEUTRINO.momentum_sign)


@pytest.fixture
def random_momenta(rng):
    """1000 (p, m_s) draws with p/m_s log-uniform in (1.01, 1000)."""
    m_s = rng.uniform(0.1, 10.0, size=1000)
    ratio = np.exp(rng.uniform(np.log(1.01), np.log(1000.0), size=1000))
    return list(zip(ratio * m_s, m_s))
