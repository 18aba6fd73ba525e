"""Shared fixtures and helpers for the hydrolimit test suite."""

import numpy as np
import pytest

from hydrolimit.grid import GridSpec
from hydrolimit.spectral import RealField, SpectralField, forward_transform


@pytest.fixture
def grid8():
    return GridSpec(8, 8, 8, 1.0, 1.0)


@pytest.fixture
def grid8_2pi():
    return GridSpec(8, 8, 8, 2.0 * np.pi, 2.0 * np.pi)


def random_real_field(grid: GridSpec, seed: int) -> RealField:
    rng = np.random.default_rng(seed)
    return RealField(grid, rng.standard_normal(grid.shape))


def random_spectral_field(grid: GridSpec, seed: int) -> SpectralField:
    return forward_transform(random_real_field(grid, seed))


def field_from_lattice(grid: GridSpec, func) -> SpectralField:
    """Spectral field from a callable on the (x, y, z) lattice."""
    x, y, z = np.meshgrid(grid.x, grid.y, grid.z, indexing="ij")
    return forward_transform(RealField(grid, func(x, y, z)))
