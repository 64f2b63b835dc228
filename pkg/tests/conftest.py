"""Shared fixtures; the expensive enumerations are session-scoped."""

import math

import pytest

from gapkit import affine, lattice, surface
from gapkit.core import Mat2, Vec2


@pytest.fixture(scope="session")
def golden_surface():
    return surface.golden_l()


@pytest.fixture(scope="session")
def generic_lshape():
    return surface.l_shape(1.7, 1.9)


@pytest.fixture(scope="session")
def seeded_lattices():
    return [lattice.seeded_lattice(seed) for seed in range(10)]


@pytest.fixture(scope="session")
def generic_affine():
    shift = Vec2(math.sqrt(2.0) - 1.0, math.sqrt(3.0) - 1.0)
    return affine.AffineLattice(Mat2(1.0, 0.0, 0.0, 1.0), shift)


@pytest.fixture(scope="session")
def sqrt_gaps_million():
    return affine.sqrt_mod1_gaps(10 ** 6).floats()
