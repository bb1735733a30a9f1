"""
Shared fixtures: algebras, coefficient rings and realizations are expensive
to build, so they live for the whole session.
"""
import random

import pytest

from src.algebra.bigcell import compute_realization, extract_PQ
from src.algebra.liealg import build_lie_algebra
from src.modules.coeffs import coeff_ring
from src.realization.wakimoto import build_realization
from src.utils.config import SUPPORTED_TYPES

_REALIZATIONS = {}


@pytest.fixture(scope="session")
def algebras():
    return {t: build_lie_algebra(t) for t in SUPPORTED_TYPES}


@pytest.fixture(scope="session")
def a1(algebras):
    return algebras["A1"]


@pytest.fixture(scope="session")
def a2(algebras):
    return algebras["A2"]


@pytest.fixture(scope="session")
def a1_ring(a1):
    return coeff_ring(a1)


@pytest.fixture(scope="session")
def a2_ring(a2):
    return coeff_ring(a2)


def realization(alg, ring, N):
    key = (alg.cartan_type, N, ring.level)
    if key not in _REALIZATIONS:
        cell = compute_realization(alg)
        _REALIZATIONS[key] = build_realization(alg, ring, extract_PQ(cell), cell.variables, N)
    return _REALIZATIONS[key]


@pytest.fixture(scope="session")
def a1_real(a1, a1_ring):
    return realization(a1, a1_ring, 1)


@pytest.fixture(scope="session")
def a1_real_n2(a1, a1_ring):
    return realization(a1, a1_ring, 2)


@pytest.fixture(scope="session")
def a2_real(a2, a2_ring):
    return realization(a2, a2_ring, 1)


@pytest.fixture
def rng():
    return random.Random(1234)
