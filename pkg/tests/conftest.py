"""Shared fixtures: configurations and cached heavy solves."""

import math

import pytest

from quarterlattice import PhysicalConfig, TruncationSpec, direct_foldy_solve, solve

K2, K4, K8 = 2 * math.pi, 4 * math.pi, 8 * math.pi
THETA = -3 * math.pi / 4


@pytest.fixture(scope="session")
def cfg2():
    return PhysicalConfig(k=K2, s=0.1, a=0.001, theta_inc=THETA)


@pytest.fixture(scope="session")
def cfg4():
    return PhysicalConfig(k=K4, s=0.1, a=0.001, theta_inc=THETA)


@pytest.fixture(scope="session")
def cfg8():
    return PhysicalConfig(k=K8, s=0.1, a=0.001, theta_inc=THETA)


@pytest.fixture(scope="session")
def kc2(cfg2):
    return cfg2.kernel_constants()


@pytest.fixture(scope="session")
def direct2_cache(cfg2):
    """Direct solves at k = 2 pi, keyed by truncation."""
    cache = {}

    def get(n):
        if n not in cache:
            cache[n] = direct_foldy_solve(cfg2, n)
        return cache[n]

    return get


@pytest.fixture(scope="session")
def qlnn2_cache(cfg2):
    """QLNN solves at k = 2 pi with default truncation policy."""
    cache = {}

    def get(n, p=None):
        key = (n, p)
        if key not in cache:
            cache[key] = solve(cfg2, TruncationSpec(N=n, P=p))
        return cache[key]

    return get


@pytest.fixture(scope="session")
def qlnn2_n24(qlnn2_cache):
    return qlnn2_cache(24, 29)


@pytest.fixture(scope="session")
def direct2_n24(direct2_cache):
    return direct2_cache(24)
