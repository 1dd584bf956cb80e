import warnings

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_spd(rng, n, lo=0.3, hi=3.0):
    Q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return Q @ np.diag(rng.uniform(lo, hi, n)) @ Q.T


@pytest.fixture(scope="session")
def tube_banks():
    """Ellipsoidal tubes for both vessel types and all four buckets (N = M = 1500, seed 0)."""
    from pacstl.maritime import build_bank_tubes

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return {v: build_bank_tubes(v, "ellipsoid", N=1500, M=1500, seed=0) for v in ("S", "L")}


@pytest.fixture(scope="session")
def small_tube():
    """Cheap L-vessel tube for bucket 2 used by unit tests."""
    from pacstl.maritime import build_bucket_tube

    return build_bucket_tube("L", 2, "ellipsoid", N=300, M=300, seed=3)


def pytest_terminal_summary(terminalreporter):
    from tests._criteria import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for n in sorted(LINES):
            terminalreporter.write_line(LINES[n])
