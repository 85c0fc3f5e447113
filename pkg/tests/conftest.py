import sys

import numpy as np
import pytest

from hyppp import _backend
from hyppp.hdpp import ProcessSpec
from hyppp.kernel import gen_system


def random_complex(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def unitary_columns(rng, n, ell):
    """N x L factor with orthonormal rows or columns, from a seeded Haar draw."""
    size = max(n, ell)
    z = random_complex(rng, size, size)
    q, r = np.linalg.qr(z)
    q = q * (np.diagonal(r) / np.abs(np.diagonal(r)))
    return q[:n, :ell]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(params=_backend.available_backends())
def impl(request):
    return _backend.get_impl(request.param)


@pytest.fixture
def spec_m2():
    return ProcessSpec(gen_system(2, (3, 3), 2, "haar", 42), {1})


@pytest.fixture
def spec_m1():
    return ProcessSpec(gen_system(1, (4,), 3, "haar", 7), {1})


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "RESULT_LINES", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
