import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from bsdlab.domain import make_domain

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DOMAINS = [(1, 0), (1, 2), (2, 0), (2, 1), (3, 0)]


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


@st.composite
def points(draw, domain, radius=0.9):
    """Interior points with spectral norm <= radius."""
    r, m = domain.shape
    vals = draw(st.lists(st.floats(-1, 1, allow_nan=False), min_size=2 * r * m, max_size=2 * r * m))
    z = np.array(vals[: r * m]).reshape(r, m) + 1j * np.array(vals[r * m:]).reshape(r, m)
    s = np.linalg.norm(z, 2)
    scale = draw(st.floats(0.05, radius))
    return z if s == 0 else z * (scale / s)


@st.composite
def domains(draw):
    r, b = draw(st.sampled_from(DOMAINS))
    return make_domain(r, b)


def rand_matrix(rng, shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
