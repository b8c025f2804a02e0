import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from coherence_forge.state import from_bloch

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

unit = st.floats(-1.0, 1.0, allow_nan=False)


@st.composite
def bloch_vectors(draw, pure=False):
    v = np.array([draw(unit), draw(unit), draw(unit)])
    n = np.linalg.norm(v)
    if n < 1e-6:
        v, n = np.array([0.0, 0.0, 1.0]), 1.0
    radius = 1.0 if pure else draw(st.floats(0.0, 1.0))
    return v / n * radius


@st.composite
def qubit_states(draw, pure=False):
    return from_bloch(draw(bloch_vectors(pure=pure)))


@st.composite
def alphas(draw):
    m = draw(st.floats(0.0, 1.0))
    ph = draw(st.floats(0.0, 2 * np.pi))
    return m * np.exp(1j * ph)


seeds = st.integers(0, 2**32 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def ground():
    return np.diag([1.0, 0.0]).astype(complex)


ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
