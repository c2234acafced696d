import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from jrsp.bases import TargetParams
from jrsp.statevec import StateVector

finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def target_params(draw):
    """Normalized coefficients (zeros included) and arbitrary phases."""
    raw = draw(
        st.lists(
            st.one_of(st.just(0.0), st.floats(-1, 1, allow_nan=False)), min_size=4, max_size=4
        ).filter(lambda v: math.fsum(x * x for x in v) > 1e-6)
    )
    thetas = draw(st.lists(finite, min_size=3, max_size=3))
    return TargetParams.normalized(raw, thetas)


@st.composite
def states(draw, labels):
    n = len(labels)
    parts = draw(
        st.lists(
            st.floats(-1, 1, allow_nan=False), min_size=2 << n, max_size=2 << n
        ).filter(lambda v: math.fsum(x * x for x in v) > 1e-3)
    )
    v = np.array(parts[: 1 << n]) + 1j * np.array(parts[1 << n :])
    return StateVector(v / np.linalg.norm(v), tuple(labels))


def random_state(rng, labels):
    n = len(labels)
    v = rng.standard_normal(1 << n) + 1j * rng.standard_normal(1 << n)
    return StateVector(v / np.linalg.norm(v), tuple(labels))


def random_unitary(rng, dim):
    z = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def rng():
    return np.random.default_rng(20151127)


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
