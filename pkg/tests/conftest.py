import json
from pathlib import Path

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from numrad.interchange import matrix_from_json

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

DATA = Path(__file__).parent / "data"

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def complex_matrices(draw, min_dim=1, max_dim=5, dim=None):
    n = dim if dim is not None else draw(st.integers(min_dim, max_dim))
    seed = draw(st.integers(0, 2**32 - 1))
    scale = draw(st.sampled_from([1e-3, 0.5, 1.0, 4.0, 100.0]))
    rng = np.random.default_rng(seed)
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


@st.composite
def seeds(draw):
    return draw(st.integers(0, 2**32 - 1))


@pytest.fixture(scope="session")
def radius_oracles():
    data = json.loads((DATA / "radius_oracles.json").read_text())
    return {name: (matrix_from_json(case["matrix"]), case) for name, case in data["cases"].items()}


def rng_for(seed):
    return np.random.default_rng(seed)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
