import numpy as np
import pytest
from hypothesis import strategies as st

from recdef import CoefficientSequence, cheb_coeffs
from recdef._backend import available

# filled by the acceptance tests, printed after the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def cheb():
    return cheb_coeffs()


@pytest.fixture(params=sorted(available()))
def backend(request):
    return available()[request.param]


@st.composite
def tabulated_sequences(draw, max_head=6):
    n_a = draw(st.integers(0, max_head))
    n_b = draw(st.integers(0, max_head))
    a = draw(st.lists(st.floats(-1, 1), min_size=n_a, max_size=n_a))
    b = draw(st.lists(st.floats(0.2, 1.5), min_size=n_b, max_size=n_b))
    a_inf = draw(st.floats(-0.5, 0.5))
    b_inf = draw(st.floats(0.2, 1.0))
    return CoefficientSequence.tabulated(a, b, a_inf, b_inf)


def random_sequence(rng, head=6):
    return CoefficientSequence.tabulated(rng.uniform(-1, 1, head), rng.uniform(0.2, 1.5, head),
                                         rng.uniform(-0.5, 0.5), rng.uniform(0.2, 1.0))


upper_half_plane = st.builds(complex, st.floats(-3, 3), st.floats(0.01, 3))
