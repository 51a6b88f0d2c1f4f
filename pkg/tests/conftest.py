import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from ampsense import gaussian as gs

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one acceptance line: printed in the terminal summary."""

    def _report(number, name, value, ok):
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {name}: {value}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


angles = st.floats(-np.pi, np.pi)
small_gain = st.floats(-1.5, 1.5)
amplitudes = st.floats(-3.0, 3.0)
efficiencies = st.floats(0.0, 1.0)


@st.composite
def gaussian_states(draw, n_modes=None, pure=False):
    """Physical Gaussian states built from vacuum by random operations."""
    n = draw(st.integers(1, 3)) if n_modes is None else n_modes
    if pure:
        state = gs.vacuum(n)
    else:
        state = gs.tensor(*[gs.thermal(draw(st.floats(0.0, 2.0))) for _ in range(n)])
    for _ in range(draw(st.integers(1, 6))):
        kind = draw(st.sampled_from(["squeeze", "phase", "bs", "displace", "loss"]))
        m = draw(st.integers(0, n - 1))
        if kind == "squeeze":
            state = gs.squeeze(state, m, draw(small_gain), draw(angles))
        elif kind == "phase":
            state = gs.phase_shift(state, m, draw(angles))
        elif kind == "bs" and n > 1:
            k = draw(st.integers(0, n - 1).filter(lambda k: k != m))
            state = gs.beamsplitter(state, m, k, draw(angles))
        elif kind == "displace":
            state = gs.displace(state, m, draw(amplitudes), draw(amplitudes))
        elif kind == "loss" and not pure:
            state = gs.loss(state, m, draw(efficiencies))
    return state
