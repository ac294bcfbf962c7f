import math

import numpy as np
import pytest
from hypothesis import strategies as st

from rydchiral.dressed_states import DressingConfig

TWO_PI = 2 * math.pi

_ACCEPTANCE = []


def random_config(rng, hermitian=False):
    """Physically scaled random ladder parameters (rad/s)."""
    def logu(lo, hi):
        return TWO_PI * 10 ** rng.uniform(math.log10(lo), math.log10(hi))

    def signed(lo, hi):
        return rng.choice([-1.0, 1.0]) * logu(lo, hi)

    gammas = (0.0, 0.0, 0.0) if hermitian else (logu(0.1, 10), logu(1e5, 1e8), logu(1e3, 1e6))
    return DressingConfig(logu(1e6, 1e9), logu(1e6, 1e9), signed(1e6, 3e9), signed(1e6, 3e9), *gammas)


@st.composite
def dressing_configs(draw, hermitian=False):
    rate = st.floats(1e6, 1e10)
    det = st.floats(1e6, 2e10).flatmap(lambda x: st.sampled_from([x, -x]))
    g = st.just(0.0) if hermitian else st.floats(0.0, 1e9)
    return DressingConfig(draw(rate), draw(rate), draw(det), draw(det), draw(g), draw(g), draw(g))


@pytest.fixture
def rng():
    return np.random.default_rng(20201)


@pytest.fixture
def working_1khz():
    return DressingConfig.from_hz(0.5e9, 1e9, 1.5e9, 0.2e9)


@pytest.fixture
def acceptance():
    def record(label, ok, detail=""):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}" + (f" -- {detail}" if detail else "")
        _ACCEPTANCE.append(line)
        print(line)
        assert ok, line
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE:
            terminalreporter.write_line(line)
