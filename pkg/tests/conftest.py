import math
import sys

import numpy as np
import pytest
from hypothesis import strategies as st

from eo_bridge.model import SystemParams

rates = st.floats(0.05, 5.0)
parasitic = st.one_of(st.just(0.0), st.floats(0.0, 3.0))
phases = st.floats(0.0, 2 * math.pi)


@st.composite
def system_params(draw, max_G0=25.0):
    ga, gb = draw(rates), draw(rates)
    gap, gbp = draw(parasitic), draw(parasitic)
    G0 = draw(st.floats(0.0, max_G0))
    magnitude = math.sqrt(G0 * (ga + gap) * (gb + gbp)) / 2
    theta = draw(phases)
    return SystemParams(ga, gap, gb, gbp, magnitude * complex(math.cos(theta), math.sin(theta)))


def below_threshold(max_G0=0.95):
    return system_params(max_G0=max_G0)


def random_params(rng, G0_range=(0.0, 4.0)):
    """Draw from a numpy Generator: decay rates in [0.2, 2], random pump phase."""
    ga, gap, gb, gbp = rng.uniform(0.2, 2.0, 4)
    gap *= rng.integers(0, 2)
    gbp *= rng.integers(0, 2)
    p = SystemParams(ga, gap, gb, gbp)
    G0 = rng.uniform(*G0_range)
    magnitude = math.sqrt(G0 * p.Gamma_a * p.Gamma_b) / 2
    return p.with_g_alpha(magnitude * np.exp(1j * rng.uniform(0, 2 * math.pi)))


@pytest.fixture
def rng():
    return np.random.default_rng(20100617)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for outcome in sorted(acceptance.RESULTS, key=lambda o: o.number):
        terminalreporter.write_line(outcome.line())
