import math

import numpy as np
import pytest

from optbloch.core import BlochVector, SystemParams

# Filled by test_acceptance.py; printed at the end of the session.
ACCEPTANCE_LINES: dict[str, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.rstrip("abc")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


def random_physical_params(rng, n, delta=False):
    """Draws with 2*T1 >= T2, spread over a few decades."""
    out = []
    for _ in range(n):
        T1 = 10 ** rng.uniform(-1.0, 1.5)
        T2 = 2.0 * T1 * rng.uniform(0.005, 1.0)
        omega = 0.0 if rng.random() < 0.05 else 10 ** rng.uniform(-2.0, 1.3)
        out.append(
            SystemParams.make(
                T1,
                T2,
                omega,
                R3_tilde=rng.uniform(0.0, 1.0),
                Delta=rng.normal(0.0, 2.0) if delta else 0.0,
                phi=rng.uniform(-math.pi, math.pi),
            )
        )
    return out


def random_bloch(rng, radius_max=1.0):
    v = rng.normal(size=3)
    v *= radius_max * rng.uniform(0.0, 1.0) ** (1 / 3) / np.linalg.norm(v)
    return BlochVector.from_array(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def fig1():
    return SystemParams.make(1.5, 0.5, 1.0, R3_tilde=0.0)
