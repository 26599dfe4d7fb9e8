import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from jaynes_qic import SIGMA_X, SIGMA_Z, infer_one, infer_two

settings.register_profile("default", max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20260101)


@pytest.fixture(scope="session")
def sol_one():
    """sigma_z with mean 0.5: rho_J = diag(0.75, 0.25)."""
    return infer_one(SIGMA_Z, 0.5)


@pytest.fixture(scope="session")
def sol_two():
    """sigma_z = 0.6, sigma_x = 0.4: rho11 = 0.8, d = 0.2."""
    return infer_two(SIGMA_Z, 0.6, SIGMA_X, 0.4)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for key in ("passed", "failed"):
        for rep in terminalreporter.stats.get(key, []):
            if getattr(rep, "when", None) == "call" and "test_acceptance.py" in rep.nodeid:
                lines.append((rep.nodeid.split("::")[-1], rep.outcome.upper()))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, outcome in sorted(lines):
            terminalreporter.write_line(f"{outcome:6s} {name}")
