import numpy as np
import pytest

from qwork.analytic import ClosedFormParams
from qwork.dynamics import BathParams, Case, SystemSpec

COLD_BATHS = (BathParams.from_beta_omega(0.105, 0.7), BathParams.from_beta_omega(0.105, 0.8))
HOT_BATHS = (BathParams.from_beta_omega(0.105, 0.5), BathParams.from_beta_omega(0.105, 0.6))


def ref_spec(case=Case.I, beta=0.001):
    return SystemSpec(h_w=0.1, E=1.0, beta=beta, case=case)


@pytest.fixture
def rng():
    return np.random.default_rng(20171014)


@pytest.fixture
def reference():
    spec = ref_spec()
    return spec, COLD_BATHS, ClosedFormParams.from_models(spec, COLD_BATHS)


# One line per acceptance criterion, shown in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
