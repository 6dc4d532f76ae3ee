import sys
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

FIXTURES = HERE / "fixtures"
SYNTHETIC = FIXTURES / "synthetic_lna.s2p"
SYNTHETIC_FREQ = 4e9
# the layout the synthetic device was built around (wavelengths)
SYNTHETIC_LAYOUT = (0.06, 0.10, 0.08, 0.08)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def synthetic_device():
    from lnaswarm.touchstone import load_device

    return load_device(SYNTHETIC)


@pytest.fixture(scope="session")
def fhx35x():
    from lnaswarm.reference import load_fixture

    return load_fixture()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
