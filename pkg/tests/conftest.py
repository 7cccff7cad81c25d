import numpy as np
import pytest

from torsionqm.wavefunction import PacketParams


@pytest.fixture
def slit_packet():
    return PacketParams(0.1, (0.0, 0.0), (50.0, 0.0))


@pytest.fixture
def crossing_packet():
    # starts left of the defect and moves through it around t = 1
    return PacketParams(1.0, (-3.0, 0.0), (3.0, 0.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    """Record one PASS/FAIL line for the acceptance summary."""

    def record(label, ok, detail):
        ACCEPTANCE_LINES.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
