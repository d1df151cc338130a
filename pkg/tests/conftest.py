import numpy as np
import pytest

from workfluct.core import HADAMARD, HamiltonianSpec, UnitarySpec, pure_state
from workfluct.work import ProtocolSpec

KET0 = np.array([1, 0], dtype=complex)
KET_PLUS = np.array([1, 1], dtype=complex) / np.sqrt(2)
P0 = np.outer(KET0, KET0.conj())
P_PLUS = np.outer(KET_PLUS, KET_PLUS.conj())


def qubit_protocol(u=HADAMARD, e0=(0.0, 1.0), et=(0.0, 1.0)):
    return ProtocolSpec(HamiltonianSpec.from_energies(e0), UnitarySpec(explicit=u),
                        HamiltonianSpec.from_energies(et))


@pytest.fixture
def hadamard_protocol():
    return qubit_protocol()


@pytest.fixture
def plus_state():
    return pure_state(KET_PLUS)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# one line per acceptance criterion, echoed after the run
ACCEPTANCE: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> str:
    line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE.append(line)
    print(line)
    return line


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE):
            terminalreporter.write_line(line)
