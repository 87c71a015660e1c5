import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parents[1] / "src" / "qpprng" / "data"


@pytest.fixture(scope="session")
def golden_clock_path():
    return DATA / "golden_clock.txt"


@pytest.fixture(scope="session")
def golden_bytes():
    return (DATA / "golden_1024.bin").read_bytes()


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # Compile (or load cached) numba kernels once so timed tests measure the work.
    from qpprng.clock import ConstantClock
    from qpprng.permutation import PadGenerator, disorder, identity_array, sort_by_random_permutations

    arr, gen = identity_array(3), PadGenerator(1)
    disorder(arr, gen)
    sort_by_random_permutations(arr, gen, ConstantClock())


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Record a criterion verdict; the lines are echoed in the terminal summary."""

    def _record(label: str, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'}  {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
