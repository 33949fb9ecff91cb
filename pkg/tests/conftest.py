import numpy as np
import pytest

from realitykit.qstate import ProjectiveObservable, random_density


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def sz():
    return ProjectiveObservable.spin(0.0, 0.0)


@pytest.fixture
def sx():
    return ProjectiveObservable.spin(0.0, np.pi / 2)


@pytest.fixture
def two_qubit_states():
    return [random_density(4, seed=s, dims=(2, 2)) for s in range(20)]


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def acceptance(request):
    """Record one PASS/FAIL line for an acceptance criterion."""
    lines = request.config.stash.setdefault(ACCEPTANCE, [])

    def record(n: int, ok: bool, detail: str) -> bool:
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        print(line)
        lines.append((n, line))
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
