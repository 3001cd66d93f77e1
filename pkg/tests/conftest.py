import numpy as np
import pytest

from castopt import ObjectiveSpec, derive_stream

_RESULTS = pytest.StashKey[list]()


def quadratic(d=1):
    """Test-only objective F(x) = |x|^2 / 2 with unit domain scale."""
    return ObjectiveSpec("quadratic", d, 1.0, 0.1, lambda z: 0.5 * np.sum(z * z, axis=-1))


@pytest.fixture
def rng():
    return derive_stream(12345, "tests", 0)


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(number, title, passed, detail)``."""
    results = request.config.stash.setdefault(_RESULTS, [])

    def record(number, title, passed, detail=""):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        results.append(line)
        print(line)
        return passed

    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash.get(_RESULTS, [])
    if results:
        terminalreporter.section("acceptance criteria")
        for line in sorted(results, key=lambda s: int(s.split("criterion")[1].split(":")[0])):
            terminalreporter.write_line(line)
