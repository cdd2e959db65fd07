import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from twobody_sn.grid import make_grid
from twobody_sn.potentials import KernelTable

settings.register_profile("repo", deadline=None, max_examples=25,
                          suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile("repo")


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(64, 20.0)


@pytest.fixture(scope="session")
def small_kernel(small_grid):
    return KernelTable.build(small_grid, 0.2)


@pytest.fixture(scope="session")
def base_grid():
    return make_grid(256, 40.0)


@pytest.fixture(scope="session")
def base_kernel(base_grid):
    return KernelTable.build(base_grid, 0.2)


def gaussian(x, center, sigma, k0=0.0):
    phi = np.exp(-((x - center) ** 2) / (4 * sigma**2) + 1j * k0 * x)
    return phi / np.sqrt(np.sum(np.abs(phi) ** 2) * (x[1] - x[0]))


# --- acceptance reporting ------------------------------------------------------

AC_LINES: dict[str, str] = {}


def report(ac: str, ok: bool, detail: str) -> bool:
    line = f"{ac} {'PASS' if ok else 'FAIL'}: {detail}"
    AC_LINES[ac] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if AC_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(AC_LINES, key=lambda k: int(k.split("-")[1])):
            terminalreporter.write_line(AC_LINES[key])
