import numpy as np
import pytest

from imexstab import FIXTURES, load_fixture
from imexstab.stabfn import stability_polynomials
from imexstab.tableau import ImexTableau

# Filled by tests/test_acceptance.py, printed at the end of the run.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def tableaux():
    return {name: load_fixture(name) for name in FIXTURES}


@pytest.fixture(scope="session")
def stabfns(tableaux):
    return {name: stability_polynomials(t) for name, t in tableaux.items()}


@pytest.fixture
def rng():
    return np.random.default_rng(20240617)


@pytest.fixture(scope="session")
def euler(stabfns):
    return stabfns["euler"]


@pytest.fixture(scope="session")
def rk3(stabfns):
    return stabfns["rk3_explicit"]


def explicit_forward_euler(omega: float = 1.0) -> ImexTableau:
    """Implicit part switched off; ``R = 1 + omega z2``."""
    return ImexTableau(A=[[0.0]], w=[0.0], B=[[0.0]], omega=[omega])


def rk3_poly(z):
    """Stability polynomial of Heun's third-order method, written out by hand."""
    return 1 + z + z * z / 2 + z ** 3 / 6


def bisect(f, lo, hi, tol=1e-13):
    """Plain bisection for a sign change of ``f`` on ``[lo, hi]``."""
    flo = f(lo)
    assert flo * f(hi) < 0, "no sign change"
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if (f(mid) < 0) == (flo < 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rk3_ray_oracle(theta, rho_max=5.0, step=1e-3):
    """First radius where ``|P(-1 + rho e^{i theta})|`` reaches 1.

    Only uses the written-out cubic, nothing from the package.
    """
    d = np.exp(1j * theta)

    def excess(r):
        return abs(rk3_poly(-1 + r * d)) - 1.0
    r = step
    while excess(r) < 0:
        r += step
        assert r < rho_max
    return bisect(excess, r - step, r)
