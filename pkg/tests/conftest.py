import numpy as np
import pytest
from scipy import optimize, special

from clampedplate.discretize import clamped_bilaplacian, dirichlet_laplacian, neumann_laplacian
from clampedplate.eigensolve import lowest_eigenpairs
from clampedplate.geometry import build_domain


def clamped_disk_root():
    """Smallest k > 0 with J0(k) I1(k) + I0(k) J1(k) = 0 (clamped unit disk)."""
    f = lambda k: special.j0(k) * special.i1(k) + special.i0(k) * special.j1(k)
    return optimize.brentq(f, 2.5, 4.0, xtol=1e-15)


def square_dirichlet(h, count):
    """Eigenvalues of the 5-point Dirichlet Laplacian on a node grid of [0,1]^2."""
    N = int(round(1 / h))
    j = np.arange(1, N)
    s = 4 / h**2 * np.sin(j * np.pi * h / 2) ** 2
    return np.sort(np.add.outer(s, s).ravel())[:count]


def square_neumann(h, count):
    """Eigenvalues of the cell-centered graph Laplacian on [0,1]^2."""
    N = int(round(1 / h))
    j = np.arange(0, N)
    s = 4 / h**2 * np.sin(j * np.pi * h / 2) ** 2
    return np.sort(np.add.outer(s, s).ravel())[:count]


@pytest.fixture(scope="session")
def disk_plate_64():
    d = build_domain("disk:r=1", 1 / 64)
    return lowest_eigenpairs(clamped_bilaplacian(d), 10)


@pytest.fixture(scope="session")
def square_plate_64():
    d = build_domain("square:a=1", 1 / 64)
    return lowest_eigenpairs(clamped_bilaplacian(d), 10)


@pytest.fixture(scope="session")
def square_neumann_64():
    d = build_domain("square:a=1", 1 / 64)
    return lowest_eigenpairs(neumann_laplacian(d), 3)


@pytest.fixture(scope="session")
def square_dirichlet_64():
    d = build_domain("square:a=1", 1 / 64, align="node")
    return lowest_eigenpairs(dirichlet_laplacian(d), 5)


@pytest.fixture(scope="session")
def disk_table_64(disk_plate_64):
    from clampedplate.fourier_probe import transform_eigenfunctions
    return transform_eigenfunctions(disk_plate_64, pad_factor=4)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda l: int(l.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
