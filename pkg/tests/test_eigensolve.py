import numpy as np
import pytest

from clampedplate.discretize import (
    SparseOperator,
    assemble,
    clamped_bilaplacian,
    dirichlet_laplacian,
    neumann_laplacian,
)
from clampedplate.eigensolve import Spectrum, dense_oracle, lowest_eigenpairs
from clampedplate.geometry import RasterDomain, build_domain

from conftest import square_dirichlet

SHAPES = ["disk:r=1", "square:a=1", "lshape:a=1,b=0.5", "annulus:r1=0.4,r2=1",
          "ellipse:a=1,b=0.5", "rect:w=1,h=2", "union:0,0,1,0.5;0,0,0.5,1"]


def strip(cells):
    mask = np.zeros((3, cells + 2), bool)
    mask[1, 1:-1] = True
    return RasterDomain(2, 1.0, (0, 0), mask)


def test_dense_examples():
    assert dense_oracle(dirichlet_laplacian(strip(1))).eigenvalues.tolist() == pytest.approx([4])
    assert dense_oracle(dirichlet_laplacian(strip(2))).eigenvalues.tolist() == pytest.approx([3, 5])
    assert dense_oracle(clamped_bilaplacian(strip(1))).eigenvalues.tolist() == pytest.approx([20])


def test_dense_limit():
    op = dirichlet_laplacian(build_domain("square:a=1", 1 / 64))
    with pytest.raises(ValueError, match="dense"):
        dense_oracle(op)


@pytest.mark.parametrize("spec", SHAPES)
@pytest.mark.parametrize("problem", ["dirichlet", "neumann", "clamped"])
def test_matches_dense_oracle(spec, problem):
    op = assemble(build_domain(spec, 1 / 8 if spec.startswith("rect") else 1 / 10), problem)
    assert op.dim <= 2000
    m = min(6, op.dim // 4)
    got = lowest_eigenpairs(op, m)
    ref = dense_oracle(op).eigenvalues[:m]
    nz = ref > 1e-8 * ref[-1]
    assert np.all(np.abs(got.eigenvalues[nz] / ref[nz] - 1) <= 1e-9)
    # the Neumann zero mode has no relative scale
    assert np.all(np.abs(got.eigenvalues[~nz]) <= 1e-10)


def test_square_dirichlet(square_dirichlet_64):
    lam = square_dirichlet_64.eigenvalues
    exact = np.pi**2 * np.array([2, 5, 5, 8, 10])
    assert np.all(np.abs(lam / exact - 1) <= 5e-3)
    assert lam == pytest.approx(square_dirichlet(1 / 64, 5), rel=1e-10)


def test_square_neumann(square_neumann_64):
    mu = square_neumann_64.eigenvalues
    assert abs(mu[0]) <= 1e-10
    assert mu[1:] == pytest.approx([np.pi**2] * 2, rel=5e-3)
    assert mu[1] == pytest.approx(mu[2], rel=1e-8)


@pytest.mark.parametrize("fixture", ["square_dirichlet_64", "square_neumann_64",
                                     "square_plate_64", "disk_plate_64"])
def test_spectrum_invariants(fixture, request):
    spec = request.getfixturevalue(fixture)
    assert np.all(np.diff(spec.eigenvalues) >= 0)
    assert np.all(spec.residual_norms <= 1e-9)
    gram = spec.gram()
    assert np.max(np.abs(gram - np.eye(len(spec)))) <= 1e-8


def test_determinism():
    op = clamped_bilaplacian(build_domain("lshape:a=1,b=0.5", 1 / 24))
    a = lowest_eigenpairs(op, 6, seed=3, vectors=False)
    b = lowest_eigenpairs(op, 6, seed=3, vectors=False)
    assert a.eigenvalues.tobytes() == b.eigenvalues.tobytes()


def test_monotone_convergence_square():
    incr = []
    prev = None
    for h in (1 / 8, 1 / 16, 1 / 32, 1 / 64):
        d = build_domain("square:a=1", h, align="node")
        lam = lowest_eigenpairs(dirichlet_laplacian(d), 5, vectors=False).eigenvalues
        if prev is not None:
            incr.append(np.abs(lam - prev))
        prev = lam
    incr = np.array(incr)
    assert np.all(np.diff(incr, axis=0) < 0)


def test_monotone_convergence_disk_plate():
    prev, incr = None, []
    for h in (1 / 16, 1 / 32, 1 / 64):
        lam = lowest_eigenpairs(clamped_bilaplacian(build_domain("disk:r=1", h)), 1,
                                vectors=False).eigenvalues
        if prev is not None:
            incr.append(abs(lam[0] - prev[0]))
        prev = lam
    assert incr[1] < incr[0]


@pytest.mark.parametrize("m, tol", [(0, 1e-9), (100, 1e-9), (2, 1e-3), (2, 1e-13)])
def test_bad_requests(m, tol):
    op = dirichlet_laplacian(build_domain("square:a=1", 1 / 8))
    with pytest.raises(ValueError):
        lowest_eigenpairs(op, m, tol=tol)


def test_json_roundtrip(tmp_path, square_neumann_64):
    path = tmp_path / "s.json"
    square_neumann_64.to_json(path, volume=1.0)
    back = Spectrum.from_json(path)
    assert back.problem_tag == "neumann_laplacian"
    assert back.eigenvalues.tolist() == square_neumann_64.eigenvalues.tolist()
    assert back.h == square_neumann_64.h and back.eigenvectors is None
    assert back.nonzero(2) == pytest.approx([np.pi**2] * 2, rel=5e-3)


def test_fine_plate_single_pair_converges():
    # the residual of the lowest plate mode is limited by rounding at this h
    op = clamped_bilaplacian(build_domain("disk:r=1", 1 / 128))
    spec = lowest_eigenpairs(op, 1, vectors=False)
    assert spec.residual_norms[0] <= 1e-9
    assert spec.eigenvalues[0] == pytest.approx(102.0304, rel=1e-6)
