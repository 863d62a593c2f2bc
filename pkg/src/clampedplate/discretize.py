"""Finite-difference operators on rasterized domains.

All stencils are assembled with integer coefficients and scaled once by
``1/h**2`` or ``1/h**4``, so the stored matrices are exactly symmetric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .geometry import RasterDomain

__all__ = [
    "SparseOperator",
    "PROBLEMS",
    "dirichlet_laplacian",
    "neumann_laplacian",
    "clamped_bilaplacian",
    "assemble",
    "grid_laplacian",
    "write_coo",
    "read_coo",
]

PROBLEMS = ("dirichlet_laplacian", "neumann_laplacian", "clamped_bilaplacian")

#: short names accepted by :func:`assemble` and the command line
ALIASES = {
    "dirichlet": "dirichlet_laplacian",
    "neumann": "neumann_laplacian",
    "clamped": "clamped_bilaplacian",
    "plate": "clamped_bilaplacian",
}


@dataclass(frozen=True, eq=False)
class SparseOperator:
    """A symmetric sparse operator acting on the inside cells of a domain.

    Unknown ``i`` lives at flat mask index ``cells[i]`` (C order), which is
    the lexicographic order of inside cells.
    """

    matrix: sp.csr_matrix = field(repr=False)
    problem_tag: str
    h: float
    domain: RasterDomain = field(repr=False)
    cells: np.ndarray = field(repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.domain.n

    @property
    def domain_ref(self) -> str:
        return self.domain.shape_tag

    def matvec(self, x):
        return self.matrix @ x

    def __matmul__(self, x):
        return self.matrix @ x

    def to_grid(self, u) -> np.ndarray:
        """Zero-extend a vector of unknowns to the full mask lattice."""
        out = np.zeros(self.domain.mask.size, dtype=np.result_type(u, float))
        out[self.cells] = u
        return out.reshape(self.domain.grid_shape)


def grid_laplacian(shape) -> sp.csr_matrix:
    """Integer 2n-point stencil ``2n*I - adjacency`` on a full box lattice.

    Rows of cells on the box faces simply miss their outside neighbors,
    which is zero extension beyond the box.
    """
    ops = []
    eyes = [sp.identity(m, dtype=np.int64, format="csr") for m in shape]
    for axis, m in enumerate(shape):
        d = sp.diags([-np.ones(m - 1, dtype=np.int64), 2 * np.ones(m, dtype=np.int64),
                      -np.ones(m - 1, dtype=np.int64)], [-1, 0, 1], format="csr", dtype=np.int64)
        term = None
        for b in range(len(shape)):
            f = d if b == axis else eyes[b]
            term = f if term is None else sp.kron(term, f, format="csr")
        ops.append(term)
    return sum(ops[1:], ops[0]).tocsr()


def _adjacency(d: RasterDomain) -> sp.csr_matrix:
    """Nearest-neighbor adjacency between inside cells (integer)."""
    cells = d.inside_indices()
    lap = grid_laplacian(d.grid_shape)
    sub = lap[cells][:, cells]
    diag = sp.diags(sub.diagonal())
    return (diag - sub).tocsr()


def dirichlet_laplacian(d: RasterDomain) -> SparseOperator:
    """-Laplacian with u = 0 at every outside cell center."""
    cells = d.inside_indices()
    lap = grid_laplacian(d.grid_shape)[cells][:, cells]
    mat = lap.astype(float) * (1.0 / d.h**2)
    return SparseOperator(mat.tocsr(), "dirichlet_laplacian", d.h, d, cells)


def neumann_laplacian(d: RasterDomain) -> SparseOperator:
    """Graph Laplacian of the inside cells; missing links encode du/dnu = 0."""
    cells = d.inside_indices()
    adj = _adjacency(d)
    deg = np.asarray(adj.sum(axis=1)).ravel()
    lap = sp.diags(deg) - adj
    mat = lap.astype(float) * (1.0 / d.h**2)
    return SparseOperator(mat.tocsr(), "neumann_laplacian", d.h, d, cells)


def clamped_bilaplacian(d: RasterDomain) -> SparseOperator:
    """Squared 2n-point stencil applied to the zero extension of u.

    With ``P`` the zero extension from inside cells to the lattice and
    ``L`` the lattice Laplacian, the operator is ``(L P)^T (L P)``.  The
    outside layer of the mask guarantees the product is not truncated.
    """
    cells = d.inside_indices()
    lp = grid_laplacian(d.grid_shape).tocsc()[:, cells]
    mat = (lp.T @ lp).astype(float) * (1.0 / d.h**4)
    return SparseOperator(mat.tocsr(), "clamped_bilaplacian", d.h, d, cells)


_BUILDERS = {
    "dirichlet_laplacian": dirichlet_laplacian,
    "neumann_laplacian": neumann_laplacian,
    "clamped_bilaplacian": clamped_bilaplacian,
}


def canonical_problem(name: str) -> str:
    tag = ALIASES.get(name, name)
    if tag not in _BUILDERS:
        raise ValueError(f"unknown problem {name!r}")
    return tag


def assemble(d: RasterDomain, problem: str) -> SparseOperator:
    return _BUILDERS[canonical_problem(problem)](d)


def laplacian_energy(op: SparseOperator, u) -> float:
    """``sum over the lattice of (L_h u)^2`` for the zero extension of ``u``."""
    lap = grid_laplacian(op.domain.grid_shape).astype(float) * (1.0 / op.h**2)
    full = op.to_grid(u).ravel()
    return float(np.sum((lap @ full) ** 2))


def write_coo(op: SparseOperator, path) -> None:
    """Dump ``i j value`` lines (upper and lower triangle, 17 significant digits)."""
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"# {op.problem_tag} dim={op.dim} h={op.h!r} domain={op.domain_ref}\n")
        for k in order:
            fh.write(f"{coo.row[k]} {coo.col[k]} {coo.data[k]:.17g}\n")


def read_coo(path) -> sp.csr_matrix:
    rows, cols, vals = [], [], []
    dim = None
    for line in Path(path).read_text().splitlines():
        if line.startswith("#"):
            for tok in line.split():
                if tok.startswith("dim="):
                    dim = int(tok[4:])
            continue
        i, j, v = line.split()
        rows.append(int(i))
        cols.append(int(j))
        vals.append(float(v))
    if dim is None:
        dim = max(max(rows), max(cols)) + 1
    return sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
