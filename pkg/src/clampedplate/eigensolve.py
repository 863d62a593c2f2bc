"""Lowest eigenpairs of the assembled operators.

The sparse path is shift-invert Lanczos (ARPACK) around a shift below the
spectrum, with the shifted operator factored once by SuperLU.  Eigenpairs
whose residual misses the tolerance are polished by block inverse
iteration on the same factorization.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg as la
import scipy.sparse as sp
import scipy.sparse.linalg as sla

from .discretize import SparseOperator

__all__ = ["Spectrum", "ConvergenceError", "lowest_eigenpairs", "dense_oracle"]

log = logging.getLogger(__name__)

DEFAULT_TOL = 1e-9
DENSE_LIMIT = 2000


class ConvergenceError(RuntimeError):
    def __init__(self, msg, residuals=None):
        super().__init__(msg)
        self.residuals = residuals


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues of one operator, with optional eigenvectors.

    Eigenvectors are columns normalized so that ``h**n * sum(u**2) == 1``.
    ``residual_norms[i]`` is ``|A v - lam v| / max(|lam|, k eps |A|_inf / tol)``
    for the Euclidean-unit vector ``v``: the relative residual, except for
    eigenvalues so small that ``tol * lam`` lies below rounding level.
    """

    problem_tag: str
    eigenvalues: np.ndarray
    residual_norms: np.ndarray
    h: float
    n: int
    domain_ref: str
    eigenvectors: Optional[np.ndarray] = field(default=None, repr=False)
    operator: Optional[SparseOperator] = field(default=None, repr=False)

    def __len__(self):
        return len(self.eigenvalues)

    def means(self) -> np.ndarray:
        """Running means of the first k eigenvalues, k = 1..m."""
        lam = np.asarray(self.eigenvalues)
        return np.cumsum(lam) / np.arange(1, len(lam) + 1)

    def gram(self) -> np.ndarray:
        """Discrete L2 Gram matrix ``h^n U^T U`` of the eigenvectors."""
        if self.eigenvectors is None:
            raise ValueError("spectrum carries no eigenvectors")
        u = self.eigenvectors
        return self.h**self.n * (u.T @ u)

    def nonzero(self, count: int, floor: float = 1e-8) -> np.ndarray:
        """First ``count`` eigenvalues above ``floor * lam_max`` (drops zero modes)."""
        lam = np.asarray(self.eigenvalues)
        keep = lam[lam > floor * lam.max()]
        if len(keep) < count:
            raise ValueError(f"only {len(keep)} nonzero eigenvalues available")
        return keep[:count]

    def to_dict(self) -> dict:
        return {
            "problem": self.problem_tag,
            "n": int(self.n),
            "h": float(self.h),
            "domain": self.domain_ref,
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(v) for v in self.residual_norms],
            "normalization": "L2_h",
        }

    def to_json(self, path=None, **extra) -> str:
        d = self.to_dict()
        d.update(extra)
        text = json.dumps(d, indent=1)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_dict(cls, d: dict) -> "Spectrum":
        for key in ("problem", "n", "h", "domain", "eigenvalues", "residuals"):
            if key not in d:
                raise ValueError(f"spectrum JSON lacks {key!r}")
        if d.get("normalization", "L2_h") != "L2_h":
            raise ValueError("unsupported eigenvector normalization")
        return cls(d["problem"], np.asarray(d["eigenvalues"], dtype=float),
                   np.asarray(d["residuals"], dtype=float), float(d["h"]), int(d["n"]),
                   d["domain"])

    @classmethod
    def from_json(cls, path) -> "Spectrum":
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def _residuals(a, lam, v, tol):
    """``|A v - lam v| / max(|lam|, k eps |A|_inf / tol)``.

    A sparse product with ``k`` entries per row carries a rounding error up
    to ``k eps |A|_inf``; for the plate at fine ``h`` that exceeds
    ``tol * lam_1``.  Below that scale a pair counts as converged to
    working precision.
    """
    r = a @ v - v * lam
    a = sp.csr_matrix(a)
    anorm = float(abs(a).sum(axis=1).max())
    width = int(np.diff(a.indptr).max())
    floor = width * np.finfo(float).eps * anorm / tol
    return np.linalg.norm(r, axis=0) / np.maximum(np.abs(lam), floor)


def _shift(op: SparseOperator) -> float:
    if op.problem_tag != "neumann_laplacian":
        return 0.0
    # below the zero mode, of the order of the first nonzero eigenvalue
    lo, hi = op.domain.bounding_box()
    return -1.0 / float(np.sum((hi - lo) ** 2))


def _factor(a, sigma):
    m = (a - sigma * sp.identity(a.shape[0], format="csr")).tocsc()
    # the shifted operator is SPD, so no pivoting is needed
    return sla.splu(m, permc_spec="MMD_AT_PLUS_A", diag_pivot_thresh=0.0,
                    options=dict(SymmetricMode=True))


def _polish(a, lu, lam, v, m, tol, budget):
    """Block inverse iteration plus Rayleigh-Ritz until residuals <= tol."""
    x = v.copy()
    used = 0
    res = _residuals(a, lam, v, tol)
    while np.any(res[:m] > tol) and used < budget:
        x = lu.solve(x)
        used += x.shape[1]
        x, _ = np.linalg.qr(x)
        t = x.T @ (a @ x)
        lam, y = la.eigh(0.5 * (t + t.T))
        x = x @ y
        res = _residuals(a, lam, x, tol)
    return lam, x, res, used


def lowest_eigenpairs(op: SparseOperator, m: int, tol: float = DEFAULT_TOL, seed: int = 42,
                      vectors: bool = True, budget: Optional[int] = None) -> Spectrum:
    """The ``m`` smallest eigenpairs of ``op``.

    Parameters
    ----------
    op : SparseOperator
    m : int
        Number of eigenpairs, ``1 <= m <= op.dim / 4``.
    tol : float
        Relative residual required of every returned pair.
    seed : int
        Seed for the Lanczos start vector; equal seeds give identical output.
    vectors : bool
        Keep the eigenvectors (``L2_h`` normalized) in the result.
    budget : int, optional
        Solve budget in matvec equivalents, default ``500 * m``.

    Raises
    ------
    ConvergenceError
        If the residual contract cannot be met within the budget.
    """
    dim = op.dim
    if not 1 <= m <= dim / 4:
        raise ValueError(f"m={m} outside [1, dim/4] for dim={dim}")
    if not 1e-12 <= tol <= 1e-4:
        raise ValueError("tol must lie in [1e-12, 1e-4]")
    budget = 500 * m if budget is None else budget
    a = op.matrix
    sigma = _shift(op)
    lu = _factor(a, sigma)
    opinv = sla.LinearOperator(a.shape, matvec=lu.solve, dtype=float)
    extra = min(max(4, m // 5), dim - m - 1)
    k = m + extra
    ncv = min(dim - 1, max(2 * k + 1, 20))
    v0 = np.random.default_rng(seed).standard_normal(dim)
    try:
        lam, v = sla.eigsh(a, k=k, sigma=sigma, which="LM", OPinv=opinv, v0=v0,
                           ncv=ncv, tol=tol * 1e-2, maxiter=max(budget // max(ncv, 1), 10))
    except sla.ArpackNoConvergence as exc:
        lam, v = exc.eigenvalues, exc.eigenvectors
        if len(lam) < m:
            raise ConvergenceError(f"ARPACK returned {len(lam)} of {m} pairs") from exc
    order = np.argsort(lam)
    lam, v = lam[order], v[:, order]
    res = _residuals(a, lam, v, tol)
    if np.any(res[:m] > tol):
        log.info("polishing %d pairs with residual > %g", int(np.sum(res[:m] > tol)), tol)
        lam, v, res, _ = _polish(a, lu, lam, v, m, tol, budget)
    lam, v, res = lam[:m], v[:, :m], res[:m]
    if np.any(res > tol):
        raise ConvergenceError(f"residuals {res.max():.3e} exceed tol {tol:g}", residuals=res)
    scale = op.h ** (-op.n / 2)
    return Spectrum(op.problem_tag, lam, res, op.h, op.n, op.domain_ref,
                    v * scale if vectors else None, op)


def dense_oracle(op: SparseOperator) -> Spectrum:
    """Full spectrum via dense symmetric eigendecomposition (tests only)."""
    if op.dim > DENSE_LIMIT:
        raise ValueError(f"dense oracle limited to dim <= {DENSE_LIMIT}, got {op.dim}")
    a = op.matrix.toarray()
    lam, v = la.eigh(a)
    res = _residuals(a, lam, v, DEFAULT_TOL)
    return Spectrum(op.problem_tag, lam, res, op.h, op.n, op.domain_ref,
                    v * op.h ** (-op.n / 2), op)
