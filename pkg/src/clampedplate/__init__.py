"""Eigenvalues of the clamped plate and the Laplacian on rasterized domains.

Typical use::

    from clampedplate import build_domain, clamped_bilaplacian, lowest_eigenpairs
    d = build_domain("disk:r=1", 1 / 64)
    spec = lowest_eigenpairs(clamped_bilaplacian(d), 10)
"""

from .bounds import BoundInputs, BoundReport, build_report, plate_lower_bound
from .discretize import (
    SparseOperator,
    assemble,
    clamped_bilaplacian,
    dirichlet_laplacian,
    neumann_laplacian,
)
from .eigensolve import ConvergenceError, Spectrum, dense_oracle, lowest_eigenpairs
from .geometry import DomainError, GeometrySummary, RasterDomain, build_domain, summarize
from .rearrangement import GridFunction, RadialProfile, decreasing_rearrangement

__version__ = "0.1.0"

__all__ = [
    "BoundInputs",
    "BoundReport",
    "ConvergenceError",
    "DomainError",
    "GeometrySummary",
    "GridFunction",
    "RadialProfile",
    "RasterDomain",
    "SparseOperator",
    "Spectrum",
    "assemble",
    "build_domain",
    "build_report",
    "clamped_bilaplacian",
    "decreasing_rearrangement",
    "dense_oracle",
    "dirichlet_laplacian",
    "lowest_eigenpairs",
    "neumann_laplacian",
    "plate_lower_bound",
    "summarize",
]
