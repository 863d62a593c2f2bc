"""Fourier-side checks on computed clamped-plate eigenfunctions.

Eigenfunctions are zero-extended to a padded periodic box and transformed
with

    phi_hat(z) = (2 pi)^(-n/2) h^n sum_x u(x) exp(i <x, z>)

on the dual lattice ``z = 2 pi m / (N h)``.  With ``x`` measured from the
raster centroid, discrete Bessel, Cauchy-Schwarz and Parseval statements
hold exactly for raster volume and inertia, and the squared 5-point symbol
takes the place of ``|z|^4``.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional

import numpy as np

from .geometry import GeometrySummary, summarize, unit_ball_volume
from .lemma_lab import lemma_rhs
from .rearrangement import GridFunction, decreasing_rearrangement, radial_moment

__all__ = [
    "FourierTable",
    "CheckResult",
    "ProbeReport",
    "transform_eigenfunctions",
    "transform_grid",
    "bessel_check",
    "energy_identity",
    "mass_and_moment_pipeline",
    "extract_eta",
    "run_probe",
]

BESSEL_SLACK = 1e-12
ENERGY_TOL = 1e-8
MASS_TOL = 1e-8
RADIAL_MASS_TOL = 5e-3


@dataclass(frozen=True, eq=False)
class FourierTable:
    """Transforms of ``L2_h``-normalized eigenfunctions on a dual lattice.

    Arrays are stored in centered (``fftshift``) order; ``z[q]`` is the
    ``q``-th frequency coordinate broadcastable against ``phi_hat[j]``.
    """

    phi_hat: np.ndarray = field(repr=False)
    grad_hat: Optional[np.ndarray] = field(repr=False)
    z: list = field(repr=False)
    dz: float
    h: float
    n: int
    symbol: np.ndarray = field(repr=False)
    eigenvalues: np.ndarray = field(repr=False)
    problem_tag: str = ""
    geometry: Optional[GeometrySummary] = None

    @property
    def weight(self) -> float:
        return self.dz**self.n

    @property
    def size(self) -> int:
        return self.phi_hat.shape[0]

    def z_norm(self) -> np.ndarray:
        return np.sqrt(sum(c**2 for c in self.z))

    def parseval(self) -> np.ndarray:
        """``dz^n sum_z |phi_hat_j|^2`` for every transformed function."""
        axes = tuple(range(1, self.n + 1))
        return self.weight * np.sum(np.abs(self.phi_hat) ** 2, axis=axes)

    def inner(self, i: int, j: int) -> complex:
        return complex(self.weight * np.sum(self.phi_hat[i] * np.conj(self.phi_hat[j])))


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_margin: float
    location: Optional[list] = None
    detail: dict = field(default_factory=dict)


@dataclass
class ProbeReport:
    checks: list = field(default_factory=list)

    def add(self, *results):
        self.checks.extend(results)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list:
        return [c.name for c in self.checks if not c.passed]

    def __getitem__(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self, path=None) -> str:
        text = json.dumps({"passed": self.passed,
                           "checks": [asdict(c) for c in self.checks]}, indent=1, default=float)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text


def _box_size(shape, pad_factor):
    m = int(math.ceil(pad_factor * max(shape)))
    return m + (m % 2)


def transform_grid(values: np.ndarray, h: float, corner, pad_factor: float = 4,
                   size: Optional[int] = None):
    """Transform of a lattice function whose cell ``0`` sits at ``corner``.

    Returns ``(phi_hat, z, dz)`` with ``phi_hat`` centered on ``z = 0``.
    """
    values = np.asarray(values)
    n = values.ndim
    N = size or _box_size(values.shape, pad_factor)
    if any(m > N for m in values.shape):
        raise ValueError("box smaller than the data")
    box = np.zeros((N,) * n, dtype=complex)
    box[tuple(slice(0, m) for m in values.shape)] = values
    dz = 2 * math.pi / (N * h)
    freq = np.fft.fftshift(np.fft.fftfreq(N, d=1.0 / N)) * dz
    z = [freq.reshape([-1 if a == q else 1 for a in range(n)]) for q in range(n)]
    # sum_m u_m exp(+2 pi i m k / N)
    raw = np.fft.fftshift(np.fft.ifftn(box) * N**n)
    phase = np.exp(1j * sum(corner[q] * z[q] for q in range(n)))
    return (2 * math.pi) ** (-n / 2) * h**n * raw * phase, z, dz


def transform_eigenfunctions(spectrum, pad_factor: float = 4, gradients: bool = True,
                             count: Optional[int] = None) -> FourierTable:
    """Transform the (first ``count``) eigenvectors of a spectrum.

    The spectrum must carry eigenvectors and its operator (for the raster).
    Coordinates are measured from the raster centroid.
    """
    if spectrum.eigenvectors is None or spectrum.operator is None:
        raise ValueError("spectrum must carry eigenvectors and its operator")
    if pad_factor < 2:
        raise ValueError("pad_factor must be >= 2")
    op = spectrum.operator
    d = op.domain
    geo = summarize(d)
    n, h = d.n, d.h
    vecs = spectrum.eigenvectors
    count = vecs.shape[1] if count is None else min(count, vecs.shape[1])
    N = _box_size(d.grid_shape, pad_factor)
    corner = np.asarray(d.origin) - np.asarray(geo.centroid)
    coords = np.meshgrid(*[corner[a] + h * np.arange(d.grid_shape[a]) for a in range(n)],
                         indexing="ij") if gradients else None
    phi, grads = [], []
    z = dz = None
    for j in range(count):
        u = op.to_grid(vecs[:, j])
        ph, z, dz = transform_grid(u, h, corner, size=N)
        phi.append(ph)
        if gradients:
            grads.append([1j * transform_grid(coords[q] * u, h, corner, size=N)[0]
                          for q in range(n)])
    sym = sum(4 * np.sin(0.5 * h * zq) ** 2 / h**2 for zq in z) ** 2
    sym = np.broadcast_to(sym, (N,) * n)
    return FourierTable(np.array(phi), np.array(grads) if gradients else None, z, dz, h, n,
                        sym, np.asarray(spectrum.eigenvalues[:count]), spectrum.problem_tag, geo)


def _argmax_location(table, arr):
    idx = np.unravel_index(int(np.argmax(arr)), arr.shape)
    return [float(np.broadcast_to(table.z[q], arr.shape)[idx]) for q in range(table.n)]


def bessel_check(table: FourierTable, k: int, V_h: Optional[float] = None,
                 I_h: Optional[float] = None) -> list:
    """Pointwise Bessel, gradient-Bessel and Cauchy-Schwarz bounds for ``j <= k``."""
    if k > table.size:
        raise ValueError(f"k={k} exceeds the {table.size} transformed functions")
    V_h = table.geometry.volume if V_h is None else V_h
    I_h = table.geometry.inertia if I_h is None else I_h
    n = table.n
    c = (2 * math.pi) ** (-n)
    ph = table.phi_hat[:k]
    hz = np.sum(np.abs(ph) ** 2, axis=0)
    cap = c * V_h
    out = [CheckResult("bessel", bool(hz.max() <= cap * (1 + BESSEL_SLACK)),
                       float(cap - hz.max()), _argmax_location(table, hz),
                       {"bound": cap, "max": float(hz.max()), "k": k})]
    if table.grad_hat is not None:
        gr = table.grad_hat[:k]
        g2 = np.sum(np.abs(gr) ** 2, axis=(0, 1))
        gcap = c * I_h
        out.append(CheckResult("gradient_bessel", bool(g2.max() <= gcap * (1 + BESSEL_SLACK)),
                               float(gcap - g2.max()), _argmax_location(table, g2),
                               {"bound": gcap, "max": float(g2.max()), "k": k}))
        grad_h = 2 * np.real(np.sum(np.conj(ph)[:, None] * gr, axis=0))
        gnorm = np.sqrt(np.sum(grad_h**2, axis=0))
        eta = 2 * c * math.sqrt(V_h * I_h)
        out.append(CheckResult("gradient_bound", bool(gnorm.max() <= eta * (1 + BESSEL_SLACK)),
                               float(eta - gnorm.max()), _argmax_location(table, gnorm),
                               {"bound": eta, "max": float(gnorm.max()), "k": k}))
    return out


def energy_identity(table: FourierTable, spectrum=None, tol: float = ENERGY_TOL) -> list:
    """Symbol-weighted Parseval energy against each eigenvalue.

    Also reports the ``|z|^4`` weighted sum as an unasserted diagnostic.
    """
    tag = spectrum.problem_tag if spectrum is not None else table.problem_tag
    if tag != "clamped_bilaplacian":
        raise ValueError(f"energy identity needs a clamped plate spectrum, got {tag!r}")
    lam = np.asarray(spectrum.eigenvalues if spectrum is not None else table.eigenvalues)
    axes = tuple(range(1, table.n + 1))
    p2 = np.abs(table.phi_hat) ** 2
    energy = table.weight * np.sum(table.symbol * p2, axis=axes)
    proxy = table.weight * np.sum(table.z_norm() ** 4 * p2, axis=axes)
    rel = np.abs(energy / lam[: table.size] - 1)
    worst = int(np.argmax(rel))
    return [
        CheckResult("energy_identity", bool(rel.max() <= tol), float(tol - rel.max()), [worst],
                    {"energy": energy.tolist(), "eigenvalues": lam[: table.size].tolist(),
                     "rel_error": rel.tolist()}),
        CheckResult("z4_proxy", True, float("nan"), None,
                    {"proxy": proxy.tolist(),
                     "rel_deviation": (proxy / lam[: table.size] - 1).tolist(), "asserted": False}),
    ]


def _centered_gridfunction(table, values):
    origin = tuple(float(np.min(zq)) for zq in table.z)
    return GridFunction(values, table.dz, origin)


def mass_and_moment_pipeline(table: FourierTable, k: int, V_h: Optional[float] = None,
                             I_h: Optional[float] = None,
                             moment_slack: float = 0.02) -> list:
    """Fourier mass, its rearrangement, and the lemma chain for ``j <= k``.

    ``moment_slack`` is the relative slack allowed when comparing the
    symbol-weighted energy with the ``s^(n+3)`` moment of the rearranged
    mass; the symbol undershoots ``|z|^4`` at high frequency.
    """
    if k > table.size:
        raise ValueError(f"k={k} exceeds the {table.size} transformed functions")
    V_h = table.geometry.volume if V_h is None else V_h
    I_h = table.geometry.inertia if I_h is None else I_h
    n = table.n
    B = unit_ball_volume(n)
    c = (2 * math.pi) ** (-n)
    hz = np.sum(np.abs(table.phi_hat[:k]) ** 2, axis=0)
    mass = table.weight * hz.sum()
    f = _centered_gridfunction(table, hz)
    g = decreasing_rearrangement(f)
    radial_mass = radial_moment(g, 0)
    radial_m4 = radial_moment(g, 4)
    energy = table.weight * float(np.sum(table.symbol * hz))
    z4 = table.weight * float(np.sum(table.z_norm() ** 4 * hz))
    gamma_sum = float(np.sum(table.eigenvalues[:k]))
    eta = 2 * c * math.sqrt(V_h * I_h)
    A = k / (n * B)
    psi0 = g.peak
    d = (n + 2) / (48 * n**2)
    ratio = psi0 ** ((2 * n + 2) / n) / (6 * n * eta**2 * (n * A) ** (2 / n))
    chain = n * B * lemma_rhs(n, eta, A, psi0, d)
    return [
        CheckResult("mass", bool(abs(mass - k) <= MASS_TOL * k), float(MASS_TOL * k - abs(mass - k)),
                    None, {"mass": mass, "k": k}),
        CheckResult("peak_bound", bool(psi0 <= c * V_h * (1 + BESSEL_SLACK)),
                    float(c * V_h - psi0), None, {"g0": psi0, "bound": c * V_h}),
        CheckResult("radial_mass", bool(abs(radial_mass - k) <= RADIAL_MASS_TOL * k),
                    float(RADIAL_MASS_TOL * k - abs(radial_mass - k)), None,
                    {"radial_mass": radial_mass, "k": k}),
        CheckResult("moment_z4", bool(z4 >= radial_m4 * (1 - moment_slack)),
                    float(z4 - radial_m4), None, {"z4_moment": z4, "radial_moment": radial_m4}),
        CheckResult("moment_symbol", bool(energy >= radial_m4 * (1 - moment_slack)),
                    float(energy - radial_m4), None,
                    {"symbol_energy": energy, "radial_moment": radial_m4,
                     "rel_gap": energy / radial_m4 - 1, "slack": moment_slack}),
        CheckResult("hypothesis", bool(ratio < d), float(d - ratio), None,
                    {"ratio": ratio, "d": d}),
        CheckResult("chain", bool(chain <= gamma_sum), float(gamma_sum - chain), None,
                    {"chain": chain, "gamma_sum": gamma_sum, "radial_moment": radial_m4,
                     "k": k, "eta": eta, "A": A, "g0": psi0}),
    ]


@dataclass(frozen=True)
class EtaInfo:
    eta: float
    floor: float
    holds: bool


def extract_eta(geo: GeometrySummary, rel_slack: float = 0.0) -> EtaInfo:
    """Gradient cap ``2 (2 pi)^-n sqrt(V I)`` and its ball-based lower bound."""
    n, V, I = geo.n, geo.volume, geo.inertia
    c = (2 * math.pi) ** (-n)
    eta = 2 * c * math.sqrt(V * I)
    floor = 2 * c * math.sqrt(n / (n + 2)) * unit_ball_volume(n) ** (-1 / n) * V ** ((n + 1) / n)
    return EtaInfo(eta, floor, bool(eta >= floor * (1 - rel_slack)))


def run_probe(spectrum, k_max: Optional[int] = None, pad_factor: float = 4,
              moment_slack: float = 0.02) -> ProbeReport:
    """Every probe check for ``k = 1..k_max`` on one clamped spectrum."""
    table = transform_eigenfunctions(spectrum, pad_factor=pad_factor, count=k_max)
    k_max = table.size
    report = ProbeReport()
    parse = table.parseval()
    err = np.abs(parse - 1)
    report.add(CheckResult("parseval", bool(err.max() <= 1e-10), float(1e-10 - err.max()),
                           [int(np.argmax(err))], {"values": parse.tolist()}))
    report.add(*energy_identity(table, spectrum))
    for k in range(1, k_max + 1):
        for res in bessel_check(table, k) + mass_and_moment_pipeline(table, k,
                                                                     moment_slack=moment_slack):
            res.name = f"{res.name}[k={k}]"
            report.add(res)
    info = extract_eta(table.geometry, rel_slack=0.01)
    report.add(CheckResult("eta_floor", info.holds, info.eta - info.floor, None,
                           {"eta": info.eta, "floor": info.floor}))
    return report
