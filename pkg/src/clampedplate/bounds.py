"""Closed-form eigenvalue asymptotics and lower bounds.

Laplace quantities scale like ``k^(2/n)`` and plate quantities like
``k^(4/n)``; for ``k > 1e9`` the powers are formed in logarithms.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .geometry import GeometrySummary, unit_ball_volume

__all__ = [
    "BoundInputs",
    "BoundReport",
    "weyl_value",
    "laplace_lower_bound",
    "plate_lower_bound",
    "plate_coefficients",
    "inertia_lower_bound",
    "neumann_trace_check",
    "build_report",
]

LOG_THRESHOLD = 1e9

PLATE_BOUNDS = ("weyl_mean", "levine_protter", "theorem", "corollary")
LAPLACE_BOUNDS = ("weyl_mean", "polya", "li_yau_mean", "li_yau_kth", "melas_mean")
# bounds compared with the k-th eigenvalue rather than the running mean
KTH_BOUNDS = ("polya", "li_yau_kth")
# bounds that are theorems (violations get flagged); polya is a conjecture
PROVEN = ("levine_protter", "theorem", "corollary", "li_yau_mean", "li_yau_kth", "melas_mean")


@dataclass(frozen=True)
class BoundInputs:
    n: int
    V: float
    k: int = 1
    I: Optional[float] = None
    mu: Optional[tuple] = None
    c_n: Optional[float] = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.V > 0:
            raise ValueError("V must be positive")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.I is not None and not self.I > 0:
            raise ValueError("I must be positive")
        if self.mu is not None:
            mu = tuple(float(m) for m in self.mu)
            if len(mu) != self.n or any(not m > 0 for m in mu) or list(mu) != sorted(mu):
                raise ValueError(f"mu must hold {self.n} positive ascending values")
            object.__setattr__(self, "mu", mu)


def _kpow(k, p):
    """``k**p``, via logs for very large k."""
    if k > LOG_THRESHOLD:
        try:
            return math.exp(p * math.log(k))
        except OverflowError:
            return math.inf
    return float(k) ** p


def _laplace_weyl(n, V, k):
    # 4 pi^2 (B_n V)^(-2/n) k^(2/n)
    return 4 * math.pi**2 * (unit_ball_volume(n) * V) ** (-2.0 / n) * _kpow(k, 2.0 / n)


def _plate_weyl(n, V, k):
    return 16 * math.pi**4 * (unit_ball_volume(n) * V) ** (-4.0 / n) * _kpow(k, 4.0 / n)


def weyl_value(problem: str, mode: str, n: int, V: float, k: int) -> float:
    """Leading Weyl term for ``lambda_k`` / ``Gamma_k`` (``mode="kth"``) or their mean."""
    if problem == "laplace":
        base, factor = _laplace_weyl(n, V, k), n / (n + 2)
    elif problem == "plate":
        base, factor = _plate_weyl(n, V, k), n / (n + 4)
    else:
        raise ValueError(f"problem must be 'laplace' or 'plate', got {problem!r}")
    if mode == "kth":
        return base
    if mode == "mean":
        return factor * base
    raise ValueError(f"mode must be 'kth' or 'mean', got {mode!r}")


def laplace_lower_bound(kind: str, inputs: BoundInputs) -> float:
    """Polya, Li-Yau (mean and k-th) and Melas bounds for Dirichlet eigenvalues."""
    n, V, k = inputs.n, inputs.V, inputs.k
    polya = _laplace_weyl(n, V, k)
    if kind == "polya":
        return polya
    if kind in ("li_yau_mean", "li_yau_kth"):
        return n / (n + 2) * polya
    if kind == "melas_mean":
        if inputs.c_n is None:
            raise ValueError("melas_mean needs the constant c_n")
        if inputs.I is None:
            raise ValueError("melas_mean needs the moment of inertia I")
        return n / (n + 2) * polya + inputs.c_n * V / inputs.I
    raise ValueError(f"unknown Laplace bound {kind!r}")


def plate_coefficients(n: int) -> tuple:
    """The two lower-order coefficients of the improved plate bound."""
    c2 = (n + 2) / (12 * n * (n + 4)) - 1 / (1152 * n**2 * (n + 4))
    c3 = 1 / (576 * n * (n + 4)) - 1 / (27648 * n**2 * (n + 2) * (n + 4))
    return c2, c3


def _improved(n, V, k, ratio):
    c2, c3 = plate_coefficients(n)
    lp = n / (n + 4) * _plate_weyl(n, V, k)
    return lp + c2 * ratio * (n / (n + 2)) * _laplace_weyl(n, V, k) + c3 * ratio**2


def plate_lower_bound(kind: str, inputs: BoundInputs) -> float:
    """Levine-Protter bound and its two improvements for the mean of ``Gamma_1..Gamma_k``.

    ``theorem`` uses ``V/I``; ``corollary`` uses ``1 / sum(1/mu_i)`` with the
    first ``n`` nonzero Neumann eigenvalues ``mu``.
    """
    n, V, k = inputs.n, inputs.V, inputs.k
    if kind == "levine_protter":
        return n / (n + 4) * _plate_weyl(n, V, k)
    if kind == "theorem":
        if inputs.I is None:
            raise ValueError("theorem bound needs the moment of inertia I")
        return _improved(n, V, k, V / inputs.I)
    if kind == "corollary":
        if inputs.mu is None:
            raise ValueError("corollary bound needs n Neumann eigenvalues mu")
        return _improved(n, V, k, 1.0 / sum(1.0 / m for m in inputs.mu))
    raise ValueError(f"unknown plate bound {kind!r}")


def inertia_lower_bound(n: int, V: float) -> float:
    """Moment of inertia of the ball with volume ``V``."""
    if not V > 0:
        raise ValueError("V must be positive")
    return n / (n + 2) * V * (V / unit_ball_volume(n)) ** (2.0 / n)


def neumann_trace_check(mu: Sequence[float], V: float, I: float) -> tuple:
    """``(sum 1/mu_i, I/V, holds)``."""
    mu = [float(m) for m in mu]
    if not mu or any(not m > 0 for m in mu):
        raise ValueError("Neumann eigenvalues must be strictly positive")
    lhs = sum(1.0 / m for m in mu)
    rhs = I / V
    return lhs, rhs, bool(lhs >= rhs)


# ---------------------------------------------------------------------------
# reports


@dataclass
class BoundReport:
    """Per-k table of eigenvalue means against bound values.

    ``rows[i]`` maps ``"k"``, ``"kth"``, ``"mean"`` and every bound id to a
    float, plus ``"margin_<id>"`` for each bound.  The margin is
    ``mean - bound`` (``kth - bound`` for per-eigenvalue bounds).
    """

    problem: str
    bounds: tuple
    rows: list
    meta: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)

    def column(self, name: str) -> np.ndarray:
        return np.array([r[name] for r in self.rows])

    @property
    def ok(self) -> bool:
        return not self.violations

    def header(self) -> list:
        cols = ["k", "kth", "mean", *self.bounds]
        return cols + [f"margin_{b}" for b in self.bounds]

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        for key, val in self.meta.items():
            buf.write(f"# {key}={val}\n")
        w = csv.writer(buf, lineterminator="\n")
        cols = self.header()
        w.writerow(cols)
        for r in self.rows:
            w.writerow([str(r["k"])] + [f"{r[c]:.12g}" for c in cols[1:]])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def build_report(spectrum, geo: GeometrySummary, bounds: Optional[Sequence[str]] = None,
                 neumann=None, c_n: Optional[float] = None,
                 slack: float = 0.01) -> BoundReport:
    """Evaluate bounds for every ``k <= len(spectrum)``.

    Parameters
    ----------
    spectrum : Spectrum
        Clamped plate spectrum (plate bounds) or Dirichlet spectrum
        (Laplace bounds).
    geo : GeometrySummary
        Raster geometry supplying ``V`` and ``I``.
    bounds : sequence of str, optional
        Bound ids; default all that the available data allow.
    neumann : Spectrum or sequence of float, optional
        Neumann spectrum (or the first ``n`` nonzero eigenvalues) for the
        corollary column.
    c_n : float, optional
        Melas constant; the ``melas_mean`` column needs it.
    slack : float
        Relative tolerance before a negative margin of a proven bound is
        flagged as a violation.
    """
    tag = spectrum.problem_tag
    n = geo.n
    if tag == "clamped_bilaplacian":
        allowed = PLATE_BOUNDS
        default = [b for b in allowed if b != "corollary" or neumann is not None]
    elif tag == "dirichlet_laplacian":
        allowed = LAPLACE_BOUNDS
        default = [b for b in allowed if b != "melas_mean" or c_n is not None]
    else:
        raise ValueError(f"no bounds defined for problem {tag!r}")
    bounds = tuple(default if bounds is None else bounds)
    bad = [b for b in bounds if b not in allowed]
    if bad:
        raise ValueError(f"bounds {bad} do not apply to {tag}")
    if "corollary" in bounds and neumann is None:
        raise ValueError("corollary requested without Neumann data")
    if "melas_mean" in bounds and c_n is None:
        raise ValueError("melas_mean requested without c_n")

    mu = None
    if neumann is not None:
        if hasattr(neumann, "problem_tag"):
            if neumann.problem_tag != "neumann_laplacian":
                raise ValueError("companion spectrum must be a Neumann spectrum")
            mu = tuple(neumann.nonzero(n))
        else:
            mu = tuple(sorted(float(m) for m in neumann))[:n]

    lam = np.asarray(spectrum.eigenvalues, dtype=float)
    means = np.cumsum(lam) / np.arange(1, len(lam) + 1)
    rows, violations = [], []
    for k in range(1, len(lam) + 1):
        inp = BoundInputs(n=n, V=geo.volume, k=k, I=geo.inertia, mu=mu, c_n=c_n)
        row = {"k": k, "kth": float(lam[k - 1]), "mean": float(means[k - 1])}
        for b in bounds:
            if b == "weyl_mean":
                val = weyl_value("plate" if allowed is PLATE_BOUNDS else "laplace", "mean",
                                 n, geo.volume, k)
            elif allowed is PLATE_BOUNDS:
                val = plate_lower_bound(b, inp)
            else:
                val = laplace_lower_bound(b, inp)
            row[b] = val
            target = row["kth"] if b in KTH_BOUNDS else row["mean"]
            row[f"margin_{b}"] = target - val
            if b in PROVEN and target - val < -slack * abs(val):
                violations.append((k, b, target - val))
        rows.append(row)
    meta = {"problem": tag, "domain": spectrum.domain_ref, "h": spectrum.h, "n": n,
            "V": geo.volume, "I": geo.inertia, "slack": slack}
    if mu is not None:
        meta["mu"] = " ".join(f"{m:.12g}" for m in mu)
    if c_n is not None:
        meta["c_n"] = c_n
    return BoundReport(tag, bounds, rows, meta, violations)
