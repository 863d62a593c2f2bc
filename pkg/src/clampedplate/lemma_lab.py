"""Numerical checks of the moment lemma behind the improved plate bound.

Profiles are piecewise linear, so every moment ``int_0^inf s^p psi(s) ds``
has a closed form and the lemma's inequalities can be checked with no
quadrature error.  Smooth profiles go through :func:`verify_lemma_function`
which integrates adaptively.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass
from typing import Callable, Optional

import numpy as np
from scipy import integrate

from .bounds import plate_coefficients
from .geometry import unit_ball_volume

__all__ = [
    "ProfileSpec",
    "LemmaVerdict",
    "HypothesisError",
    "profile_moment",
    "hypothesis_ratio",
    "melas_step_rhs",
    "lemma_rhs",
    "verify_lemma_case",
    "verify_lemma_function",
    "random_profile",
    "run_suite",
    "f_profile",
    "f_value",
    "f_derivative",
    "eta_floor",
    "theorem_from_f",
    "dimension_constants",
]


class HypothesisError(ValueError):
    """The profile does not satisfy the lemma's hypothesis."""


@dataclass(frozen=True, eq=False)
class ProfileSpec:
    """Piecewise-linear, non-increasing profile vanishing from the last knot on."""

    knots: np.ndarray
    values: np.ndarray
    b: float
    eta: float
    d: Optional[float] = None

    def __post_init__(self):
        s = np.asarray(self.knots, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.ndim != 1 or s.shape != v.shape or len(s) < 2:
            raise ValueError("knots and values must be 1-d of equal length >= 2")
        if s[0] != 0 or np.any(np.diff(s) <= 0):
            raise ValueError("knots must start at 0 and increase strictly")
        if v[-1] != 0:
            raise ValueError("profile must reach 0 at the last knot")
        if v[0] <= 0:
            raise ValueError("profile must be positive at 0")
        if self.b < 1 or self.eta <= 0:
            raise ValueError("need b >= 1 and eta > 0")
        slopes = np.diff(v) / np.diff(s)
        if np.any(slopes > 0) or np.any(slopes < -self.eta * (1 + 1e-12)):
            raise ValueError("slopes must lie in [-eta, 0]")
        object.__setattr__(self, "knots", s)
        object.__setattr__(self, "values", v)

    @property
    def psi0(self) -> float:
        return float(self.values[0])

    @property
    def A(self) -> float:
        return profile_moment(self, self.b - 1)

    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.knots)

    def __call__(self, s):
        return np.interp(s, self.knots, self.values, right=0.0)


@dataclass(frozen=True)
class LemmaVerdict:
    lhs_25: float
    rhs_25: float
    lhs_26: float
    rhs_26: float
    holds_25: bool
    holds_26: bool
    ratio: float
    d: float
    b: float
    eta: float
    seed: Optional[int] = None

    def to_json(self) -> str:
        return json.dumps(asdict(self))


def profile_moment(p: ProfileSpec, power: float) -> float:
    """``int_0^inf s^power psi(s) ds`` in closed form (any real ``power > -1``)."""
    s, v = p.knots, p.values
    a, b = s[:-1], s[1:]
    va, vb = v[:-1], v[1:]
    c = (vb - va) / (b - a)
    q1, q2 = power + 1.0, power + 2.0
    # psi = (va - c a) + c s on [a, b]
    seg = (va - c * a) * (b**q1 - a**q1) / q1 + c * (b**q2 - a**q2) / q2
    return float(math.fsum(seg))


def _ratio(psi0, b, eta, A):
    if not A > 0:
        raise ValueError("A must be positive")
    return psi0 ** ((2 * b + 2) / b) / (6 * b * eta**2 * (b * A) ** (2 / b))


def hypothesis_ratio(p: ProfileSpec) -> float:
    """``psi(0)^((2b+2)/b) / (6 b eta^2 (b A)^(2/b))``; the lemma needs it below ``d < 1``."""
    return _ratio(p.psi0, p.b, p.eta, p.A)


def melas_step_rhs(b, eta, A, psi0) -> float:
    """Lower bound for ``int s^(b+1) psi`` used inside the lemma's proof."""
    return ((b * A) ** ((b + 2) / b) * psi0 ** (-2 / b) / (b + 2)
            + A * psi0**2 / (6 * (b + 2) * eta**2))


def lemma_rhs(b, eta, A, psi0, d) -> float:
    """Three-term lower bound for ``int s^(b+3) psi``."""
    t1 = (b * A) ** ((b + 4) / b) * psi0 ** (-4 / b) / (b + 4)
    c2 = 1 / (3 * b * (b + 4) * eta**2) - d / (6 * (b + 2) ** 2 * (b + 4) * eta**2)
    t2 = c2 * (b * A) ** ((b + 2) / b) * psi0 ** ((2 * b - 2) / b)
    c3 = 1 / (36 * b * (b + 4) * eta**4) - d / (36 * (b + 2) ** 2 * (b + 4) * eta**4)
    t3 = c3 * A * psi0**4
    return t1 + t2 + t3


def _verdict(lhs25, lhs26, b, eta, A, psi0, d, ratio, seed):
    r25 = lemma_rhs(b, eta, A, psi0, d)
    r26 = melas_step_rhs(b, eta, A, psi0)
    return LemmaVerdict(lhs25, r25, lhs26, r26,
                        bool(lhs25 >= r25 * (1 - 1e-12)), bool(lhs26 >= r26 * (1 - 1e-12)),
                        ratio, d, b, eta, seed)


def _choose_d(ratio, d):
    if d is None:
        if ratio >= 1:
            raise HypothesisError(f"hypothesis ratio {ratio:.6g} >= 1")
        return 0.5 * (ratio + 1)
    if not ratio < d < 1:
        raise HypothesisError(f"need ratio {ratio:.6g} < d={d:.6g} < 1")
    return d


def verify_lemma_case(p: ProfileSpec, seed: Optional[int] = None) -> LemmaVerdict:
    """Compare both moment inequalities for one admissible profile.

    Raises :class:`HypothesisError` when the profile is not admissible.
    """
    A = p.A
    ratio = _ratio(p.psi0, p.b, p.eta, A)
    d = _choose_d(ratio, p.d)
    return _verdict(profile_moment(p, p.b + 3), profile_moment(p, p.b + 1),
                    p.b, p.eta, A, p.psi0, d, ratio, seed)


def verify_lemma_function(psi: Callable, b: float, eta: float, upper: float = np.inf,
                          d: Optional[float] = None) -> LemmaVerdict:
    """Same checks for a smooth profile via adaptive quadrature on ``[0, upper]``."""
    def mom(p):
        val, _ = integrate.quad(lambda s: s**p * psi(s), 0, upper, epsabs=0,
                                epsrel=1e-13, limit=400)
        return val
    A = mom(b - 1)
    psi0 = float(psi(0.0))
    ratio = _ratio(psi0, b, eta, A)
    d = _choose_d(ratio, d)
    return _verdict(mom(b + 3), mom(b + 1), b, eta, A, psi0, d, ratio, None)


def random_profile(rng: np.random.Generator, max_tries: int = 1000) -> ProfileSpec:
    """Admissible profile with 3-12 knots on [0, 10], rejection-sampled on the ratio."""
    for _ in range(max_tries):
        m = int(rng.integers(3, 13))
        end = rng.uniform(0.05, 10.0)
        inner = np.sort(rng.uniform(0.0, end, m - 2))
        knots = np.concatenate([[0.0], inner, [end]])
        if np.any(np.diff(knots) <= 0):
            continue
        b = float(rng.integers(1, 5)) if rng.random() < 0.5 else float(rng.uniform(1.0, 6.0))
        eta = float(np.exp(rng.uniform(np.log(0.05), np.log(20.0))))
        slopes = -eta * rng.random(m - 1)
        if rng.random() < 0.3:
            # flat stretches, as produced by ties in rearranged data
            slopes[rng.random(m - 1) < 0.4] = 0.0
        if not np.any(slopes < 0):
            continue
        drops = -slopes * np.diff(knots)
        values = np.concatenate([np.cumsum(drops[::-1])[::-1], [0.0]])
        if values[0] <= 0:
            continue
        p = ProfileSpec(knots, values, b, eta)
        ratio = hypothesis_ratio(p)
        if ratio < 1:
            return ProfileSpec(knots, values, b, eta, 0.5 * (ratio + 1))
    raise RuntimeError("could not draw an admissible profile")


def run_suite(count: int = 1000, seed: int = 42) -> tuple:
    """``(verdicts, summary)`` for ``count`` seeded random profiles."""
    rng = np.random.default_rng(seed)
    verdicts = [verify_lemma_case(random_profile(rng), seed=seed) for _ in range(count)]
    passed = sum(v.holds_25 and v.holds_26 for v in verdicts)
    summary = {"summary": True, "cases": count, "passed": passed,
               "holds_25": sum(v.holds_25 for v in verdicts),
               "holds_26": sum(v.holds_26 for v in verdicts), "seed": seed}
    return verdicts, summary


# ---------------------------------------------------------------------------
# the function F and the dimensional constants


def _f_coefficients(n, k, eta):
    B = unit_ball_volume(n)
    a1 = n / (n + 4) * B ** (-4 / n) * k ** ((n + 4) / n)
    a2 = ((1 / (3 * (n + 4)) - 1 / (288 * n * (n + 2) * (n + 4))) / eta**2
          * k ** ((n + 2) / n) * B ** (-2 / n))
    a3 = (1 / (36 * n * (n + 4)) - 1 / (1728 * n**2 * (n + 2) * (n + 4))) / eta**4 * k
    return a1, a2, a3


def f_value(t, n, k, eta):
    """``F(t)``: the lemma bound at ``psi(0) = t`` for the rearranged Fourier mass."""
    a1, a2, a3 = _f_coefficients(n, k, eta)
    t = np.asarray(t, dtype=float)
    return a1 * t ** (-4 / n) + a2 * t ** ((2 * n - 2) / n) + a3 * t**4


def f_derivative(t, n, k, eta):
    a1, a2, a3 = _f_coefficients(n, k, eta)
    t = np.asarray(t, dtype=float)
    return (-4 / n) * a1 * t ** (-4 / n - 1) + (2 * n - 2) / n * a2 * t ** ((n - 2) / n) \
        + 4 * a3 * t**3


def eta_floor(n, V) -> float:
    """Smallest admissible ``eta`` for ``f_profile``: ``(2 pi)^-n B_n^(-1/n) V^((n+1)/n)``."""
    return (2 * math.pi) ** (-n) * unit_ball_volume(n) ** (-1 / n) * V ** ((n + 1) / n)


@dataclass(frozen=True, eq=False)
class FProfile:
    t: np.ndarray
    F: np.ndarray
    dF: np.ndarray
    monotone_decreasing: bool
    derivative_nonpositive: bool
    condition_holds: bool


def derivative_condition(n, k, V) -> bool:
    """Sufficient condition for ``F' <= 0`` on the whole interval, in reduced form."""
    B = unit_ball_volume(n)
    lhs = ((n - 1) / (6 * n) - (n - 1) / (576 * n**2 * (n + 2))) * (2 * math.pi) ** (-2) \
        * k ** (2 / n) \
        + (1 / (36 * n) - 1 / (1728 * n**2 * (n + 2))) * (2 * math.pi) ** (-4) * B ** (4 / n)
    return bool(lhs <= B ** (-4 / n) * k ** (4 / n))


def f_profile(n: int, k: int, eta: float, V: float, num: int = 1000,
              span: float = 1e-4) -> FProfile:
    """Sample ``F`` at ``num`` log-spaced points of ``(0, (2 pi)^-n V]``."""
    floor = eta_floor(n, V)
    if eta < floor * (1 - 1e-12):
        raise ValueError(f"eta={eta:.6g} below the admissible floor {floor:.6g}")
    if k < 1:
        raise ValueError("k must be >= 1")
    t_max = (2 * math.pi) ** (-n) * V
    t = np.geomspace(span * t_max, t_max, num)
    F = f_value(t, n, k, eta)
    dF = f_derivative(t, n, k, eta)
    return FProfile(t, F, dF, bool(np.all(np.diff(F) <= 0)), bool(np.all(dF <= 0)),
                    derivative_condition(n, k, V))


def theorem_from_f(n, k, V, I) -> float:
    """``F((2 pi)^-n V) / k`` with ``eta = 2 (2 pi)^-n sqrt(V I)``."""
    eta = 2 * (2 * math.pi) ** (-n) * math.sqrt(V * I)
    return float(f_value((2 * math.pi) ** (-n) * V, n, k, eta)) / k


@dataclass(frozen=True)
class DimensionConstants:
    n: int
    ball_ratio: float
    d_value: float
    c2: float
    c3: float
    all_checks: bool


def dimension_constants(n: int) -> DimensionConstants:
    if not 1 <= n <= 64:
        raise ValueError("n must lie in 1..64")
    B = unit_ball_volume(n)
    ball_ratio = B ** (4 / n) / (2 * math.pi) ** 2
    d_value = (n + 2) / (48 * n**2)
    c2, c3 = plate_coefficients(n)
    ok = ball_ratio < 0.5 and d_value < 1 and c2 > 0 and c3 > 0
    return DimensionConstants(n, ball_ratio, d_value, c2, c3, bool(ok))
