"""Symmetric decreasing rearrangement of nonnegative grid functions.

The rearrangement of a grid function is obtained by sorting its cell
values: the j-th largest value sits on the shell whose outer radius
``s_j`` satisfies ``B_n s_j^n = j h^n``.  Equimeasurability is therefore
exact, not approximate.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .geometry import RasterDomain, unit_ball_volume

__all__ = [
    "GridFunction",
    "RadialProfile",
    "distribution_function",
    "decreasing_rearrangement",
    "radial_moment",
    "weighted_moment",
]


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Nonnegative values on a uniform lattice with spacing ``h``.

    Cell ``idx`` has center ``origin + h * idx``.
    """

    values: np.ndarray
    h: float
    origin: tuple

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if not np.all(np.isfinite(v)):
            raise ValueError("grid function values must be finite")
        if np.any(v < 0):
            raise ValueError("grid function values must be nonnegative")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))
        if len(self.origin) != v.ndim:
            raise ValueError("origin must match the array dimension")

    @property
    def n(self) -> int:
        return self.values.ndim

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    def coordinates(self) -> list:
        axes = [o + self.h * np.arange(m) for o, m in zip(self.origin, self.values.shape)]
        return np.meshgrid(*axes, indexing="ij")

    def radius(self) -> np.ndarray:
        return np.sqrt(sum(c**2 for c in self.coordinates()))

    def mass(self) -> float:
        return float(self.cell_volume * self.values.sum())

    @classmethod
    def on_domain(cls, d: RasterDomain, f: Callable, center=None) -> "GridFunction":
        """Sample ``f(*coords)`` on the inside cells of ``d`` (zero outside).

        With ``center`` given, coordinates are shifted so that ``center``
        becomes the origin.
        """
        shift = np.zeros(d.n) if center is None else np.asarray(center, dtype=float)
        origin = np.asarray(d.origin) - shift
        axes = [origin[a] + d.h * np.arange(d.grid_shape[a]) for a in range(d.n)]
        vals = np.asarray(f(*np.meshgrid(*axes, indexing="ij")), dtype=float)
        vals = np.broadcast_to(vals, d.grid_shape)
        return cls(np.where(d.mask, vals, 0.0), d.h, tuple(origin))


@dataclass(frozen=True, eq=False)
class RadialProfile:
    """Non-increasing radial profile ``g`` sampled at ascending radii.

    ``shells=True`` marks a profile that is exactly piecewise constant,
    ``g = g[j]`` on ``(s[j-1], s[j]]``, as produced by rearranging lattice
    data; moments of such profiles are integrated exactly.
    """

    s: np.ndarray
    g: np.ndarray
    n: int
    tau_bound: Optional[float] = None
    shells: bool = False

    def __post_init__(self):
        s = np.asarray(self.s, dtype=float)
        g = np.asarray(self.g, dtype=float)
        if s.shape != g.shape or s.ndim != 1 or len(s) < 1:
            raise ValueError("s and g must be 1-d arrays of equal length")
        if np.any(np.diff(s) < 0):
            raise ValueError("radii must be ascending")
        if np.any(np.diff(g) > 0):
            raise ValueError("profile must be non-increasing")
        if np.any(g < 0):
            raise ValueError("profile must be nonnegative")
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "g", g)
        if self.tau_bound is not None and len(s) > 1:
            if self.slopes().min() < -self.tau_bound - 1e-12:
                raise ValueError("profile slope exceeds the supplied tau bound")

    def __call__(self, r):
        return np.interp(r, self.s, self.g, right=0.0)

    @property
    def peak(self) -> float:
        return float(self.g[0])

    def slopes(self, window: float = 0.0) -> np.ndarray:
        """Difference quotients ``(g(b) - g(a)) / (b - a)``.

        With ``window == 0`` these are one-sided differences between
        consecutive distinct radii.  With ``window > 0`` each sample ``a`` is
        paired with the first sample ``b`` with ``b - a >= window``.
        """
        s, g = self.s, self.g
        if window <= 0:
            ds = np.diff(s)
            keep = ds > 0
            return np.diff(g)[keep] / ds[keep]
        j = np.searchsorted(s, s + window, side="left")
        ok = j < len(s)
        i = np.flatnonzero(ok)
        j = j[ok]
        return (g[j] - g[i]) / (s[j] - s[i])

    def level_measure(self, t: float) -> float:
        """Volume ``B_n r^n`` of the super-level ball ``{g > t}`` for shell profiles."""
        above = np.flatnonzero(self.g > t)
        if len(above) == 0:
            return 0.0
        return unit_ball_volume(self.n) * self.s[above[-1]] ** self.n

    def to_csv(self, path) -> None:
        with open(path, "w") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["s", "g"])
            for a, b in zip(self.s, self.g):
                w.writerow([f"{a:.12g}", f"{b:.12g}"])


def distribution_function(f: GridFunction, t: float) -> float:
    """Measure of ``{f > t}``: ``h^n`` times the number of cells above ``t``."""
    if t < 0:
        raise ValueError("level t must be nonnegative")
    return f.cell_volume * int(np.count_nonzero(f.values > t))


def decreasing_rearrangement(f: GridFunction, include_zeros: bool = False) -> RadialProfile:
    """Radial profile of the symmetric decreasing rearrangement of ``f``.

    Sample ``j`` (1-based, over the sorted positive values) sits at the
    outer radius of the shell of volume ``j h^n``; a leading sample at
    ``s = 0`` repeats the maximum so quadratures start at the center.
    """
    vals = np.sort(f.values.ravel())[::-1]
    if not include_zeros:
        vals = vals[vals > 0]
    if len(vals) == 0:
        return RadialProfile(np.array([0.0]), np.array([0.0]), f.n)
    j = np.arange(1, len(vals) + 1)
    s = (j * f.cell_volume / unit_ball_volume(f.n)) ** (1.0 / f.n)
    return RadialProfile(np.concatenate([[0.0], s]), np.concatenate([[vals[0]], vals]), f.n,
                         shells=True)


def radial_moment(p: RadialProfile, power: float = 0) -> float:
    """``n B_n int s^(n-1+power) g(s) ds``.

    Shell profiles are integrated exactly; other profiles use the
    trapezoid rule over the samples.
    """
    nb = p.n * unit_ball_volume(p.n)
    if p.shells:
        q = p.n + power
        return float(nb * np.sum(p.g[1:] * np.diff(p.s**q)) / q)
    w = p.s ** (p.n - 1 + power) * p.g
    return float(nb * np.trapezoid(w, p.s))


def weighted_moment(f: GridFunction, power: float = 4) -> float:
    """``h^n sum |x|^power f(x)`` with ``x`` measured from the coordinate origin."""
    return float(f.cell_volume * np.sum(f.radius() ** power * f.values))
