"""Rasterized domains and their elementary geometry.

A domain is stored as a boolean mask over a uniform lattice of cell
centers.  A cell belongs to the domain iff its center lies strictly inside
the ideal shape.  Every mask keeps at least one layer of outside cells on
each face so that stencils never run off the array.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "RasterDomain",
    "GeometrySummary",
    "build_domain",
    "parse_shape",
    "summarize",
    "unit_ball_volume",
    "read_mask",
    "write_mask",
    "SHAPES",
]


class DomainError(ValueError):
    """Raised for empty, unknown or malformed domain descriptions."""


@dataclass(frozen=True, eq=False)
class RasterDomain:
    """Indicator of a bounded open set sampled at cell centers.

    Attributes
    ----------
    n : int
        Spatial dimension.
    h : float
        Grid spacing.
    origin : tuple of float
        Coordinates of the center of cell ``(0, ..., 0)``.
    mask : ndarray of bool
        ``True`` where the cell center is inside the domain.
    shape_tag : str
        Human readable provenance, e.g. ``"disk:r=1"``.
    """

    n: int
    h: float
    origin: tuple
    mask: np.ndarray = field(repr=False)
    shape_tag: str = "mask"

    def __post_init__(self):
        mask = np.array(self.mask, dtype=bool)
        if mask.ndim != self.n:
            raise DomainError(f"mask has {mask.ndim} axes, expected n={self.n}")
        if not self.h > 0:
            raise DomainError("grid spacing h must be positive")
        if len(self.origin) != self.n:
            raise DomainError("origin must have n coordinates")
        if not mask.any():
            raise DomainError(f"empty mask for {self.shape_tag!r}: shape smaller than one cell")
        for axis in range(self.n):
            if mask.shape[axis] < 3:
                raise DomainError("mask must carry an outside layer on every face")
            first = np.take(mask, 0, axis=axis)
            last = np.take(mask, -1, axis=axis)
            if first.any() or last.any():
                raise DomainError("mask must carry an outside layer on every face")
        mask.setflags(write=False)
        object.__setattr__(self, "mask", mask)
        object.__setattr__(self, "origin", tuple(float(o) for o in self.origin))

    @property
    def cell_count(self) -> int:
        return int(self.mask.sum())

    @property
    def grid_shape(self) -> tuple:
        return self.mask.shape

    @property
    def cell_volume(self) -> float:
        return self.h**self.n

    def axes(self) -> list:
        """Cell-center coordinates along each axis."""
        return [self.origin[a] + self.h * np.arange(self.mask.shape[a]) for a in range(self.n)]

    def inside_indices(self) -> np.ndarray:
        """Flat (C-order) indices of inside cells; this is the unknown ordering."""
        return np.flatnonzero(self.mask.ravel())

    def cell_centers(self) -> np.ndarray:
        """``(cell_count, n)`` array of inside cell centers, lexicographic order."""
        idx = np.argwhere(self.mask)
        return np.asarray(self.origin) + self.h * idx

    def bounding_box(self) -> tuple:
        """Lower and upper corners of the lattice box (cell faces)."""
        lo = np.asarray(self.origin) - 0.5 * self.h
        hi = lo + self.h * np.asarray(self.mask.shape)
        return lo, hi

    def translated(self, shift: Sequence[float]) -> "RasterDomain":
        shift = np.asarray(shift, dtype=float)
        return RasterDomain(self.n, self.h, tuple(np.asarray(self.origin) + shift),
                            self.mask, self.shape_tag)

    def padded(self, layers: int) -> "RasterDomain":
        """Same domain with ``layers`` extra outside cells on every face."""
        mask = np.pad(self.mask, layers)
        origin = tuple(o - layers * self.h for o in self.origin)
        return RasterDomain(self.n, self.h, origin, mask, self.shape_tag)

    def scaled(self, s: float) -> "RasterDomain":
        """Dilation about the coordinate origin; the mask is reused as is."""
        return RasterDomain(self.n, self.h * s, tuple(s * o for o in self.origin),
                            self.mask, f"{self.shape_tag}*{s:g}")


@dataclass(frozen=True)
class GeometrySummary:
    volume: float
    centroid: tuple
    inertia: float
    cell_count: int
    n: int


def unit_ball_volume(n: int) -> float:
    """Volume of the unit ball in R^n, ``2 pi^(n/2) / (n Gamma(n/2))``."""
    if int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    n = int(n)
    return 2.0 * math.pi ** (n / 2) / (n * math.gamma(n / 2))


def summarize(d: RasterDomain) -> GeometrySummary:
    """Volume, centroid and moment of inertia about the centroid."""
    x = d.cell_centers()
    w = d.cell_volume
    centroid = x.mean(axis=0)
    r2 = ((x - centroid) ** 2).sum(axis=1)
    return GeometrySummary(
        volume=d.cell_count * w,
        centroid=tuple(float(c) for c in centroid),
        inertia=float(w * r2.sum()),
        cell_count=d.cell_count,
        n=d.n,
    )


def second_moment_about(d: RasterDomain, a: Sequence[float]) -> float:
    """``h^n sum |x - a|^2`` over inside cells."""
    x = d.cell_centers()
    return float(d.cell_volume * ((x - np.asarray(a)) ** 2).sum())


# ---------------------------------------------------------------------------
# builtin shapes
#
# Each factory returns (n, lower corner, upper corner, inside predicate).  The
# predicate takes coordinate arrays and must use strict inequalities.


def _disk(r=1.0, cx=0.0, cy=0.0):
    def inside(x, y):
        return (x - cx) ** 2 + (y - cy) ** 2 < r * r
    return 2, (cx - r, cy - r), (cx + r, cy + r), inside


def _ellipse(a=1.0, b=0.5, cx=0.0, cy=0.0):
    def inside(x, y):
        return ((x - cx) / a) ** 2 + ((y - cy) / b) ** 2 < 1.0
    return 2, (cx - a, cy - b), (cx + a, cy + b), inside


def _annulus(r1=0.5, r2=1.0, cx=0.0, cy=0.0):
    if not 0 <= r1 < r2:
        raise DomainError("annulus needs 0 <= r1 < r2")

    def inside(x, y):
        q = (x - cx) ** 2 + (y - cy) ** 2
        return (q > r1 * r1) & (q < r2 * r2)
    return 2, (cx - r2, cy - r2), (cx + r2, cy + r2), inside


def _rect(w=1.0, h=1.0, x0=0.0, y0=0.0):
    def inside(x, y):
        return (x > x0) & (x < x0 + w) & (y > y0) & (y < y0 + h)
    return 2, (x0, y0), (x0 + w, y0 + h), inside


def _square(a=1.0, x0=0.0, y0=0.0):
    return _rect(w=a, h=a, x0=x0, y0=y0)


def _lshape(a=1.0, b=0.5):
    # [0,a]^2 with the corner square [b,a]^2 removed
    if not 0 < b < a:
        raise DomainError("lshape needs 0 < b < a")

    def inside(x, y):
        big = (x > 0) & (x < a) & (y > 0) & (y < a)
        notch = (x >= b) & (y >= b)
        return big & ~notch
    return 2, (0.0, 0.0), (a, a), inside


def _ball(r=1.0, cx=0.0, cy=0.0, cz=0.0):
    def inside(x, y, z):
        return (x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2 < r * r
    return 3, (cx - r, cy - r, cz - r), (cx + r, cy + r, cz + r), inside


def _box(w=1.0, h=1.0, d=1.0):
    def inside(x, y, z):
        return (x > 0) & (x < w) & (y > 0) & (y < h) & (z > 0) & (z < d)
    return 3, (0.0, 0.0, 0.0), (w, h, d), inside


def _union(rects: Sequence[Sequence[float]]):
    rects = [tuple(float(v) for v in r) for r in rects]
    if not rects or any(len(r) != 4 or r[2] <= r[0] or r[3] <= r[1] for r in rects):
        raise DomainError("union needs rectangles given as x0,y0,x1,y1 with x1>x0, y1>y0")

    def inside(x, y):
        out = np.zeros(np.broadcast(x, y).shape, dtype=bool)
        for x0, y0, x1, y1 in rects:
            out |= (x > x0) & (x < x1) & (y > y0) & (y < y1)
        return out
    lo = (min(r[0] for r in rects), min(r[1] for r in rects))
    hi = (max(r[2] for r in rects), max(r[3] for r in rects))
    return 2, lo, hi, inside


SHAPES: dict = {
    "disk": _disk,
    "ellipse": _ellipse,
    "annulus": _annulus,
    "rect": _rect,
    "square": _square,
    "lshape": _lshape,
    "ball": _ball,
    "box": _box,
    "union": _union,
}


def parse_shape(spec: str) -> tuple:
    """Split ``"disk:r=1"`` into ``("disk", {"r": 1.0})``.

    ``union`` takes semicolon separated rectangles instead of keywords:
    ``"union:0,0,1,0.5;0,0,0.5,1"``.
    """
    name, _, rest = spec.strip().partition(":")
    name = name.strip().lower()
    if name not in SHAPES:
        raise DomainError(f"unknown shape {name!r}; known: {', '.join(sorted(SHAPES))}")
    if name == "union":
        try:
            rects = [[float(v) for v in part.split(",")] for part in rest.split(";") if part.strip()]
        except ValueError as exc:
            raise DomainError(f"bad union spec {spec!r}") from exc
        return name, {"rects": rects}
    params = {}
    for item in filter(None, (p.strip() for p in rest.split(","))):
        key, sep, val = item.partition("=")
        if not sep:
            raise DomainError(f"bad parameter {item!r} in {spec!r}")
        try:
            params[key.strip()] = float(val)
        except ValueError as exc:
            raise DomainError(f"bad value in {item!r}") from exc
    return name, params


def rasterize(inside: Callable, n: int, lo, hi, h: float, align: str = "cell",
              pad: int = 2, tag: str = "shape") -> RasterDomain:
    """Sample ``inside`` at cell centers of a lattice covering ``[lo, hi]``.

    ``align="cell"`` places cell faces on ``lo`` so the cells tile an aligned
    box exactly; ``align="node"`` places cell centers on ``lo``.
    """
    if not h > 0:
        raise DomainError("grid spacing h must be positive")
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    ext = (hi - lo) / h
    if align == "cell":
        counts = np.maximum(np.ceil(ext - 1e-9), 1).astype(int)
        start = lo + 0.5 * h
    elif align == "node":
        counts = np.floor(ext + 1e-9).astype(int) + 1
        start = lo.copy()
    else:
        raise DomainError(f"align must be 'cell' or 'node', got {align!r}")
    origin = start - pad * h
    axes = [origin[a] + h * np.arange(counts[a] + 2 * pad) for a in range(n)]
    grids = np.meshgrid(*axes, indexing="ij")
    mask = np.asarray(inside(*grids), dtype=bool)
    return RasterDomain(n, float(h), tuple(origin), mask, tag)


def build_domain(spec: str, h: float, align: str = "cell", pad: int = 2) -> RasterDomain:
    """Rasterize a builtin shape string or load a mask file.

    Parameters
    ----------
    spec : str
        ``"disk:r=1"``, ``"rect:w=1,h=2"``, ``"lshape:a=1,b=0.5"``, ... or a
        path to a mask file (optionally prefixed with ``file:``).
    h : float
        Grid spacing (ignored for mask files, which carry their own).
    align : {"cell", "node"}
        Lattice offset relative to the shape's bounding box.
    pad : int
        Number of outside layers added on every face (at least 1).
    """
    if pad < 1:
        raise DomainError("pad must be at least 1")
    path = spec[5:] if spec.startswith("file:") else spec
    if spec.startswith("file:") or (":" not in spec and Path(path).is_file()):
        return read_mask(path)
    name, params = parse_shape(spec)
    try:
        n, lo, hi, inside = SHAPES[name](**params)
    except TypeError as exc:
        raise DomainError(f"bad parameters for {name}: {exc}") from exc
    return rasterize(inside, n, lo, hi, h, align=align, pad=pad, tag=spec.strip())


# ---------------------------------------------------------------------------
# mask files


def write_mask(d: RasterDomain, path) -> None:
    """Write ``RASTER n h o1 .. on`` followed by rows of 0/1.

    Axis 0 runs down the rows; in 3D, blank lines separate slices of axis 0.
    """
    lines = ["RASTER %d %r %s" % (d.n, d.h, " ".join(repr(o) for o in d.origin))]
    m = d.mask.astype(np.uint8)
    if d.n == 2:
        lines += ["".join(map(str, row)) for row in m]
    elif d.n == 3:
        for k, plane in enumerate(m):
            if k:
                lines.append("")
            lines += ["".join(map(str, row)) for row in plane]
    else:
        raise DomainError("mask files support n = 2 or 3")
    Path(path).write_text("\n".join(lines) + "\n")


def read_mask(path) -> RasterDomain:
    text = Path(path).read_text().splitlines()
    if not text:
        raise DomainError(f"empty mask file {path}")
    head = text[0].split()
    try:
        if head[0] != "RASTER":
            raise ValueError
        n = int(head[1])
        h = float(head[2])
        origin = tuple(float(v) for v in head[3:])
    except (ValueError, IndexError) as exc:
        raise DomainError(f"malformed mask header in {path}") from exc
    if len(origin) != n or n not in (2, 3):
        raise DomainError(f"malformed mask header in {path}")

    def parse_rows(rows):
        if any(set(r) - {"0", "1"} for r in rows) or len({len(r) for r in rows}) != 1:
            raise DomainError(f"malformed mask rows in {path}")
        return np.array([[c == "1" for c in r] for r in rows], dtype=bool)

    body = [r.strip() for r in text[1:]]
    if n == 2:
        mask = parse_rows([r for r in body if r])
    else:
        planes, cur = [], []
        for r in body + [""]:
            if r:
                cur.append(r)
            elif cur:
                planes.append(parse_rows(cur))
                cur = []
        if not planes or len({p.shape for p in planes}) != 1:
            raise DomainError(f"malformed mask slices in {path}")
        mask = np.stack(planes)
    return RasterDomain(n, h, origin, mask, f"file:{Path(path).name}")
