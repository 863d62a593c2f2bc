import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from clampedplate.geometry import build_domain
from clampedplate.rearrangement import (
    GridFunction,
    RadialProfile,
    decreasing_rearrangement,
    distribution_function,
    radial_moment,
    weighted_moment,
)

# frozen calibration of the discrete Lipschitz propagation:
# slope over an s-window of LIP_WINDOW is >= -tau (1 + LIP_C h)
LIP_WINDOW = 0.05
LIP_C = 16.0


def on(spec, h, f, center=None):
    return GridFunction.on_domain(build_domain(spec, h), f, center=center)


def cone(x, y):
    return np.maximum(0.0, 1 - np.hypot(x, y))


def test_distribution_examples():
    f = on("disk:r=1", 1 / 128, lambda x, y: 1.0)
    assert distribution_function(f, 0.5) == pytest.approx(math.pi, abs=0.01)
    g = on("disk:r=1", 1 / 128, cone)
    assert distribution_function(g, 0.25) == pytest.approx(math.pi * 0.75**2, abs=0.01)
    assert distribution_function(g, g.values.max()) == 0.0
    with pytest.raises(ValueError):
        distribution_function(g, -1)


def test_rejects_negative_values():
    with pytest.raises(ValueError, match="nonnegative"):
        GridFunction(np.array([[1.0, -1.0]]), 0.1, (0, 0))
    with pytest.raises(ValueError, match="finite"):
        GridFunction(np.array([[np.nan]]), 0.1, (0, 0))


def test_cone_is_fixed_point():
    h = 1 / 128
    p = decreasing_rearrangement(on("disk:r=1", h, cone))
    assert np.max(np.abs(p.g - (1 - p.s))) <= 2 * h


def test_indicator_profile():
    d = build_domain("lshape:a=1,b=0.5", 1 / 64)
    p = decreasing_rearrangement(GridFunction.on_domain(d, lambda x, y: 1.0))
    assert np.all(p.g == 1.0)
    assert p.s[-1] == pytest.approx(math.sqrt(0.75 / math.pi), rel=1e-14)
    assert p.level_measure(0.5) == pytest.approx(0.75, rel=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_shuffled_copies_rearrange_identically(seed):
    rng = np.random.default_rng(seed)
    vals = rng.random((12, 9)) * (rng.random((12, 9)) < 0.7)
    a = GridFunction(vals, 0.1, (0, 0))
    b = GridFunction(rng.permutation(vals.ravel()).reshape(9, 12), 0.1, (5, 5))
    pa, pb = decreasing_rearrangement(a), decreasing_rearrangement(b)
    assert np.array_equal(pa.s, pb.s) and np.array_equal(pa.g, pb.g)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 3))
def test_equimeasurability_exact(seed, n):
    rng = np.random.default_rng(seed)
    vals = np.round(rng.random((7,) * n), 2)
    f = GridFunction(vals, 0.2, (0,) * n)
    p = decreasing_rearrangement(f)
    for t in np.concatenate([[0.0], np.unique(vals), rng.random(5)]):
        assert p.level_measure(t) == pytest.approx(distribution_function(f, t), rel=1e-12,
                                                   abs=1e-15)


def test_radial_moment_analytic():
    s = np.linspace(0, 1, 20001)
    p = RadialProfile(s, 1 - s, 2)
    assert radial_moment(p, 0) == pytest.approx(math.pi / 3, rel=1e-8)
    assert radial_moment(p, 4) == pytest.approx(math.pi / 21, rel=1e-7)


def test_weighted_moment_disk():
    f = on("disk:r=1", 1 / 256, lambda x, y: 1.0)
    assert weighted_moment(f) == pytest.approx(math.pi / 3, rel=5e-3)
    p = decreasing_rearrangement(f)
    assert weighted_moment(f) == pytest.approx(radial_moment(p, 4), rel=1e-4)


def test_square_annulus_comparison():
    f = on("square:a=2,x0=-1,y0=-1", 1 / 64,
           lambda x, y: (np.maximum(abs(x), abs(y)) > 0.5).astype(float))
    assert weighted_moment(f) > radial_moment(decreasing_rearrangement(f), 4)


def _random_function(rng, kind):
    c = rng.uniform(-0.6, 0.6, (3, 2))
    w = rng.uniform(0.05, 0.5, 3)
    if kind == 0:
        return lambda x, y: sum(np.exp(-((x - a) ** 2 + (y - b) ** 2) / s**2)
                                for (a, b), s in zip(c, w))
    if kind == 1:
        return lambda x, y: np.maximum(0, 1 - np.hypot(x - c[0, 0], y - c[0, 1]) / (2 * w[0]))
    if kind == 2:
        return lambda x, y: rng.random(x.shape)
    # radial about the origin: the equality case
    return lambda x, y: np.exp(-(x * x + y * y) / w[0])


@pytest.mark.parametrize("seed", range(50))
def test_mass_and_moment_randomized(seed):
    rng = np.random.default_rng(seed)
    h = 1 / 128
    f = on("square:a=2,x0=-1,y0=-1", h, _random_function(rng, seed % 4))
    p = decreasing_rearrangement(f)
    assert abs(radial_moment(p, 0) - f.mass()) <= 5e-3 * f.mass()
    assert weighted_moment(f) >= radial_moment(p, 4) * (1 - h**2)


LIPSCHITZ_CASES = [
    ("disk:r=1", cone, 1.0),
    ("disk:r=1", lambda x, y: 1 - x * x - y * y, 2.0),
    ("disk:r=1", lambda x, y: np.exp(-(x * x + y * y) / 0.09), math.sqrt(2 / math.e) / 0.3),
    ("square:a=1", lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y), math.pi),
    ("lshape:a=1,b=0.5", lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y), math.pi),
]


@pytest.mark.parametrize("h", [1 / 64, 1 / 128, 1 / 256])
@pytest.mark.parametrize("spec, f, tau", LIPSCHITZ_CASES)
def test_lipschitz_propagation(spec, f, tau, h):
    p = decreasing_rearrangement(on(spec, h, f))
    sl = p.slopes(LIP_WINDOW)
    assert sl.max() <= 0
    assert sl.min() >= -tau * (1 + LIP_C * h)


def test_profile_validation():
    with pytest.raises(ValueError, match="non-increasing"):
        RadialProfile([0, 1], [0, 1], 2)
    with pytest.raises(ValueError, match="ascending"):
        RadialProfile([1, 0], [1, 0], 2)
    with pytest.raises(ValueError, match="tau"):
        RadialProfile([0, 1], [2, 0], 2, tau_bound=1.0)
    assert RadialProfile([0, 1], [1, 0], 2, tau_bound=1.0).peak == 1.0


def test_profile_csv(tmp_path):
    p = decreasing_rearrangement(on("disk:r=1", 1 / 16, cone))
    path = tmp_path / "p.csv"
    p.to_csv(path)
    rows = path.read_text().splitlines()
    assert rows[0] == "s,g" and len(rows) == len(p.s) + 1
