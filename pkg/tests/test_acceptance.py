"""End-to-end acceptance checks, one test per criterion.

Each test prints (and records for the terminal summary) a single
``criterion N: PASS|FAIL ...`` line.
"""

import math
import time

import numpy as np
import pytest

from clampedplate.bounds import BoundInputs, build_report, neumann_trace_check, plate_coefficients
from clampedplate.bounds import plate_lower_bound
from clampedplate.discretize import clamped_bilaplacian, dirichlet_laplacian, neumann_laplacian
from clampedplate.eigensolve import lowest_eigenpairs
from clampedplate.fourier_probe import run_probe
from clampedplate.geometry import build_domain, summarize
from clampedplate.lemma_lab import dimension_constants, f_profile, run_suite
from clampedplate.fourier_probe import extract_eta
from clampedplate.rearrangement import (
    GridFunction,
    decreasing_rearrangement,
    distribution_function,
    radial_moment,
    weighted_moment,
)

from conftest import ACCEPTANCE_LINES, clamped_disk_root
from test_rearrangement import LIP_C, LIP_WINDOW, LIPSCHITZ_CASES, _random_function

PLATE_DOMAINS = ["disk:r=1", "square:a=1", "lshape:a=1,b=0.5", "annulus:r1=0.4,r2=1"]
H_REPORT = 1 / 128


def record(num, ok, detail):
    line = f"criterion {num}: {'PASS' if ok else 'FAIL'} {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


@pytest.fixture(scope="module")
def plate_runs():
    out = {}
    for spec in PLATE_DOMAINS:
        d = build_domain(spec, H_REPORT)
        out[spec] = (lowest_eigenpairs(clamped_bilaplacian(d), 25, vectors=False), summarize(d))
    return out


@pytest.fixture(scope="module")
def neumann_runs():
    out = {}
    for spec in ("disk:r=1", "square:a=1"):
        d = build_domain(spec, H_REPORT)
        out[spec] = lowest_eigenpairs(neumann_laplacian(d), 4, vectors=False)
    return out


@pytest.fixture(scope="module")
def disk_plate_256():
    d = build_domain("disk:r=1", 1 / 256)
    return lowest_eigenpairs(clamped_bilaplacian(d), 50, vectors=False), summarize(d)


def test_criterion_1_dirichlet_square():
    t0 = time.perf_counter()
    d = build_domain("square:a=1", 1 / 128, align="node")
    lam = lowest_eigenpairs(dirichlet_laplacian(d), 10, vectors=False).eigenvalues
    elapsed = time.perf_counter() - t0
    exact = np.pi**2 * np.array(sorted(j * j + l * l for j in range(1, 6) for l in range(1, 6))[:10])
    rel = np.abs(lam / exact - 1)
    record(1, bool(rel.max() <= 5e-3 and elapsed <= 30),
           f"max rel err {rel.max():.2e} (<= 5e-3), {elapsed:.1f}s (<= 30s)")


def test_criterion_2_neumann_square():
    d = build_domain("square:a=1", 1 / 128)
    mu = lowest_eigenpairs(neumann_laplacian(d), 3, vectors=False).eigenvalues
    rel = np.abs(mu[1:3] / np.pi**2 - 1)
    record(2, bool(abs(mu[0]) <= 1e-10 and rel.max() <= 5e-3),
           f"zero mode {mu[0]:.1e} (<= 1e-10), pair rel err {rel.max():.2e} (<= 5e-3)")


def test_criterion_3_clamped_disk(disk_plate_256):
    oracle = clamped_disk_root() ** 4
    assert oracle == pytest.approx(104.363, abs=1e-3)
    errs = []
    for h in (1 / 64, 1 / 128):
        g1 = lowest_eigenpairs(clamped_bilaplacian(build_domain("disk:r=1", h)), 1,
                               vectors=False).eigenvalues[0]
        errs.append(abs(g1 / oracle - 1))
    errs.append(abs(disk_plate_256[0].eigenvalues[0] / oracle - 1))
    ok = errs[-1] <= 0.05 and errs[0] > errs[1] > errs[2]
    record(3, bool(ok), "rel err at h=1/64,1/128,1/256: " + ", ".join(f"{e:.3%}" for e in errs))


def test_criterion_4_theorem_on_data(plate_runs):
    worst = math.inf
    for spec, (spec_, geo) in plate_runs.items():
        rep = build_report(spec_, geo, bounds=["levine_protter", "theorem"])
        rel = rep.column("margin_theorem") / rep.column("theorem")
        worst = min(worst, rel.min())
    record(4, bool(worst >= -0.01), f"worst relative theorem margin {worst:.3g} (>= -0.01), "
           f"{len(plate_runs)} domains, k <= 25, h=1/128")


def test_criterion_5_hierarchy(plate_runs, neumann_runs):
    coeff_ok = all(min(plate_coefficients(n)) > 0 for n in range(1, 65))
    strict = True
    dominated = True
    for spec, (spec_, geo) in plate_runs.items():
        neu = neumann_runs.get(spec)
        rep = build_report(spec_, geo, neumann=neu)
        strict &= bool(np.all(rep.column("theorem") > rep.column("levine_protter")))
        if neu is not None:
            _, _, holds = neumann_trace_check(neu.nonzero(2), geo.volume, geo.inertia)
            if holds:
                dominated &= bool(np.all(rep.column("corollary") <= rep.column("theorem")))
    record(5, coeff_ok and strict and dominated,
           f"C2,C3 > 0 for n<=64: {coeff_ok}; theorem > LP every row: {strict}; "
           f"corollary <= theorem: {dominated}")


def test_criterion_6_corollary_and_trace(plate_runs, neumann_runs):
    parts, ok = [], True
    for spec, neu in neumann_runs.items():
        spec_, geo = plate_runs[spec]
        lhs, rhs, holds = neumann_trace_check(neu.nonzero(2), geo.volume, geo.inertia)
        rep = build_report(spec_, geo, neumann=neu)
        cor_ok = bool(np.all(rep.column("margin_corollary") >= 0))
        ok &= holds and cor_ok
        parts.append(f"{spec.split(':')[0]} sum 1/mu={lhs:.4f} >= I/V={rhs:.4f}, corollary ok={cor_ok}")
    record(6, ok, "; ".join(parts))


def test_criterion_7_lemma_suite():
    t0 = time.perf_counter()
    verdicts, summary = run_suite(1000, seed=42)
    elapsed = time.perf_counter() - t0
    record(7, summary["passed"] == 1000 and elapsed <= 10,
           f"{summary['passed']}/1000 profiles hold, {elapsed:.2f}s (<= 10s)")


def test_criterion_8_rearrangement():
    h = 1 / 128
    d = build_domain("square:a=2,x0=-1,y0=-1", h)
    equi = mass = moment = True
    worst_mass = 0.0
    for seed in range(50):
        rng = np.random.default_rng(seed)
        f = GridFunction.on_domain(d, _random_function(rng, seed % 4))
        p = decreasing_rearrangement(f)
        levels = np.quantile(f.values[f.values > 0], [0.1, 0.5, 0.9])
        equi &= all(p.level_measure(t) == pytest.approx(distribution_function(f, t), rel=1e-12)
                    for t in levels)
        err = abs(radial_moment(p, 0) / f.mass() - 1)
        worst_mass = max(worst_mass, err)
        mass &= err <= 5e-3
        moment &= weighted_moment(f) >= radial_moment(p, 4) * (1 - h**2)
    lip = True
    for spec, fn, tau in LIPSCHITZ_CASES:
        for hh in (1 / 64, 1 / 128, 1 / 256):
            sl = decreasing_rearrangement(GridFunction.on_domain(build_domain(spec, hh), fn))
            sl = sl.slopes(LIP_WINDOW)
            lip &= bool(sl.max() <= 0 and sl.min() >= -tau * (1 + LIP_C * hh))
    record(8, bool(equi and mass and moment and lip),
           f"equimeasurable: {equi}; mass worst {worst_mass:.1e} (<= 5e-3); "
           f"moment comparison on 50 functions: {moment}; Lipschitz (C={LIP_C:g}): {lip}")


def test_criterion_9_fourier_probe(disk_plate_64):
    rep = run_probe(disk_plate_64, k_max=10, pad_factor=4)
    want = ["bessel", "gradient_bessel", "gradient_bound", "mass", "radial_mass", "chain"]
    named = {w: all(rep[f"{w}[k={k}]"].passed for k in range(1, 11)) for w in want}
    energy = rep["energy_identity"]
    worst_energy = max(energy.detail["rel_error"])
    ok = rep.passed and all(named.values()) and worst_energy <= 1e-8
    record(9, bool(ok), f"all {len(rep.checks)} checks pass={rep.passed}; energy rel err "
           f"{worst_energy:.1e} (<= 1e-8); chain k=1..10: {named['chain']}")


def test_criterion_10_constants_and_f_profile():
    consts = all(dimension_constants(n).ball_ratio < 0.5 and dimension_constants(n).d_value < 1
                 for n in range(1, 65))
    sweep = True
    count = 0
    domains = {2: ["disk:r=1", "square:a=1", "lshape:a=1,b=0.5", "annulus:r1=0.4,r2=1",
                   "ellipse:a=1,b=0.5", "rect:w=1,h=2"],
               3: ["ball:r=1", "box:w=1,h=0.5,d=0.7"]}
    for n, specs in domains.items():
        for spec in specs:
            geo = summarize(build_domain(spec, 1 / 32))
            eta = extract_eta(geo).eta
            for k in (1, 10, 100):
                fp = f_profile(n, k, eta, geo.volume)
                sweep &= fp.monotone_decreasing and fp.derivative_nonpositive
                count += 1
    record(10, bool(consts and sweep),
           f"constant facts n=1..64: {consts}; F monotone on {count} (n, k, domain) cases: {sweep}")


def test_criterion_11_weyl_trend(disk_plate_256):
    spec_, geo = disk_plate_256
    mean50 = float(np.mean(spec_.eigenvalues[:50]))
    lp = plate_lower_bound("levine_protter", BoundInputs(n=2, V=geo.volume, k=50))
    ratio = mean50 / lp
    record(11, bool(1.0 <= ratio <= 1.8), f"mean of first 50 / Levine-Protter = {ratio:.4f} "
           "(window [1.0, 1.8])")
