"""Command line entry point: ``python -m clampedplate <command> ...``.

Stages hand off through files: ``solve`` writes spectrum JSON, ``bounds``
turns spectrum JSON into a CSV report, ``verify-lemma`` and ``probe``
write JSON verdicts.  The exit status is 0 iff every asserted check passed;
otherwise the failing checks are listed in ``<out>.failures.json``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from pathlib import Path

import numpy as np

from . import bounds as bnd
from . import fourier_probe, lemma_lab
from .discretize import assemble, canonical_problem
from .eigensolve import DEFAULT_TOL, Spectrum, lowest_eigenpairs
from .geometry import GeometrySummary, build_domain, summarize
from .rearrangement import GridFunction, decreasing_rearrangement

log = logging.getLogger("clampedplate")

USAGE_ERROR = 2
CHECK_FAILED = 1
COMMANDS = ("solve", "bounds", "verify-lemma", "probe", "rearrange", "constants")


def _write_failures(out, failures):
    path = Path(f"{out}.failures.json") if out else Path("failures.json")
    path.write_text(json.dumps({"failures": failures}, indent=1) + "\n")
    return path


def _finish(args, failures):
    if failures:
        path = _write_failures(getattr(args, "out", None), failures)
        print(f"{len(failures)} check(s) failed; see {path}", file=sys.stderr)
        return CHECK_FAILED
    return 0


def cmd_solve(args):
    d = build_domain(args.domain, args.h, align=args.align)
    op = assemble(d, args.problem)
    spec = lowest_eigenpairs(op, args.m, tol=args.tol, seed=args.seed, vectors=False)
    geo = summarize(d)
    text = spec.to_json(args.out, volume=geo.volume, inertia=geo.inertia,
                        centroid=list(geo.centroid), align=args.align, tol=args.tol,
                        seed=args.seed)
    if args.out is None:
        print(text)
    return 0


def _geometry_from(path, spec):
    raw = json.loads(Path(path).read_text())
    if "volume" in raw and "inertia" in raw:
        n = int(raw["n"])
        centroid = tuple(raw.get("centroid", [0.0] * n))
        count = int(round(raw["volume"] / raw["h"] ** n))
        return GeometrySummary(raw["volume"], centroid, raw["inertia"], count, n)
    return summarize(build_domain(spec.domain_ref, spec.h, align=raw.get("align", "cell")))


def cmd_bounds(args):
    spec = Spectrum.from_json(args.spectrum)
    geo = _geometry_from(args.spectrum, spec)
    neumann = Spectrum.from_json(args.neumann) if args.neumann else None
    failures = []
    if neumann is not None:
        lhs, rhs, holds = bnd.neumann_trace_check(neumann.nonzero(geo.n), geo.volume, geo.inertia)
        if not holds:
            failures.append({"check": "neumann_trace", "lhs": lhs, "rhs": rhs})
    rep = bnd.build_report(spec, geo, bounds=args.bound or None, neumann=neumann,
                           c_n=args.c_n, slack=args.slack)
    if "theorem" in rep.bounds and "levine_protter" in rep.bounds:
        for row in rep.rows:
            if not row["theorem"] > row["levine_protter"]:
                failures.append({"check": "hierarchy", "k": row["k"]})
    for k, b, margin in rep.violations:
        failures.append({"check": b, "k": k, "margin": margin})
    text = rep.to_csv(args.out)
    if args.out is None:
        sys.stdout.write(text)
    return _finish(args, failures)


def cmd_verify_lemma(args):
    verdicts, summary = lemma_lab.run_suite(args.count, args.seed)
    lines = [v.to_json() for v in verdicts] + [json.dumps(summary)]
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    failures = [{"case": i, "holds_25": v.holds_25, "holds_26": v.holds_26}
                for i, v in enumerate(verdicts) if not (v.holds_25 and v.holds_26)]
    return _finish(args, failures)


def cmd_probe(args):
    d = build_domain(args.domain, args.h, align=args.align)
    op = assemble(d, "clamped")
    spec = lowest_eigenpairs(op, args.m, tol=args.tol, seed=args.seed)
    rep = fourier_probe.run_probe(spec, pad_factor=args.pad_factor,
                                  moment_slack=args.moment_slack)
    text = rep.to_json(args.out)
    if args.out is None:
        print(text)
    return _finish(args, rep.failures())


def _safe_eval(expr, coords):
    names = {"x": coords[0], "y": coords[1], "np": np, "pi": math.pi}
    if len(coords) > 2:
        names["z"] = coords[2]
    names["r"] = np.sqrt(sum(c**2 for c in coords))
    for fn in ("sqrt", "exp", "sin", "cos", "abs", "maximum", "minimum", "where"):
        names[fn] = getattr(np, fn)
    if "__" in expr:
        raise ValueError("--expr may not use dunder names")
    try:
        return eval(expr, {"__builtins__": {}}, names)  # noqa: S307 - restricted namespace
    except (NameError, SyntaxError, TypeError) as exc:
        raise ValueError(f"bad --expr {expr!r}: {exc}") from None


def cmd_rearrange(args):
    d = build_domain(args.domain, args.h, align=args.align)
    center = summarize(d).centroid if args.center else None
    f = GridFunction.on_domain(d, lambda *c: _safe_eval(args.expr, c), center=center)
    prof = decreasing_rearrangement(f)
    out = args.out or "profile.csv"
    prof.to_csv(out)
    return 0


def cmd_constants(args):
    failures = []
    print("n,ball_ratio,d_value,c2,c3,all_checks")
    for n in range(1, args.n_max + 1):
        c = lemma_lab.dimension_constants(n)
        print(f"{n},{c.ball_ratio:.12g},{c.d_value:.12g},{c.c2:.12g},{c.c3:.12g},"
              f"{str(c.all_checks).lower()}")
        if not c.all_checks:
            failures.append({"n": n})
    return _finish(args, failures)


def _read_config(path):
    """Flat ``key=value`` lines mirroring the long flag names."""
    argv = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        if not sep:
            raise ValueError(f"bad config line {line!r}")
        key = key.strip().replace("_", "-")
        if key == "command":
            argv.insert(0, val.strip())
        else:
            argv += [f"--{key}", val.strip()]
    return argv


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="clampedplate", description=__doc__.split("\n")[0])
    p.add_argument("--config", help="key=value file mirroring the flags")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def domain_flags(sp, m_default):
        sp.add_argument("--domain", required=True, help="e.g. disk:r=1 or a mask file")
        sp.add_argument("--h", type=float, required=True)
        sp.add_argument("--align", choices=("cell", "node"), default="cell")
        sp.add_argument("--m", type=int, default=m_default)
        sp.add_argument("--tol", type=float, default=DEFAULT_TOL)
        sp.add_argument("--seed", type=int, default=42)

    s = sub.add_parser("solve", help="write the lowest eigenvalues as spectrum JSON")
    domain_flags(s, 25)
    s.add_argument("--problem", type=canonical_problem, default="clamped_bilaplacian")
    s.add_argument("--out")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bounds", help="bound report CSV from spectrum JSON")
    b.add_argument("--spectrum", required=True)
    b.add_argument("--neumann")
    b.add_argument("--bound", action="append", help="restrict to these bound ids")
    b.add_argument("--c-n", type=float, default=None, help="Melas constant (no default)")
    b.add_argument("--slack", type=float, default=0.01)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    v = sub.add_parser("verify-lemma", help="randomized moment-lemma suite, JSON lines")
    v.add_argument("--count", type=int, default=1000)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify_lemma)

    pr = sub.add_parser("probe", help="Fourier-side checks on clamped eigenfunctions")
    domain_flags(pr, 10)
    pr.add_argument("--pad-factor", type=float, default=4)
    pr.add_argument("--moment-slack", type=float, default=0.02)
    pr.add_argument("--out")
    pr.set_defaults(func=cmd_probe)

    r = sub.add_parser("rearrange", help="profile CSV of a rearranged function")
    domain_flags(r, 1)
    r.add_argument("--expr", default="1.0", help="numpy expression in x, y[, z], r")
    r.add_argument("--center", action="store_true", help="measure x from the centroid")
    r.add_argument("--out")
    r.set_defaults(func=cmd_rearrange)

    c = sub.add_parser("constants", help="dimension constants sweep")
    c.add_argument("--n-max", type=int, default=64)
    c.add_argument("--out")
    c.set_defaults(func=cmd_constants)
    return p


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    if "--config" in argv:
        i = argv.index("--config")
        try:
            cfg = _read_config(argv[i + 1])
        except (IndexError, OSError, ValueError) as exc:
            parser.error(str(exc))
        rest = argv[:i] + argv[i + 2:]
        # config values come first so explicit flags override them
        if rest and rest[0] in COMMANDS:
            cmd, rest = rest[0], rest[1:]
            cfg = cfg[1:] if cfg and not cfg[0].startswith("-") else cfg
        elif cfg and not cfg[0].startswith("-"):
            cmd, cfg = cfg[0], cfg[1:]
        else:
            parser.error("no command given")
        argv = [cmd] + cfg + rest
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
