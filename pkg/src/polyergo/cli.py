"""Command-line front end.

One verb per module: ``gamma`` dumps the canonical exponent set, ``avg``
applies the lattice averaging operator to a stored function, ``variation``
evaluates variation functionals on a sequence file, ``gauss`` and ``decay``
tabulate complete rational exponential sums, ``arcs`` classifies frequency
points, ``multiplier`` sweeps the exact and approximating multipliers,
``schedule`` prints a threshold splitting schedule, ``ergodic`` traces orbit
averages on a dynamical system, and ``verify`` runs the named empirical
suites from :mod:`polyergo.harness`.

Artifacts are CSV or JSON with floats written at 17 significant digits, so
a fixed verb, config and seed reproduce byte-identical files.  Every run
also emits a manifest (resolved config, seed, library versions, timings)
next to the artifact, or on stderr when no output path is given.  Set
POLYERGO_THREADS to evaluate independent sweep rows on a thread pool; the
collector writes rows in deterministic order either way.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import platform
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np

from . import __version__
from .averaging import TorusGrid, average_direct, average_transform, multiplier_m, phi
from .backend import BACKEND
from .circle import (
    ArcParams,
    classify_arc,
    iw_schedule,
    lambda_mult,
    nu,
    omega,
    refine_arc_membership,
)
from .dynamics import CyclicShiftSystem, TorusRotationSystem
from .errors import DomainError, PolyergoError
from .expsum import fit_decay, gauss_sum_table, reduced_mask
from .harness import SUITES, run_suite
from .lattice import LatticeFunction
from .polymap import as_lifted, build_gamma, parse_polynomial_map
from .variation import RealSequence, variation_exact, variation_with_sup

# `verify variation` means the inequality suite, not the brute-force oracle.
SUITE_ALIASES = {"variation": "variation-inequalities"}


def _fmt(value) -> str:
    """CSV cell: ints verbatim, floats at 17 significant digits."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, Fraction):
        value = float(value)
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def _write_rows(out: str | None, header: list[str], rows) -> int:
    """Write formatted CSV rows to ``out`` or stdout; returns the row count."""

    def _dump(fh) -> int:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        count = 0
        for row in rows:
            w.writerow([_fmt(c) for c in row])
            count += 1
        return count

    if out is None:
        return _dump(sys.stdout)
    with open(out, "w", newline="") as fh:
        return _dump(fh)


def _pool_map(fn, items: list):
    """Map preserving order, on a thread pool when POLYERGO_THREADS > 1."""
    workers = int(os.environ.get("POLYERGO_THREADS", "1") or "1")
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _emit_manifest(args, verb: str, seconds: float, extras: dict | None = None) -> None:
    config = {}
    for key, val in sorted(vars(args).items()):
        if key in ("func", "config", "manifest") or callable(val):
            continue
        config[key] = val
    doc = {
        "command": verb,
        "config": config,
        "seed": getattr(args, "seed", None),
        "versions": {
            "polyergo": __version__,
            "backend": BACKEND,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
        "timings": {"seconds": seconds},
    }
    if extras:
        doc.update(extras)
    text = json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    path = args.manifest
    if path is None and getattr(args, "out", None):
        path = args.out + ".manifest.json"
    if path is None:
        sys.stderr.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _resolve_map(args):
    """A polynomial map from --map (JSON text or file), else the canonical one."""
    source = getattr(args, "map", None)
    if source:
        text = source
        if not source.lstrip().startswith("{"):
            with open(source) as fh:
                text = fh.read()
        return parse_polynomial_map(text)
    return build_gamma(args.k, args.n0)


def _parse_point(text: str, want: type = float) -> tuple:
    return tuple(want(c) for c in text.split(","))


# ----------------------------------------------------------------------
# verbs
# ----------------------------------------------------------------------


def _cmd_gamma(args) -> int:
    gamma = build_gamma(args.k, args.n0)
    header = ["position"] + [f"g_{j + 1}" for j in range(args.k)] + ["weight"]
    rows = [
        (i, *exp, w)
        for i, (exp, w) in enumerate(zip(gamma.indices, gamma.weights))
    ]
    _write_rows(args.out, header, rows)
    return 0


def _cmd_avg(args) -> int:
    if args.out is None:
        raise DomainError("avg writes a binary function file; --out is required")
    mapping = _resolve_map(args)
    if args.input:
        f = LatticeFunction.load(args.input)
    elif args.impulse is not None:
        f = LatticeFunction.point_mass(_parse_point(args.impulse, int))
    else:
        f = LatticeFunction.point_mass((0,) * as_lifted(mapping).d0)
    if args.method == "direct":
        out = average_direct(f, args.n, mapping)
    else:
        out = average_transform(f, args.n, mapping)
    out.save(args.out)
    return 0


def _cmd_variation(args) -> int:
    with open(args.input, newline="") as fh:
        rows = [r for r in csv.reader(fh) if r]
    if any(len(r) < 2 for r in rows):
        raise DomainError("variation input needs (index, value) rows")
    if rows and not _is_number(rows[0][1]):
        rows = rows[1:]  # skip a header row
    if not rows:
        raise DomainError("variation input holds no data rows")
    pairs = sorted((int(r[0]), float(r[1])) for r in rows)
    lo, hi = pairs[0][0], pairs[-1][0]
    if [i for i, _ in pairs] != list(range(lo, hi + 1)):
        raise DomainError("variation input indices must form a contiguous range")
    seq = RealSequence.from_values([v for _, v in pairs], start=lo)
    compute = variation_with_sup if args.kind == "vtilde" else variation_exact
    out_rows = []
    for r in args.r:
        res = compute(seq, r)
        out_rows.append((r, res.value, *res.witness))
    _write_rows(args.out, ["r", "value", "witness"], out_rows)
    return 0


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def _cmd_gauss(args) -> int:
    gamma = build_gamma(args.k, args.n0)
    d = gamma.d

    def _table(q: int):
        return gauss_sum_table(q, gamma), reduced_mask(q, d)

    tables = _pool_map(_table, list(range(1, args.qmax + 1)))

    def rows():
        for q, (table, mask) in zip(range(1, args.qmax + 1), tables):
            for idx in np.ndindex(*table.shape):
                if not mask[idx]:
                    continue
                g = complex(table[idx])
                numerators = tuple(i if i > 0 else q for i in idx)
                yield (q, *numerators, g.real, g.imag, abs(g))

    header = ["q"] + [f"a_{j + 1}" for j in range(d)] + ["re", "im", "modulus"]
    _write_rows(args.out, header, rows())
    return 0


def _cmd_decay(args) -> int:
    gamma = build_gamma(args.k, args.n0)
    d = gamma.d
    scales = [q for q in range(2, args.qmax + 1) if not (args.odd_only and q % 2 == 0)]

    def _sup(q: int) -> float:
        table = gauss_sum_table(q, gamma)
        mask = reduced_mask(q, d)
        return float(np.abs(table[mask]).max())

    sups = _pool_map(_sup, scales)
    fit = fit_decay(tuple(zip(map(float, scales), sups)))
    rows = [(q, s, fit.delta_hat) for q, s in zip(scales, sups)]
    _write_rows(args.out, ["scale", "sup", "fitted_delta"], rows)
    return 0


def _cmd_arcs(args) -> int:
    gamma = build_gamma(args.k, args.n0)
    params = ArcParams(alpha=args.alpha, beta=args.beta)
    rng = np.random.default_rng(args.seed)
    points: list[tuple] = [_parse_point(t) for t in args.xi]
    for _ in range(args.count):
        points.append(tuple(float(c) for c in rng.uniform(0.0, 1.0, size=gamma.d)))
    n2 = max(1, int(math.floor(math.log2(args.n))))
    rows = []
    for xi in points:
        cls = classify_arc(xi, args.n, params, gamma)
        if cls.major:
            pt = cls.center
            s = pt.q.bit_length() - 1
            rec = refine_arc_membership(xi, n2, s, 0, gamma, params)
            shell = rec.shell_u if rec.shell_u is not None else ""
            rows.append((*xi, args.n, cls.kind, pt.q, *pt.numerators, shell))
        else:
            rows.append((*xi, args.n, cls.kind, 0, *([0] * gamma.d), ""))
    header = (
        [f"xi_{j + 1}" for j in range(gamma.d)]
        + ["N", "class", "q"]
        + [f"a_{j + 1}" for j in range(gamma.d)]
        + ["u_shell"]
    )
    _write_rows(args.out, header, rows)
    return 0


def _cmd_multiplier(args) -> int:
    gamma = build_gamma(args.k, args.n0)
    kinds = [k.strip() for k in args.kinds.split(",") if k.strip()]
    known = {"m", "phi", "nu", "omega", "lambda"}
    bad = sorted(set(kinds) - known)
    if bad:
        raise DomainError(f"unknown multiplier kind(s) {bad}; choose from {sorted(known)}")
    if args.grid:
        grid = TorusGrid(modulus=args.grid, d=gamma.d)
        points = [pt for _, pt in grid.points()]
    else:
        rng = np.random.default_rng(args.seed)
        points = [
            tuple(float(c) for c in rng.uniform(0.0, 1.0, size=gamma.d))
            for _ in range(args.count)
        ]

    def _eval(task):
        xi, n, kind = task
        if kind == "m":
            return multiplier_m(xi, n, gamma)
        if kind == "phi":
            return phi(xi, n, gamma)
        if kind == "nu":
            return nu(xi, n, args.smax, gamma)
        if kind == "omega":
            return omega(xi, n, args.t, gamma)
        return lambda_mult(xi, n, args.t, gamma)

    tasks = [(xi, n, kind) for xi in points for n in args.n for kind in kinds]
    values = _pool_map(_eval, tasks)
    rows = (
        (*(float(c) for c in xi), n, kind, v.value.real, v.value.imag)
        for (xi, n, kind), v in zip(tasks, values)
    )
    header = [f"xi_{j + 1}" for j in range(gamma.d)] + ["N", "kind", "re", "im"]
    _write_rows(args.out, header, rows)
    return 0


def _cmd_schedule(args) -> tuple[int, dict]:
    delta4 = args.delta4
    extras: dict = {}
    if delta4 is None:
        gamma = build_gamma(args.k, args.n0)
        pairs = []
        for q in range(3, args.qmax + 1, 2):
            table = gauss_sum_table(q, gamma)
            mask = reduced_mask(q, gamma.d)
            pairs.append((float(q), float(np.abs(table[mask]).max())))
        delta_hat = fit_decay(tuple(pairs)).delta_hat
        delta4 = delta_hat / 4.0
        extras = {"delta_hat_empirical": delta_hat, "delta4_hat": delta4}
    schedule = iw_schedule(args.lam, args.epsilon, delta4, args.d)
    doc = schedule.to_jsonable()
    doc["delta4_hat"] = delta4
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0, extras


def _cmd_ergodic(args) -> int:
    with open(args.system) as fh:
        desc = json.load(fh)
    try:
        kind = desc["kind"]
        freq = tuple(int(c) for c in desc["frequency"])
        samples = [tuple(p) for p in desc["samples"]]
        ns = [int(n) for n in desc["ns"]]
        if "map" in desc:
            mapping = parse_polynomial_map(desc["map"])
        else:
            mapping = build_gamma(int(desc["gamma"]["k"]), int(desc["gamma"]["n0"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed system description: {exc}") from exc

    rows = []
    if kind == "cyclic-shift":
        modulus = int(desc["modulus"])
        dim = int(desc.get("dim", len(freq)))
        system = CyclicShiftSystem(modulus=modulus, dim=dim)
        mesh = np.indices((modulus,) * dim)
        phase = sum(f * mesh[j] for j, f in enumerate(freq))
        f = np.exp(2j * np.pi * phase / modulus)
        for n in ns:
            avg = system.average(f, n, mapping)
            for sid, x in enumerate(samples):
                v = complex(avg[tuple(int(c) % modulus for c in x)])
                rows.append((sid, n, v.real, v.imag))
    elif kind == "torus-rotation":
        alphas = tuple(float(a) for a in desc["alphas"])
        system = TorusRotationSystem(alphas=alphas)
        fvec = np.asarray(freq, dtype=np.float64)

        def f(pts: np.ndarray) -> np.ndarray:
            return np.exp(2j * np.pi * (pts @ fvec))

        for n in ns:
            for sid, x0 in enumerate(samples):
                v = system.average(f, x0, n, mapping)
                rows.append((sid, n, v.real, v.imag))
    else:
        raise DomainError(f"unknown system kind {kind!r}")

    rows.sort(key=lambda r: (r[0], r[1]))
    _write_rows(args.out, ["sample_id", "N", "re", "im"], rows)
    return 0


def _cmd_verify(args) -> tuple[int, dict]:
    if args.list:
        for name in SUITES:
            print(name)
        return 0, {}
    names = args.suite or list(SUITES)
    resolved = []
    for name in names:
        if name == "all":
            resolved.extend(SUITES)
            continue
        name = SUITE_ALIASES.get(name, name)
        if name not in SUITES:
            raise DomainError(
                f"unknown suite {name!r}; `verify --list` prints the choices"
            )
        resolved.append(name)
    results = [run_suite(name, seed=args.seed) for name in resolved]
    for r in results:
        print(r.line())
    failed = [r.name for r in results if not r.passed]
    extras = {"results": {r.name: r.passed for r in results}}
    return (1 if failed else 0), extras


# ----------------------------------------------------------------------
# parser
# ----------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser, seed: bool = True) -> None:
    p.add_argument("--out", default=None, help="artifact path (default stdout)")
    p.add_argument("--manifest", default=None, help="manifest path")
    p.add_argument("--config", default=None, help="JSON config overriding flags")
    if seed:
        p.add_argument("--seed", type=int, default=0)


def _add_gamma_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--k", type=int, default=1, help="number of variables")
    p.add_argument("--n0", type=int, default=2, help="degree cap")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="polyergo",
        description="polynomial lattice averages, exponential sums and arc sweeps",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("gamma", help="dump the canonical exponent set")
    _add_gamma_flags(p)
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_gamma)

    p = sub.add_parser("avg", help="apply the averaging operator to a function")
    _add_gamma_flags(p)
    p.add_argument("--map", default=None, help="polynomial map, JSON text or file")
    p.add_argument("--n", type=int, required=True, help="averaging scale N")
    p.add_argument("--input", default=None, help="stored lattice function")
    p.add_argument("--impulse", default=None,
                   help="point mass location, comma-separated (default: origin)")
    p.add_argument("--method", choices=("direct", "transform"), default="direct")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_avg)

    p = sub.add_parser("variation", help="variation functionals of a sequence file")
    p.add_argument("--input", required=True, help="CSV of (index, value) rows")
    p.add_argument("--r", type=float, nargs="+", default=[2.0])
    p.add_argument("--kind", choices=("vr", "vtilde"), default="vr")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_variation)

    p = sub.add_parser("gauss", help="tabulate reduced rational exponential sums")
    _add_gamma_flags(p)
    p.add_argument("--qmax", type=int, default=64)
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_gauss)

    p = sub.add_parser("decay", help="sup of the rational sums per denominator")
    _add_gamma_flags(p)
    p.add_argument("--qmax", type=int, default=64)
    p.add_argument("--odd-only", action="store_true", help="skip even denominators")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_decay)

    p = sub.add_parser("arcs", help="classify frequency points at a scale")
    _add_gamma_flags(p)
    p.add_argument("--n", type=int, required=True, help="scale N")
    p.add_argument("--alpha", type=float, default=0.1)
    p.add_argument("--beta", type=float, default=0.1)
    p.add_argument("--count", type=int, default=32, help="random sample size")
    p.add_argument("--xi", action="append", default=[], help="explicit point, comma-separated")
    _add_common(p)
    p.set_defaults(func=_cmd_arcs)

    p = sub.add_parser("multiplier", help="sweep exact and approximating multipliers")
    _add_gamma_flags(p)
    p.add_argument("--kinds", default="m,phi,nu", help="comma list of m,phi,nu,omega,lambda")
    p.add_argument("--n", type=int, nargs="+", default=[64], help="scales N")
    p.add_argument("--grid", type=int, default=None, help="evaluate on the full M-grid")
    p.add_argument("--count", type=int, default=16, help="random points when no grid")
    p.add_argument("--smax", type=int, default=4, help="band cap for nu")
    p.add_argument("--t", type=int, default=1, help="factorial level for omega/lambda")
    _add_common(p)
    p.set_defaults(func=_cmd_multiplier)

    p = sub.add_parser("schedule", help="threshold splitting schedule as JSON")
    _add_gamma_flags(p)
    p.add_argument("--lam", type=float, required=True, help="level-set threshold")
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--d", type=int, default=2, help="ambient dimension")
    p.add_argument("--delta4", type=float, default=None,
                   help="quarter decay exponent; measured when omitted")
    p.add_argument("--qmax", type=int, default=64, help="fit range for the measured exponent")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_schedule)

    p = sub.add_parser("ergodic", help="orbit-average trace of a dynamical system")
    p.add_argument("--system", required=True, help="JSON system description")
    _add_common(p, seed=False)
    p.set_defaults(func=_cmd_ergodic)

    p = sub.add_parser("verify", help="run named empirical suites")
    p.add_argument("suite", nargs="*", help="suite names (default: all)")
    p.add_argument("--list", action="store_true", help="print suite names and exit")
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    return parser


def _apply_config(args, parser: argparse.ArgumentParser) -> None:
    if not getattr(args, "config", None):
        return
    with open(args.config) as fh:
        overrides = json.load(fh)
    if not isinstance(overrides, dict):
        parser.error("config file must hold a JSON object")
    known = set(vars(args))
    for key, val in overrides.items():
        attr = key.replace("-", "_")
        if attr not in known:
            parser.error(f"config key {key!r} is not a flag of verb {args.verb!r}")
        setattr(args, attr, val)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _apply_config(args, parser)
    t0 = time.time()
    try:
        result = args.func(args)
    except PolyergoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    status, extras = result if isinstance(result, tuple) else (result, None)
    _emit_manifest(args, args.verb, time.time() - t0, extras)
    return status


if __name__ == "__main__":
    sys.exit(main())
