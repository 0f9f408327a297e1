"""Command line entry point: ``recdef {polys,density,deform,validate,compare}``.

Exit codes: 0 success, 1 validation failure, 2 configuration error, 3 numeric
error.
"""
from __future__ import annotations

import argparse
import hashlib
import io
import json
import math
import os
import re
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import chebyshev, spectra, validation
from .deformation import (
    DeformationOne,
    DeformationThree,
    deform_coeffs,
    deformed_density_values,
    deformed_polys,
    find_bound_states_one,
)
from .recursion import CoefficientSequence, eval_polynomials
from .resolvent import ResolventOptions

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
METHODS = ("finite-ratio", "eigen-histogram")
PARALLEL_MIN = 2048


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    family: str = "chebyshev"
    table: str | None = None
    deformation: DeformationOne | DeformationThree | None = None
    grid: tuple[float, float, int] = (-0.99, 0.99, 199)
    options: ResolventOptions = field(default_factory=ResolventOptions)
    fmt: str = "csv"
    out: str | None = None

    def describe(self):
        d = self.deformation
        return {
            "family": self.family,
            "table": self.table,
            "deformation": None if d is None else {"kind": type(d).__name__, **asdict(d)},
            "grid": list(self.grid),
            "options": self.options.as_dict(),
        }

    def hash(self):
        blob = json.dumps(self.describe(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]


# --- parsing helpers -------------------------------------------------------

_CONSTANT = re.compile(r"^constant\(\s*([^,()]+)\s*,\s*([^,()]+)\s*\)$")


def load_sequence(family, table=None):
    if table is not None:
        try:
            with open(table) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"--table: cannot read {table}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"--table: {table} is not valid JSON ({exc.msg})") from exc
        try:
            return CoefficientSequence.from_dict(data)
        except ValueError as exc:
            raise ConfigError(f"--table: {exc}") from exc
    if family == "chebyshev":
        return chebyshev.cheb_coeffs()
    m = _CONSTANT.match(family or "")
    if m:
        try:
            return CoefficientSequence.constant(float(m.group(1)), float(m.group(2)))
        except ValueError as exc:
            raise ConfigError(f"--family: {exc}") from exc
    if family == "tabulated":
        raise ConfigError("--family: 'tabulated' needs --table FILE")
    raise ConfigError(f"--family: unknown family {family!r} "
                      "(expected chebyshev, constant(A,B) or tabulated)")


def parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"--grid: expected LO:HI:COUNT, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise ConfigError(f"--grid: {exc}") from exc
    if not (math.isfinite(lo) and math.isfinite(hi)) or not lo < hi or count < 1:
        raise ConfigError("--grid: need finite LO < HI and COUNT >= 1")
    return lo, hi, count


def grid_points(grid):
    """Inclusive grid; symmetric grids hit their midpoint exactly."""
    lo, hi, count = grid
    if count == 1:
        return np.array([lo])
    i = np.arange(count, dtype=np.float64)
    xs = (lo * (count - 1 - i) + hi * i) / (count - 1)
    xs[0], xs[-1] = lo, hi
    return xs


def parse_interval(text, flag):
    parts = text.split(":")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except (ValueError, IndexError) as exc:
        raise ConfigError(f"{flag}: expected LO:HI, got {text!r}") from exc
    if len(parts) != 2 or not lo < hi:
        raise ConfigError(f"{flag}: expected LO:HI with LO < HI")
    return lo, hi


def deformation_from_args(args):
    three = (args.mu_plus, args.mu_minus, args.mu_zero)
    if args.mu is not None and any(v is not None for v in three):
        raise ConfigError("--mu cannot be combined with --mu-plus/--mu-minus/--mu-zero")
    try:
        if args.mu is not None:
            return DeformationOne(args.mu)
        if any(v is not None for v in three):
            return DeformationThree(*(0.0 if v is None else v for v in three))
    except ValueError as exc:
        raise ConfigError(f"deformation: {exc}") from exc
    return None


def config_from_args(args, default_grid=(-0.99, 0.99, 199)):
    try:
        opts = ResolventOptions(depth=args.depth, tail=args.tail, epsilon=args.epsilon)
    except ValueError as exc:
        raise ConfigError(f"resolvent options: {exc}") from exc
    grid = parse_grid(args.grid) if args.grid else default_grid
    return RunConfig(family=args.family, table=args.table, deformation=deformation_from_args(args),
                     grid=grid, options=opts, fmt=args.format, out=args.out)


# --- output ----------------------------------------------------------------

def write_output(text, path):
    """Write to ``path`` atomically (temp file + rename), or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".recdef-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def format_table(columns, names, fmt, meta=None):
    if fmt == "json":
        payload = {("xs" if name == "x" else name): [float(v) for v in col]
                   for name, col in zip(names, columns)}
        payload["meta"] = meta or {}
        return json.dumps(payload, indent=1) + "\n"
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for row in zip(*columns):
        buf.write(",".join("%.12g" % v for v in row) + "\n")
    return buf.getvalue()


def n_threads():
    try:
        return max(1, int(os.environ.get("RECDEF_THREADS", os.cpu_count() or 1)))
    except ValueError:
        return 1


def evaluate_grid(fn, xs):
    """Apply a vectorised ``fn`` to ``xs``, chunked over threads for big grids."""
    threads = n_threads()
    if threads == 1 or len(xs) < PARALLEL_MIN:
        return fn(xs)
    chunks = np.array_split(xs, threads)
    with ThreadPoolExecutor(max_workers=threads) as pool:
        parts = list(pool.map(fn, chunks))
    return np.concatenate(parts)


# --- commands --------------------------------------------------------------

def cmd_polys(args):
    cfg = config_from_args(args)
    seq = load_sequence(cfg.family, cfg.table)
    if args.n_max < 0:
        raise ConfigError("--n-max: must be >= 0")
    p, q = eval_polynomials(seq, args.x, args.n_max)
    ph, qh = deformed_polys(seq, cfg.deformation, args.x, args.n_max)
    n = np.arange(args.n_max + 1)
    text = format_table([n, p, q, ph, qh], ["n", "p", "q", "p_hat", "q_hat"], cfg.fmt,
                        meta={"config": cfg.describe(), "x": args.x})
    write_output(text, cfg.out)
    return EXIT_OK


def _density_method(d):
    if d is None:
        return "continued-fraction"
    if isinstance(d, DeformationOne):
        return "one-parameter"
    return "three-parameter-resolvent"


def cmd_density(args):
    cfg = config_from_args(args)
    seq = load_sequence(cfg.family, cfg.table)
    xs = grid_points(cfg.grid)
    try:
        rho = evaluate_grid(lambda x: deformed_density_values(seq, cfg.deformation, x, cfg.options), xs)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    meta = {"method": _density_method(cfg.deformation), "config": cfg.describe(),
            "config_hash": cfg.hash()}
    write_output(format_table([xs, rho], ["x", "rho"], cfg.fmt, meta), cfg.out)
    return EXIT_OK


def cmd_deform(args):
    cfg = config_from_args(args)
    seq = load_sequence(cfg.family, cfg.table)
    if cfg.deformation is None:
        raise ConfigError("deform: give --mu or --mu-plus/--mu-minus/--mu-zero")
    try:
        deformed = deform_coeffs(seq, cfg.deformation)
    except ValueError as exc:
        raise ConfigError(f"deformation: {exc}") from exc
    if deformed is seq:
        deformed = CoefficientSequence.tabulated(seq.a_head, seq.b_head, seq.a_inf, seq.b_inf)
    write_output(json.dumps(deformed.to_dict()) + "\n", cfg.out)
    if args.search:
        if not isinstance(cfg.deformation, DeformationOne):
            raise ConfigError("--search: bound-state search needs the one-parameter --mu")
        lo, hi = parse_interval(args.search, "--search")
        try:
            roots = find_bound_states_one(seq, cfg.deformation, (lo, hi), cfg.options)
        except ValueError as exc:
            raise ConfigError(f"--search: {exc}") from exc
        print("bound states: " + (", ".join("%.12g" % r for r in roots) or "none"), file=sys.stderr)
    return EXIT_OK


def cmd_validate(args):
    seq = load_sequence(args.family, args.table)
    checks = validation.run_suite(args.suite, seq)
    for c in checks:
        print(c.line())
    failed = sum(not c.passed for c in checks)
    print(f"{args.suite}: {len(checks) - failed}/{len(checks)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_FAIL


def parse_methods(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"--methods: unknown method {m!r} (choose from {', '.join(METHODS)})")
    return methods


def cmd_compare(args):
    cfg = config_from_args(args, default_grid=(-0.8, 0.8, 81))
    seq = load_sequence(cfg.family, cfg.table)
    if args.undeformed:
        if cfg.deformation is not None:
            raise ConfigError("--undeformed cannot be combined with deformation flags")
    elif cfg.deformation is None:
        cfg.deformation = spectra.reference_deformation()
    methods = parse_methods(args.methods)
    if args.dim < 2:
        raise ConfigError("--dim: must be >= 2")
    xs = grid_points(cfg.grid)
    try:
        analytic = deformed_density_values(seq, cfg.deformation, xs, cfg.options)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    columns, names = [xs, analytic], ["x", "rho_analytic"]
    summary = {}
    scale = float(np.max(np.abs(analytic))) or 1.0
    for method in methods:
        try:
            if method == "finite-ratio":
                est = spectra.dos_finite_ratio_values(seq, args.dim, cfg.deformation, xs,
                                                      args.ratio_epsilon, args.continuation)
            else:
                est = spectra.dos_eigen_histogram(seq, args.dim, cfg.deformation, xs).values
        except ValueError as exc:
            raise ConfigError(f"{method}: {exc}") from exc
        dev = np.abs(est - analytic)
        summary[method] = {"max_abs": float(dev.max()), "max_rel_to_peak": float(dev.max() / scale)}
        columns.append(est)
        names.append("rho_" + method.replace("-", "_"))
    meta = {"dim": args.dim, "methods": methods, "summary": summary,
            "config": cfg.describe(), "config_hash": cfg.hash()}
    write_output(format_table(columns, names, cfg.fmt, meta), cfg.out)
    for method, s in summary.items():
        print(f"{method}: max deviation {s['max_abs']:.3e} ({100 * s['max_rel_to_peak']:.2f}% of peak)",
              file=sys.stderr)
    return EXIT_OK


# --- parser ----------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--family", default="chebyshev",
                        help="chebyshev, constant(A,B) or tabulated (with --table)")
    common.add_argument("--table", metavar="FILE", help="JSON coefficient table")
    common.add_argument("--mu", type=float, help="one-parameter deformation a_0 -> a_0 + mu")
    common.add_argument("--mu-plus", type=float)
    common.add_argument("--mu-minus", type=float)
    common.add_argument("--mu-zero", type=float)
    common.add_argument("--grid", metavar="LO:HI:COUNT")
    common.add_argument("--depth", type=int, default=256, help="continued-fraction depth")
    common.add_argument("--tail", choices=("zero", "terminator"), default="terminator")
    common.add_argument("--epsilon", type=float, default=0.0, help="imaginary shift")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    parser = argparse.ArgumentParser(prog="recdef", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("polys", parents=[common], help="tabulate p_n, q_n and deformed values")
    p.add_argument("--x", type=float, required=True)
    p.add_argument("--n-max", type=int, default=10)
    p.set_defaults(func=cmd_polys)

    p = sub.add_parser("density", parents=[common], help="density on a grid")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("deform", parents=[common], help="print the deformed coefficient table")
    p.add_argument("--search", metavar="LO:HI", help="look for bound states (one-parameter only)")
    p.set_defaults(func=cmd_deform)

    p = sub.add_parser("validate", parents=[common], help="run a validation suite")
    p.add_argument("--suite", choices=validation.SUITES, required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compare", parents=[common],
                       help="analytic vs finite-matrix densities (defaults: dim 10, mu=(0.2,0,-0.1))")
    p.add_argument("--dim", type=int, default=10)
    p.add_argument("--methods", default=",".join(METHODS))
    p.add_argument("--undeformed", action="store_true", help="compare without any deformation")
    p.add_argument("--continuation", choices=("terminator", "none"), default="terminator")
    p.add_argument("--ratio-epsilon", type=float, help="imaginary shift for the finite ratio")
    p.set_defaults(func=cmd_compare)
    return parser


_RANGE_FLAGS = ("--grid", "--search")


def _join_range_values(argv):
    # "--grid -1:1:5" would otherwise be read as an unknown option
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _RANGE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv=None):
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(_join_range_values(argv))
    try:
        return args.func(args)
    except ValueError as exc:
        # ConfigError and library precondition failures alike
        print(f"recdef: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"recdef: numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
