"""Command-line interface: ``evdfit fit | benchmark | simulate``.

Exit codes: 0 success, 2 argument or file errors, 3 data-domain errors,
4 convergence failures.  Reports go to stdout as JSON (``--pretty`` for a
human-readable rendering); diagnostics go to stderr as a single line.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import __version__
from .errors import (
    ConvergenceError,
    DegenerateSampleError,
    DomainError,
    EvdFitError,
    NoFixedPointError,
    OracleError,
    SampleTooSmallError,
    UnsupportedRegimeError,
)
from .estimators import fit
from .io import (
    bundled_path,
    dumps,
    fit_document,
    format_dataset,
    oracle_document,
    read_dataset,
    write_dataset,
)
from .model import GumbelParams, LevParams, WeibullParams
from .oracle import profile_maximize
from .simulate import (
    NoCensoring,
    ProgressiveCensoring,
    SimConfig,
    Type1Censoring,
    Type2Censoring,
    apply_censoring,
    benchmark_iterations,
    compare_solvers,
    sample,
)
from .solver import SolverConfig

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CONVERGENCE = 0, 2, 3, 4
DEFAULT_SEED = 0
METHODS = ("fixed-point", "newton", "oracle")


class UsageError(Exception):
    pass


def _positive_float(text):
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not val > 0:
        raise argparse.ArgumentTypeError(f"must be > 0: {text!r}")
    return val


def _positive_int(text):
    try:
        val = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if val < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1: {text!r}")
    return val


def _int_list(text):
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a list of integers: {text!r}") from None


def _add_solver_flags(p):
    p.add_argument("--tol", type=_positive_float, default=5e-5, help="stopping tolerance (default 5e-5)")
    p.add_argument("--init", type=_positive_float, default=None, help="initial sigma/beta")
    p.add_argument("--max-iter", type=_positive_int, default=500)
    p.add_argument("--accelerate", action="store_true", help="Aitken delta-squared acceleration")
    p.add_argument("--relative", action="store_true", help="relative stopping rule")
    p.add_argument("--no-fallback", action="store_true", help="disable the bisection fallback")


def _add_data_flags(p, need_path=True):
    if need_path:
        p.add_argument("path", help="dataset file (bundled: table1.dat, table2.dat)")
    else:
        p.add_argument("path", nargs="?", help="dataset file")
    p.add_argument("--family", choices=("gumbel", "lev", "weibull"), required=True)
    p.add_argument("--censoring", choices=("none", "type1", "type2", "progressive"), default="none")
    p.add_argument("--n", type=int, default=None, help="number of items on test")
    p.add_argument("--time", type=float, default=None, help="Type-I censoring time T")
    p.add_argument("--pretty", action="store_true")


def _add_sim_flags(p):
    p.add_argument("--mu", type=float)
    p.add_argument("--sigma", type=_positive_float)
    p.add_argument("--theta", type=_positive_float)
    p.add_argument("--beta", type=_positive_float)
    p.add_argument("--r", type=int, default=None, help="failures kept under Type-II censoring")
    p.add_argument("--removals", type=_int_list, default=None, help="progressive removals, e.g. 0,0,3,0,5")
    p.add_argument("--seed", type=int, default=None, help="RNG seed (overrides EVDFIT_SEED)")


def build_parser():
    parser = argparse.ArgumentParser(prog="evdfit", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"evdfit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit a distribution to a dataset")
    _add_data_flags(p)
    p.add_argument("--method", choices=METHODS, default="fixed-point")
    _add_solver_flags(p)

    p = sub.add_parser("benchmark", help="compare solvers on a dataset or simulated corpus")
    _add_data_flags(p, need_path=False)
    p.add_argument("--methods", default="fixed-point,newton", help="comma-separated: fixed-point,newton")
    p.add_argument("--simulate", action="store_true", help="benchmark on simulated replications")
    p.add_argument("--replications", type=_positive_int, default=100)
    _add_sim_flags(p)
    _add_solver_flags(p)

    p = sub.add_parser("simulate", help="write a simulated dataset")
    p.add_argument("--family", choices=("gumbel", "lev", "weibull"), required=True)
    p.add_argument("--n", type=int, required=True, help="sample size (items on test)")
    p.add_argument("--censoring", choices=("none", "type1", "type2", "progressive"), default="none")
    p.add_argument("--time", type=float, default=None)
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    _add_sim_flags(p)
    return parser


def resolve_seed(flag):
    """Seed precedence: flag, then EVDFIT_SEED, then the default."""
    if flag is not None:
        return flag
    env = os.environ.get("EVDFIT_SEED")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"EVDFIT_SEED is not an integer: {env!r}") from None
    return DEFAULT_SEED


def _solver_config(args):
    return SolverConfig(
        initial=args.init,
        tolerance=args.tol,
        max_iterations=args.max_iter,
        acceleration="aitken" if args.accelerate else "off",
        fallback=not args.no_fallback,
        relative=args.relative,
    )


def _resolve_path(path):
    p = Path(path)
    if p.exists():
        return p
    if p.parent == Path(".") and bundled_path(p.name).is_file():
        return bundled_path(p.name)
    raise UsageError(f"no such file: {path}")


def _load(args):
    if args.path is None:
        raise UsageError("a dataset path is required (or use --simulate)")
    path = _resolve_path(args.path)
    if args.censoring in ("type1", "type2") and args.n is None:
        raise UsageError(f"--censoring {args.censoring} requires --n")
    if args.censoring == "type1" and args.time is None:
        raise UsageError("--censoring type1 requires --time")
    try:
        return path, read_dataset(path, args.censoring, n=args.n, time=args.time)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror or exc}") from None


def _sim_params(args):
    if args.family == "weibull":
        if args.theta is None or args.beta is None:
            raise UsageError("weibull simulation needs --theta and --beta")
        return WeibullParams(args.theta, args.beta)
    if args.mu is None or args.sigma is None:
        raise UsageError(f"{args.family} simulation needs --mu and --sigma")
    cls = GumbelParams if args.family == "gumbel" else LevParams
    return cls(args.mu, args.sigma)


def _sim_scheme(args):
    if args.n is None or args.n < 2:
        raise UsageError(f"--n must be >= 2, got {args.n}")
    if args.censoring == "none":
        return NoCensoring()
    if args.censoring == "type2":
        if args.r is None or not 1 < args.r <= args.n:
            raise UsageError("type2 simulation needs 1 < --r <= --n")
        return Type2Censoring(args.r)
    if args.censoring == "type1":
        if args.time is None:
            raise UsageError("type1 simulation needs --time")
        return Type1Censoring(args.time)
    if args.removals is None:
        raise UsageError("progressive simulation needs --removals")
    try:
        scheme = ProgressiveCensoring(tuple(args.removals))
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    if scheme.n != args.n:
        raise UsageError(f"--removals implies n = {scheme.n}, but --n is {args.n}")
    return scheme


def _emit(doc, pretty, render):
    if pretty:
        sys.stdout.write(render(doc))
    else:
        sys.stdout.write(dumps(doc) + "\n")


def _render_fit(doc):
    inp, sol = doc["input"], doc["solver"]
    lines = [
        f"evdfit {doc['version']}: {inp['family']} fit, {inp['regime']} data (n={inp['n']}, r={inp['r']})",
        f"method       {doc['method']}",
    ]
    lines += [f"{k:<12} {v:.6g}" for k, v in doc["estimates"].items()]
    lines += [
        f"loglik       {doc['loglik']:.6f}",
        f"iterations   {sol['iterations']} ({sol['termination']})",
    ]
    return "\n".join(lines) + "\n"


def _render_table(doc):
    rows = doc["rows"]
    keys = list(rows[0].keys()) if rows else []
    cells = [[str(r[k]) if not isinstance(r[k], float) else f"{r[k]:.6g}" for k in keys] for r in rows]
    widths = [max(len(k), *(len(c[i]) for c in cells)) for i, k in enumerate(keys)]
    out = ["  ".join(k.ljust(w) for k, w in zip(keys, widths))]
    out += ["  ".join(c.ljust(w) for c, w in zip(row, widths)) for row in cells]
    return "\n".join(out) + "\n"


def cmd_fit(args):
    path, data = _load(args)
    if args.method == "oracle":
        result = profile_maximize(data, args.family)
        doc = oracle_document(result, data, args.family, path=path)
    else:
        config = _solver_config(args)
        report = fit(data, args.family, config, method=args.method)
        doc = fit_document(report, data, path=path, config=config)
    _emit(doc, args.pretty, _render_fit)
    return EXIT_OK


def _methods(text):
    methods = [m.strip() for m in text.split(",") if m.strip()]
    bad = [m for m in methods if m not in ("fixed-point", "newton")]
    if not methods or bad:
        raise UsageError(f"--methods takes fixed-point and/or newton, got {text!r}")
    return methods


def cmd_benchmark(args):
    methods = _methods(args.methods)
    config = _solver_config(args)
    doc = {"tool": "evdfit", "version": __version__, "command": "benchmark"}
    if args.simulate:
        seed = resolve_seed(args.seed)
        sim = SimConfig(args.family, _sim_params(args), args.n, _sim_scheme(args), seed, args.replications)
        summary = benchmark_iterations(sim, methods, config)
        doc.update(
            mode="simulated",
            seed=seed,
            replications=args.replications,
            rows=summary.table(),
            max_disagreement=summary.max_disagreement,
        )
    else:
        path, data = _load(args)
        summary = compare_solvers(data, args.family, methods, config)
        rows = []
        for s in summary.solvers:
            if s.failures:
                raise ConvergenceError(f"{s.method} failed on {path}")
            rows.append(
                {
                    "method": s.method,
                    "estimate": s.estimates[0],
                    "iterations": s.iterations[0],
                    "termination": s.terminations[0],
                }
            )
        doc.update(mode="dataset", path=str(path), family=args.family, rows=rows, max_disagreement=summary.max_disagreement)
    _emit(doc, args.pretty, _render_table)
    return EXIT_OK


def cmd_simulate(args):
    seed = resolve_seed(args.seed)
    params = _sim_params(args)
    scheme = _sim_scheme(args)
    s = sample(args.family, params, args.n, seed)
    data = apply_censoring(s, scheme, seed=[seed, 1])
    if args.output:
        write_dataset(args.output, data)
    else:
        sys.stdout.write(format_dataset(data))
    return EXIT_OK


COMMANDS = {"fit": cmd_fit, "benchmark": cmd_benchmark, "simulate": cmd_simulate}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"evdfit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UnsupportedRegimeError as exc:
        print(f"evdfit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, OracleError) as exc:
        print(f"evdfit: convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    except (DomainError, DegenerateSampleError, SampleTooSmallError, NoFixedPointError) as exc:
        print(f"evdfit: data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (EvdFitError, ValueError) as exc:
        print(f"evdfit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
