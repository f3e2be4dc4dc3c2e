"""Compare the compiled and pure-Python weighted log-sum-exp kernels.

Usage::

    python benchmarks/bench_kernels.py [--sizes 20,200,2000] [--repeat 5]

Times raw kernel calls and complete fits (fixed-point and Newton) with each
backend.  The Cython backend is skipped with a note when it is not built.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from evdfit import _pykernels, kernels
from evdfit.estimators import fit
from evdfit.model import CensoredSample, ProgressiveSample
from evdfit.solver import SolverConfig

try:
    from evdfit import _ckernels
except ImportError:
    _ckernels = None


def _backends():
    out = {"python": _pykernels.weighted_lse_mean}
    if _ckernels is not None:
        out["cython"] = _ckernels.weighted_lse_mean
    return out


def _datasets(n, rng):
    x = np.sort(rng.gumbel(size=n))
    r = max(2, n // 2)
    removals = rng.multinomial(n - r, np.ones(r) / r)
    return {
        "type2": CensoredSample(x[:r], n=n),
        "progressive": ProgressiveSample(x[:r], removals),
    }


def _best(stmt, repeat, number):
    return min(timeit.repeat(stmt, repeat=repeat, number=number)) / number


def bench(sizes, repeat):
    rng = np.random.default_rng(0)
    rows = []
    for n in sizes:
        v = rng.normal(size=n)
        w = rng.integers(1, 4, size=n).astype(float)
        for name, fn in _backends().items():
            rows.append(("kernel", n, name, _best(lambda: fn(v, w, 0.7), repeat, 2000)))
        for regime, data in _datasets(n, rng).items():
            for name, fn in _backends().items():
                kernels.weighted_lse_mean = fn
                for method in ("fixed-point", "newton"):
                    t = _best(lambda: fit(data, "lev", SolverConfig(), method=method), repeat, 50)
                    rows.append((f"fit {regime} {method}", n, name, t))
    kernels.weighted_lse_mean = _backends().get(kernels.BACKEND, _pykernels.weighted_lse_mean)
    return rows


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="20,200,2000")
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    sizes = [int(s) for s in args.sizes.split(",")]
    if _ckernels is None:
        print("compiled kernels not built; timing the Python backend only")
    rows = bench(sizes, args.repeat)
    print(f"{'case':<28}{'n':>6}  {'backend':<8}{'time/call':>12}")
    for case, n, name, t in rows:
        print(f"{case:<28}{n:>6}  {name:<8}{t * 1e6:>10.1f}us")


if __name__ == "__main__":
    main()
