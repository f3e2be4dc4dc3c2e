"""Dataset files and report documents.

Two dataset layouts are read and written:

* plain -- whitespace/newline separated reals (complete or singly censored
  data; the number on test and any censoring time come from the caller);
* two-column -- one ``value removals`` pair per line (comma or whitespace
  delimited) for progressively censored data.

Lines starting with ``#`` are comments.  Numbers always use ``.`` as the
decimal mark regardless of locale.
"""

from __future__ import annotations

import json
import math
import re
from importlib import resources
from pathlib import Path

from . import __version__
from .errors import DomainError
from .model import CensoredSample, ProgressiveSample, Sample, regime_of

_SPLIT = re.compile(r"[,\s]+")


class DataFormatError(DomainError):
    """Malformed dataset file."""


def bundled_path(name: str) -> Path:
    """Path of a dataset shipped with the package (``table1.dat``, ``table2.dat``)."""
    return Path(str(resources.files("evdfit") / "data" / name))


def _lines(text):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield lineno, line


def _real(tok, lineno):
    try:
        val = float(tok)
    except ValueError:
        raise DataFormatError(f"line {lineno}: not a number: {tok!r}") from None
    if not math.isfinite(val):
        raise DataFormatError(f"line {lineno}: non-finite value {tok!r}")
    return val


def parse_plain(text: str) -> list:
    values = []
    for lineno, line in _lines(text):
        values.extend(_real(tok, lineno) for tok in line.split())
    if len(values) < 2:
        raise DataFormatError(f"need at least 2 values, found {len(values)}")
    return values


def parse_two_column(text: str):
    values, removals = [], []
    for lineno, line in _lines(text):
        toks = [t for t in _SPLIT.split(line) if t]
        if len(toks) != 2:
            raise DataFormatError(f"line {lineno}: expected 'value removals', got {line!r}")
        values.append(_real(toks[0], lineno))
        k = _real(toks[1], lineno)
        if k < 0 or k != int(k):
            raise DataFormatError(f"line {lineno}: removal count must be a non-negative integer")
        removals.append(int(k))
    if len(values) < 2:
        raise DataFormatError(f"need at least 2 rows, found {len(values)}")
    return values, removals


def read_dataset(path, censoring="none", n=None, time=None):
    """Load a dataset file into a sample object.

    ``censoring`` is ``none``, ``type1``, ``type2`` or ``progressive``; the
    singly censored modes need ``n`` (and ``time`` for ``type1``).
    """
    text = Path(path).read_text(encoding="utf-8")
    if censoring == "progressive":
        values, removals = parse_two_column(text)
        return ProgressiveSample(values, removals)
    values = parse_plain(text)
    if censoring == "none":
        return Sample(values)
    if n is None:
        raise ValueError(f"{censoring} censoring needs the number on test (n)")
    if censoring == "type2":
        return CensoredSample(values, n=n, mode="type2")
    if censoring == "type1":
        if time is None:
            raise ValueError("type1 censoring needs the censoring time")
        return CensoredSample(values, n=n, mode="type1", censor_time=time)
    raise ValueError(f"unknown censoring {censoring!r}")


def format_dataset(data) -> str:
    if isinstance(data, ProgressiveSample):
        head = f"# progressive: n = {data.n}, r = {data.r}\n# value removals\n"
        rows = (f"{v!r} {int(k)}" for v, k in zip(data.observed.tolist(), data.removals.tolist()))
        return head + "\n".join(rows) + "\n"
    if isinstance(data, CensoredSample):
        head = f"# {data.mode}: n = {data.n}, r = {data.r}"
        if data.censor_time is not None:
            head += f", T = {data.censor_time!r}"
        head += "\n"
        return head + "\n".join(repr(v) for v in data.observed.tolist()) + "\n"
    return "\n".join(repr(v) for v in data.values.tolist()) + "\n"


def write_dataset(path, data):
    Path(path).write_text(format_dataset(data), encoding="utf-8")


# --- reports ------------------------------------------------------------------


def _num(x):
    if x is None or (isinstance(x, float) and not math.isfinite(x)):
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return format(float(x), ".17g")


def dumps(obj, indent=None, _level=0) -> str:
    """JSON text with every float written to 17 significant digits."""
    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = (f"{pad}{json.dumps(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items())
        return "{" + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = (pad + dumps(v, indent, _level + 1) for v in obj)
        return "[" + sep.join(items) + end + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if hasattr(obj, "item"):  # numpy scalar
        obj = obj.item()
    return _num(obj)


def loads(text: str):
    return json.loads(text)


def describe_input(data, family, path=None) -> dict:
    removals = data.removals.tolist() if isinstance(data, ProgressiveSample) else None
    censor_time = data.censor_time if isinstance(data, CensoredSample) else None
    return {
        "path": None if path is None else str(path),
        "family": family,
        "regime": regime_of(data),
        "n": int(data.n),
        "r": int(data.r),
        "censor_time": censor_time,
        "removals": removals,
    }


def fit_document(report, data, path=None, config=None, seed=None) -> dict:
    """Report document for a :class:`~evdfit.estimators.FitReport`."""
    s = report.solver
    return {
        "tool": "evdfit",
        "version": __version__,
        "command": "fit",
        "input": describe_input(data, report.family, path),
        "method": report.method,
        "estimates": {k: float(v) for k, v in report.estimates.items()},
        "solver": {
            "iterations": int(s.iterations),
            "termination": s.termination,
            "final_residual": None if not s.residual_trace else float(s.final_residual),
            "tolerance": None if config is None else float(config.tolerance),
            "initial": None if config is None or config.initial is None else float(config.initial),
            "acceleration": None if config is None else config.acceleration,
            "residual_trace": [float(x) for x in s.residual_trace],
        },
        "loglik": float(report.loglik),
        "seed": seed,
    }


def oracle_document(result, data, family, path=None, seed=None) -> dict:
    names = ("beta", "theta") if family == "weibull" else ("sigma", "mu")
    return {
        "tool": "evdfit",
        "version": __version__,
        "command": "fit",
        "input": describe_input(data, family, path),
        "method": "oracle",
        "estimates": {names[0]: float(result.primary), names[1]: float(result.secondary)},
        "solver": {
            "iterations": int(result.refinements),
            "termination": "converged",
            "final_residual": None,
            "tolerance": None,
            "initial": None,
            "acceleration": None,
            "residual_trace": [],
        },
        "loglik": float(result.loglik),
        "seed": seed,
    }


def report_schema() -> dict:
    return json.loads(bundled_path("report.schema.json").read_text(encoding="utf-8"))
