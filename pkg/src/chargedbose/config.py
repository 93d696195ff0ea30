"""Run configuration (strict JSON schema) and report serialization."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, field, fields, is_dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

__all__ = [
    "ConfigError",
    "GridConfig",
    "Tolerances",
    "TwoComponentConfig",
    "OneComponentConfig",
    "RunConfig",
    "load_config",
    "parse_config",
    "dump_config",
    "write_config",
    "to_jsonable",
    "render_report",
    "write_report",
    "CSV_BOUND_HEADER",
]

CSV_BOUND_HEADER = ("term", "value", "paper_eq", "exponent")
FORMATS = ("json", "csv")


class ConfigError(ValueError):
    """Schema violation; ``key`` is the dotted path of the offending entry."""

    def __init__(self, message: str, key: str | None = None, line: int | None = None):
        where = []
        if key:
            where.append(f"key '{key}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.key = key
        self.line = line


@dataclass
class GridConfig:
    R: float = 60.0  # outer radius of the radial grid, n^{-1/5} units
    K: int = 2000  # number of radial intervals
    tail_start: float = 1e3  # momentum where analytic tails take over


@dataclass
class Tolerances:
    minimizer: float = 1e-10
    boundary: float = 1e-8
    fock_defect: float = 1e-12
    virial: float = 1e-3
    I0_agreement: float = 1e-8


@dataclass
class TwoComponentConfig:
    n: float = 1e8
    eps: float = 0.0


@dataclass
class OneComponentConfig:
    rho: float = 1e4
    eps: float | None = None  # None: eps = rho^{-1/12}
    L: float = 50.0  # box side, rho^{-1/3} units
    r: float = 1.0  # edge width, rho^{-1/3} units


def _default_constants() -> dict:
    return {"C": 1.0, "C0": 1.0, "C1": 1.0, "C2": 1.0, "C_lower": 1.0}


def _default_suites() -> list:
    return ["fock", "bogolubov", "kernels", "packets", "berezin", "dyson", "jellium"]


@dataclass
class RunConfig:
    seed: int = 0
    format: str = "json"
    grid: GridConfig = field(default_factory=GridConfig)
    tolerances: Tolerances = field(default_factory=Tolerances)
    constants: dict = field(default_factory=_default_constants)
    two_component: TwoComponentConfig = field(default_factory=TwoComponentConfig)
    one_component: OneComponentConfig = field(default_factory=OneComponentConfig)
    suites: list = field(default_factory=_default_suites)

    def validate(self) -> "RunConfig":
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or self.seed < 0:
            raise ConfigError("seed must be a nonnegative integer", "seed")
        if self.format not in FORMATS:
            raise ConfigError(f"format must be one of {FORMATS}", "format")
        _positive(self.grid.R, "grid.R")
        if not isinstance(self.grid.K, int) or self.grid.K < 10:
            raise ConfigError("grid.K must be an integer >= 10", "grid.K")
        _positive(self.grid.tail_start, "grid.tail_start")
        for f in fields(Tolerances):
            _positive(getattr(self.tolerances, f.name), f"tolerances.{f.name}")
        known = set(_default_constants())
        for k, v in self.constants.items():
            if k not in known:
                raise ConfigError(f"unknown constant; expected one of {sorted(known)}", f"constants.{k}")
            if not _is_number(v) or v < 0:
                raise ConfigError("constants must be nonnegative numbers", f"constants.{k}")
        missing = known - set(self.constants)
        if missing:
            k = sorted(missing)[0]
            raise ConfigError("missing required key", f"constants.{k}")
        _positive(self.two_component.n, "two_component.n")
        if not _is_number(self.two_component.eps) or self.two_component.eps < 0:
            raise ConfigError("eps must be >= 0", "two_component.eps")
        _positive(self.one_component.rho, "one_component.rho")
        if self.one_component.eps is not None and (not _is_number(self.one_component.eps) or self.one_component.eps < 0):
            raise ConfigError("eps must be >= 0 or null", "one_component.eps")
        _positive(self.one_component.L, "one_component.L")
        _positive(self.one_component.r, "one_component.r")
        if not 4 * self.one_component.r < self.one_component.L:
            raise ConfigError("edge width must satisfy r < L/4", "one_component.r")
        suites = set(_default_suites())
        for i, s in enumerate(self.suites):
            if s not in suites:
                raise ConfigError(f"unknown suite {s!r}", f"suites[{i}]")
        return self


def _is_number(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and math.isfinite(v)


def _positive(v, key):
    if not _is_number(v) or v <= 0:
        raise ConfigError("must be a positive finite number", key)


def _build(cls, data: Any, prefix: str):
    if not isinstance(data, dict):
        raise ConfigError("expected an object", prefix or None)
    names = {f.name: f for f in fields(cls)}
    for k in data:
        if k not in names:
            raise ConfigError("unknown key", f"{prefix}{k}")
    defaults = cls()
    kwargs = {}
    for name in names:
        key = f"{prefix}{name}"
        if name not in data:
            raise ConfigError("missing required key", key)
        value = data[name]
        if is_dataclass(getattr(defaults, name)):
            value = _build(type(getattr(defaults, name)), value, key + ".")
        kwargs[name] = value
    return cls(**kwargs)


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc.msg}", None, exc.lineno) from exc
    return _build(RunConfig, data, "").validate()


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc.strerror}") from exc
    return parse_config(text)


def dump_config(cfg: RunConfig) -> str:
    return json.dumps(asdict(cfg), indent=2, sort_keys=True) + "\n"


def write_config(cfg: RunConfig, path: str | Path) -> None:
    Path(path).write_text(dump_config(cfg))


# --- reports ---------------------------------------------------------------------------


def to_jsonable(obj):
    """Plain JSON types; Fractions become "p/q" strings, non-finite floats become strings."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else str(v)
    if isinstance(obj, complex):
        return {"re": obj.real, "im": obj.imag}
    if is_dataclass(obj):
        return to_jsonable(asdict(obj))
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _csv_rows(report: dict) -> tuple[tuple, list]:
    res = report["results"]
    if isinstance(res, dict) and "terms" in res:
        return CSV_BOUND_HEADER, [[row[h] for h in CSV_BOUND_HEADER] for row in res["terms"]]
    if isinstance(res, dict) and "suites" in res:
        rows = []
        for suite, out in res["suites"].items():
            for name, c in out["checks"].items():
                rows.append([suite, name, c["value"], c["threshold"], c["ok"]])
        return ("suite", "check", "value", "threshold", "ok"), rows
    if isinstance(res, dict) and "profile" in res:
        return ("r", "phi"), [list(p) for p in zip(res["profile"]["r"], res["profile"]["phi"])]
    flat = []

    def walk(prefix, v):
        if isinstance(v, dict):
            for k, w in v.items():
                walk(f"{prefix}.{k}" if prefix else k, w)
        else:
            flat.append([prefix, v])

    walk("", res)
    return ("name", "value"), flat


def render_report(report: dict, fmt: str = "json") -> str:
    data = to_jsonable(report)
    if fmt == "json":
        return json.dumps(data, indent=2, sort_keys=False, allow_nan=False) + "\n"
    if fmt == "csv":
        header, rows = _csv_rows(data)
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    raise ConfigError(f"format must be one of {FORMATS}", "format")


def write_report(report: dict, path: str | Path | None, fmt: str = "json") -> str:
    """Render and write to ``path`` (or return only, when ``path`` is None)."""
    text = render_report(report, fmt)
    if path is not None:
        Path(path).write_text(text)
    return text
