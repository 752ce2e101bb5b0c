"""Flat dotted-key configuration (``solver.dt = 1e-3``) read from TOML.

Tables are flattened, so ``[solver]`` followed by ``dt = 1e-3`` is the same
as a top-level ``solver.dt = 1e-3``. A run manifest is also accepted: its
``[config]`` table is used and its ``[run]`` table ignored. Unknown keys are
rejected; values are converted and range-checked when the file is parsed.
"""
from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .errors import InvalidParameterError
from .spectral import parse_exponent


def _int(v):
    if isinstance(v, bool) or not isinstance(v, (int, float)) or float(v) != int(v):
        raise ValueError(f"expected an integer, got {v!r}")
    return int(v)


def _float(v):
    if isinstance(v, bool):
        raise ValueError(f"expected a number, got {v!r}")
    if isinstance(v, str):
        v = float(v)
    if not isinstance(v, (int, float)):
        raise ValueError(f"expected a number, got {v!r}")
    return float(v)


def _exponent(v):
    return parse_exponent(v if isinstance(v, str) else _float(v))


def _str(v):
    if not isinstance(v, str):
        raise ValueError(f"expected a string, got {v!r}")
    return v


def _choice(*options):
    def conv(v):
        v = _str(v)
        if v not in options:
            raise ValueError(f"expected one of {options}, got {v!r}")
        return v

    return conv


def _positive(conv):
    def check(v):
        v = conv(v)
        if not v > 0:
            raise ValueError(f"must be positive, got {v}")
        return v

    return check


def _nonneg_int(v):
    v = _int(v)
    if v < 0:
        raise ValueError(f"must be >= 0, got {v}")
    return v


@dataclass(frozen=True)
class Key:
    convert: Callable
    default: object


_CUTOFF = _choice("smooth", "sharp")

SCHEMA = {
    # solver / simulate
    "solver.dim": Key(_int, 2),
    "solver.n": Key(_int, 64),
    "solver.dt": Key(_positive(_float), 1e-3),
    "solver.t_end": Key(_positive(_float), 1.0),
    "solver.alpha": Key(_float, 0.5),
    "solver.initial": Key(_choice("taylor-green", "random", "zero", "file"), "taylor-green"),
    "solver.seed": Key(_nonneg_int, 0),
    "solver.slope": Key(_float, 2.0),
    "solver.amplitude": Key(_float, 1.0),
    "solver.init_file": Key(_str, ""),
    "solver.sample_every": Key(_positive(_int), 1),
    "output.dir": Key(_str, "."),
    # bilinear corpus
    "corpus.count": Key(_nonneg_int, 100),
    "corpus.seed": Key(_nonneg_int, 0),
    "corpus.dim": Key(_int, 1),
    "corpus.n": Key(_int, 256),
    "corpus.kmax": Key(_positive(_int), 32),
    "corpus.slope": Key(_float, 2.0),
    "corpus.s": Key(_float, 0.5),
    "corpus.alpha": Key(_float, 0.5),
    "corpus.beta": Key(_float, 0.5),
    "corpus.cutoff": Key(_CUTOFF, "smooth"),
    "corpus.csv": Key(_str, "bilinear_stats.csv"),
    # analyze
    "analyze.field": Key(_str, ""),
    "analyze.space": Key(_choice("homog", "inhom", "lowpass"), "homog"),
    "analyze.s": Key(_float, 0.0),
    "analyze.p": Key(_exponent, 2.0),
    "analyze.q": Key(_exponent, 2.0),
    "analyze.cutoff": Key(_CUTOFF, "smooth"),
    # check-identities
    "checks.cutoff": Key(_CUTOFF, "smooth"),
    "checks.seed": Key(_nonneg_int, 0),
    "checks.count": Key(_positive(_int), 20),
    "checks.dim": Key(_int, 2),
    "checks.n": Key(_int, 0),
    "checks.dt": Key(_positive(_float), 1e-3),
    "checks.t_end": Key(_positive(_float), 0.1),
}
for _name in ("p", "q", "p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4"):
    SCHEMA[f"corpus.{_name}"] = Key(_exponent, math.inf if _name in ("p2", "q2", "p3", "q3") else 2.0)


def flatten(table, prefix=""):
    out = {}
    for k, v in table.items():
        name = f"{prefix}{k}"
        if isinstance(v, dict):
            out.update(flatten(v, name + "."))
        else:
            out[name] = v
    return out


def convert(key, value):
    if key not in SCHEMA:
        raise InvalidParameterError(f"unknown configuration key {key!r}")
    try:
        return SCHEMA[key].convert(value)
    except (ValueError, TypeError) as exc:
        raise InvalidParameterError(f"{key}: {exc}") from None


def load_file(path) -> dict:
    path = Path(path)
    try:
        doc = tomllib.loads(path.read_text())
    except OSError as exc:
        raise InvalidParameterError(f"cannot read config {path}: {exc.strerror}") from None
    except tomllib.TOMLDecodeError as exc:
        raise InvalidParameterError(f"{path}: {exc}") from None
    if isinstance(doc.get("config"), dict) and isinstance(doc.get("run"), dict):
        doc = doc["config"]
    return {k: convert(k, v) for k, v in flatten(doc).items()}


def parse_override(text, namespace=None):
    """``key=value`` with a TOML value; bare strings are accepted unquoted."""
    key, sep, raw = text.partition("=")
    key, raw = key.strip(), raw.strip()
    if not sep or not key:
        raise InvalidParameterError(f"--set expects key=value, got {text!r}")
    if "." not in key and namespace:
        key = f"{namespace}.{key}"
    try:
        value = tomllib.loads(f"v = {raw}")["v"]
    except tomllib.TOMLDecodeError:
        value = raw
    return key, convert(key, value)


def resolve(namespaces, path=None, overrides=(), flags=None) -> dict:
    """Defaults < config file < ``--set`` < explicit flags, restricted to ``namespaces``."""
    merged = {k: v.default for k, v in SCHEMA.items()}
    if path is not None:
        merged.update(load_file(path))
    for text in overrides:
        k, v = parse_override(text, namespaces[0])
        merged[k] = v
    for k, v in (flags or {}).items():
        if v is not None:
            merged[k] = convert(k, v)
    return {k: v for k, v in merged.items() if k.split(".")[0] in namespaces}


def section(config: dict, namespace: str) -> dict:
    """Keys of one namespace with the prefix stripped."""
    prefix = namespace + "."
    return {k[len(prefix):]: v for k, v in config.items() if k.startswith(prefix)}
