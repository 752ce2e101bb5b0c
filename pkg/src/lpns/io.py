"""Field files, CSV outputs and run manifests.

``.lpf`` layout: the magic bytes ``LPF1``, three little-endian u32 (dim,
components, N) and then ``components * N**dim`` little-endian float64 samples,
component-major and row-major within a component. A text sidecar with the same
stem and suffix ``.meta`` repeats dim/N/components and carries a description.
"""
from __future__ import annotations

import csv
import hashlib
import math
import struct
from pathlib import Path

import numpy as np

from .errors import InvalidInputError
from .monitor import COLUMNS, MonitorSeries
from .spectral import Field, Grid

MAGIC = b"LPF1"
_HEADER = struct.Struct("<4sIII")
CORPUS_COLUMNS = (
    "seed", "s", "alpha", "beta",
    "p", "q", "p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4",
    "lhs", "term1", "term2", "ratio",
)  # fmt: skip


def format_float(x) -> str:
    """17 significant digits; ``inf``/``nan`` spelled out."""
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        return "nan"
    return f"{x:.16e}"


# --- .lpf -------------------------------------------------------------------------


def meta_path(path) -> Path:
    return Path(path).with_suffix(".meta")


def write_field(path, field: Field, description: str = "") -> Path:
    path = Path(path)
    g = field.grid
    header = _HEADER.pack(MAGIC, g.dim, field.components, g.n)
    body = np.ascontiguousarray(field.samples, dtype="<f8").tobytes()
    path.write_bytes(header + body)
    description = " ".join(description.split())
    meta = f"dim = {g.dim}\nN = {g.n}\ncomponents = {field.components}\ndescription = {description}\n"
    meta_path(path).write_text(meta)
    return path


def read_meta(path) -> dict:
    out = {}
    for line in Path(path).read_text().splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise InvalidInputError(f"{path}: malformed metadata line {line!r}")
        out[key.strip()] = value.strip()
    return out


def read_field(path) -> Field:
    """Read an ``.lpf`` file; a sidecar, when present, must agree with the header."""
    path = Path(path)
    data = path.read_bytes()
    if len(data) < _HEADER.size:
        raise InvalidInputError(f"{path}: truncated header")
    magic, dim, comps, n = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise InvalidInputError(f"{path}: bad magic {magic!r}")
    if comps < 1:
        raise InvalidInputError(f"{path}: zero components")
    grid = Grid(dim, n)
    count = comps * n**dim
    if len(data) != _HEADER.size + 8 * count:
        raise InvalidInputError(f"{path}: expected {count} samples, found {(len(data) - _HEADER.size) / 8:g}")
    samples = np.frombuffer(data, dtype="<f8", offset=_HEADER.size).reshape((comps,) + grid.shape)
    mp = meta_path(path)
    if mp.exists():
        meta = read_meta(mp)
        for key, value in (("dim", dim), ("N", n), ("components", comps)):
            if key in meta and int(meta[key]) != value:
                raise InvalidInputError(f"{mp}: {key}={meta[key]} disagrees with the header value {value}")
    return Field(grid, samples.astype(np.float64))


# --- CSV --------------------------------------------------------------------------


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_series_csv(path, series: MonitorSeries) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = _writer(fh)
        w.writerow(COLUMNS)
        for row in series.rows:
            w.writerow([format_float(v) for v in row.values()])
    return path


def read_series_csv(path):
    """Header and a float array of the rows."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header = tuple(rows[0])
    values = np.array([[float(v) for v in r] for r in rows[1:]], dtype=np.float64).reshape(-1, len(header))
    return header, values


def corpus_row(seed, report):
    e = report.exponents.as_dict()
    return [str(seed)] + [
        format_float(v)
        for v in (
            report.s, report.alpha, report.beta,
            e["p"], e["q"], e["p1"], e["q1"], e["p2"], e["q2"], e["p3"], e["q3"], e["p4"], e["q4"],
            report.lhs, report.term1, report.term2, report.ratio,
        )
    ]  # fmt: skip


def write_corpus_csv(path, stats) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = _writer(fh)
        w.writerow(CORPUS_COLUMNS)
        for seed, report in stats.rows:
            w.writerow(corpus_row(seed, report))
    return path


def write_symbol_csv(path, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = _writer(fh)
        w.writerow(("j", "|k|", "value"))
        for j, r, v in rows:
            w.writerow((j, format_float(r), format_float(v)))
    return path


# --- manifest ---------------------------------------------------------------------


def _toml_value(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return repr(v)
    if v is None:
        return '""'
    s = str(v).replace("\\", "\\\\").replace('"', '\\"')
    return f'"{s}"'


def canonical_config_text(config: dict) -> str:
    """Sorted ``key = value`` lines; the hashed form of a resolved config."""
    return "".join(f"{k} = {_toml_value(config[k])}\n" for k in sorted(config))


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_config_text(config).encode()).hexdigest()


def write_manifest(path, *, command, config: dict, info: dict) -> Path:
    """TOML manifest: an ``[run]`` table of facts and a ``[config]`` table of the resolved config.

    The ``[config]`` table can be passed back with ``--config`` to repeat the run.
    """
    from . import __version__, _backend

    run = {
        "command": command,
        "version": __version__,
        "backend": _backend.name,
        "config_sha256": config_hash(config),
    }
    run.update(info)
    lines = ["[run]"]
    lines += [f"{k} = {_toml_value(v)}" for k, v in run.items()]
    lines += ["", "[config]"]
    lines += canonical_config_text(config).splitlines()
    path = Path(path)
    path.write_text("\n".join(lines) + "\n")
    return path
