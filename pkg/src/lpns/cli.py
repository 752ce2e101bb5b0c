"""Command-line front end.

Exit codes: 0 success, 1 identity-check failure, 2 usage or configuration
error, 3 numerical instability during a simulation.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__, checks, config as cfgmod, io
from .besov import BesovIndex, homogeneous_norm, inhomogeneous_norm, lowpass_seminorm
from .errors import InstabilityError, LPNSError
from .littlewood_paley import Cutoff, symbol_table
from .paraproduct import BilinearExponents, CorpusConfig, corpus_verify
from .solver import RunConfig, run
from .spectral import inverse_transform

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_UNSTABLE = 0, 1, 2, 3
EXPONENT_NAMES = ("p", "q", "p1", "q1", "p2", "q2", "p3", "q3", "p4", "q4")

log = logging.getLogger("lpns")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(f"{self.prog}: error: {message}")


def _common(p):
    p.add_argument("--config", type=Path, help="TOML file with flat dotted keys")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override a config key")


def build_parser():
    parser = _Parser(prog="lpns", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"lpns {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("analyze", help="Besov norms of fields stored in .lpf files")
    _common(a)
    a.add_argument("--field", nargs="+", help=".lpf file(s)")
    a.add_argument("--space", choices=("homog", "inhom", "lowpass"))
    a.add_argument("--s", type=float)
    a.add_argument("--p")
    a.add_argument("--q")
    a.add_argument("--cutoff", choices=("smooth", "sharp"))
    a.add_argument("--symbols", type=Path, metavar="CSV", help="also dump the block symbols of the field grid")

    b = sub.add_parser("verify-bilinear", help="empirical bilinear estimate over a seeded corpus")
    _common(b)
    for name, typ in (("count", int), ("seed", int), ("dim", int), ("n", int), ("kmax", int)):
        b.add_argument(f"--{name}", type=typ)
    for name in ("slope", "s", "alpha", "beta"):
        b.add_argument(f"--{name}", type=float)
    for name in EXPONENT_NAMES:
        b.add_argument(f"--{name}")
    b.add_argument("--cutoff", choices=("smooth", "sharp"))
    b.add_argument("--out", help="statistics CSV path")

    s = sub.add_parser("simulate", help="run the vorticity solver with the criterion monitor")
    _common(s)
    for name, typ in (("dim", int), ("n", int), ("seed", int), ("sample-every", int)):
        s.add_argument(f"--{name}", type=typ)
    for name in ("dt", "t-end", "alpha", "slope", "amplitude"):
        s.add_argument(f"--{name}", type=float)
    s.add_argument("--initial", choices=("taylor-green", "random", "zero", "file"))
    s.add_argument("--init-file")
    s.add_argument("--out", help="output directory")

    c = sub.add_parser("check-identities", help="run the invariant suites and print a PASS/FAIL table")
    _common(c)
    for name, typ in (("seed", int), ("count", int), ("dim", int), ("n", int)):
        c.add_argument(f"--{name}", type=typ)
    c.add_argument("--dt", type=float)
    c.add_argument("--t-end", type=float)
    c.add_argument("--cutoff", choices=("smooth", "sharp"))
    c.add_argument("--sharp", action="store_true", help="shorthand for --cutoff sharp (negative control)")
    return parser


def _flags(args, namespace, names):
    return {f"{namespace}.{n.replace('-', '_')}": getattr(args, n.replace("-", "_")) for n in names}


# --- commands ----------------------------------------------------------------------


def cmd_analyze(args) -> int:
    flags = _flags(args, "analyze", ("space", "s", "p", "q", "cutoff"))
    conf = cfgmod.resolve(("analyze",), args.config, args.set, flags)
    a = cfgmod.section(conf, "analyze")
    paths = args.field or ([a["field"]] if a["field"] else [])
    if not paths:
        raise UsageError("analyze: no --field given")
    idx = BesovIndex(a["s"], a["p"], a["q"])
    cutoff = Cutoff(a["cutoff"])
    norm = {"homog": homogeneous_norm, "inhom": inhomogeneous_norm, "lowpass": lowpass_seminorm}[a["space"]]
    fields = [(p, io.read_field(p)) for p in paths]
    rows = [(p, norm(f, idx, cutoff)) for p, f in fields]
    if args.symbols is not None:
        io.write_symbol_csv(args.symbols, symbol_table(fields[0][1].grid, cutoff))
    print("field,space,s,p,q,value")
    for p, value in rows:
        cols = (a["s"], idx.p, idx.q, value)
        print(",".join([str(p), a["space"]] + [io.format_float(v) for v in cols]))
    return EXIT_OK


def corpus_config_from(conf) -> tuple[CorpusConfig, str]:
    c = cfgmod.section(conf, "corpus")
    exps = BilinearExponents(**{k: c[k] for k in EXPONENT_NAMES})
    cc = CorpusConfig(
        count=c["count"], seed=c["seed"], dim=c["dim"], n=c["n"], kmax=c["kmax"], slope=c["slope"],
        s=c["s"], alpha=c["alpha"], beta=c["beta"], exponents=exps, cutoff=Cutoff(c["cutoff"]),
    )  # fmt: skip
    return cc, c["csv"]


def cmd_verify_bilinear(args) -> int:
    names = ("count", "seed", "dim", "n", "kmax", "slope", "s", "alpha", "beta", "cutoff") + EXPONENT_NAMES
    flags = _flags(args, "corpus", names)
    flags["corpus.csv"] = args.out
    conf = cfgmod.resolve(("corpus",), args.config, args.set, flags)
    cc, csv_path = corpus_config_from(conf)
    stats = corpus_verify(cc, csv_path)
    io.write_manifest(
        Path(csv_path).with_suffix(".manifest"),
        command="verify-bilinear",
        config=conf,
        info={"seeds": f"{cc.seed}..{cc.seed + cc.count - 1}" if cc.count else "", "instances": cc.count},
    )
    if stats.max_ratio is None:
        print("max_ratio = none (empty corpus)")
    else:
        print(f"max_ratio = {io.format_float(stats.max_ratio)}")
        for q, v in stats.quantiles.items():
            print(f"quantile_{q:g} = {io.format_float(v)}")
    print(f"csv = {csv_path}")
    return EXIT_OK


def run_config_from(conf) -> RunConfig:
    s = cfgmod.section(conf, "solver")
    return RunConfig(
        dim=s["dim"], n=s["n"], dt=s["dt"], t_end=s["t_end"], alpha=s["alpha"], initial=s["initial"],
        seed=s["seed"], slope=s["slope"], amplitude=s["amplitude"], init_file=s["init_file"] or None,
        sample_every=s["sample_every"], output_dir=conf["output.dir"],
    )  # fmt: skip


def _initial_label(rc: RunConfig) -> str:
    if rc.initial == "random":
        return (
            f"random: solenoidal Gaussian velocity, spectrum |k|^-{rc.slope:g}, band-limited to N/6, "
            f"rms {rc.amplitude:g} (corpus choice of this tool)"
        )
    if rc.initial == "file":
        return f"file: {rc.init_file}"
    return rc.initial


def cmd_simulate(args) -> int:
    names = ("dim", "n", "dt", "t_end", "alpha", "initial", "seed", "slope", "amplitude", "init_file", "sample_every")
    flags = _flags(args, "solver", names)
    flags["output.dir"] = args.out
    conf = cfgmod.resolve(("solver", "output"), args.config, args.set, flags)
    rc = run_config_from(conf)
    out = Path(rc.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = run(rc)
    io.write_series_csv(out / "series.csv", result.series)
    io.write_field(out / "final.lpf", inverse_transform(result.state.omega), f"vorticity at t={result.state.t!r}")
    io.write_manifest(
        out / "manifest.txt",
        command="simulate",
        config=conf,
        info={
            "seed": rc.seed,
            "initial_data": _initial_label(rc),
            "termination": result.termination,
            "flagged": result.termination != "completed",
            "steps": result.steps,
            "t_final": result.state.t,
            "samples": len(result.series),
        },
    )
    last = result.series.rows[-1]
    print(f"termination = {result.termination}")
    print(f"t = {io.format_float(last.t)}")
    print(f"M = {io.format_float(last.M)}")
    print(f"energy_residual = {io.format_float(last.energy_residual)}")
    print(f"output = {out}")
    return EXIT_OK if result.termination == "completed" else EXIT_UNSTABLE


def cmd_check_identities(args) -> int:
    if args.sharp:
        args.cutoff = "sharp"
    flags = _flags(args, "checks", ("seed", "count", "dim", "n", "dt", "t_end", "cutoff"))
    conf = cfgmod.resolve(("checks",), args.config, args.set, flags)
    c = cfgmod.section(conf, "checks")
    if c["dim"] not in (2, 3):
        raise UsageError("check-identities: dim must be 2 or 3")
    results = checks.run_all(
        cutoff=Cutoff(c["cutoff"]), seed=c["seed"], count=c["count"],
        dim=c["dim"], n=c["n"], dt=c["dt"], t_end=c["t_end"],
    )  # fmt: skip
    print(checks.format_table(results))
    failed = [r.name for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} passed" + (f"; failed: {', '.join(failed)}" if failed else ""))
    return EXIT_CHECK if failed else EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "verify-bilinear": cmd_verify_bilinear,
    "simulate": cmd_simulate,
    "check-identities": cmd_check_identities,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except InstabilityError as exc:
        print(f"lpns {args.command}: unstable: {exc}", file=sys.stderr)
        return EXIT_UNSTABLE
    except (LPNSError, ValueError) as exc:
        print(f"lpns {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"lpns {args.command}: error: {exc.strerror or exc}: {exc.filename or ''}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
