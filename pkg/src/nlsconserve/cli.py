"""Command-line front end.

    nlsconserve solve      --scheme cn --tau 0.015625 --cells 1280 --tend 1
    nlsconserve converge   --scheme mbdf2 --taus 1/16,1/32,1/64 --cells 4000
    nlsconserve dispersion --scheme mbdf2 --k 1 --lambda 2 --taus 1e-2,1e-3,1e-4
    nlsconserve blowup     --scheme cn,mbdf2 --taus 0.01,0.005 --cells 2000

Settings come from built-in defaults, then an optional ``--config`` file
(``key = value`` lines, ``#`` comments), then command-line flags.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass, fields
from fractions import Fraction

from . import csvio
from .dispersion import DispersionQuery, rate_table
from .experiments import blowup_sweep, convergence_study, get_preset
from .grid import BoundaryCondition, Grid1D
from .nonlinearity import Nonlinearity
from .schemes import get_scheme
from .stepper import RunStatus, SolverConfig, StartupMode, run

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2

SUBCOMMANDS = ("solve", "converge", "dispersion", "blowup")


class UsageError(Exception):
    pass


def _number(text) -> float:
    text = str(text).strip()
    try:
        return float(text)
    except ValueError:
        pass
    try:
        return float(Fraction(text))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def _integer(text) -> int:
    v = _number(text)
    if v != int(v):
        raise UsageError(f"not an integer: {text!r}")
    return int(v)


def _number_list(text) -> tuple:
    parts = [p for p in str(text).split(",") if p.strip()]
    if not parts:
        raise UsageError("empty list")
    return tuple(_number(p) for p in parts)


def _domain(text) -> tuple:
    vals = _number_list(text)
    if len(vals) != 2:
        raise UsageError(f"domain needs two endpoints, got {text!r}")
    return vals


def _nonlinearity_family(text) -> int:
    """``cubic`` -> 1, ``quintic`` -> 2, ``powerP`` / ``power:P`` -> P."""
    t = str(text).strip().lower()
    if t == "cubic":
        return 1
    if t == "quintic":
        return 2
    if t.startswith("power"):
        return _integer(t[5:].lstrip(":="))
    raise UsageError(f"unknown nonlinearity {text!r}")


def _choice(options):
    def conv(text):
        t = str(text).strip().lower()
        if t not in options:
            raise UsageError(f"{text!r} is not one of {', '.join(options)}")
        return t
    return conv


def _text(text) -> str:
    return str(text).strip()


# key -> (converter, help)
KEYS = {
    "preset": (_choice(("soliton", "quintic-blowup")), "problem preset"),
    "scheme": (_text, "scheme name (comma list allowed for blowup)"),
    "tau": (_number, "time step"),
    "cells": (_integer, "number of grid cells"),
    "domain": (_domain, "domain endpoints a,b"),
    "bc": (_choice(("periodic", "dirichlet")), "boundary condition"),
    "nl": (_nonlinearity_family, "nonlinearity: cubic, quintic or powerP"),
    "lambda": (_number, "coupling constant"),
    "tend": (_number, "final time"),
    "teval": (_number, "evaluation time for convergence studies"),
    "delta": (_number, "fixed-point tolerance"),
    "max_iters": (_integer, "fixed-point iteration cap"),
    "startup": (_choice(("exact", "cascade-cn", "auto")), "multistep startup"),
    "stop_factor": (_number, "amplitude growth factor that stops a run"),
    "taus": (_number_list, "comma-separated time steps"),
    "k": (_number, "wave number for dispersion"),
    "omega": (_number, "linear frequency for dispersion (overrides k)"),
    "workers": (_integer, "parallel worker processes"),
    "output": (_text, "output CSV path, '-' for stdout"),
}

DEFAULTS = {
    "solve": dict(preset="soliton", scheme="cn", tau=2.0**-6, cells=1280, tend=1.0),
    "converge": dict(preset="soliton", scheme="cn", cells=4000, teval=2.0, taus=(1 / 8, 1 / 16, 1 / 32),
                     startup="exact"),
    "dispersion": dict(scheme="cn", k=1.0, **{"lambda": 2.0}, taus=(1e-1, 1e-2, 1e-3, 1e-4)),
    "blowup": dict(preset="quintic-blowup", scheme="cn", cells=2000, tend=1.0, taus=(0.01,)),
}
COMMON_DEFAULTS = dict(delta=1e-12, max_iters=200, startup="auto", stop_factor=10.0, workers=1, output="-")


@dataclass(frozen=True)
class CliConfig:
    subcommand: str
    preset: str | None = None
    scheme: str = "cn"
    tau: float | None = None
    cells: int | None = None
    domain: tuple | None = None
    bc: str | None = None
    nl: int | None = None
    lam: float | None = None
    tend: float | None = None
    teval: float | None = None
    delta: float = 1e-12
    max_iters: int = 200
    startup: str = "auto"
    stop_factor: float = 10.0
    taus: tuple | None = None
    k: float | None = None
    omega: float | None = None
    workers: int = 1
    output: str = "-"


def read_config_file(path) -> dict:
    values = {}
    try:
        fh = open(path, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (s.strip() for s in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in KEYS:
                raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = KEYS[key][0](value)
    return values


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nlsconserve", description=__doc__.split("\n\n")[0].strip(),
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("-v", "--verbose", action="store_true", help="log run progress")
    sub = parser.add_subparsers(dest="subcommand", metavar="{" + ",".join(SUBCOMMANDS) + "}")
    for name in SUBCOMMANDS:
        p = sub.add_parser(name, argument_default=argparse.SUPPRESS)
        p.add_argument("--config", help="key = value settings file")
        for key, (_, help_text) in KEYS.items():
            flag = "--" + key.replace("_", "-")
            extra = ("-o",) if key == "output" else ()
            p.add_argument(flag, *extra, dest=key, help=help_text)
    return parser


def _join_negative_values(argv) -> list:
    # "--domain -20,20" would otherwise read "-20,20" as an option
    out, it = [], iter(argv)
    for tok in it:
        if tok in ("--domain", "--taus"):
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{tok}={nxt}")
                continue
            out.append(tok)
            if nxt is not None:
                out.append(nxt)
            continue
        out.append(tok)
    return out


def parse(argv) -> CliConfig:
    """Merge defaults, config file and flags into a :class:`CliConfig`."""
    parser = build_parser()
    args = vars(parser.parse_args(_join_negative_values(argv)))
    sub = args.pop("subcommand", None)
    if sub is None:
        raise UsageError("missing subcommand")
    args.pop("verbose", None)
    merged = dict(COMMON_DEFAULTS)
    merged.update(DEFAULTS[sub])
    config_path = args.pop("config", None)
    if config_path:
        merged.update(read_config_file(config_path))
    for key, raw in args.items():
        merged[key] = KEYS[key][0](raw)
    merged["lam"] = merged.pop("lambda", None)
    known = {f.name for f in fields(CliConfig)}
    return CliConfig(subcommand=sub, **{k: v for k, v in merged.items() if k in known})


def _startup(cfg: CliConfig):
    return None if cfg.startup == "auto" else StartupMode(cfg.startup)


def _problem_setup(cfg: CliConfig):
    prob = get_preset(cfg.preset)
    a, b = cfg.domain if cfg.domain else (prob.a, prob.b)
    bc = BoundaryCondition(cfg.bc) if cfg.bc else prob.bc
    grid = Grid1D(a, b, cfg.cells, bc)
    nl = Nonlinearity(cfg.lam if cfg.lam is not None else prob.nl.lam,
                      cfg.nl if cfg.nl is not None else prob.nl.power)
    # the exact sampler only applies to the unmodified preset equation
    same_problem = nl == prob.nl and (a, b) == (prob.a, prob.b)
    exact = prob.exact if same_problem else None
    return prob, grid, nl, exact


def cmd_solve(cfg: CliConfig) -> int:
    prob, grid, nl, exact = _problem_setup(cfg)
    startup = _startup(cfg)
    if startup is StartupMode.EXACT and exact is None:
        raise UsageError("exact startup needs a preset with a known exact solution")
    solver = SolverConfig(tau=cfg.tau, t_end=cfg.tend, delta=cfg.delta, max_iters=cfg.max_iters,
                          startup=startup, amplitude_stop_factor=cfg.stop_factor)
    res = run(prob.u0(grid), grid, nl, get_scheme(cfg.scheme), solver, exact=exact)
    rows = [[getattr(r, c) for c in csvio.SCHEMAS["solve"]] for r in res.diagnostics.records]
    csvio.emit_csv(csvio.SCHEMAS["solve"], rows, cfg.output)
    if res.status is not RunStatus.COMPLETED:
        print(f"run ended early: {res.status.value} ({res.diagnostics.message})", file=sys.stderr)
        if prob.name != "quintic-blowup":
            return EXIT_SOLVER
    return EXIT_OK


def cmd_converge(cfg: CliConfig) -> int:
    if cfg.preset != "soliton":
        raise UsageError("convergence studies need the soliton preset")
    startup = _startup(cfg) or StartupMode.EXACT
    try:
        rows = convergence_study(cfg.scheme, cfg.taus, n_cells=cfg.cells, t_eval=cfg.teval,
                                 startup_mode=startup, delta=cfg.delta, workers=cfg.workers)
    except RuntimeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_SOLVER
    out = [[getattr(r, c) for c in csvio.SCHEMAS["converge"]] for r in rows]
    csvio.emit_csv(csvio.SCHEMAS["converge"], out, cfg.output)
    return EXIT_OK


def cmd_dispersion(cfg: CliConfig) -> int:
    lam = cfg.lam if cfg.lam is not None else 2.0
    taus = sorted(cfg.taus, reverse=True)
    if cfg.omega is not None:
        q = DispersionQuery.from_omega(cfg.scheme, cfg.omega, lam, taus[0])
    else:
        q = DispersionQuery(cfg.scheme, cfg.k, lam, taus[0])
    csvio.emit_csv(csvio.SCHEMAS["dispersion"], rate_table(q, taus), cfg.output)
    return EXIT_OK


def cmd_blowup(cfg: CliConfig) -> int:
    if cfg.preset != "quintic-blowup":
        raise UsageError("blow-up studies need the quintic-blowup preset")
    schemes = [get_scheme(s).name for s in cfg.scheme.split(",") if s.strip()]
    overrides = dict(delta=cfg.delta, max_iters=cfg.max_iters, amplitude_stop_factor=cfg.stop_factor)
    reports = blowup_sweep(schemes, cfg.taus, n_cells=cfg.cells, t_end=cfg.tend, workers=cfg.workers,
                           **overrides)
    rows = [[getattr(r, c) for c in csvio.SCHEMAS["blowup"]] for r in reports]
    csvio.emit_csv(csvio.SCHEMAS["blowup"], rows, cfg.output)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "converge": cmd_converge, "dispersion": cmd_dispersion, "blowup": cmd_blowup}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    if not argv:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    if "-v" in argv or "--verbose" in argv:
        logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = parse(argv)
        return COMMANDS[cfg.subcommand](cfg)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"nlsconserve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"nlsconserve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"nlsconserve: cannot write output: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
