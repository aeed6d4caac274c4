"""Preset problems and the studies built on them.

``soliton``: cubic focusing equation ``i u_t + u_xx + 2|u|^2 u = 0`` on
``[-20, 20]`` with the travelling sech soliton as exact solution.

``quintic-blowup``: ``i u_t + u_xx + |u|^4 u = 0`` on ``[-10, 10]`` from the
Gaussian ``1.6 exp(-x^2)``, whose energy is negative so the solution
concentrates in finite time.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .grid import BoundaryCondition, Grid1D
from .nonlinearity import Nonlinearity
from .stepper import RunDiagnostics, RunStatus, SolverConfig, StartupMode, run

WORKERS_ENV = "NLSCONSERVE_WORKERS"


def soliton_exact(x, t):
    """``sech(x - 4t) exp(i(2x - 3t))``."""
    x = np.asarray(x, dtype=float)
    return np.exp(1j * (2.0 * x - 3.0 * t)) / np.cosh(x - 4.0 * t)


def quintic_initial(x, t=0.0):
    return 1.6 * np.exp(-np.asarray(x, dtype=float) ** 2) + 0j


@dataclass(frozen=True)
class Problem:
    name: str
    a: float
    b: float
    bc: BoundaryCondition
    nl: Nonlinearity
    initial: object
    exact: object = None

    def grid(self, n_cells: int) -> Grid1D:
        return Grid1D(self.a, self.b, n_cells, self.bc)

    def u0(self, grid: Grid1D) -> np.ndarray:
        return grid.sample(self.initial, 0.0)


PRESETS = {
    "soliton": Problem("soliton", -20.0, 20.0, BoundaryCondition.PERIODIC, Nonlinearity.cubic(-2.0),
                       soliton_exact, soliton_exact),
    "quintic-blowup": Problem("quintic-blowup", -10.0, 10.0, BoundaryCondition.PERIODIC,
                              Nonlinearity.quintic(-1.0), quintic_initial),
}


def get_preset(name: str) -> Problem:
    try:
        return PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {', '.join(PRESETS)}") from None


def n_workers(requested=None) -> int:
    if requested is not None:
        return max(1, int(requested))
    return max(1, int(os.environ.get(WORKERS_ENV, "1")))


def fan_out(fn, items, workers=None) -> list:
    """``[fn(i) for i in items]``, optionally across processes; result order follows ``items``."""
    items = list(items)
    workers = min(n_workers(workers), len(items)) if items else 1
    if workers <= 1:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _order(prev, cur, ratio):
    if prev is None or prev <= 0 or cur <= 0:
        return None
    return math.log(prev / cur) / math.log(ratio)


@dataclass(frozen=True)
class ConvergenceRow:
    tau: float
    l2_re: float
    order_re: float | None
    linf_re: float
    order_linf_re: float | None
    l2_im: float
    order_im: float | None
    linf_im: float
    order_linf_im: float | None
    l2: float
    order_l2: float | None
    status: RunStatus


def _soliton_errors(args):
    scheme, tau, n_cells, t_eval, startup_mode, delta = args
    prob = PRESETS["soliton"]
    grid = prob.grid(n_cells)
    steps = t_eval / tau
    if abs(steps - round(steps)) > 1e-9 * max(1.0, steps):
        raise ValueError(f"t_eval={t_eval} is not a multiple of tau={tau}")
    cfg = SolverConfig(tau=tau, t_end=t_eval, delta=delta, startup=startup_mode)
    res = run(prob.u0(grid), grid, prob.nl, scheme, cfg, exact=prob.exact)
    if res.status is not RunStatus.COMPLETED:
        return res.status, (math.inf,) * 5
    err = res.u - grid.sample(prob.exact, t_eval)
    h = grid.h
    return res.status, (
        math.sqrt(h * np.sum(err.real**2)),
        float(np.max(np.abs(err.real))),
        math.sqrt(h * np.sum(err.imag**2)),
        float(np.max(np.abs(err.imag))),
        math.sqrt(h * np.sum(np.abs(err) ** 2)),
    )


def convergence_study(scheme: str, taus, n_cells: int = 4000, t_eval: float = 2.0,
                      startup_mode=StartupMode.EXACT, delta: float = 1e-12, workers=None) -> list:
    """Soliton errors at ``t_eval`` for each time step, split into real and imaginary parts.

    Orders compare consecutive rows: ``log(e_prev/e) / log(tau_prev/tau)``.
    A run that stops early raises ``RuntimeError``.
    """
    taus = [float(t) for t in taus]
    jobs = [(scheme, tau, n_cells, t_eval, startup_mode, delta) for tau in taus]
    results = fan_out(_soliton_errors, jobs, workers)
    rows, prev = [], None
    for tau, (status, errs) in zip(taus, results):
        if status is not RunStatus.COMPLETED:
            raise RuntimeError(f"{scheme} run with tau={tau} ended with status {status.value}")
        ratio = prev[0] / tau if prev else None
        orders = [_order(prev[1][i] if prev else None, errs[i], ratio) for i in range(5)]
        rows.append(ConvergenceRow(tau, errs[0], orders[0], errs[1], orders[1], errs[2], orders[2],
                                   errs[3], orders[3], errs[4], orders[4], status))
        prev = (tau, errs)
    return rows


@dataclass(frozen=True)
class BlowupReport:
    scheme: str
    tau: float
    n_cells: int
    t_max: float
    u_max: float
    t1_R: float
    t2_R: float
    status: RunStatus


def blowup_criteria(diag: RunDiagnostics):
    """``(t_max, u_max, t1_R, t2_R)`` from recorded diagnostics.

    ``t_max`` maximizes the amplitude of ``u``, ``t1_R`` minimizes the energy of
    ``R`` and ``t2_R`` is the time reached by the largest one-step energy
    increase. Ties go to the earliest time.
    """
    if not diag.records:
        raise ValueError("no diagnostics recorded")
    t = diag.column("t")
    amp = diag.column("linf_u")
    e = diag.column("energy_R")
    i_max = int(np.argmax(amp))
    i1 = int(np.argmin(e))
    if len(e) > 1:
        i2 = int(np.argmax(np.diff(e))) + 1
    else:
        i2 = 0
    return float(t[i_max]), float(amp[i_max]), float(t[i1]), float(t[i2])


def _blowup_job(args):
    scheme, tau, n_cells, t_end, cfg_overrides, initial = args
    prob = PRESETS["quintic-blowup"]
    grid = prob.grid(n_cells)
    cfg = replace(SolverConfig(tau=tau, t_end=t_end), **cfg_overrides)
    u0 = prob.u0(grid) if initial is None else grid.sample(initial, 0.0)
    res = run(u0, grid, prob.nl, scheme, cfg)
    return res.diagnostics


def blowup_study(scheme: str, tau: float, n_cells: int = 2000, t_end: float = 1.0, initial=None,
                 **cfg_overrides) -> tuple:
    """Run the quintic preset and extract the blow-up criteria.

    Returns ``(BlowupReport, RunDiagnostics)``. A run that never degenerates
    still yields a report, with status ``COMPLETED``.
    """
    diag = _blowup_job((scheme, tau, n_cells, t_end, cfg_overrides, initial))
    return _report(scheme, tau, n_cells, diag), diag


def _report(scheme, tau, n_cells, diag):
    t_max, u_max, t1, t2 = blowup_criteria(diag)
    return BlowupReport(str(scheme), tau, n_cells, t_max, u_max, t1, t2, diag.status)


def blowup_sweep(schemes, taus, n_cells: int = 2000, t_end: float = 1.0, workers=None,
                 **cfg_overrides) -> list:
    jobs = [(s, tau, n_cells, t_end, cfg_overrides, None) for tau in taus for s in schemes]
    diags = fan_out(_blowup_job, jobs, workers)
    return [_report(j[0], j[1], n_cells, d) for j, d in zip(jobs, diags)]


CONSERVATION_COLUMNS = ("t", "mass_R", "energy_R", "mass_u", "energy_u")


def conservation_series(diag: RunDiagnostics) -> list:
    """Rows ``(t, mass_R, energy_R, mass_u, energy_u)`` copied from the diagnostics."""
    if not diag.records:
        raise ValueError("no diagnostics recorded")
    return [tuple(getattr(r, c) for c in CONSERVATION_COLUMNS) for r in diag.records]
