"""Time loop for the conservative R-schemes.

Each step composes ``R^n`` from the solution history, solves the implicit
midpoint-type equation for ``R^{n+1}`` by fixed-point iteration (one shifted
Laplacian solve per sweep) and recovers ``u^{n+1}`` from the scheme weights.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from .grid import ComplexState, Grid1D, l2_norm, linf_norm
from .nonlinearity import Nonlinearity
from .schemes import (
    SchemeCoefficients,
    UHistory,
    compose_R,
    energy,
    get_scheme,
    mass,
    recover_u,
)
from .tridiag import SolveFailure, solve_shifted_system

logger = logging.getLogger(__name__)


class StartupMode(enum.Enum):
    EXACT = "exact"
    CASCADE_CN = "cascade-cn"


class RunStatus(enum.Enum):
    COMPLETED = "completed"
    AMPLITUDE_STOP = "amplitude-stop"
    SOLVER_FAILURE = "solver-failure"
    NON_FINITE = "non-finite"


class FixedPointFailure(RuntimeError):
    """The fixed-point sweep did not settle; carries the last iterate."""

    def __init__(self, message, last_iterate=None, iterations=0):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.iterations = iterations


@dataclass(frozen=True)
class SolverConfig:
    tau: float
    t_end: float
    delta: float = 1e-12
    max_iters: int = 200
    startup: StartupMode | None = None  # None: exact samples when a sampler is given
    amplitude_stop_factor: float = 10.0
    snapshot_times: tuple = ()

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if not self.amplitude_stop_factor > 1:
            raise ValueError("amplitude_stop_factor must exceed 1")
        if self.startup is not None and not isinstance(self.startup, StartupMode):
            object.__setattr__(self, "startup", StartupMode(self.startup))

    @property
    def n_steps(self) -> int:
        return int(np.floor(self.t_end / self.tau + 1e-9))


@dataclass(frozen=True)
class StepRecord:
    step: int
    t: float
    mass_R: float
    energy_R: float
    mass_u: float
    energy_u: float
    linf_u: float
    fp_iters: int


@dataclass
class RunDiagnostics:
    """Per-step record of the conserved functionals and solver effort.

    The first record describes the starting level (the first composed ``R``)
    and has ``fp_iters == 0``; every later record is one accepted step.
    """

    records: list = field(default_factory=list)
    status: RunStatus = RunStatus.COMPLETED
    energy_label: str = "H"
    message: str = ""

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])

    def __len__(self):
        return len(self.records)

    def max_relative_drift(self, name: str) -> float:
        col = self.column(name)
        ref = col[0]
        return float(np.max(np.abs(col - ref)) / abs(ref)) if ref != 0 else float(np.max(np.abs(col)))


@dataclass
class RunResult:
    diagnostics: RunDiagnostics
    snapshots: dict
    u: np.ndarray
    R: np.ndarray
    t: float

    @property
    def status(self) -> RunStatus:
        return self.diagnostics.status


def fixed_point_update(R_n, grid: Grid1D, nl: Nonlinearity, tau: float, delta: float = 1e-12,
                       max_iters: int = 200):
    """Advance ``R^n`` to ``R^{n+1}``; returns ``(R_next, iterations)``.

    Sweeps ``(i + (tau/2) Lap - diag(d_l)) w_{l+1} = i R^n`` with
    ``d_l = (lam*tau/2) * G(|2 w_l - R^n|^2, |R^n|^2)`` starting from
    ``w_0 = R^n``, until the discrete l2 change drops to ``delta``. For the
    cubic case this diagonal is ``(lam*tau/4) * (|R^n|^2 + |2 w_l - R^n|^2)``.
    """
    R_n = grid.check(R_n)
    rhs = 1j * R_n
    rho_n = np.abs(R_n) ** 2
    coef = 0.5 * nl.lam * tau
    w = R_n
    for it in range(1, max_iters + 1):
        d = coef * nl.G(np.abs(2.0 * w - R_n) ** 2, rho_n)
        try:
            w_new = solve_shifted_system(d, rhs, grid, tau)
        except SolveFailure as exc:
            raise FixedPointFailure(str(exc), last_iterate=w, iterations=it) from exc
        if not np.all(np.isfinite(w_new)):
            raise FixedPointFailure("non-finite fixed-point iterate", last_iterate=w, iterations=it)
        change = l2_norm(w_new - w, grid)
        w = w_new
        if change <= delta:
            return 2.0 * w - R_n, it
    raise FixedPointFailure(
        f"no convergence to {delta:g} in {max_iters} sweeps (last change {change:.3e})",
        last_iterate=w,
        iterations=max_iters,
    )


def startup(u0, scheme: SchemeCoefficients, cfg: SolverConfig, grid: Grid1D, nl: Nonlinearity,
            exact=None) -> UHistory:
    """Levels ``u^0 .. u^{k-1}``, either sampled from ``exact(x, t)`` or by Crank-Nicolson steps."""
    mode = cfg.startup
    if mode is None:
        mode = StartupMode.EXACT if exact is not None else StartupMode.CASCADE_CN
    if mode is StartupMode.EXACT and exact is None and scheme.k > 1:
        raise ValueError("exact-sample startup needs an exact solution sampler")
    hist = UHistory(scheme.k, cfg.tau)
    u = grid.check(u0)
    hist.push(u, 0.0)
    for n in range(1, scheme.k):
        t = n * cfg.tau
        if mode is StartupMode.EXACT:
            u = grid.sample(exact, t)
        else:
            u, _ = fixed_point_update(u, grid, nl, cfg.tau, cfg.delta, cfg.max_iters)
        hist.push(u, t)
    return hist


def _record(step, t, R, u, grid, nl, iters):
    return StepRecord(
        step=step,
        t=t,
        mass_R=mass(R, grid),
        energy_R=energy(R, grid, nl),
        mass_u=mass(u, grid),
        energy_u=energy(u, grid, nl),
        linf_u=linf_norm(u, grid),
        fp_iters=iters,
    )


def run(u0, grid: Grid1D, nl: Nonlinearity, scheme, cfg: SolverConfig, exact=None) -> RunResult:
    """Integrate from ``u0`` to ``cfg.t_end``.

    Stops early, without raising, when the amplitude exceeds
    ``amplitude_stop_factor`` times its initial value, when the fixed-point
    solve fails, or when the state stops being finite. The diagnostics
    gathered until then are returned with the matching status.
    """
    if isinstance(scheme, str):
        scheme = get_scheme(scheme)
    u0 = grid.check(u0)
    hist = startup(u0, scheme, cfg, grid, nl, exact)
    tau = cfg.tau
    n = scheme.k - 1
    R = compose_R(hist, scheme)
    u = hist[0]
    diag = RunDiagnostics(energy_label="H" if nl.is_cubic else "H_g")
    diag.records.append(_record(n, n * tau, R, u, grid, nl, 0))

    amp0 = linf_norm(u0, grid)
    amp_limit = cfg.amplitude_stop_factor * amp0 if amp0 > 0 else np.inf
    pending = sorted(cfg.snapshot_times)
    snapshots = {}

    def take_snapshots(t, u):
        while pending and pending[0] <= t + 0.5 * tau:
            snapshots[pending.pop(0)] = ComplexState(u.copy(), t)

    for j in reversed(range(scheme.k)):
        take_snapshots(hist.times[j], hist[j])

    while n < cfg.n_steps:
        try:
            R_next, iters = fixed_point_update(R, grid, nl, tau, cfg.delta, cfg.max_iters)
        except FixedPointFailure as exc:
            diag.status = RunStatus.SOLVER_FAILURE
            diag.message = f"step {n + 1}: {exc}"
            logger.info("run stopped at t=%.6g: %s", n * tau, exc)
            break
        u_next = recover_u(R_next, hist, scheme)
        if not (np.all(np.isfinite(R_next)) and np.all(np.isfinite(u_next))):
            diag.status = RunStatus.NON_FINITE
            diag.message = f"step {n + 1}: non-finite state"
            break
        n += 1
        t = n * tau
        hist.push(u_next, t)
        R, u = R_next, u_next
        rec = _record(n, t, R, u, grid, nl, iters)
        diag.records.append(rec)
        take_snapshots(t, u)
        if rec.linf_u >= amp_limit:
            diag.status = RunStatus.AMPLITUDE_STOP
            diag.message = f"step {n}: amplitude {rec.linf_u:.6g} >= {amp_limit:.6g}"
            break

    return RunResult(diagnostics=diag, snapshots=snapshots, u=u, R=R, t=n * tau)
