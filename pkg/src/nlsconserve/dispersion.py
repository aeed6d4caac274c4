"""Plane-wave dispersion analysis of the R-schemes for the cubic equation.

Inserting ``u^n = exp(i(kx - w n tau))`` into the scheme makes ``R^n`` a
plane wave with amplitude ``B(theta) = sum_j beta_j exp(i j theta)``,
``theta = w tau``. The numerical frequency then solves

    (2/tau) sin(theta/2) = (k^2 + lam * H(theta)) cos(theta/2),
    H(theta) = |B(theta)|^2,

with ``H = 1`` for Crank-Nicolson and ``H = cos^2(theta/2)`` for leapfrog.
``H`` is stored as a cosine series ``c_0 + sum_m c_m cos(m theta)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq

from .schemes import SchemeCoefficients, get_scheme

SUPPORTED = ("cn", "leapfrog", "mbdf2", "mbdf3", "mbdf4", "mbdf5", "mbdf6")


class UnsupportedScheme(ValueError):
    pass


class RootNotFound(RuntimeError):
    pass


def exact_omega(k_wave: float, lam: float) -> float:
    return k_wave**2 + lam


def dispersion_error(omega: float, omega_t: float) -> float:
    if omega == 0:
        raise ZeroDivisionError("dispersion error is undefined for omega = 0")
    return abs(omega - omega_t) / abs(omega)


def _as_scheme(scheme) -> SchemeCoefficients:
    c = get_scheme(scheme) if isinstance(scheme, str) else scheme
    if c.name not in SUPPORTED:
        raise UnsupportedScheme(f"no dispersion relation available for scheme {c.name!r}")
    return c


def amplification_cosine_series(scheme) -> list:
    """Exact cosine coefficients ``[c_0, c_1, ...]`` of ``|sum_j beta_j e^{i j theta}|^2``."""
    beta = _as_scheme(scheme).exact_beta
    k = len(beta)
    coeffs = [sum((b * b for b in beta), Fraction(0))]
    for m in range(1, k):
        coeffs.append(2 * sum((beta[j] * beta[j + m] for j in range(k - m)), Fraction(0)))
    return coeffs


@dataclass(frozen=True)
class DispersionQuery:
    scheme: str
    k_wave: float
    lam: float
    tau: float

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")

    @classmethod
    def from_omega(cls, scheme: str, omega: float, lam: float, tau: float) -> "DispersionQuery":
        """Query whose linear frequency ``k^2 + lam`` equals ``omega``."""
        k_sq = omega - lam
        if k_sq < 0:
            raise ValueError(f"omega={omega} < lam={lam} has no real wave number")
        return cls(scheme, math.sqrt(k_sq), lam, tau)

    @property
    def omega(self) -> float:
        return exact_omega(self.k_wave, self.lam)

    def with_tau(self, tau: float) -> "DispersionQuery":
        return DispersionQuery(self.scheme, self.k_wave, self.lam, tau)


class _Relation:
    def __init__(self, q: DispersionQuery):
        self.c = _as_scheme(q.scheme)
        self.q = q
        coeffs = np.array([float(v) for v in amplification_cosine_series(self.c)])
        self.coeffs = coeffs
        self.m = np.arange(len(coeffs))

    def H(self, theta):
        return float(np.dot(self.coeffs, np.cos(self.m * theta)))

    def dH(self, theta):
        return float(-np.dot(self.coeffs * self.m, np.sin(self.m * theta)))

    def residual(self, w):
        q = self.q
        half = 0.5 * w * q.tau
        return 2.0 / q.tau * math.sin(half) - (q.k_wave**2 + q.lam * self.H(w * q.tau)) * math.cos(half)

    def derivative(self, w):
        q = self.q
        theta = w * q.tau
        half = 0.5 * theta
        lin = q.k_wave**2 + q.lam * self.H(theta)
        return math.cos(half) - q.lam * q.tau * self.dH(theta) * math.cos(half) + 0.5 * q.tau * lin * math.sin(half)


def dispersion_residual(q: DispersionQuery, omega_t: float) -> float:
    return _Relation(q).residual(omega_t)


def solve_omega_tilde(q: DispersionQuery, max_newton: int = 50) -> float:
    """Numerical frequency on the branch connected to ``k^2 + lam``."""
    rel = _Relation(q)
    omega = q.omega
    if not 0 < omega < math.pi / q.tau:
        raise ValueError(f"omega={omega} must lie in (0, pi/tau)")
    if rel.c.name == "cn":
        return 2.0 / q.tau * math.atan(omega * q.tau / 2.0)

    tol = 1e-13 * max(1.0, omega)
    upper = math.pi / q.tau
    w = omega
    for _ in range(max_newton):
        g = rel.residual(w)
        dg = rel.derivative(w)
        if dg == 0 or not math.isfinite(dg):
            break
        step = g / dg
        w_new = w - step
        if not 0 < w_new < upper:
            break
        w = w_new
        if abs(step) <= 4 * np.finfo(float).eps * abs(w):
            break
    else:
        w = None
    if w is not None and abs(rel.residual(w)) <= tol and abs(w - omega) < 0.5 * omega:
        return w

    lo = max(0.5 * omega, 1e-300)
    hi = min(1.5 * omega, upper * (1 - 1e-12))
    g_lo, g_hi = rel.residual(lo), rel.residual(hi)
    if g_lo * g_hi > 0:
        raise RootNotFound(f"no sign change of the dispersion relation on [{lo}, {hi}]")
    return brentq(rel.residual, lo, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def rate_table(q: DispersionQuery, taus) -> list:
    """Rows ``(tau, omega, omega_tilde, error, order)``; the first order is ``None``."""
    taus = [float(t) for t in taus]
    if len(taus) < 2:
        raise ValueError("need at least two time steps")
    if any(b >= a for a, b in zip(taus, taus[1:])):
        raise ValueError("time steps must be strictly decreasing")
    rows = []
    prev = None
    for tau in taus:
        qt = q.with_tau(tau)
        w_t = solve_omega_tilde(qt)
        err = dispersion_error(qt.omega, w_t)
        order = None
        if prev is not None:
            order = math.log(prev[1] / err) / math.log(prev[0] / tau)
        rows.append((tau, qt.omega, w_t, err, order))
        prev = (tau, err)
    return rows
