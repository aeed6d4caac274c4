"""Shifted-Laplacian solves used inside every fixed-point iteration.

The system is ``(i*I + (tau/2)*Lap - diag(d)) w = rhs`` with a real diagonal
``d``. Dirichlet grids give a plain tridiagonal matrix. Periodic grids add two
corner entries, handled by a rank-one (Sherman-Morrison) correction on top of
one tridiagonal factorization solved for two right-hand sides.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import lapack

from .grid import Grid1D

PIVOT_RTOL = 1e-14


class SolveFailure(ArithmeticError):
    """Raised when an elimination pivot collapses relative to its row scale."""

    def __init__(self, message, row=None):
        super().__init__(message)
        self.row = row


def _factor(lower, diag, upper):
    dl, d, du, du2, ipiv, info = lapack.zgttrf(lower, diag, upper)
    scale = np.abs(diag)
    scale[1:] += np.abs(lower)
    scale[:-1] += np.abs(upper)
    bad = np.flatnonzero(np.abs(d) <= PIVOT_RTOL * scale)
    if info != 0 or bad.size:
        row = int(bad[0]) if bad.size else int(info) - 1
        raise SolveFailure(f"tridiagonal pivot vanished at row {row}", row=row)
    return dl, d, du, du2, ipiv


def _solve_factored(factors, rhs):
    x, info = lapack.zgttrs(*factors, rhs)
    if info != 0:
        raise SolveFailure(f"zgttrs returned info={info}")
    return x


def _solve_small(lower, diag, upper, b):
    # the LAPACK wrapper mishandles n = 2, and 1x1/2x2 systems are trivial anyway
    a = np.diag(np.asarray(diag, dtype=complex))
    if len(diag) == 2:
        a[1, 0], a[0, 1] = lower[0], upper[0]
    scale = np.max(np.abs(a), axis=1)
    det = np.linalg.det(a)
    if not np.all(scale > 0) or abs(det) <= PIVOT_RTOL * np.prod(scale):
        raise SolveFailure("small tridiagonal system is singular", row=0)
    return np.linalg.solve(a, b)


def solve_tridiagonal(lower, diag, upper, rhs):
    """Solve a complex tridiagonal system; ``rhs`` may hold several columns."""
    rhs = np.asarray(rhs, dtype=complex)
    one_column = rhs.ndim == 1
    b = rhs.reshape(len(diag), -1)
    if len(diag) < 3:
        x = _solve_small(lower, diag, upper, b)
    else:
        x = _solve_factored(_factor(lower, diag, upper), b)
    return x[:, 0] if one_column else x


def solve_cyclic(lower, diag, upper, corner_lo, corner_hi, rhs):
    """Solve a cyclic tridiagonal system.

    ``corner_hi`` sits at (0, n-1) and ``corner_lo`` at (n-1, 0). The matrix is
    written as ``T + u v^T`` with ``u = (gamma, 0, .., 0, corner_lo)`` and
    ``v = (1, 0, .., 0, corner_hi / gamma)``; ``T`` absorbs the diagonal
    corrections.
    """
    n = len(diag)
    gamma = -diag[0] if diag[0] != 0 else -1.0
    t_diag = np.array(diag, dtype=complex)
    t_diag[0] -= gamma
    t_diag[-1] -= corner_lo * corner_hi / gamma
    u = np.zeros(n, dtype=complex)
    u[0] = gamma
    u[-1] = corner_lo
    both = np.column_stack((np.asarray(rhs, dtype=complex), u))
    sol = _solve_factored(_factor(lower, t_diag, upper), both)
    y, z = sol[:, 0], sol[:, 1]
    v_y = y[0] + corner_hi / gamma * y[-1]
    v_z = z[0] + corner_hi / gamma * z[-1]
    denom = 1.0 + v_z
    if abs(denom) <= PIVOT_RTOL * (1.0 + abs(v_z)):
        raise SolveFailure("rank-one correction is singular")
    return y - (v_y / denom) * z


def solve_shifted_system(d, rhs, grid: Grid1D, tau: float) -> np.ndarray:
    """Return ``w`` with ``(i*I + (tau/2)*Lap_h - diag(d)) w = rhs``."""
    rhs = grid.check(rhs)
    d = np.asarray(d, dtype=float)
    if d.shape != rhs.shape:
        raise ValueError(f"diagonal term of shape {d.shape} does not match state {rhs.shape}")
    n = grid.n_nodes
    off = 0.5 * tau / grid.h**2
    diag = 1j - 2.0 * off - d
    band = np.full(n - 1, off, dtype=complex)
    if grid.periodic:
        return solve_cyclic(band, diag, band.copy(), off, off, rhs)
    return solve_tridiagonal(band, diag, band.copy(), rhs)


def shifted_matrix(d, grid: Grid1D, tau: float) -> np.ndarray:
    """Dense version of the shifted operator, for checks on small grids."""
    from .grid import laplacian_matrix

    return 1j * np.eye(grid.n_nodes) + 0.5 * tau * laplacian_matrix(grid) - np.diag(d)
