"""Uniform 1D grids, discrete inner products and the three-point Laplacian."""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np


class BoundaryCondition(enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Grid1D:
    """Uniform mesh on ``[a, b]`` split into ``n_cells`` cells.

    Periodic grids carry unknowns at ``x_j = a + j*h`` for ``j = 0..n_cells-1``.
    Homogeneous Dirichlet grids carry only the interior nodes ``j = 1..n_cells-1``;
    the boundary values are identically zero and never stored.
    """

    a: float
    b: float
    n_cells: int
    bc: BoundaryCondition = BoundaryCondition.PERIODIC

    def __post_init__(self):
        if not isinstance(self.bc, BoundaryCondition):
            object.__setattr__(self, "bc", BoundaryCondition(self.bc))
        if int(self.n_cells) != self.n_cells or self.n_cells < 3:
            raise ValueError(f"n_cells must be an integer >= 3, got {self.n_cells}")
        if not self.b > self.a:
            raise ValueError(f"empty domain [{self.a}, {self.b}]")

    @property
    def h(self) -> float:
        return (self.b - self.a) / self.n_cells

    @property
    def length(self) -> float:
        return self.b - self.a

    @property
    def periodic(self) -> bool:
        return self.bc is BoundaryCondition.PERIODIC

    @property
    def n_nodes(self) -> int:
        return self.n_cells if self.periodic else self.n_cells - 1

    @property
    def x(self) -> np.ndarray:
        j = np.arange(self.n_nodes) if self.periodic else np.arange(1, self.n_cells)
        return self.a + j * self.h

    def check(self, u) -> np.ndarray:
        """Return ``u`` as a complex array, raising if it does not fit this grid."""
        u = np.asarray(u, dtype=complex)
        if u.shape != (self.n_nodes,):
            raise ValueError(
                f"state of shape {u.shape} does not conform to grid with {self.n_nodes} unknowns"
            )
        return u

    def sample(self, func, t: float = 0.0) -> np.ndarray:
        return np.asarray(func(self.x, t), dtype=complex)


@dataclass(frozen=True)
class ComplexState:
    """Grid function ``values`` stamped with time ``t``."""

    values: np.ndarray
    t: float = 0.0


def apply_laplacian(u, grid: Grid1D) -> np.ndarray:
    """Three-point discrete Laplacian ``(u[j-1] - 2u[j] + u[j+1]) / h**2``."""
    u = grid.check(u)
    out = -2.0 * u
    if grid.periodic:
        out += np.roll(u, 1) + np.roll(u, -1)
    else:
        out[1:] += u[:-1]
        out[:-1] += u[1:]
    return out / grid.h**2


def laplacian_matrix(grid: Grid1D) -> np.ndarray:
    """Dense matrix of :func:`apply_laplacian`. Only meant for small grids and tests."""
    n = grid.n_nodes
    m = -2.0 * np.eye(n) + np.eye(n, k=1) + np.eye(n, k=-1)
    if grid.periodic:
        m[0, -1] += 1.0
        m[-1, 0] += 1.0
    return m / grid.h**2


def inner_product(u, v, grid: Grid1D) -> complex:
    """Discrete ``L^2`` inner product ``h * sum(u * conj(v))``."""
    u = grid.check(u)
    v = grid.check(v)
    return complex(grid.h * np.vdot(v, u))


def l2_norm(u, grid: Grid1D) -> float:
    u = grid.check(u)
    return float(np.sqrt(grid.h * np.sum(np.abs(u) ** 2)))


def l4_norm(u, grid: Grid1D) -> float:
    u = grid.check(u)
    return float((grid.h * np.sum(np.abs(u) ** 4)) ** 0.25)


def linf_norm(u, grid: Grid1D) -> float:
    u = grid.check(u)
    return float(np.max(np.abs(u))) if u.size else 0.0


def gradient_energy(u, grid: Grid1D) -> float:
    """Discrete ``||grad u||^2``.

    Evaluated as ``h * sum |u[j+1] - u[j]|**2 / h**2``, which equals
    ``<-Lap u, u>`` by summation by parts but is real and nonnegative by
    construction.
    """
    u = grid.check(u)
    if grid.periodic:
        diff = np.roll(u, -1) - u
    else:
        padded = np.concatenate(([0.0], u, [0.0]))
        diff = np.diff(padded)
    return float(np.sum(np.abs(diff) ** 2) / grid.h)
