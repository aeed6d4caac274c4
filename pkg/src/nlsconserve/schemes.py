"""Coefficient catalogue for the R-formulation of multistep schemes.

Every scheme advances an auxiliary variable ``R^n = sum_j beta_j u^{n-j}`` with
the same one-step conservative update; only ``beta`` differs. The modified BDF
coefficients are partial sums of the classical BDF weights, so that the BDF
difference becomes a first-order difference of ``R``.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction as Fr

import numpy as np

from .grid import Grid1D, gradient_energy, l2_norm
from .nonlinearity import Nonlinearity

# classical BDF weights for u_t(t_{n+1}) ~ (1/tau) sum_j alpha_j u^{n+1-j}
BDF_ALPHA = {
    2: (Fr(3, 2), Fr(-2), Fr(1, 2)),
    3: (Fr(11, 6), Fr(-3), Fr(3, 2), Fr(-1, 3)),
    4: (Fr(25, 12), Fr(-4), Fr(3), Fr(-4, 3), Fr(1, 4)),
    5: (Fr(137, 60), Fr(-5), Fr(5), Fr(-10, 3), Fr(5, 4), Fr(-1, 5)),
    6: (Fr(147, 60), Fr(-6), Fr(15, 2), Fr(-20, 3), Fr(15, 4), Fr(-6, 5), Fr(1, 6)),
}

# beta rows as tabulated, kept separately so the partial-sum construction can be checked against them
TABULATED_BETA = {
    "cn": (Fr(1),),
    "leapfrog": (Fr(1, 2), Fr(1, 2)),
    "mbdf2": (Fr(3, 2), Fr(-1, 2)),
    "mbdf3": (Fr(11, 6), Fr(-7, 6), Fr(1, 3)),
    "mbdf4": (Fr(25, 12), Fr(-23, 12), Fr(13, 12), Fr(-1, 4)),
    "mbdf5": (Fr(137, 60), Fr(-163, 60), Fr(137, 60), Fr(-21, 20), Fr(1, 5)),
    "mbdf6": (Fr(147, 60), Fr(-213, 60), Fr(237, 60), Fr(-163, 60), Fr(31, 30), Fr(-1, 6)),
    "sym4": (Fr(-1, 12), Fr(7, 12), Fr(7, 12), Fr(-1, 12)),
}

ALIASES = {
    "cranknicolson": "cn",
    "lf": "leapfrog",
    "fourstepsymmetric": "sym4",
    "4stepsymmetric": "sym4",
    "symmetric4": "sym4",
}

SCHEME_NAMES = tuple(TABULATED_BETA)


def beta_from_alpha(alpha):
    """Partial sums ``beta_j = alpha_0 + ... + alpha_j`` for ``j < s``.

    Exact for :class:`fractions.Fraction` input. The weights must sum to zero,
    otherwise the last column of the telescoping system cannot be matched.
    """
    alpha = list(alpha)
    if len(alpha) < 2:
        raise ValueError("need at least two weights")
    total = sum(alpha)
    scale = max(1, *(abs(a) for a in alpha))
    if abs(total) > 1e-13 * scale:
        raise ValueError(f"difference weights must sum to zero, got {float(total)!r}")
    out, acc = [], 0
    for a in alpha[:-1]:
        acc = acc + a
        out.append(acc)
    return out


@dataclass(frozen=True)
class SchemeCoefficients:
    name: str
    exact_beta: tuple

    @property
    def k(self) -> int:
        return len(self.exact_beta)

    @property
    def beta(self) -> np.ndarray:
        return np.array([float(b) for b in self.exact_beta])

    @property
    def is_bdf(self) -> bool:
        return self.name.startswith("mbdf")

    def __str__(self):
        return self.name


def get_scheme(name: str) -> SchemeCoefficients:
    """Look up a scheme by name (``cn``, ``leapfrog``, ``mbdf2``..``mbdf6``, ``sym4``)."""
    key = re.sub(r"[\s_-]", "", name.lower())
    key = ALIASES.get(key, key)
    if key.startswith("mbdf"):
        s = int(key[4:]) if key[4:].isdigit() else None
        if s not in BDF_ALPHA:
            raise ValueError(f"modified BDF is only available for s = 2..6, got {name!r}")
        return SchemeCoefficients(key, tuple(beta_from_alpha(BDF_ALPHA[s])))
    if key not in TABULATED_BETA:
        raise ValueError(f"unknown scheme {name!r}; choose from {', '.join(SCHEME_NAMES)}")
    return SchemeCoefficients(key, TABULATED_BETA[key])


class UHistory:
    """The ``k`` most recent solution levels, newest first.

    Single writer: a run pushes one level per accepted step.
    """

    def __init__(self, k: int, tau: float):
        self.k = k
        self.tau = tau
        self._levels = deque(maxlen=k)
        self._times = deque(maxlen=k)

    def push(self, u, t: float):
        if self._times and not np.isclose(t - self._times[0], self.tau, rtol=1e-9, atol=1e-12):
            raise ValueError(f"time {t} does not follow {self._times[0]} by tau={self.tau}")
        self._levels.appendleft(np.asarray(u, dtype=complex))
        self._times.appendleft(float(t))

    def __len__(self):
        return len(self._levels)

    def __getitem__(self, j):
        """``hist[j]`` is ``u^{n-j}`` where ``n`` is the newest level."""
        return self._levels[j]

    @property
    def t(self) -> float:
        return self._times[0]

    @property
    def times(self):
        return list(self._times)


def compose_R(hist: UHistory, c: SchemeCoefficients) -> np.ndarray:
    """``R^n = sum_j beta_j u^{n-j}`` from the newest ``k`` levels."""
    if len(hist) < c.k:
        raise ValueError(f"{c.name} needs {c.k} levels, history holds {len(hist)}")
    beta = c.beta
    out = beta[0] * hist[0]
    for j in range(1, c.k):
        out = out + beta[j] * hist[j]
    return out


def recover_u(R_next, hist: UHistory, c: SchemeCoefficients) -> np.ndarray:
    """Invert ``R^{n+1} = sum_j beta_j u^{n+1-j}`` for the new level ``u^{n+1}``."""
    if len(hist) < c.k - 1:
        raise ValueError(f"{c.name} needs {c.k - 1} previous levels, history holds {len(hist)}")
    beta = c.beta
    acc = np.array(R_next, dtype=complex)
    for j in range(1, c.k):
        acc = acc - beta[j] * hist[j - 1]
    return acc / beta[0]


def mass(R, grid: Grid1D) -> float:
    return l2_norm(R, grid) ** 2


def energy(R, grid: Grid1D, nl: Nonlinearity) -> float:
    """Discrete modified energy.

    Cubic: ``0.5*||grad R||^2 + (lam/4)*||R||_4^4``. Other powers use the
    unscaled form ``||grad R||^2 + lam * h * sum F(|R|^2)``; for the cubic case
    the two differ by exactly a factor 2.
    """
    R = grid.check(R)
    grad = gradient_energy(R, grid)
    rho = np.abs(R) ** 2
    if nl.is_cubic:
        return 0.5 * grad + 0.25 * nl.lam * grid.h * float(np.sum(rho**2))
    return energy_g(R, grid, nl)


def energy_g(R, grid: Grid1D, nl: Nonlinearity) -> float:
    R = grid.check(R)
    rho = np.abs(R) ** 2
    return gradient_energy(R, grid) + nl.lam * grid.h * float(np.sum(nl.F(rho)))


def energy_label(nl: Nonlinearity) -> str:
    return "H" if nl.is_cubic else "H_g"
