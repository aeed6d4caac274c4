import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nlsconserve.grid import BoundaryCondition, Grid1D, laplacian_matrix
from nlsconserve.tridiag import (
    SolveFailure,
    shifted_matrix,
    solve_cyclic,
    solve_shifted_system,
    solve_tridiagonal,
)


def _rand_c(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


@pytest.mark.parametrize("bc", list(BoundaryCondition))
def test_zero_rhs(bc):
    g = Grid1D(0, 1, 8, bc)
    w = solve_shifted_system(np.ones(g.n_nodes), np.zeros(g.n_nodes), g, 0.1)
    np.testing.assert_array_equal(w, 0)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(list(BoundaryCondition)),
       st.sampled_from([1e-3, 0.1, 1.0]), st.integers(3, 40))
def test_matches_dense_solve(seed, bc, tau, n):
    rng = np.random.default_rng(seed)
    g = Grid1D(-1.0, 1.0, n, bc)
    d = rng.uniform(-1, 1, g.n_nodes)
    rhs = _rand_c(rng, g.n_nodes)
    w = solve_shifted_system(d, rhs, g, tau)
    A = shifted_matrix(d, g, tau)
    ref = np.linalg.solve(A, rhs)
    assert np.linalg.norm(A @ w - rhs) <= 1e-12 * np.linalg.norm(rhs) * max(1, np.linalg.norm(A, 1))
    np.testing.assert_allclose(w, ref, rtol=1e-10, atol=1e-12 * np.linalg.norm(ref))


def test_eight_cells_example():
    rng = np.random.default_rng(8)
    g = Grid1D(0, 1, 8)
    d = rng.uniform(-1, 1, 8)
    rhs = _rand_c(rng, 8)
    w = solve_shifted_system(d, rhs, g, 0.05)
    A = shifted_matrix(d, g, 0.05)
    assert np.linalg.norm(A @ w - rhs) / np.linalg.norm(rhs) <= 1e-12


def test_eigenvector_division():
    g = Grid1D(0.0, 2 * np.pi, 32)
    tau = 0.3
    u = np.exp(3j * g.x)
    mu = -(4 / g.h**2) * np.sin(3 * g.h / 2) ** 2
    w = solve_shifted_system(np.zeros(32), 1j * u, g, tau)
    np.testing.assert_allclose(w, 1j * u / (1j + tau * mu / 2), atol=1e-13)


def test_shifted_matrix_structure():
    g = Grid1D(0, 1, 5)
    A = shifted_matrix(np.zeros(5), g, 2.0)
    np.testing.assert_allclose(A - 1j * np.eye(5), laplacian_matrix(g))


def test_plain_tridiagonal_multiple_rhs():
    rng = np.random.default_rng(3)
    n = 6
    lo, di, up = _rand_c(rng, n - 1), _rand_c(rng, n) + 5, _rand_c(rng, n - 1)
    A = np.diag(di) + np.diag(lo, -1) + np.diag(up, 1)
    b = _rand_c(rng, 2 * n).reshape(n, 2)
    np.testing.assert_allclose(solve_tridiagonal(lo, di, up, b), np.linalg.solve(A, b), atol=1e-12)


def test_cyclic_matches_dense():
    rng = np.random.default_rng(4)
    n = 9
    lo, di, up = _rand_c(rng, n - 1), _rand_c(rng, n) + 6, _rand_c(rng, n - 1)
    clo, chi = 0.7 - 0.2j, -1.3 + 0.4j
    A = np.diag(di) + np.diag(lo, -1) + np.diag(up, 1)
    A[0, -1], A[-1, 0] = chi, clo
    b = _rand_c(rng, n)
    np.testing.assert_allclose(solve_cyclic(lo, di, up, clo, chi, b), np.linalg.solve(A, b), atol=1e-12)


def test_singular_system_raises():
    lo = np.array([1, 0], dtype=complex)
    di = np.array([1, 1, 1], dtype=complex)
    up = np.array([1, 0], dtype=complex)
    # rows 0 and 1 of [[1,1,0],[1,1,0],[0,0,1]] coincide
    with pytest.raises(SolveFailure) as info:
        solve_tridiagonal(lo, di, up, np.ones(3))
    assert info.value.row is not None


def test_singular_two_by_two():
    with pytest.raises(SolveFailure):
        solve_tridiagonal(np.array([2.0 + 0j]), np.array([1.0, 4.0 + 0j]), np.array([2.0 + 0j]), np.ones(2))


def test_shape_mismatch():
    g = Grid1D(0, 1, 8)
    with pytest.raises(ValueError):
        solve_shifted_system(np.zeros(7), np.zeros(8), g, 0.1)
