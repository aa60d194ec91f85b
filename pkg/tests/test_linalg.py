import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rpcrank.bezier import basis_matrix
from rpcrank.linalg import jacobi_eigenvalues, power_iteration

from oracles import charpoly, symmetric_eigenvalues


def test_charpoly_oracle_sanity():
    assert np.allclose(charpoly(np.diag([1.0, 2.0])), [1, -3, 2])
    assert np.allclose(symmetric_eigenvalues(np.diag([1.0, 2.0, 3.0, 4.0])), [1, 2, 3, 4])


def test_jacobi_diagonal_and_identity():
    assert np.allclose(jacobi_eigenvalues(np.eye(4)), 1.0)
    assert np.allclose(jacobi_eigenvalues(np.diag([4.0, 2.0, 3.0, 1.0])), [1, 2, 3, 4])


@settings(max_examples=40)
@given(st.integers(0, 2**32 - 1), st.integers(5, 40))
def test_jacobi_matches_characteristic_polynomial_on_gram_matrices(seed, n):
    s = np.random.default_rng(seed).uniform(size=n)
    B = basis_matrix(s)
    A = B.T @ B
    lam = jacobi_eigenvalues(A)
    ref = symmetric_eigenvalues(A)
    assert ref.size == 4
    assert np.allclose(lam, ref, atol=1e-9 * max(1.0, ref[-1]), rtol=0)
    assert np.isclose(lam.sum(), np.trace(A))
    assert np.allclose(lam, np.linalg.eigvalsh(A), atol=1e-10 * max(1.0, lam[-1]))


def test_jacobi_rank_deficient():
    B = basis_matrix(np.array([0.2, 0.5, 0.9]))
    lam = jacobi_eigenvalues(B.T @ B)
    assert abs(lam[0]) < 1e-12 and lam[1] > 0


def test_jacobi_rejects_bad_input():
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(ValueError):
        jacobi_eigenvalues(np.ones((2, 3)))


def test_power_iteration_matches_dense_solver(rng):
    X = rng.normal(size=(50, 4)) * [3, 1, 0.5, 0.2]
    C = np.cov(X.T)
    v, lam = power_iteration(C)
    lam_ref = symmetric_eigenvalues(C)[-1]
    assert abs(lam - lam_ref) < 1e-8
    # direction from the null space of C - lam I
    _, _, vt = np.linalg.svd(C - lam_ref * np.eye(4))
    u = vt[-1]
    assert min(np.linalg.norm(v - u), np.linalg.norm(v + u)) < 1e-6


def test_power_iteration_start_in_null_space():
    C = np.array([[1.0, -1.0], [-1.0, 1.0]])
    v, lam = power_iteration(C)
    assert np.isclose(lam, 2.0) and np.isclose(abs(v[0]), 1 / np.sqrt(2))
    with pytest.raises(ValueError):
        power_iteration(np.zeros((2, 2)))
