import numpy as np
import pytest

from conftest import random_psd, random_unitary
from rmoments.errors import InputError
from rmoments.linalg import eigvals_hermitian, numerical_rank, power_traces, singular_values, trace_norm
from rmoments.maps import partial_transpose_matrix, realign_matrix
from rmoments.states import garg_family, toth_family, TOTH_PPT_Q


def test_singular_values_examples():
    np.testing.assert_allclose(singular_values([[3, 0], [0, 4]]), [4, 3])
    np.testing.assert_allclose(singular_values([[0, 1], [0, 0]]), [1, 0])
    R = realign_matrix(np.eye(4) / 4, 2, 2)
    np.testing.assert_allclose(singular_values(R), [0.5, 0, 0, 0], atol=1e-15)


def test_singular_values_rejects_nan():
    with pytest.raises(InputError, match="non-finite"):
        singular_values([[1, np.nan], [0, 1]])


def test_singular_values_frobenius(rng):
    for _ in range(200):
        r, c = rng.integers(1, 10, size=2)
        M = rng.standard_normal((r, c)) + 1j * rng.standard_normal((r, c))
        s = singular_values(M)
        assert len(s) == min(r, c)
        assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
        assert abs(np.sum(s**2) - np.linalg.norm(M) ** 2) <= 1e-10 * max(1, np.linalg.norm(M) ** 2)


def test_eigvals_hermitian_examples():
    np.testing.assert_allclose(eigvals_hermitian(np.eye(3)), [1, 1, 1])
    np.testing.assert_allclose(eigvals_hermitian([[0, 1], [1, 0]]), [1, -1])
    psi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    pt = partial_transpose_matrix(np.outer(psi, psi), 2, 2)
    np.testing.assert_allclose(eigvals_hermitian(pt), [0.5, 0.5, 0.5, -0.5], atol=1e-15)


def test_eigvals_hermitian_rejects():
    with pytest.raises(InputError, match="square"):
        eigvals_hermitian(np.ones((2, 3)))
    with pytest.raises(InputError, match="Hermitian"):
        eigvals_hermitian([[0, 1], [0, 0]])


def test_eigvals_trace(rng):
    for _ in range(100):
        d = rng.integers(1, 10)
        H = random_psd(rng, d) - 2 * np.eye(d)
        lam = eigvals_hermitian(H)
        assert np.all(np.diff(lam) <= 0)
        assert abs(lam.sum() - np.trace(H).real) < 1e-10 * max(1, abs(np.trace(H)))


def test_trace_norm_examples():
    assert trace_norm([[3, 0], [0, 4]]) == pytest.approx(7)
    assert trace_norm(np.zeros((3, 3))) == 0
    rho = toth_family(TOTH_PPT_Q)
    assert trace_norm(realign_matrix(rho.mat, 4, 4)) == pytest.approx(1.08579, abs=5e-5)


def test_trace_norm_unitary_invariance(rng):
    for _ in range(100):
        d = rng.integers(2, 9)
        M = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        U, V = random_unitary(rng, d), random_unitary(rng, d)
        assert abs(trace_norm(U @ M @ V) - trace_norm(M)) < 1e-9


def test_power_traces_examples():
    np.testing.assert_allclose(power_traces(np.diag([1.0, 2.0]), 2), [3, 5])
    np.testing.assert_allclose(power_traces(np.eye(3) / 3, 3), [1, 1 / 3, 1 / 9])


@pytest.mark.parametrize("f", [0.0, 0.3, 0.8, 1.0])
def test_power_traces_isotropic_T1(f):
    from rmoments.states import isotropic

    R = realign_matrix(isotropic(f).mat, 2, 2)
    T1 = power_traces(R.conj().T @ R, 1)[0]
    assert T1 == pytest.approx((1 - 2 * f + 4 * f * f) / 3, abs=1e-12)


def test_power_traces_rejects():
    with pytest.raises(InputError):
        power_traces(np.eye(2), 0)
    with pytest.raises(InputError, match="semidefinite"):
        power_traces(np.diag([1.0, -1.0]), 2)


def test_power_traces_vs_eigenvalues(rng):
    for _ in range(100):
        d = rng.integers(1, 10)
        H = random_psd(rng, d)
        H /= np.trace(H).real
        lam = eigvals_hermitian(H)
        got = power_traces(H, 6)
        for k in range(1, 7):
            assert abs(got[k - 1] - np.sum(lam**k)) < 1e-10


def test_numerical_rank():
    assert numerical_rank(np.eye(4)) == 4
    assert numerical_rank(np.zeros((3, 3))) == 0
    prod = np.kron(np.diag([0.7, 0.3]), np.diag([0.4, 0.6]))
    assert numerical_rank(realign_matrix(prod, 2, 2)) == 1
    assert numerical_rank(realign_matrix(garg_family(0.3).mat, 3, 3)) == 5
    with pytest.raises(InputError):
        numerical_rank(np.eye(2), 0)
