"""Small dense complex linear algebra used by the rest of the package.

Matrices are plain ``numpy.ndarray`` objects of complex (or real) dtype.
Everything here is a pure function.
"""

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InputError


def as_matrix(M):
    """Return ``M`` as a finite 2-D complex array or raise :class:`InputError`."""
    arr = np.asarray(M, dtype=complex)
    if arr.ndim != 2:
        raise InputError(f"expected a 2-D matrix, got shape {arr.shape}")
    bad = np.argwhere(~np.isfinite(arr))
    if bad.size:
        i, j = bad[0]
        raise InputError(f"non-finite entry at ({i}, {j})")
    return arr


def _as_hermitian(H, tol):
    arr = as_matrix(H)
    if arr.shape[0] != arr.shape[1]:
        raise InputError(f"expected a square matrix, got shape {arr.shape}")
    dev = np.abs(arr - arr.conj().T)
    if arr.size and dev.max() > tol:
        i, j = np.unravel_index(np.argmax(dev), dev.shape)
        raise InputError(f"matrix is not Hermitian: |H - H^dagger| = {dev[i, j]:.3e} at ({i}, {j})")
    return (arr + arr.conj().T) / 2


def singular_values(M):
    """Singular values of ``M`` in descending order, ``min(rows, cols)`` of them."""
    arr = as_matrix(M)
    if arr.size == 0:
        return np.zeros(0)
    return np.linalg.svd(arr, compute_uv=False)


def eigvals_hermitian(H, tol=DEFAULT_TOLERANCES.hermitian):
    """Real eigenvalues of a Hermitian matrix, descending."""
    arr = _as_hermitian(H, tol)
    return np.linalg.eigvalsh(arr)[::-1]


def trace_norm(M):
    """Sum of singular values (Ky Fan / nuclear norm)."""
    return float(np.sum(singular_values(M)))


def _trace_powers(H, K):
    # repeated multiplication; no spectral shortcut
    out = []
    P = H
    for k in range(1, K + 1):
        if k > 1:
            P = P @ H
        out.append(float(np.real(np.trace(P))))
    return out


def power_traces(H, K, tol=DEFAULT_TOLERANCES):
    """Return ``[tr(H), tr(H^2), ..., tr(H^K)]`` for a Hermitian PSD ``H``.

    Parameters
    ----------
    H : array_like
        Square Hermitian positive semidefinite matrix.
    K : int
        Highest power, at least 1.
    tol : Tolerances
        Hermiticity and PSD slack.
    """
    if int(K) != K or K < 1:
        raise InputError(f"K must be a positive integer, got {K!r}")
    arr = _as_hermitian(H, tol.hermitian)
    if arr.size:
        lam_min = np.linalg.eigvalsh(arr)[0]
        scale = max(1.0, float(np.abs(arr).max()))
        if lam_min < -tol.psd * scale:
            raise InputError(f"matrix is not positive semidefinite (min eigenvalue {lam_min:.3e})")
    return _trace_powers(arr, int(K))


def numerical_rank(M, rel_tol=DEFAULT_TOLERANCES.rank):
    """Count singular values above ``rel_tol * sigma_max``; 0 for the zero matrix."""
    if rel_tol <= 0:
        raise InputError("rel_tol must be positive")
    s = singular_values(M)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > rel_tol * s[0]))
