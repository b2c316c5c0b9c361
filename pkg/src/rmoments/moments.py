"""Moment sequences of rearranged density matrices and what is derived from them.

Three sequences are supported:

* realigned moments ``T_k = tr[((R^dagger R))^k]`` with ``R`` the realigned matrix,
* partial-transpose moments ``p_k = tr[(rho^tau)^k]``,
* Zhang moments ``r_k = sum_i sigma_i(R)^k``.

``newton_coefficients`` turns power traces into characteristic-polynomial
coefficients; ``lambda_max_lower``/``lambda_max_upper`` bound the largest
eigenvalue from the first three power traces.
"""

import math
from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InputError, NumericalInconsistencyError
from .linalg import _trace_powers, power_traces, singular_values
from .maps import partial_transpose_matrix, realign_matrix
from .states import BipartiteDims

REALIGNED = "realigned"
PARTIAL_TRANSPOSE = "partial-transpose"
ZHANG = "zhang"


@dataclass(frozen=True)
class MomentSet:
    """Moments indexed from k = 1: ``values[0]`` is the first moment."""

    kind: str
    values: tuple
    dims: BipartiteDims

    def __getitem__(self, k):
        """1-based access, ``ms[1]`` is the first moment."""
        if k < 1:
            raise IndexError("moments are indexed from 1")
        return self.values[k - 1]

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class NewtonCoefficients:
    """Characteristic-polynomial coefficients ``D_1..D_k`` (``values[i-1] == D_i``)."""

    values: tuple
    rank: int

    def __getitem__(self, i):
        if i < 1:
            raise IndexError("coefficients are indexed from 1")
        return self.values[i - 1]


def _check_K(K):
    if int(K) != K or K < 1:
        raise InputError(f"K must be a positive integer, got {K!r}")
    return int(K)


def gram_of_realignment(rho):
    """The smaller of ``R^dagger R`` and ``R R^dagger``; both share nonzero spectra."""
    R = realign_matrix(rho.mat, rho.m, rho.n)
    if rho.n <= rho.m:
        return R.conj().T @ R
    return R @ R.conj().T


def realigned_moments(rho, K, tol=DEFAULT_TOLERANCES):
    K = _check_K(K)
    return MomentSet(REALIGNED, tuple(power_traces(gram_of_realignment(rho), K, tol)), rho.dims)


def pt_moments(rho, K):
    K = _check_K(K)
    pt = partial_transpose_matrix(rho.mat, rho.m, rho.n, "B")
    return MomentSet(PARTIAL_TRANSPOSE, tuple(_trace_powers(pt, K)), rho.dims)


def zhang_moments(rho, K):
    """``r_k = sum sigma_i^k`` over the singular values of the realigned matrix."""
    K = _check_K(K)
    sigma = singular_values(realign_matrix(rho.mat, rho.m, rho.n))
    return MomentSet(ZHANG, tuple(float(np.sum(sigma**k)) for k in range(1, K + 1)), rho.dims)


def newton_coefficients(T, k):
    """Coefficients D_1..D_k of ``prod (lambda - lambda_i)`` from power traces T_1..T_k.

    Uses the Newton recursion ``e_i = (1/i) sum_{j=1..i} (-1)^(j-1) e_{i-j} T_j``
    and ``D_i = (-1)^i e_i``.

    >>> newton_coefficients([3.0, 5.0], 2).values
    (-3.0, 2.0)
    """
    values = T.values if isinstance(T, MomentSet) else tuple(T)
    k = int(k)
    if k < 1:
        raise InputError("k must be >= 1")
    if k > len(values):
        raise InputError(f"need {k} moments, only {len(values)} available")
    e = [1.0]
    for i in range(1, k + 1):
        acc = 0.0
        for j in range(1, i + 1):
            acc += (-1) ** (j - 1) * e[i - j] * values[j - 1]
        e.append(acc / i)
    return NewtonCoefficients(tuple((-1) ** i * e[i] for i in range(1, k + 1)), k)


def lambda_max_lower(T1, T2, T3, n):
    """Lower bound on the largest eigenvalue of an n x n matrix with real spectrum.

    ``f = T1/n + (b + sqrt(b^2 + 4 a^3)) / (2a)`` where ``a`` is the eigenvalue
    variance and ``b`` the third central moment; ``f = T1/n`` when a == 0.
    """
    if int(n) != n or n < 1:
        raise InputError(f"n must be a positive integer, got {n!r}")
    mean = T1 / n
    a = T2 / n - mean**2
    b = (n * n * T3 - 3 * n * T2 * T1 + 2 * T1**3) / n**3
    scale = max(mean**2, T2 / n, np.finfo(float).tiny)
    if a < -1e-12 * max(1.0, scale):
        raise NumericalInconsistencyError(f"negative eigenvalue variance {a:.3e}: moments inconsistent")
    if a <= 1e-14 * scale:
        return mean
    disc = math.sqrt(b * b + 4 * a**3)
    if b >= 0:
        shift = (b + disc) / (2 * a)
    else:
        # same quantity, written to avoid cancellation in b + disc
        shift = 2 * a * a / (disc - b)
    return mean + shift


def _cubic(T1, T2, T3):
    return np.array([T1, -2 * T2, T3, T2 * T2 - T1 * T3], dtype=float)


def lambda_max_upper(T1, T2, T3):
    """Upper bound on the largest eigenvalue of a PSD matrix from T1, T2, T3.

    Largest real root of ``T1 x^3 - 2 T2 x^2 + T3 x + T2^2 - T1 T3``, from the
    companion-matrix roots with a guarded Newton polish.
    """
    if not T1 > 1e-300:
        raise NumericalInconsistencyError("degenerate cubic: T1 must be positive")
    coeffs = _cubic(T1, T2, T3)
    roots = np.roots(coeffs / T1)
    scale = max(1.0, float(np.max(np.abs(roots))))
    # a near-double root can split into a complex pair; its real part is still accurate
    real = [r.real for r in roots if abs(r.imag) <= 1e-6 * scale]
    if not real:
        raise NumericalInconsistencyError("cubic has no real root")
    x = max(real)
    poly = np.poly1d(coeffs)
    dpoly = poly.deriv()
    for _ in range(3):
        d = dpoly(x)
        if d <= 0:
            break
        nxt = x - poly(x) / d
        if abs(poly(nxt)) >= abs(poly(x)):
            break
        x = nxt
    return float(x)


def lambda_max_upper_closed_form(T1, T2, T3):
    """The explicit radical expression for the largest cubic root.

    Evaluated in complex arithmetic; returns the real part.
    """
    p = -27 * T1**2 * T2**2 + 16 * T2**3 + 27 * T1**3 * T3 - 18 * T1 * T2 * T3
    r = 4 * T2**2 - 3 * T1 * T3
    q = p * p - 4 * r**3
    c = (p + np.sqrt(complex(q))) ** (1 / 3)
    if c == 0:
        return 4 * T2 / (6 * T1)
    g = (4 * T2 + 2 * 2 ** (1 / 3) * r / c + 2 ** (2 / 3) * c) / (6 * T1)
    return float(g.real)
