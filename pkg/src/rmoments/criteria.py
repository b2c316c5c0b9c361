"""Separability criteria as scalar detectors.

Every criterion maps a state to a real value and a verdict. For inequality
criteria (r1, r2, p3ppt, d3, p3oppt, zhang, ccnr) a value above the verdict
tolerance means entanglement is detected; for spectral criteria (ppt,
hankel) a value below minus the tolerance does.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InputError, NumericalInconsistencyError
from .linalg import eigvals_hermitian, numerical_rank, singular_values
from .maps import partial_transpose_matrix, realign_matrix
from .moments import (
    lambda_max_lower,
    lambda_max_upper,
    newton_coefficients,
    pt_moments,
    realigned_moments,
    zhang_moments,
)

INEQUALITY = "inequality"
SPECTRAL = "spectral"

HANKEL_DEFAULT = "default"
HANKEL_RAW = "raw"


class CriterionNotApplicable(InputError):
    """The criterion is undefined for the state's dimensions."""


@dataclass(frozen=True)
class CriterionResult:
    id: str
    value: float
    detects: bool
    details: dict = field(default_factory=dict, compare=False)


def _verdict(kind, value, tol):
    if kind == SPECTRAL:
        return bool(value < -tol.verdict)
    return bool(value > tol.verdict)


def _result(cid, value, tol, **details):
    value = float(value)
    return CriterionResult(cid, value, _verdict(KIND[cid], value, tol), details)


def _clamp(x, tol, what):
    if x < -tol.clamp:
        raise NumericalInconsistencyError(f"{what} is {x:.3e}, below the clamp slack")
    return max(x, 0.0)


_EPS = np.finfo(float).eps


def _snap(x, scale):
    # below the rounding floor of its inputs; sqrt would turn ~1e-16 into ~1e-8
    return 0.0 if abs(x) <= 100 * _EPS * scale else x


def r_moment_general(rho, tol=DEFAULT_TOLERANCES):
    """``R1 = k(k-1) D_k^(1/k) + T_1 - 1`` with k the rank of the realigned matrix.

    D_k^(1/k) is the geometric mean of the k nonzero squared singular values,
    evaluated in log space. The Newton-recursion D_k from T_1..T_k is reported
    alongside it in ``details``.
    """
    R = realign_matrix(rho.mat, rho.m, rho.n)
    sigma = singular_values(R)
    k = numerical_rank(R, tol.rank)
    T = realigned_moments(rho, max(k, 1), tol)
    T1 = T[1]
    if k == 0:
        return _result("r1", T1 - 1, tol, rank=0, T1=T1)
    log_sq = 2 * np.log(sigma[:k])
    dk_root = math.exp(float(np.sum(log_sq)) / k)
    dk_newton = newton_coefficients(T, k)[k]
    value = k * (k - 1) * dk_root + T1 - 1
    return _result(
        "r1",
        value,
        tol,
        rank=k,
        T1=T1,
        Dk_root=dk_root,
        Dk_newton=dk_newton,
        Dk_svd=math.exp(float(np.sum(log_sq))),
    )


def r_moment_two_qubit(rho, tol=DEFAULT_TOLERANCES):
    """Two-qubit criterion built from T_1, T_2, T_3 only.

    ``R2 = sqrt(3 X^(2/3) + 2Y - 2 T_1) - 1`` with
    ``X = f sqrt(2 sqrt(D_2) + T_1) + sqrt(|D_3|)`` and
    ``Y = T_1 - g + sqrt(max(0, D_2 - g T_1 + f^2))``, where f and g bound the
    largest eigenvalue of ``R^dagger R`` from below and above.

    Radicands smaller than the rounding error of their inputs are taken as
    zero; this can only lower the value.
    """
    if (rho.m, rho.n) != (2, 2):
        raise CriterionNotApplicable(f"r2 is defined for 2x2 states only, got {rho.dims}")
    T = realigned_moments(rho, 3, tol)
    T1, T2, T3 = T.values
    D = newton_coefficients(T, 3)
    D2 = _clamp(_snap(D[2], T1 * T1), tol, "D2")
    D3 = _snap(D[3], T1**3)
    f = lambda_max_lower(T1, T2, T3, 4)
    g = lambda_max_upper(T1, T2, T3)
    X = f * math.sqrt(2 * math.sqrt(D2) + T1) + math.sqrt(abs(D3))
    inner = _snap(D2 - g * T1 + f * f, D2 + g * T1 + f * f)
    Y = T1 - g + math.sqrt(max(0.0, inner))
    radicand = _clamp(3 * X ** (2 / 3) + 2 * Y - 2 * T1, tol, "R2 radicand")
    value = math.sqrt(radicand) - 1
    return _result("r2", value, tol, T=[T1, T2, T3], D2=D2, D3=D3, f=f, g=g, X=X, Y=Y)


def _p123(rho):
    p = pt_moments(rho, 3)
    return p.values


def p3_ppt(rho, tol=DEFAULT_TOLERANCES):
    """``L1 = p_2^2 - p_3 p_1`` on partial-transpose moments."""
    p1, p2, p3 = _p123(rho)
    return _result("p3ppt", p2 * p2 - p3 * p1, tol, p=[p1, p2, p3])


def d3(rho, tol=DEFAULT_TOLERANCES):
    """``L2 = (3/2) p_1 p_2 - (1/2) p_1^3 - p_3``."""
    p1, p2, p3 = _p123(rho)
    return _result("d3", 1.5 * p1 * p2 - 0.5 * p1**3 - p3, tol, p=[p1, p2, p3])


def p3_oppt(rho, tol=DEFAULT_TOLERANCES):
    """``L3 = mu x^3 + (1 - mu x)^3 - p_3``, mu = floor(1/p_2).

    x is the larger root of ``mu x^2 + (1 - mu x)^2 = p_2``: the smallest
    third moment of a probability vector with purity p_2.
    """
    p1, p2, p3 = _p123(rho)
    if not 0 < p2 <= 1 + tol.clamp:
        raise NumericalInconsistencyError(f"p2 must lie in (0, 1], got {p2!r}")
    # p2 = 1 up to rounding still means mu = 1
    mu = max(1, math.floor(1 / p2))
    rad = mu * (p2 * (mu + 1) - 1)
    if rad < -1e-12:
        raise NumericalInconsistencyError(f"p3oppt radicand {rad:.3e} is negative")
    x = (mu + math.sqrt(max(rad, 0.0))) / (mu * (mu + 1))
    value = mu * x**3 + (1 - mu * x) ** 3 - p3
    return _result("p3oppt", value, tol, p=[p1, p2, p3], mu=mu, x=x)


def zhang_l4(rho, tol=DEFAULT_TOLERANCES):
    """``L4 = r_2^2 - r_3`` on the singular values of the realigned matrix."""
    r = zhang_moments(rho, 3)
    return _result("zhang", r[2] ** 2 - r[3], tol, r=list(r.values))


def hankel_sequence(sigma, length, mode=HANKEL_DEFAULT):
    """Moment sequence ``m_0..m_{length-1}`` fed to the Hankel matrices.

    default
        ``m_0 = 1`` and ``m_j = r_{j+1}``: moments of the measure
        ``sum_i sigma_i delta(sigma_i) + (1 - ||R||_1) delta(0)``, which is
        positive exactly when ``||R||_1 <= 1``.
    raw
        the literal sequence ``(1, r_1, r_2, ...)``.
    """
    sigma = np.asarray(sigma, dtype=float)
    seq = [1.0]
    offset = 1 if mode == HANKEL_DEFAULT else 0
    if mode not in (HANKEL_DEFAULT, HANKEL_RAW):
        raise InputError(f"unknown Hankel mode {mode!r}")
    for j in range(1, length):
        seq.append(float(np.sum(sigma ** (j + offset))))
    return np.array(seq)


def hankel_check(rho, max_order=None, tol=DEFAULT_TOLERANCES, mode=HANKEL_DEFAULT):
    """Smallest eigenvalue over the Hankel matrices H_k = [m_{i+j}] and B_l = [m_{i+j+1}].

    ``k = 1..floor(N/2)`` and ``l = 1..floor((N-1)/2)`` with N = ``max_order``
    (defaults to the number of singular values of the realigned matrix).
    """
    sigma = singular_values(realign_matrix(rho.mat, rho.m, rho.n))
    N = len(sigma) if max_order is None else int(max_order)
    if N < 2:
        raise InputError(f"max_order must be >= 2, got {max_order!r}")
    seq = hankel_sequence(sigma, N + 2, mode)
    mins = {}
    for k in range(1, N // 2 + 1):
        H = np.array([[seq[i + j] for j in range(k + 1)] for i in range(k + 1)])
        mins[f"H{k}"] = float(eigvals_hermitian(H)[-1])
    for l in range(1, (N - 1) // 2 + 1):  # noqa: E741
        B = np.array([[seq[i + j + 1] for j in range(l + 1)] for i in range(l + 1)])
        mins[f"B{l}"] = float(eigvals_hermitian(B)[-1])
    return _result("hankel", min(mins.values()), tol, mode=mode, min_eigenvalues=mins)


def ppt_check(rho, tol=DEFAULT_TOLERANCES):
    """Smallest eigenvalue of the partial transpose on B."""
    pt = partial_transpose_matrix(rho.mat, rho.m, rho.n, "B")
    return _result("ppt", eigvals_hermitian(pt, tol.hermitian)[-1], tol)


def ccnr_check(rho, tol=DEFAULT_TOLERANCES):
    """Trace norm of the realigned matrix minus one."""
    sigma = singular_values(realign_matrix(rho.mat, rho.m, rho.n))
    return _result("ccnr", float(np.sum(sigma)) - 1, tol, trace_norm=float(np.sum(sigma)))


CRITERIA = {
    "r1": r_moment_general,
    "r2": r_moment_two_qubit,
    "p3ppt": p3_ppt,
    "d3": d3,
    "p3oppt": p3_oppt,
    "zhang": zhang_l4,
    "hankel": hankel_check,
    "ppt": ppt_check,
    "ccnr": ccnr_check,
}

KIND = {cid: INEQUALITY for cid in CRITERIA}
KIND["ppt"] = KIND["hankel"] = SPECTRAL


def margin(cid, value, tol=DEFAULT_TOLERANCES):
    """Signed distance past the verdict threshold; positive means detection."""
    if KIND[cid] == SPECTRAL:
        return -value - tol.verdict
    return value - tol.verdict


def applicable(cid, dims):
    return cid != "r2" or (dims.m, dims.n) == (2, 2)


def resolve_criteria(spec, dims=None):
    """Expand ``"all"`` or a comma list into criterion ids.

    With ``dims`` given, ``all`` drops criteria that do not apply.
    """
    if isinstance(spec, str):
        items = [s.strip() for s in spec.split(",") if s.strip()]
    else:
        items = list(spec)
    if items == ["all"]:
        return [c for c in CRITERIA if dims is None or applicable(c, dims)]
    unknown = [c for c in items if c not in CRITERIA]
    if unknown or not items:
        raise InputError(f"unknown criteria {unknown}; choose from {', '.join(CRITERIA)} or 'all'")
    return items


def evaluate(cid, rho, tol=DEFAULT_TOLERANCES, hankel_mode=HANKEL_DEFAULT):
    """Run one criterion by id."""
    if cid == "hankel":
        return hankel_check(rho, tol=tol, mode=hankel_mode)
    try:
        fn = CRITERIA[cid]
    except KeyError:
        raise InputError(f"unknown criterion {cid!r}") from None
    return fn(rho, tol)
