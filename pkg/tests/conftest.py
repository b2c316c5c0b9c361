import itertools
import math

import numpy as np
import pytest

# acceptance criterion number -> (title, [(part, ok, detail)])
ACCEPTANCE = {}


def record(ac, title, part, ok, detail=""):
    """Store one sub-check of an acceptance criterion; returns ``ok``."""
    ACCEPTANCE.setdefault(ac, (title, []))[1].append((part, bool(ok), detail))
    return ok


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for ac in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[ac]
        status = "PASS" if all(ok for _, ok, _ in parts) else "FAIL"
        body = "; ".join(f"{name} {'ok' if ok else 'FAILED'}" + (f" ({d})" if d else "") for name, ok, d in parts)
        terminalreporter.write_line(f"AC{ac} {status} {title}: {body}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# --- independent oracles ----------------------------------------------------


def realign_loops(mat, m, n):
    """Index-formula realignment, written with explicit loops."""
    out = np.zeros((m * m, n * n), dtype=complex)
    for a in range(m):
        for b in range(m):
            for i in range(n):
                for j in range(n):
                    out[a * m + b, i * n + j] = mat[a * n + i, b * n + j]
    return out


def realign_colmajor(mat, m, n):
    """Same blocks, flattened column-major; differs from realign by a column permutation."""
    out = np.zeros((m * m, n * n), dtype=complex)
    for a in range(m):
        for b in range(m):
            block = mat[a * n:(a + 1) * n, b * n:(b + 1) * n]
            out[a * m + b] = block.flatten(order="F")
    return out


def pt_loops(mat, m, n):
    out = np.zeros_like(np.asarray(mat, dtype=complex))
    for a in range(m):
        for b in range(m):
            for i in range(n):
                for j in range(n):
                    out[a * n + i, b * n + j] = mat[a * n + j, b * n + i]
    return out


def elementary_symmetric(values, k):
    """e_k by brute force over k-subsets."""
    return sum(math.prod(c) for c in itertools.combinations(values, k))


def newton_det_form(T, i):
    """(-1)^i / i! times the determinant with T_1..T_i on the diagonals."""
    M = np.zeros((i, i))
    for r in range(i):
        for c in range(i):
            if c >= r:
                M[r, c] = T[c - r]
            elif c == r - 1:
                M[r, c] = r
    return (-1) ** i * np.linalg.det(M) / math.factorial(i)


def random_unitary(rng, d):
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_psd(rng, d, rank=None):
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    return G @ G.conj().T
