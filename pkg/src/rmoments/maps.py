"""Realignment and partial transposition."""

from dataclasses import dataclass, field

import numpy as np

from .states import BipartiteDims, DensityMatrix, matrix_document

REALIGN = "realign"
PT_A = "partial-transpose-A"
PT_B = "partial-transpose-B"


@dataclass(frozen=True, eq=False)
class RearrangedMatrix:
    origin: str
    dims: BipartiteDims
    mat: np.ndarray = field(repr=False)

    def to_json(self):
        return matrix_document(self.mat, {"origin": self.origin, "m": self.dims.m, "n": self.dims.n})


def realign_matrix(mat, m, n):
    """Row ``a*m + b`` of the result is block Z_ab of ``mat`` flattened row-major.

    ``(R)[a*m + b, i*n + j] = mat[a*n + i, b*n + j]``; shape (m^2, n^2).
    """
    mat = np.asarray(mat)
    return mat.reshape(m, n, m, n).transpose(0, 2, 1, 3).reshape(m * m, n * n)


def partial_transpose_matrix(mat, m, n, subsystem="B"):
    mat = np.asarray(mat)
    t = mat.reshape(m, n, m, n)
    if subsystem == "B":
        t = t.transpose(0, 3, 2, 1)
    elif subsystem == "A":
        t = t.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"subsystem must be 'A' or 'B', got {subsystem!r}")
    return t.reshape(m * n, m * n)


def realign(rho: DensityMatrix) -> RearrangedMatrix:
    return RearrangedMatrix(REALIGN, rho.dims, realign_matrix(rho.mat, rho.m, rho.n))


def partial_transpose(rho: DensityMatrix, subsystem="B") -> RearrangedMatrix:
    origin = PT_B if subsystem == "B" else PT_A
    return RearrangedMatrix(origin, rho.dims, partial_transpose_matrix(rho.mat, rho.m, rho.n, subsystem))
