"""Bipartite density matrices: validation, the state families, sampling and I/O.

Basis convention: product basis |i>_A |j>_B with flat index ``i * n + j``.
"""

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .config import DEFAULT_TOLERANCES
from .errors import InputError, StateFileError, ValidationError
from .linalg import as_matrix


@dataclass(frozen=True)
class BipartiteDims:
    m: int
    n: int

    def __post_init__(self):
        if int(self.m) != self.m or int(self.n) != self.n or self.m < 2 or self.n < 2:
            raise InputError(f"local dimensions must be integers >= 2, got ({self.m}, {self.n})")

    @property
    def total(self):
        return self.m * self.n

    @classmethod
    def parse(cls, text):
        """Parse ``"3x3"`` style dimension strings."""
        try:
            m, n = (int(x) for x in text.lower().split("x"))
        except ValueError:
            raise InputError(f"cannot parse dimensions {text!r}; expected MxN") from None
        return cls(m, n)

    def __str__(self):
        return f"{self.m}x{self.n}"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """A validated state. Construct through :func:`validate` or a family generator."""

    dims: BipartiteDims
    mat: np.ndarray = field(repr=False)

    @property
    def m(self):
        return self.dims.m

    @property
    def n(self):
        return self.dims.n

    def __array__(self, dtype=None, copy=None):
        return self.mat if dtype is None else self.mat.astype(dtype)


def validate(raw, dims, tol=DEFAULT_TOLERANCES):
    """Check ``raw`` against the density-matrix invariants and wrap it.

    Raises :class:`ValidationError` naming the first violated invariant
    (shape, Hermitian, trace, positive semidefinite).
    """
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    try:
        mat = as_matrix(raw)
    except InputError as exc:
        raise ValidationError(str(exc)) from None
    d = dims.total
    if mat.shape != (d, d):
        raise ValidationError(f"shape {mat.shape} does not match dims {dims} (expected {d}x{d})")
    dev = np.abs(mat - mat.conj().T)
    if dev.max() > tol.hermitian:
        i, j = np.unravel_index(np.argmax(dev), dev.shape)
        raise ValidationError(f"not Hermitian: entry ({i}, {j}) differs from conjugate of ({j}, {i}) by {dev[i, j]:.3e}")
    mat = (mat + mat.conj().T) / 2
    tr = float(np.real(np.trace(mat)))
    if abs(tr - 1.0) > tol.trace:
        raise ValidationError(f"trace is {tr!r}, expected 1")
    lam_min = float(np.linalg.eigvalsh(mat)[0])
    if lam_min < -tol.psd:
        raise ValidationError(f"not positive semidefinite: min eigenvalue {lam_min:.3e}")
    mat.setflags(write=False)
    return DensityMatrix(dims, mat)


def _check_range(name, value, lo, hi, lo_open=False):
    if not math.isfinite(value):
        raise InputError(f"{name} must be finite")
    below = value <= lo if lo_open else value < lo
    if below or value > hi:
        left = "(" if lo_open else "["
        raise InputError(f"{name}={value!r} outside {left}{lo}, {hi}]")


def _ket(d_a, d_b, i, j):
    v = np.zeros(d_a * d_b)
    v[i * d_b + j] = 1.0
    return v


def _proj(v):
    return np.outer(v, np.conj(v))


_PSI_PLUS = (_ket(2, 2, 0, 0) + _ket(2, 2, 1, 1)) / math.sqrt(2)


def bell_states():
    """The four two-qubit Bell vectors in the order Phi+, Phi-, Psi+, Psi-."""
    s = 1 / math.sqrt(2)
    k = lambda i, j: _ket(2, 2, i, j)  # noqa: E731
    return (
        s * (k(0, 0) + k(1, 1)),
        s * (k(0, 0) - k(1, 1)),
        s * (k(0, 1) + k(1, 0)),
        s * (k(0, 1) - k(1, 0)),
    )


def isotropic(f):
    """Two-qubit isotropic state with singlet fraction ``f`` in [0, 1]."""
    _check_range("f", f, 0.0, 1.0)
    mat = (1 - f) / 3 * np.eye(4) + (4 * f - 1) / 3 * _proj(_PSI_PLUS)
    return validate(mat, BipartiteDims(2, 2))


TOTH_PPT_Q = (math.sqrt(2) - 1) / 2


def _toth_vectors():
    s = 1 / math.sqrt(2)
    k = lambda i, j: _ket(4, 4, i, j)  # noqa: E731
    return (
        s * (k(0, 1) + k(2, 3)),
        s * (k(1, 0) + k(3, 2)),
        s * (k(1, 1) + k(2, 2)),
        s * (k(0, 0) - k(3, 3)),
        0.5 * (k(0, 3) + k(1, 2)) + s * k(2, 1),
        0.5 * (-k(0, 3) + k(1, 2)) + s * k(3, 0),
    )


def toth_family(q):
    """4x4 family mixing six fixed vectors with weights p (x4) and q (x2), 4p + 2q = 1.

    PPT exactly at ``q = TOTH_PPT_Q``.
    """
    _check_range("q", q, 0.0, 0.5)
    p = (1 - 2 * q) / 4
    vecs = _toth_vectors()
    mat = p * sum(_proj(v) for v in vecs[:4]) + q * sum(_proj(v) for v in vecs[4:])
    return validate(mat, BipartiteDims(4, 4))


GARG_A_MIN = (25 - math.sqrt(141)) / 50
GARG_A_MAX = (25 + math.sqrt(141)) / 100


def garg_family(a):
    """3x3 NPT family; positive semidefinite only for GARG_A_MIN <= a <= GARG_A_MAX."""
    if not math.isfinite(a):
        raise InputError("a must be finite")
    c = -11 / 50
    mat = np.zeros((9, 9))
    mat[0, 0] = (1 - a) / 2
    mat[0, 8] = mat[8, 0] = c
    mat[4, 4] = 0.5 - a
    mat[4, 5] = mat[5, 4] = c
    mat[5, 5] = a
    mat[8, 8] = a / 2
    return validate(mat, BipartiteDims(3, 3))


def rudolph_family(s, t):
    """Two-parameter two-qubit family, 1/4 < s <= 1.

    ``t = 0`` is accepted (separable control points).
    """
    _check_range("s", s, 0.25, 1.0, lo_open=True)
    if not math.isfinite(t):
        raise InputError("t must be finite")
    mat = np.zeros((4, 4))
    mat[0, 0] = 5 / 8
    mat[2, 2] = (s - 0.25) / 2
    mat[3, 3] = (1 - s) / 2
    mat[0, 3] = mat[3, 0] = t / 2
    return validate(mat, BipartiteDims(2, 2))


def filtered_conditions(b, c, d):
    """Which of the admissibility conditions C1, C2, C3 hold for (b, c, d)."""
    out = []
    if -1 <= b < 1 and c == -1 and d == 0:
        out.append("C1")
    # C2 is printed with an empty c-range; read as b = 1, -1 <= c <= 1, d = 0
    if b == 1 and -1 <= c <= 1 and d == 0:
        out.append("C2")
    if -1 <= b < 1 and -1 < c <= b and abs(d) <= math.sqrt((1 - b) * (1 + c)):
        out.append("C3")
    return out


def filtered_family(b, c, d):
    """Two-qubit state reached by local filtering, parametrised by (b, c, d)."""
    if not filtered_conditions(b, c, d):
        raise ValidationError(f"(b, c, d) = ({b}, {c}, {d}) satisfies none of C1, C2, C3")
    mat = 0.5 * np.array(
        [
            [1 + c, 0, 0, d],
            [0, 0, 0, 0],
            [0, 0, b - c, 0],
            [d, 0, 0, 1 - b],
        ],
        dtype=float,
    )
    return validate(mat, BipartiteDims(2, 2))


def bell_diagonal(p1, p2, p3, p4):
    """Mixture of Bell states with weights for (Phi+, Phi-, Psi+, Psi-)."""
    weights = np.array([p1, p2, p3, p4], dtype=float)
    if not np.all(np.isfinite(weights)) or np.any(weights < 0) or abs(weights.sum() - 1) > 1e-12:
        raise InputError(f"Bell weights must be non-negative and sum to 1, got {weights.tolist()}")
    mat = sum(w * _proj(v) for w, v in zip(weights, bell_states()))
    return validate(mat, BipartiteDims(2, 2))


def _rng(seed):
    if seed is None or int(seed) != seed:
        raise InputError("an explicit integer seed is required")
    return np.random.Generator(np.random.PCG64(int(seed)))


def random_density(dims, rank, seed):
    """Induced-measure random state ``G G^dagger / tr``, G an (mn x rank) Ginibre matrix.

    Uses numpy's PCG64 bit generator seeded with ``seed``.
    """
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    d = dims.total
    if int(rank) != rank or not 1 <= rank <= d:
        raise InputError(f"rank must be in [1, {d}], got {rank!r}")
    rng = _rng(seed)
    G = rng.standard_normal((d, int(rank))) + 1j * rng.standard_normal((d, int(rank)))
    rho = G @ G.conj().T
    return validate(rho / np.real(np.trace(rho)), dims)


def _random_pure(rng, d):
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_separable(dims, terms, seed):
    """Convex mixture of ``terms`` random pure product states, weights uniform on the simplex."""
    if not isinstance(dims, BipartiteDims):
        dims = BipartiteDims(*dims)
    if int(terms) != terms or terms < 1:
        raise InputError(f"terms must be >= 1, got {terms!r}")
    rng = _rng(seed)
    weights = rng.dirichlet(np.ones(int(terms)))
    rho = np.zeros((dims.total, dims.total), dtype=complex)
    for w in weights:
        v = np.kron(_random_pure(rng, dims.m), _random_pure(rng, dims.n))
        rho += w * _proj(v)
    return validate(rho / np.real(np.trace(rho)), dims)


def _fmt(x):
    return format(float(x), ".16e")


def state_to_json(state):
    """Serialise to the state-file text format (17 significant digits)."""
    return matrix_document(state.mat, {"m": state.m, "n": state.n})


def matrix_document(mat, header):
    """JSON text ``{**header, "matrix": [[[re, im], ...], ...]}`` with 17-digit floats."""
    head = ", ".join(f"{json.dumps(k)}: {json.dumps(v)}" for k, v in header.items())
    rows = []
    for row in np.asarray(mat, dtype=complex):
        cells = ", ".join(f"[{_fmt(z.real)}, {_fmt(z.imag)}]" for z in row)
        rows.append(f"    [{cells}]")
    sep = ", " if head else ""
    return "{" + head + sep + '"matrix": [\n' + ",\n".join(rows) + "\n]}\n"


def save_state(state, path):
    Path(path).write_text(state_to_json(state))


def state_from_json(text, tol=DEFAULT_TOLERANCES):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateFileError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or not {"m", "n", "matrix"} <= doc.keys():
        raise StateFileError('state file needs keys "m", "n" and "matrix"')
    m, n, rows = doc["m"], doc["n"], doc["matrix"]
    if not (isinstance(m, int) and isinstance(n, int)):
        raise StateFileError('"m" and "n" must be integers')
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise StateFileError('"matrix" must be a list of rows')
    mat = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=complex)
    for i, row in enumerate(rows):
        if len(row) != mat.shape[1]:
            raise StateFileError(f"row {i} has {len(row)} entries, expected {mat.shape[1]}")
        for j, cell in enumerate(row):
            if (
                not isinstance(cell, list)
                or len(cell) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in cell)
            ):
                raise StateFileError(f"entry ({i}, {j}) must be a [re, im] pair of numbers")
            mat[i, j] = complex(cell[0], cell[1])
    try:
        dims = BipartiteDims(m, n)
    except InputError as exc:
        raise StateFileError(str(exc)) from None
    return validate(mat, dims, tol)


def load_state(path, tol=DEFAULT_TOLERANCES):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise StateFileError(f"cannot read {path}: {exc.strerror}") from None
    return state_from_json(text, tol)
