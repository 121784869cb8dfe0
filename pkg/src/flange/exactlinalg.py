"""Exact dense linear algebra over a prime field F_p (or the rationals, p = 0).

Matrices are plain numpy arrays.  Over F_p with small p they are ``int64``
arrays holding representatives in ``[0, p)``; for large p and for the
rationals they are ``object`` arrays of Python ints / ``Fraction``.

Pivoting is fixed so every output is bit-reproducible: columns are scanned
left to right and the pivot row is the smallest row index (at or below the
current echelon row) with a nonzero entry.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

_INT64_PRIME_LIMIT = 1 << 25


class NoSolution(ValueError):
    """Raised by :func:`solve` when the right-hand side is not in the column space."""


class DependentColumns(ValueError):
    """Raised by :func:`extend_to_basis` when the input columns are dependent."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Field:
    """Coefficient field: ``p`` prime for F_p, ``p == 0`` for Q."""

    p: int = 2

    def __post_init__(self):
        if self.p != 0 and not _is_prime(self.p):
            raise ValueError(f"field characteristic must be prime or 0, got {self.p}")
        dtype = np.int64 if 0 < self.p < _INT64_PRIME_LIMIT else object
        object.__setattr__(self, "dtype", dtype)

    def array(self, data, shape=None) -> np.ndarray:
        """Coerce nested lists / arrays / scalars into a reduced field array."""
        if self.dtype is object:
            a = np.array(data, dtype=object)
            if shape is not None:
                a = a.reshape(shape)
            conv = (lambda x: Fraction(x)) if self.p == 0 else (lambda x: int(x) % self.p)
            return np.vectorize(conv, otypes=[object])(a) if a.size else a
        a = np.array(data, dtype=np.int64)
        if shape is not None:
            a = a.reshape(shape)
        return a % self.p

    def reduce(self, a: np.ndarray) -> np.ndarray:
        if self.p == 0:
            return a
        return a % self.p

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        if self.dtype is not object:
            return np.zeros((rows, cols), dtype=np.int64)
        z = np.empty((rows, cols), dtype=object)
        z.fill(Fraction(0) if self.p == 0 else 0)
        return z

    def eye(self, n: int) -> np.ndarray:
        z = self.zeros(n, n)
        for i in range(n):
            z[i, i] = 1 if self.p else Fraction(1)
        return z

    def inv(self, x):
        if self.p == 0:
            return Fraction(1) / x
        return pow(int(x), -1, self.p)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if a.shape[1] == 0 or a.shape[0] == 0 or b.shape[1] == 0:
            return self.zeros(a.shape[0], b.shape[1])
        return self.reduce(a @ b)

    def neg(self, a: np.ndarray) -> np.ndarray:
        return self.reduce(-a)

    def add(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.reduce(a + b)

    def random(self, rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
        """Uniform random matrix (over Q: small integers in [-2, 2])."""
        if self.p == 0:
            return self.array(rng.integers(-2, 3, size=(rows, cols)))
        return self.array(rng.integers(0, self.p, size=(rows, cols)))


F2 = Field(2)


def rank_profile(A: np.ndarray, field: Field = F2) -> tuple[int, list[int], np.ndarray]:
    """Row-reduce ``A`` and return ``(rank, pivot_cols, rref)``."""
    R = field.reduce(np.array(A, dtype=field.dtype, copy=True))
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            R[[r, k]] = R[[k, r]]
        piv = R[r, c]
        if piv != 1:
            R[r] = field.reduce(R[r] * field.inv(piv))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            R[others] = field.reduce(R[others] - np.outer(R[others, c], R[r]))
        pivots.append(c)
        r += 1
    return r, pivots, R


def rank(A: np.ndarray, field: Field = F2) -> int:
    if A.shape[0] == 0 or A.shape[1] == 0:
        return 0
    return rank_profile(A, field)[0]


def solve(A: np.ndarray, b: np.ndarray, field: Field = F2) -> np.ndarray:
    """Return ``x`` with ``A @ x == b``; free variables are set to 0.

    ``b`` may be a vector or a matrix (solved column by column).
    """
    vector = b.ndim == 1
    B = b.reshape(-1, 1) if vector else b
    m, k = A.shape
    if B.shape[0] != m:
        raise ValueError(f"shape mismatch: A is {A.shape}, b has {B.shape[0]} rows")
    X = field.zeros(k, B.shape[1])
    if B.shape[1] == 0:
        return X.reshape(-1) if vector else X
    aug = np.concatenate([field.reduce(np.asarray(A, dtype=field.dtype)),
                          field.reduce(np.asarray(B, dtype=field.dtype))], axis=1)
    r, pivots, R = rank_profile(aug, field)
    for i, c in enumerate(pivots):
        if c >= k:
            raise NoSolution("right-hand side is not in the column space")
        X[c] = R[i, k:]
    return X.reshape(-1) if vector else X


def kernel_basis(A: np.ndarray, field: Field = F2) -> np.ndarray:
    """Columns form a basis of ``ker A``, one per free column, in column order."""
    m, k = A.shape
    if m == 0:
        return field.eye(k)
    r, pivots, R = rank_profile(A, field)
    free = [c for c in range(k) if c not in set(pivots)]
    K = field.zeros(k, len(free))
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, c in enumerate(pivots):
            K[c, j] = -R[i, f]
    return field.reduce(K)


def column_basis(A: np.ndarray, field: Field = F2) -> np.ndarray:
    """The pivot columns of ``A``: a basis of its column space."""
    if A.shape[1] == 0 or A.shape[0] == 0:
        return field.zeros(A.shape[0], 0)
    _, pivots, _ = rank_profile(A, field)
    return np.array(A[:, pivots], dtype=field.dtype, copy=True)


def extend_to_basis(V: np.ndarray, ambient_dim: int, field: Field = F2) -> np.ndarray:
    """Standard basis vectors completing the columns of ``V`` to a basis.

    Greedy by smallest index: ``e_j`` is taken whenever it is independent of
    ``V`` and the vectors already taken.
    """
    V = np.asarray(V, dtype=field.dtype)
    if V.ndim == 1:
        V = V.reshape(ambient_dim, 1)
    k = V.shape[1]
    aug = np.concatenate([V, field.eye(ambient_dim)], axis=1)
    _, pivots, _ = rank_profile(aug, field)
    if pivots[:k] != list(range(k)):
        raise DependentColumns("columns of V are linearly dependent")
    picked = [c - k for c in pivots[k:]]
    return np.array(field.eye(ambient_dim)[:, picked], dtype=field.dtype)


def inverse(A: np.ndarray, field: Field = F2) -> np.ndarray:
    n, m = A.shape
    if n != m:
        raise ValueError("cannot invert a non-square matrix")
    try:
        return solve(A, field.eye(n), field)
    except NoSolution:
        raise ValueError("matrix is singular") from None


def quotient_projection(sub: np.ndarray, ambient_dim: int, field: Field = F2):
    """Projection onto ``k^ambient / span(sub)`` and a section of it.

    ``sub`` must have independent columns.  Returns ``(proj, section)`` with
    ``proj @ sub == 0``, ``proj @ section == I`` and ``section`` made of
    standard basis vectors.
    """
    section = extend_to_basis(sub, ambient_dim, field)
    full = np.concatenate([np.asarray(sub, dtype=field.dtype), section], axis=1)
    inv = inverse(full, field)
    k = full.shape[1] - section.shape[1]
    return np.array(inv[k:], dtype=field.dtype), section
