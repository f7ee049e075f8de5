"""F_p linear algebra on plain integer arrays.

Inputs and outputs are int64 numpy arrays with entries in 0..p-1; galois
field arrays are only used inside for the eliminations.
"""
import functools
from typing import Tuple

import galois
import numpy as np
from sympy import isprime

_CHUNK_ROWS = 1024


@functools.lru_cache(maxsize=None)
def field(p: int) -> type[galois.FieldArray]:
    if not isprime(p):
        raise ValueError(f"{p} is not a prime")
    return galois.GF(p)


def _gf(p: int, a: np.ndarray) -> galois.FieldArray:
    return field(p)(np.mod(np.asarray(a, dtype=np.int64), p))


def _plain(a: galois.FieldArray) -> np.ndarray:
    return np.asarray(a.view(np.ndarray), dtype=np.int64)


def _matrix(a: np.ndarray, ncols: int | None = None) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(1, -1) if a.size or ncols is None else a.reshape(0, ncols)
    if a.size == 0 and ncols is not None:
        a = a.reshape(0, ncols)
    return a


def rref(p: int, A: np.ndarray, ncols: int | None = None) -> Tuple[np.ndarray, np.ndarray]:
    """Nonzero rows of the reduced row echelon form, and their pivot columns"""
    A = _matrix(A, ncols)
    if A.shape[0] == 0 or A.shape[1] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64), np.zeros(0, dtype=np.int64)
    R = _plain(_gf(p, A).row_reduce())
    R = R[np.any(R != 0, axis=1)]
    return R, np.argmax(R != 0, axis=1)


def rank(p: int, A: np.ndarray) -> int:
    A = _matrix(A)
    if A.size == 0:
        return 0
    return int(np.linalg.matrix_rank(_gf(p, A)))


def matmul(p: int, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    A, B = np.asarray(A, dtype=np.int64), np.asarray(B, dtype=np.int64)
    if A.size == 0 or B.size == 0:
        return np.zeros(A.shape[:-1] + B.shape[1:], dtype=np.int64)
    return _plain(_gf(p, A) @ _gf(p, B))


def inverse(p: int, A: np.ndarray) -> np.ndarray:
    A = _matrix(A)
    if A.shape[0] == 0:
        return A.copy()
    return _plain(np.linalg.inv(_gf(p, A)))


def null_space(p: int, A: np.ndarray, ncols: int) -> np.ndarray:
    """Rows spanning {x : A x = 0}"""
    R, pivots = rref(p, A, ncols)
    free = np.setdiff1d(np.arange(ncols), pivots)
    basis = np.zeros((free.size, ncols), dtype=np.int64)
    basis[np.arange(free.size), free] = 1
    if pivots.size:
        basis[:, pivots] = (-R[:, free].T) % p
    return basis


def left_null_space(p: int, A: np.ndarray, nrows: int) -> np.ndarray:
    """Rows spanning {y : y A = 0}"""
    A = _matrix(A)
    if A.size == 0:
        return np.eye(nrows, dtype=np.int64)
    return null_space(p, A.T, nrows)


def span(p: int, vectors: np.ndarray, ncols: int) -> np.ndarray:
    return rref(p, vectors, ncols)[0]


def solve_left(p: int, basis: np.ndarray, targets: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Coefficients c with c @ basis = target, per target row.

    returns (coeffs, solvable) with coeffs shaped (len(targets), len(basis)); rows
    of coeffs are zero where solvable is False.
    """
    targets = _matrix(targets)
    basis = _matrix(basis, targets.shape[1])
    k, m = basis.shape[0], targets.shape[0]
    coeffs = np.zeros((m, k), dtype=np.int64)
    if m == 0:
        return coeffs, np.zeros(0, dtype=bool)
    if k == 0:
        return coeffs, ~np.any(targets % p != 0, axis=1)
    R, pivots = rref(p, np.hstack([basis.T, targets.T]))
    inside = pivots < k
    # a row with no pivot in the basis block makes its nonzero targets inconsistent
    solvable = ~np.any(R[~inside][:, k:] != 0, axis=0)
    coeffs[:, pivots[inside]] = R[inside][:, k:].T
    coeffs[~solvable] = 0
    return coeffs, solvable


def contains(p: int, basis: np.ndarray, vectors: np.ndarray) -> bool:
    vectors = _matrix(vectors)
    if vectors.shape[0] == 0:
        return True
    return bool(np.all(solve_left(p, basis, vectors)[1]))


def same_span(p: int, U: np.ndarray, V: np.ndarray, ncols: int) -> bool:
    U, V = _matrix(U, ncols), _matrix(V, ncols)
    return contains(p, U, V) and contains(p, V, U)


def intersect(p: int, U: np.ndarray, V: np.ndarray, ncols: int) -> np.ndarray:
    """Basis of rowspan(U) ∩ rowspan(V)"""
    U, V = _matrix(U, ncols), _matrix(V, ncols)
    if U.shape[0] == 0 or V.shape[0] == 0:
        return np.zeros((0, ncols), dtype=np.int64)
    relations = left_null_space(p, np.vstack([U, V]), U.shape[0] + V.shape[0])
    return span(p, matmul(p, relations[:, :U.shape[0]], U), ncols)


def extend_basis(p: int, base: np.ndarray, candidates: np.ndarray) -> np.ndarray:
    """Indices of candidate rows that extend rowspan(base) to rowspan(base + candidates)"""
    candidates = _matrix(candidates)
    base = _matrix(base, candidates.shape[1])
    if candidates.shape[0] == 0:
        return np.zeros(0, dtype=np.int64)
    _, pivots = rref(p, np.vstack([base, candidates]).T)
    return pivots[pivots >= base.shape[0]] - base.shape[0]


class RowSpace:
    """Echelon basis grown a chunk of rows at a time

    ctor params:
    p: int -- field characteristic
    ncols: int -- vector length
    """

    def __init__(self, p: int, ncols: int) -> None:
        self.p = p
        self.ncols = ncols
        self.basis = np.zeros((0, ncols), dtype=np.int64)

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    def add(self, rows: np.ndarray) -> None:
        rows = _matrix(rows, self.ncols)
        for lo in range(0, rows.shape[0], _CHUNK_ROWS):
            chunk = rows[lo:lo + _CHUNK_ROWS] % self.p
            chunk = chunk[np.any(chunk != 0, axis=1)]
            if chunk.shape[0] == 0 or self.rank == self.ncols:
                continue
            self.basis = rref(self.p, np.vstack([self.basis, chunk]), self.ncols)[0]

    def null_space(self) -> np.ndarray:
        return null_space(self.p, self.basis, self.ncols)


class CoordinateSolver:
    """Coordinates with respect to a fixed basis, by inverting it on its pivot columns

    ctor params:
    p: int
    basis: np.ndarray -- independent rows
    """

    def __init__(self, p: int, basis: np.ndarray) -> None:
        self.p = p
        self.basis = np.asarray(basis, dtype=np.int64)
        _, self.pivots = rref(p, self.basis, self.basis.shape[1] if self.basis.ndim == 2 else 0)
        if self.pivots.size != self.basis.shape[0]:
            raise ValueError("Basis rows are dependent")
        self._inv = inverse(p, self.basis[:, self.pivots])

    def coordinates(self, vectors: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """returns (coords, inside) where inside marks vectors lying in the span"""
        vectors = _matrix(vectors, self.basis.shape[1])
        coords = matmul(self.p, vectors[:, self.pivots], self._inv) \
            if self.pivots.size else np.zeros((vectors.shape[0], 0), dtype=np.int64)
        inside = np.all(matmul(self.p, coords, self.basis) == vectors % self.p, axis=1) \
            if self.pivots.size else ~np.any(vectors % self.p != 0, axis=1)
        return coords, inside
