"""Exact linear algebra over the prime field GF(2**31 - 1).

All vectors and matrices hold plain integers in [0, P).  Arithmetic uses
int64 numpy arrays; a single product of two reduced values stays below
2**62, so every elementary step fits in int64 before the modular reduce.
"""
from __future__ import annotations

from typing import Iterable, Mapping, Sequence

import numpy as np

P = 2_147_483_647  # prime 2**31 - 1

__all__ = [
    "P",
    "inv_mod",
    "make_vector",
    "unit_vector",
    "combine_columns",
    "combine_sparse",
    "rank_mod",
    "nonsingular_mod",
    "ColumnBasis",
]


def inv_mod(a: int) -> int:
    """Multiplicative inverse of a modulo P."""
    a %= P
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod P")
    return pow(a, -1, P)


def make_vector(values: Iterable[int]) -> np.ndarray:
    return np.asarray(list(values), dtype=np.int64) % P


def unit_vector(dim: int, row: int) -> np.ndarray:
    """Vector with a single 1 at 0-based position `row`."""
    if not 0 <= row < dim:
        raise ValueError(f"unit row {row} outside [0, {dim})")
    v = np.zeros(dim, dtype=np.int64)
    v[row] = 1
    return v


def combine_columns(columns: Sequence[np.ndarray], coeffs: Sequence[int], dim: int) -> np.ndarray:
    """Return sum_j coeffs[j] * columns[j] mod P."""
    if len(columns) != len(coeffs):
        raise ValueError(f"combination length {len(coeffs)} != column count {len(columns)}")
    acc = np.zeros(dim, dtype=np.int64)
    for c, col in zip(coeffs, columns):
        c = int(c) % P
        if c:
            acc = (acc + c * col) % P
    return acc


def combine_sparse(columns: Sequence[np.ndarray], expr: Mapping[int, int], dim: int) -> np.ndarray:
    """Like combine_columns but with a sparse {index: coeff} combination."""
    acc = np.zeros(dim, dtype=np.int64)
    for idx in sorted(expr):
        c = int(expr[idx]) % P
        if c:
            acc = (acc + c * columns[idx]) % P
    return acc


def rank_mod(matrix) -> int:
    """Rank of a matrix over GF(P), by row elimination with exact arithmetic."""
    m = np.array(matrix, dtype=np.int64)
    if m.ndim != 2:
        raise ValueError("rank_mod expects a 2-D matrix")
    rows, cols = m.shape
    if rows == 0 or cols == 0:
        return 0
    m %= P
    r = 0
    for c in range(cols):
        pivot = -1
        for i in range(r, rows):
            if m[i, c]:
                pivot = i
                break
        if pivot < 0:
            continue
        if pivot != r:
            m[[r, pivot]] = m[[pivot, r]]
        m[r] = (m[r] * inv_mod(int(m[r, c]))) % P
        for i in range(rows):
            if i != r and m[i, c]:
                m[i] = (m[i] - m[i, c] * m[r]) % P
        r += 1
        if r == rows:
            break
    return r


def nonsingular_mod(matrix) -> bool:
    """True iff a square matrix is invertible over GF(P)."""
    m = np.array(matrix, dtype=np.int64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError("nonsingular_mod expects a square matrix")
    n = m.shape[0]
    return n == 0 or rank_mod(m) == n


class ColumnBasis:
    """Incrementally reduced column basis over GF(P) with provenance.

    The basis is kept fully reduced (each pivot row is zero in every
    other basis vector, pivots are the first nonzero row of their
    vector), so the unit vectors inside the span are exactly the
    one-hot basis vectors.  Every basis vector also carries its
    expression over the raw columns inserted so far, which lets
    ``solve`` recover an explicit combination for any member of the
    span.
    """

    def __init__(self, dim: int):
        if dim < 0:
            raise ValueError("dimension must be >= 0")
        self.dim = dim
        self._vecs: list[np.ndarray] = []
        self._pivots: list[int] = []
        self._exprs: list[dict[int, int]] = []
        self._units: frozenset[int] | None = frozenset()

    @property
    def rank(self) -> int:
        return len(self._vecs)

    def _reduce(self, vec: np.ndarray, expr: dict[int, int]):
        v = vec % P
        e = dict(expr)
        for b, p, bx in zip(self._vecs, self._pivots, self._exprs):
            c = int(v[p])
            if c:
                v = (v - c * b) % P
                for k, val in bx.items():
                    e[k] = (e.get(k, 0) - c * val) % P
        return v, e

    def insert(self, column: np.ndarray, tag: int) -> bool:
        """Insert a raw column identified by `tag`; True iff rank grew."""
        col = np.asarray(column, dtype=np.int64)
        if col.shape != (self.dim,):
            raise ValueError(f"column has shape {col.shape}, expected ({self.dim},)")
        v, e = self._reduce(col, {tag: 1})
        nz = np.flatnonzero(v)
        if nz.size == 0:
            return False
        pivot = int(nz[0])
        iv = inv_mod(int(v[pivot]))
        v = (v * iv) % P
        e = {k: (val * iv) % P for k, val in e.items() if val % P}
        for i, b in enumerate(self._vecs):
            c = int(b[pivot])
            if c:
                self._vecs[i] = (b - c * v) % P
                bx = self._exprs[i]
                for k, val in e.items():
                    bx[k] = (bx.get(k, 0) - c * val) % P
        self._vecs.append(v)
        self._pivots.append(pivot)
        self._exprs.append(e)
        self._units = None
        return True

    def solve(self, target) -> dict[int, int] | None:
        """Sparse combination of raw columns equal to `target`, or None."""
        v = np.asarray(target, dtype=np.int64) % P
        if v.shape != (self.dim,):
            raise ValueError(f"target has shape {v.shape}, expected ({self.dim},)")
        x: dict[int, int] = {}
        for b, p, bx in zip(self._vecs, self._pivots, self._exprs):
            c = int(v[p])
            if c:
                v = (v - c * b) % P
                for k, val in bx.items():
                    x[k] = (x.get(k, 0) + c * val) % P
        if np.any(v):
            return None
        return {k: val for k, val in x.items() if val}

    def contains(self, target) -> bool:
        return self.solve(target) is not None

    def unit_rows(self) -> frozenset[int]:
        """0-based rows r with the unit vector e_r inside the span."""
        if self._units is None:
            self._units = frozenset(
                self._pivots[i]
                for i, v in enumerate(self._vecs)
                if np.count_nonzero(v) == 1
            )
        return self._units
