"""Linear algebra over F_p (numpy), over Q (sympy) and over cyclotomic fields.

The F_p routines work on ``int64`` arrays of residues and eliminate a whole
column at once with an outer-product update. Rational kernels and ranks go
through sympy's ``DomainMatrix`` over ``QQ``. Cyclotomic rows of
:class:`~nilhecke.rings.cyclotomic.CycScalar` are reduced by a plain
Gauss-Jordan pass on lists.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any
from typing import NamedTuple
from typing import Sequence

import numpy as np
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from nilhecke.errors import NotInvertible


class Echelon(NamedTuple):
    """Reduced row echelon form over F_p."""

    rows: np.ndarray
    pivots: tuple[int, ...]
    p: int

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def free_columns(self) -> list[int]:
        pivots = set(self.pivots)
        return [j for j in range(self.rows.shape[1]) if j not in pivots]

    def reduce(self, vec: np.ndarray) -> np.ndarray:
        """Normal form of ``vec`` modulo the row space."""
        out = np.array(vec, dtype=np.int64) % self.p
        for r, j in enumerate(self.pivots):
            c = out[..., j]
            if np.any(c):
                out = (out - np.multiply.outer(c, self.rows[r])) % self.p
        return out

    def contains(self, vec: np.ndarray) -> bool:
        return not self.reduce(vec).any()

    def key(self) -> bytes:
        """Canonical byte string of the row space."""
        pivots = np.asarray(self.pivots, dtype=np.int32).tobytes()
        return self.rows.astype(np.int16).tobytes() + b"|" + pivots


def rref_mod_p(mat: np.ndarray, p: int, ncols: int | None = None) -> Echelon:
    """Reduced row echelon form of ``mat`` over F_p; zero rows dropped."""
    a = np.array(mat, dtype=np.int64) % p
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.size == 0:
        n = a.shape[1] if a.ndim == 2 and a.shape[1] else (ncols or 0)
        return Echelon(np.zeros((0, n), dtype=np.int64), (), p)
    m, n = a.shape
    inv = _inverses(p)
    pivots: list[int] = []
    r = 0
    for j in range(n):
        if r == m:
            break
        nz = np.flatnonzero(a[r:, j])
        if len(nz) == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            a[[r, k]] = a[[k, r]]
        a[r] = (a[r] * inv[a[r, j]]) % p
        col = a[:, j].copy()
        col[r] = 0
        if col.any():
            a = (a - np.outer(col, a[r])) % p
        pivots.append(j)
        r += 1
    return Echelon(a[:r], tuple(pivots), p)


def _inverses(p: int) -> np.ndarray:
    inv = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        inv[x] = pow(x, p - 2, p)
    return inv


def rank_mod_p(mat: np.ndarray, p: int) -> int:
    return rref_mod_p(mat, p).rank


def nullspace_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of ``{x : mat @ x = 0}`` over F_p."""
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[1]
    ech = rref_mod_p(a, p, ncols=n)
    free = ech.free_columns()
    basis = np.zeros((len(free), n), dtype=np.int64)
    for i, f in enumerate(free):
        basis[i, f] = 1
        for r, j in enumerate(ech.pivots):
            basis[i, j] = (-ech.rows[r, f]) % p
    return basis


def left_nullspace_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    """Basis of ``{y : y @ mat = 0}``."""
    return nullspace_mod_p(np.asarray(mat).T, p)


def solve_mod_p(mat: np.ndarray, rhs: np.ndarray, p: int) -> np.ndarray | None:
    """One solution ``x`` of ``x @ mat = rhs`` (rows of ``mat`` combined), or None."""
    a = np.array(mat, dtype=np.int64) % p
    m = a.shape[0]
    aug = np.concatenate([a.T, np.array(rhs, dtype=np.int64).reshape(-1, 1) % p], axis=1)
    ech = rref_mod_p(aug, p, ncols=m + 1)
    if m in ech.pivots:
        return None
    x = np.zeros(m, dtype=np.int64)
    for r, j in enumerate(ech.pivots):
        x[j] = ech.rows[r, m]
    return x


def inverse_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    """Inverse of a square matrix over F_p.

    Raises:
        NotInvertible: If the matrix is singular.
    """
    a = np.array(mat, dtype=np.int64) % p
    n = a.shape[0]
    ech = rref_mod_p(np.concatenate([a, np.eye(n, dtype=np.int64)], axis=1), p, ncols=2 * n)
    if ech.pivots[:n] != tuple(range(n)) or len(ech.pivots) < n:
        msg = f"{n}x{n} matrix is singular mod {p}"
        raise NotInvertible(msg)
    return ech.rows[:n, n:] % p


def span_mod_p(gens: np.ndarray, p: int) -> np.ndarray:
    """All vectors of the F_p-span of the rows of ``gens``."""
    ech = rref_mod_p(gens, p)
    n = ech.rows.shape[1]
    if ech.rank == 0:
        return np.zeros((1, n), dtype=np.int64)
    coeffs = np.array(np.meshgrid(*[np.arange(p)] * ech.rank, indexing="ij"))
    coeffs = coeffs.reshape(ech.rank, -1).T
    return (coeffs @ ech.rows) % p


def stack_rows(rows: Sequence[np.ndarray], dim: int) -> np.ndarray:
    """Rows of length ``dim`` as one ``(len(rows), dim)`` array, also when either is 0."""
    if not rows or dim == 0:
        return np.zeros((len(rows), dim), dtype=np.int64)
    return np.array(rows, dtype=np.int64).reshape(len(rows), dim)


def all_vectors(p: int, dim: int) -> np.ndarray:
    """Every vector of F_p^dim, lexicographic order."""
    if dim == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grid = np.array(np.meshgrid(*[np.arange(p)] * dim, indexing="ij"))
    return grid.reshape(dim, -1).T.astype(np.int64)


# rationals (sympy)


def rational_matrix(rows: Sequence[Sequence[Fraction]], ncols: int) -> DomainMatrix:
    data = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in r] for r in rows]
    return DomainMatrix(data, (len(data), ncols), QQ)


def _fractions(m: DomainMatrix) -> list[list[Fraction]]:
    return [[Fraction(int(x.p), int(x.q)) for x in row] for row in m.to_Matrix().tolist()]


def rational_rref(rows: Sequence[Sequence[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; zero rows dropped."""
    if not rows:
        return [], []
    red, pivots = rational_matrix(rows, len(rows[0])).rref()
    return _fractions(red)[: len(pivots)], list(pivots)


def rational_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    if not rows:
        return 0
    return rational_matrix(rows, len(rows[0])).rank()


def rational_kernel(rows: Sequence[Sequence[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{v : M v = 0}`` over Q for the matrix with the given rows."""
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    red, pivots = rational_rref(rows)
    free = [j for j in range(ncols) if j not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, j in enumerate(pivots):
            v[j] = -red[r][f]
        basis.append(v)
    return basis


# cyclotomic values, which sympy's domains do not carry


def exact_rref(rows: Sequence[Sequence[Any]]) -> tuple[list[list[Any]], list[int]]:
    """Reduced row echelon form over an exact field; zero rows dropped."""
    a = [list(r) for r in rows]
    if not a:
        return [], []
    n = len(a[0])
    pivots: list[int] = []
    r = 0
    for j in range(n):
        k = next((i for i in range(r, len(a)) if a[i][j]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        piv = a[r][j]
        a[r] = [x / piv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][j]:
                c = a[i][j]
                a[i] = [x - c * y for x, y in zip(a[i], a[r])]
        pivots.append(j)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def exact_rank(rows: Sequence[Sequence[Any]]) -> int:
    return len(exact_rref(rows)[1])
