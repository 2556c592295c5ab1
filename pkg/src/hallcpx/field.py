"""Dense exact linear algebra over a prime field F_p.

Matrices are numpy int64 arrays with entries reduced to canonical residues
0..p-1.  Everything is exact: no floating point is used anywhere in the
library.  Batched kernels (rank / invertibility over a stack of matrices)
back the enumeration sweeps of the representation layer.
"""

from __future__ import annotations

from functools import reduce
from itertools import combinations, product

import numpy as np

from .errors import BudgetExceededError, DomainError

DEFAULT_BUDGET = 2**24


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class PrimeField:
    """The field F_p for a prime p, with dense matrix operations.

    All values are immutable after construction and all methods are pure,
    so instances may be shared freely between threads.
    """

    def __init__(self, p: int):
        if not is_prime(p):
            raise DomainError(f"modulus {p} is not prime")
        self.p = int(p)
        # inverse table: inv[a] = a^(p-2) mod p for a in 1..p-1
        self._inv = np.array([0] + [pow(a, p - 2, p) for a in range(1, p)], dtype=np.int64)

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("PrimeField", self.p))

    # -- scalars ---------------------------------------------------------

    def inv(self, a: int) -> int:
        a %= self.p
        if a == 0:
            raise DomainError("0 is not invertible")
        return int(self._inv[a])

    # -- matrix constructors ---------------------------------------------

    def matrix(self, data) -> np.ndarray:
        m = np.array(data, dtype=np.int64) % self.p
        if m.ndim != 2:
            raise DomainError(f"expected a 2-d matrix, got shape {m.shape}")
        return m

    def zeros(self, rows: int, cols: int) -> np.ndarray:
        return np.zeros((rows, cols), dtype=np.int64)

    def identity(self, n: int) -> np.ndarray:
        return np.eye(n, dtype=np.int64)

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return (a @ b) % self.p

    def mats_mul(self, *mats: np.ndarray) -> np.ndarray:
        return reduce(self.matmul, mats)

    # -- elimination -----------------------------------------------------

    def rref(self, m: np.ndarray):
        """Reduced row echelon form.

        Returns (R, pivot_cols).  R has unit pivots with zeros above and
        below; len(pivot_cols) is the rank.
        """
        r = (np.asarray(m, dtype=np.int64) % self.p).copy()
        rows, cols = r.shape
        pivots = []
        row = 0
        for col in range(cols):
            if row >= rows:
                break
            nz = np.nonzero(r[row:, col])[0]
            if nz.size == 0:
                continue
            piv = row + int(nz[0])
            if piv != row:
                r[[row, piv]] = r[[piv, row]]
            r[row] = (r[row] * self._inv[r[row, col]]) % self.p
            mask = np.nonzero(r[:, col])[0]
            mask = mask[mask != row]
            if mask.size:
                r[mask] = (r[mask] - np.outer(r[mask, col], r[row])) % self.p
            pivots.append(col)
            row += 1
        return r, pivots

    def rank(self, m: np.ndarray) -> int:
        if m.size == 0:
            return 0
        return len(self.rref(m)[1])

    def solve_kernel(self, m: np.ndarray):
        """Basis of the right kernel as a list of column vectors."""
        basis = self.kernel_basis(m)
        return [basis[:, j].copy() for j in range(basis.shape[1])]

    def kernel_basis(self, m: np.ndarray) -> np.ndarray:
        """Basis of the right kernel, returned as columns of a cols x k matrix."""
        m = np.asarray(m, dtype=np.int64)
        rows, cols = m.shape
        if cols == 0:
            return np.zeros((0, 0), dtype=np.int64)
        if rows == 0:
            return self.identity(cols)
        r, pivots = self.rref(m)
        free = [c for c in range(cols) if c not in pivots]
        basis = np.zeros((cols, len(free)), dtype=np.int64)
        for j, fc in enumerate(free):
            basis[fc, j] = 1
            for i, pc in enumerate(pivots):
                basis[pc, j] = (-r[i, fc]) % self.p
        return basis

    def solve(self, a: np.ndarray, b: np.ndarray):
        """One solution x of a @ x = b (matrix right-hand sides allowed), or None."""
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64) % self.p
        single = b.ndim == 1
        if single:
            b = b[:, None]
        rows, cols = a.shape
        aug = np.hstack([a % self.p, b])
        r, pivots = self.rref(aug)
        # inconsistent if a pivot falls in the rhs block
        for i in range(len(pivots) - 1, -1, -1):
            if pivots[i] >= cols:
                return None
        x = np.zeros((cols, b.shape[1]), dtype=np.int64)
        for i, pc in enumerate(pivots):
            if pc < cols:
                x[pc] = r[i, cols:]
        return x[:, 0] if single else x

    def is_invertible(self, m: np.ndarray) -> bool:
        m = np.asarray(m)
        if m.shape[0] != m.shape[1]:
            return False
        if m.shape[0] == 0:
            return True
        return self.rank(m) == m.shape[0]

    def inverse(self, m: np.ndarray) -> np.ndarray:
        n = m.shape[0]
        if m.shape[0] != m.shape[1]:
            raise DomainError("only square matrices can be inverted")
        x = self.solve(m, self.identity(n))
        if x is None or self.rank(m) != n:
            raise DomainError("matrix is singular")
        return x

    def column_space_basis(self, m: np.ndarray) -> np.ndarray:
        """Columns of m forming a basis of its column space."""
        r, pivots = self.rref(m.T)
        # row space of m.T == column space of m; return reduced spanning rows as columns
        return r[: len(pivots)].T.copy()

    # -- batched kernels ---------------------------------------------------

    def batch_rank(self, mats: np.ndarray) -> np.ndarray:
        """Ranks of a stack of matrices, shape (batch, rows, cols) -> (batch,)."""
        a = (np.asarray(mats, dtype=np.int64) % self.p).copy()
        if a.ndim != 3:
            raise DomainError("batch_rank expects a 3-d stack")
        b, rows, cols = a.shape
        if b == 0 or rows == 0 or cols == 0:
            return np.zeros(b, dtype=np.int64)
        rank = np.zeros(b, dtype=np.int64)
        row_ptr = np.zeros(b, dtype=np.int64)
        idx = np.arange(b)
        for col in range(cols):
            col_vals = a[:, :, col]
            below = np.arange(rows)[None, :] >= row_ptr[:, None]
            nz = (col_vals != 0) & below
            has = nz.any(axis=1) & (row_ptr < rows)
            if not has.any():
                continue
            piv_row = np.where(nz, np.arange(rows)[None, :], rows).min(axis=1)
            sel = idx[has]
            pr = piv_row[has]
            rp = row_ptr[has]
            # swap pivot row up
            tmp = a[sel, rp].copy()
            a[sel, rp] = a[sel, pr]
            a[sel, pr] = tmp
            # scale pivot row to 1
            pivd = a[sel, rp, col]
            a[sel, rp] = (a[sel, rp] * self._inv[pivd][:, None]) % self.p
            # eliminate below
            below_rows = np.arange(rows)[None, :] > rp[:, None]
            factors = np.where(below_rows, a[sel][:, :, col], 0)
            a[sel] = (a[sel] - factors[:, :, None] * a[sel, rp][:, None, :]) % self.p
            rank[has] += 1
            row_ptr[has] += 1
        return rank

    def batch_invertible(self, mats: np.ndarray) -> np.ndarray:
        """Boolean mask of invertible matrices in a square stack."""
        b, rows, cols = mats.shape
        if rows != cols:
            return np.zeros(b, dtype=bool)
        if rows == 0:
            return np.ones(b, dtype=bool)
        return self.batch_rank(mats) == rows


# -- enumeration -----------------------------------------------------------


def coefficient_vectors(k: int, p: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All p^k coefficient vectors of length k, as a (p^k, k) array, lexicographic."""
    if p**k > budget:
        raise BudgetExceededError(f"{p}^{k} coefficient vectors exceed budget {budget}")
    if k == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((p,) * k, dtype=np.int64)
    return grids.reshape(k, -1).T


def iter_coefficient_chunks(k: int, p: int, chunk: int = 1 << 16):
    """Yield the p^k coefficient vectors in lexicographic chunks (no budget cap)."""
    total = p**k
    if k == 0:
        yield np.zeros((1, 0), dtype=np.int64)
        return
    powers = p ** np.arange(k - 1, -1, -1, dtype=np.int64)
    start = 0
    while start < total:
        stop = min(start + chunk, total)
        nums = np.arange(start, stop, dtype=np.int64)
        yield (nums[:, None] // powers[None, :]) % p
        start = stop


def all_vectors(d: int, p: int, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """All vectors of F_p^d as rows."""
    return coefficient_vectors(d, p, budget)


def gaussian_binomial(d: int, k: int, p: int) -> int:
    """Number of k-dimensional subspaces of F_p^d."""
    if k < 0 or k > d:
        return 0
    num = den = 1
    for i in range(k):
        num *= p ** (d - i) - 1
        den *= p ** (i + 1) - 1
    assert num % den == 0
    return num // den


def enumerate_subspaces(d: int, k: int, p: int, budget: int = DEFAULT_BUDGET):
    """All k-dimensional subspaces of F_p^d, one reduced echelon basis each.

    Each subspace is returned as a k x d matrix in reduced row echelon form,
    the unique such basis, so the list is duplicate-free by construction.
    """
    if k < 0 or k > d:
        raise DomainError(f"subspace dimension {k} outside 0..{d}")
    if gaussian_binomial(d, k, p) > budget:
        raise BudgetExceededError("subspace enumeration exceeds budget")
    out = []
    for pivots in combinations(range(d), k):
        free_slots = [
            (i, c)
            for i in range(k)
            for c in range(d)
            if c > pivots[i] and c not in pivots
        ]
        for fill in product(range(p), repeat=len(free_slots)):
            m = np.zeros((k, d), dtype=np.int64)
            for i, c in enumerate(pivots):
                m[i, c] = 1
            for (i, c), v in zip(free_slots, fill):
                m[i, c] = v
            out.append(m)
    return out
