"""Exact integer linear algebra: Smith normal form over Z and over Z/p^k."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


def _identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def smith_normal_form(M, return_inverses: bool = False):
    """Smith normal form of an integer matrix with exact Python integers.

    Returns ``(S, U, V)`` (plus ``Uinv, Vinv`` if requested) with
    ``S == U @ M @ V``, ``U`` and ``V`` unimodular, and ``S`` diagonal with
    non-negative entries ``d1 | d2 | ...``.  Matrices are lists of lists.
    """
    A = [[int(v) for v in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U, V = _identity(m), _identity(n)
    Ui, Vi = _identity(m), _identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        # U' = P U  =>  U'^-1 = U^-1 P
        for row in Ui:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for mat in (A, V):
            for row in mat:
                row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        if c == 0:
            return
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]
        for row in Ui:
            row[src] -= c * row[dst]

    def add_col(dst, src, c):
        # col_dst += c * col_src
        if c == 0:
            return
        for mat in (A, V):
            for row in mat:
                row[dst] += c * row[src]
        Vi[src] = [a - c * b for a, b in zip(Vi[src], Vi[dst])]

    def negate_row(i):
        A[i] = [-a for a in A[i]]
        U[i] = [-a for a in U[i]]
        for row in Ui:
            row[i] = -row[i]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
            rest = [(abs(A[i][t]), i, t) for i in range(t + 1, m) if A[i][t]]
            rest += [(abs(A[t][j]), t, j) for j in range(t + 1, n) if A[t][j]]
            if rest:
                _, i, j = min(rest)
                if j == t:
                    swap_rows(t, i)
                else:
                    swap_cols(t, j)
                continue
            piv = A[t][t]
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if A[i][j] % piv), None)
            if bad is None:
                break
            add_row(t, bad[0], 1)
        if A[t][t] < 0:
            negate_row(t)
        t += 1
    if return_inverses:
        return A, U, V, Ui, Vi
    return A, U, V


def invariant_factors(M) -> tuple[int, ...]:
    """Nontrivial torsion invariant factors of Z^n / rowspan(M) (zeros as 0)."""
    S, _, _ = smith_normal_form(M)
    n = len(S[0]) if S else 0
    diag = [S[i][i] if i < len(S) else 0 for i in range(n)]
    return tuple(d for d in diag if d != 1)


def matmul(A, B):
    return [[sum(a * b for a, b in zip(row, col)) for col in zip(*B)] for row in A]


@dataclass
class LocalSmith:
    """Result of ``P @ A @ Q = D`` over Z/p^k (row transform ``P`` not kept).

    ``valuations[i]`` is the exponent of the i-th diagonal entry p^v for the
    first ``rank`` columns; the remaining columns are zero.
    """
    p: int
    k: int
    valuations: list[int]
    Q: np.ndarray
    Qinv: np.ndarray
    ncols: int

    @property
    def q(self) -> int:
        return self.p ** self.k

    @property
    def rank(self) -> int:
        return len(self.valuations)

    def kernel(self) -> tuple[np.ndarray, list[int]]:
        """Generators (rows) of {x : A x = 0} and their additive orders.

        The kernel is the direct sum of the cyclic groups they generate.
        """
        gens, orders = [], []
        q = self.q
        for i in range(self.ncols):
            if i < self.rank:
                v = self.valuations[i]
                if v == 0:
                    continue
                gens.append(self.Q[:, i] * (self.p ** (self.k - v)) % q)
                orders.append(self.p ** v)
            else:
                gens.append(self.Q[:, i] % q)
                orders.append(q)
        if not gens:
            return np.zeros((0, self.ncols), dtype=np.int64), []
        return np.array(gens, dtype=np.int64), orders

    def kernel_coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates of kernel vectors (rows) against :meth:`kernel` generators."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        y = (vectors @ self.Qinv.T) % self.q
        cols = []
        for i in range(self.ncols):
            if i < self.rank:
                v = self.valuations[i]
                if v == 0:
                    if (y[:, i] != 0).any():
                        raise ValueError("vector is not in the kernel")
                    continue
                step = self.p ** (self.k - v)
                if (y[:, i] % step).any():
                    raise ValueError("vector is not in the kernel")
                cols.append((y[:, i] // step) % (self.p ** v))
            else:
                cols.append(y[:, i])
        if not cols:
            return np.zeros((vectors.shape[0], 0), dtype=np.int64)
        return np.stack(cols, axis=1)

    def cokernel(self) -> tuple[np.ndarray, list[int]]:
        """Generators of (Z/q)^n / rowspan(A) as rows, with their orders.

        Only nontrivial summands are returned.
        """
        gens, orders = [], []
        for i in range(self.ncols):
            order = self.p ** self.valuations[i] if i < self.rank else self.q
            if order > 1:
                gens.append(self.Qinv[i] % self.q)
                orders.append(order)
        if not gens:
            return np.zeros((0, self.ncols), dtype=np.int64), []
        return np.array(gens, dtype=np.int64), orders

    def cokernel_coordinates(self, vectors: np.ndarray) -> np.ndarray:
        """Coordinates in :meth:`cokernel` of row vectors of (Z/q)^n."""
        vectors = np.atleast_2d(np.asarray(vectors, dtype=np.int64))
        y = (vectors @ self.Q) % self.q
        cols = []
        for i in range(self.ncols):
            order = self.p ** self.valuations[i] if i < self.rank else self.q
            if order > 1:
                cols.append(y[:, i] % order)
        if not cols:
            return np.zeros((vectors.shape[0], 0), dtype=np.int64)
        return np.stack(cols, axis=1)


def local_smith(A, p: int, k: int) -> LocalSmith:
    """Diagonalise ``A`` over the local ring Z/p^k, tracking column operations.

    Full pivoting on the entry of least p-adic valuation; that entry divides
    every other entry of the remaining block, so elimination never needs
    gcd steps.  Tall inputs are first cut down to a generating set of their
    row module (row operations are not tracked anyway).
    """
    q = p ** k
    A = np.array(A, dtype=np.int64) % q
    if A.ndim != 2:
        raise ValueError("expected a matrix")
    n = A.shape[1]
    Q = np.eye(n, dtype=np.int64)
    Qi = np.eye(n, dtype=np.int64)
    vals: list[int] = []
    A = row_module_basis(A, p, k) if A.shape[0] > 2 * n else _prune_rows(A)
    r = 0
    while r < min(A.shape[0], n):
        sub = A[r:, r:]
        e = 0
        hits = sub % p != 0
        while not hits.any():
            e += 1
            if e >= k:
                break
            hits = sub % (p ** (e + 1)) != 0
        if e >= k:
            break
        flat = int(np.argmax(hits))
        i, j = divmod(flat, sub.shape[1])
        i += r
        j += r
        if i != r:
            A[[r, i]] = A[[i, r]]
        if j != r:
            A[:, [r, j]] = A[:, [j, r]]
            Q[:, [r, j]] = Q[:, [j, r]]
            Qi[[r, j]] = Qi[[j, r]]
        pe = p ** e
        unit = int(A[r, r]) // pe
        A[r] = (A[r] * pow(unit, -1, q)) % q
        rows = np.flatnonzero(A[r + 1:, r]) + r + 1
        if rows.size:
            f = A[rows, r] // pe
            A[rows] = (A[rows] - f[:, None] * A[r]) % q
        if r + 1 < n:
            f = A[r, r + 1:] // pe
            A[r, r + 1:] = 0
            Q[:, r + 1:] = (Q[:, r + 1:] - Q[:, [r]] * f[None, :]) % q
            Qi[r] = (Qi[r] + f @ Qi[r + 1:]) % q
        vals.append(e)
        r += 1
    return LocalSmith(p, k, vals, Q, Qi, n)


def _echelon(pool: np.ndarray, p: int, k: int) -> np.ndarray:
    """Row operations only: a generating set of the row module, at most one row per column."""
    q = p ** k
    n = pool.shape[1]
    out = []
    pool = pool[(pool != 0).any(axis=1)]
    for c in range(n):
        if not pool.shape[0]:
            break
        col = pool[:, c]
        nzr = np.flatnonzero(col)
        if not nzr.size:
            continue
        e = 0
        while True:
            hit = col[nzr] % (p ** (e + 1)) != 0
            if hit.any():
                break
            e += 1
        i = int(nzr[int(np.argmax(hit))])
        pe = p ** e
        piv = (pool[i] * pow(int(col[i]) // pe, -1, q)) % q
        rest = nzr[nzr != i]
        if rest.size:
            pool[rest] = (pool[rest] - (pool[rest, c] // pe)[:, None] * piv) % q
        keep = np.ones(pool.shape[0], dtype=bool)
        keep[i] = False
        if rest.size:
            keep[rest] &= (pool[rest] != 0).any(axis=1)
        pool = pool[keep]
        out.append(piv)
    if not out:
        return np.zeros((0, n), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def row_module_basis(A, p: int, k: int, chunk: Optional[int] = None) -> np.ndarray:
    """At most ``ncols`` rows generating the same Z/p^k-module as the rows of ``A``."""
    q = p ** k
    A = _prune_rows(np.asarray(A, dtype=np.int64) % q)
    n = A.shape[1]
    chunk = chunk or max(2 * n, 64)
    basis = np.zeros((0, n), dtype=np.int64)
    for start in range(0, A.shape[0], chunk):
        basis = _echelon(np.concatenate([basis, A[start:start + chunk]]), p, k)
    return basis


def _prune_rows(A: np.ndarray) -> np.ndarray:
    if A.shape[0] == 0:
        return A
    A = A[(A != 0).any(axis=1)]
    if A.shape[0] > 1:
        A = np.unique(A, axis=0)
    return A


def factorize(m: int) -> list[tuple[int, int]]:
    out, p = [], 2
    while p * p <= m:
        if m % p == 0:
            k = 0
            while m % p == 0:
                m //= p
                k += 1
            out.append((p, k))
        p += 1
    if m > 1:
        out.append((m, 1))
    return out


def crt_idempotent(m: int, p: int, k: int) -> int:
    """The element of Z/m congruent to 1 mod p^k and 0 mod m/p^k."""
    q = p ** k
    rest = m // q
    return (rest * pow(rest, -1, q)) % m if rest > 1 else 1 % m


def combine_primary(orders_by_prime: dict[int, Sequence[int]]) -> tuple[int, ...]:
    """Invariant factors from prime-power cyclic orders."""
    lists = {p: sorted(v, reverse=True) for p, v in orders_by_prime.items()}
    length = max((len(v) for v in lists.values()), default=0)
    out = []
    for i in range(length):
        d = 1
        for v in lists.values():
            if i < len(v):
                d *= v[i]
        out.append(d)
    return tuple(sorted(d for d in out if d > 1))
