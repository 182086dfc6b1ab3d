"""Exact character tables by Dixon's modular method, and spin types.

Central characters are the common eigenvectors of the class-multiplication
matrices over F_p, p = 1 (mod e).  Character values are then recovered
exactly as eigenvalue multiplicities: for g of order o,

    chi(g) = sum_j m_j zeta^j,   m_j = (1/o) sum_l chi(g^l) zeta^(-j l),

with zeta = exp(2 pi i / e) matched to a fixed primitive e-th root of unity
in F_p.  Since 0 <= m_j <= chi(1) < p the residues determine m_j.  A value
is stored as the vector (m_0, ..., m_{e-1}).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .core.tables import GroupError, GroupTable
from .structure import (Subgroup, center, class_index, conjugacy_classes, element_orders,
                        exponent, minimal_generating_set, subgroup_table)


class CharacterTableError(RuntimeError):
    pass


# ------------------------------------------------------------ arithmetic

def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def dixon_prime(order: int, e: int, bound: int = 10 ** 6) -> int:
    """Smallest prime p = 1 (mod e) with p > 2 sqrt(order)."""
    lo = 2 * math.sqrt(order)
    p = e + 1
    while p <= lo:
        p += e
    while p < bound:
        if _is_prime(p):
            return p
        p += e
    raise CharacterTableError(f"no prime = 1 mod {e} below {bound}")


def primitive_root(p: int) -> int:
    factors = [q for q in range(2, p) if (p - 1) % q == 0 and _is_prime(q)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    return 1


def _rref_mod(M: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    A = np.array(M, dtype=np.int64) % p
    rows, cols = A.shape
    piv = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if not nz.size:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        A[r] = (A[r] * pow(int(A[r, c]), -1, p)) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        if others.size:
            A[others] = (A[others] - A[others, c][:, None] * A[r]) % p
        piv.append(c)
        r += 1
    return A[:r], piv


def nullspace_mod(M: np.ndarray, p: int) -> np.ndarray:
    """Basis (rows) of {x : M x = 0} over F_p."""
    M = np.atleast_2d(np.asarray(M, dtype=np.int64))
    n = M.shape[1]
    R, piv = _rref_mod(M, p)
    free = [c for c in range(n) if c not in piv]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(piv):
            v[c] = (-R[i, f]) % p
        basis.append(v)
    return np.array(basis, dtype=np.int64).reshape(len(basis), n)


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, lowest degree first."""
    num = np.zeros(n + 1, dtype=object)
    num[0], num[n] = -1, 1
    poly = list(num)
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_div_exact(poly, list(cyclotomic_polynomial(d)))
    return tuple(int(c) for c in poly)


def _poly_div_exact(a: list, b: list) -> list:
    a = list(a)
    db = len(b) - 1
    out = [0] * (len(a) - db)
    for i in range(len(a) - 1, db - 1, -1):
        c = a[i] // b[-1]
        out[i - db] = c
        for j in range(db + 1):
            a[i - db + j] -= c * b[j]
    if any(a[:db]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def _reduction_matrix(e: int) -> np.ndarray:
    """Row k: x^k reduced modulo Phi_e, as an integer vector of length phi(e)."""
    phi = cyclotomic_polynomial(e)
    deg = len(phi) - 1
    R = np.zeros((e, deg), dtype=np.int64)
    cur = [0] * deg
    if deg:
        cur[0] = 1
    for k in range(e):
        R[k] = cur
        # multiply by x
        top = cur[-1] if deg else 0
        cur = [0] + cur[:-1]
        for j in range(deg):
            cur[j] -= top * phi[j]
    return R


def cyclotomic_is_zero(v: np.ndarray, e: int) -> bool:
    return not (np.asarray(v, dtype=np.int64) @ _reduction_matrix(e)).any()


def cyclotomic_equal(a, b, e: int) -> bool:
    return cyclotomic_is_zero(np.asarray(a, dtype=np.int64) - np.asarray(b, dtype=np.int64), e)


def cyclic_convolution(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Product in Z[x]/(x^e - 1) along the last axis (broadcasting)."""
    e = a.shape[-1]
    idx = (np.arange(e)[:, None] - np.arange(e)[None, :]) % e
    # circ[..., k, j] = b[..., (k - j) mod e]
    circ = b[..., idx]
    return np.einsum("...j,...kj->...k", a, circ)


def conjugate(v: np.ndarray) -> np.ndarray:
    e = v.shape[-1]
    return v[..., (-np.arange(e)) % e]


def to_complex(v: Sequence[int]) -> complex:
    e = len(v)
    return sum(int(m) * cmath.exp(2j * math.pi * j / e) for j, m in enumerate(v) if m)


# ------------------------------------------------------------ the table

@dataclass
class CharacterTable:
    group: GroupTable
    classes: list[tuple[int, ...]]
    exponent: int
    prime: int
    # values[i, k, :] is chi_i on class k as multiplicities over zeta^0..zeta^(e-1)
    values: np.ndarray
    degrees: list[int]

    @property
    def class_sizes(self) -> list[int]:
        return [len(c) for c in self.classes]

    @property
    def representatives(self) -> list[int]:
        return [c[0] for c in self.classes]

    @property
    def num_characters(self) -> int:
        return len(self.degrees)

    def class_of(self, g: int) -> int:
        return int(class_index(self.group, self.classes)[g])

    def value(self, i: int, g: int) -> np.ndarray:
        """Multiplicity vector of chi_i at the element g."""
        return self.values[i, self.class_of(g)]

    def complex_values(self) -> np.ndarray:
        return np.array([[to_complex(v) for v in row] for row in self.values])

    def orthogonality_problems(self) -> list[str]:
        n = self.group.order
        e = self.exponent
        h = np.asarray(self.class_sizes, dtype=np.int64)
        X = self.values
        out = []
        if len(self.degrees) != len(self.classes):
            out.append("number of characters differs from number of classes")
        if sum(d * d for d in self.degrees) != n:
            out.append("sum of squared degrees differs from the group order")
        R = _reduction_matrix(e)
        unit = np.zeros(R.shape[1], dtype=np.int64)
        if R.shape[1]:
            unit[0] = 1
        # rows: sum_k h_k chi_i(k) conj(chi_j(k))
        Xc = conjugate(X)
        rows = cyclic_convolution(X[:, None, :, :], Xc[None, :, :, :])
        rows = np.einsum("ijke,k->ije", rows, h) @ R
        expect = np.einsum("ij,e->ije", np.eye(len(X), dtype=np.int64) * n, unit)
        if not np.array_equal(rows, expect):
            out.append("row orthogonality fails")
        # columns: sum_i chi_i(k) conj(chi_i(l)) = delta_kl n / h_k
        cols = cyclic_convolution(X[:, :, None, :], Xc[:, None, :, :]).sum(axis=0) @ R
        expect = np.einsum("kl,e->kle", np.diag(n // h), unit)
        if not np.array_equal(cols, expect):
            out.append("column orthogonality fails")
        return out

    def verify(self) -> None:
        probs = self.orthogonality_problems()
        if probs:
            raise CharacterTableError("; ".join(probs))

    def to_json(self, spin: Optional["SpinTypePartition"] = None) -> dict:
        G = self.group
        orders = element_orders(G)
        out = {"group": G.name, "order": G.order, "exponent": self.exponent,
               "prime": self.prime,
               "classes": [{"representative": G.label(c[0]), "size": len(c),
                            "element_order": int(orders[c[0]])} for c in self.classes],
               "degrees": list(self.degrees),
               "characters": self.values.tolist()}
        if spin is not None:
            out["spin_types"] = spin.to_json()
        return out


def class_multiplication(G: GroupTable, classes) -> np.ndarray:
    """a[i, j, k] = #{(x, y) in C_i x C_j : x y = g_k} for a fixed g_k in C_k."""
    r = len(classes)
    cidx = class_index(G, classes)
    T = np.asarray(G.table)
    sizes = np.array([len(c) for c in classes], dtype=np.int64)
    a = np.zeros((r, r, r), dtype=np.int64)
    cy = np.broadcast_to(cidx[None, :], (1, G.order))
    for i, C in enumerate(classes):
        prod_cls = cidx[T[np.asarray(C)]]  # |C_i| x n
        counts = np.zeros((r, r), dtype=np.int64)
        np.add.at(counts, (np.broadcast_to(cy, prod_cls.shape), prod_cls), 1)
        a[i] = counts // sizes[None, :]
    return a


def _split(space: np.ndarray, Aj: np.ndarray, p: int) -> list[np.ndarray]:
    """Split an invariant subspace (RREF rows) into eigenspaces of Aj."""
    R, piv = _rref_mod(space, p)
    d = R.shape[0]
    X = ((Aj @ R.T) % p)[piv, :]  # coordinates of Aj applied to basis vectors
    parts = []
    found = 0
    for lam in range(p):
        N = nullspace_mod((X - lam * np.eye(d, dtype=np.int64)) % p, p)
        if N.shape[0]:
            parts.append(_rref_mod((N @ R) % p, p)[0])
            found += N.shape[0]
            if found == d:
                break
    if found != d:
        raise CharacterTableError("class matrix is not diagonalisable over F_p")
    return parts


def character_table(G: GroupTable, prime: Optional[int] = None) -> CharacterTable:
    """Exact character table; orthogonality is re-verified before returning."""
    n = G.order
    classes = conjugacy_classes(G)
    r = len(classes)
    e = exponent(G)
    p = prime or dixon_prime(n, e)
    if (p - 1) % e or p <= 2 * math.sqrt(n):
        raise CharacterTableError(f"prime {p} unsuitable for order {n}, exponent {e}")
    a = class_multiplication(G, classes)
    spaces = [np.eye(r, dtype=np.int64)]
    for j in range(1, r):
        Aj = a[:, j, :] % p
        nxt = []
        for W in spaces:
            nxt.extend([W] if W.shape[0] == 1 else _split(W, Aj, p))
        spaces = nxt
        if all(W.shape[0] == 1 for W in spaces):
            break
    if len(spaces) != r or any(W.shape[0] != 1 for W in spaces):
        raise CharacterTableError("eigenspaces did not split into lines")
    sizes = [len(c) for c in classes]
    cidx = class_index(G, classes)
    inv_cls = [int(cidx[G.inv(c[0])]) for c in classes]
    T = np.asarray(G.table)
    orders = element_orders(G)
    eps = pow(primitive_root(p), (p - 1) // e, p)

    # class of g^l for each class rep and l < e
    power_cls = np.zeros((r, e), dtype=np.int64)
    for k, c in enumerate(classes):
        g, acc = c[0], G.identity
        for l in range(e):
            power_cls[k, l] = cidx[acc]
            acc = int(T[acc, g])

    chars, degrees = [], []
    for W in spaces:
        w = W[0] % p
        omega = (w * pow(int(w[0]), -1, p)) % p
        s = sum(int(omega[k]) * int(omega[inv_cls[k]]) * pow(sizes[k], -1, p) for k in range(r)) % p
        if s == 0:
            raise CharacterTableError("degenerate central character")
        target = (n * pow(s, -1, p)) % p
        deg = next((d for d in range(1, math.isqrt(n) + 1) if n % d == 0 and (d * d) % p == target), None)
        if deg is None:
            raise CharacterTableError("no degree matches the central character")
        modval = [(omega[k] * deg * pow(sizes[k], -1, p)) % p for k in range(r)]
        row = np.zeros((r, e), dtype=np.int64)
        for k in range(r):
            o = int(orders[classes[k][0]])
            step = e // o
            inv_o = pow(o, -1, p)
            for t in range(o):
                j = t * step
                acc = 0
                for l in range(o):
                    acc += int(modval[power_cls[k, l]]) * pow(eps, (-j * l) % e, p)
                m = (acc * inv_o) % p
                if m > deg:
                    raise CharacterTableError("eigenvalue multiplicity out of range")
                row[k, j] = m
        chars.append(row)
        degrees.append(deg)
    order = sorted(range(r), key=lambda i: (degrees[i], [-int(v) for v in chars[i].ravel()]))
    table = CharacterTable(G, classes, e, p, np.array([chars[i] for i in order]),
                           [degrees[i] for i in order])
    table.verify()
    return table


def irrep_degrees(G: GroupTable, table: Optional[CharacterTable] = None) -> list[int]:
    return sorted((table or character_table(G)).degrees)


# ------------------------------------------------------------ spin types

@dataclass
class SpinTypePartition:
    subgroup: Subgroup
    generators: tuple[int, ...]
    generator_orders: tuple[int, ...]
    # tau (residues r_i, tau(a_i) = exp(2 pi i r_i / o_i)) -> character indices
    types: dict[tuple[int, ...], list[int]] = field(default_factory=dict)
    degrees: list[int] = field(default_factory=list)

    def degree_square_sums(self) -> dict[tuple[int, ...], int]:
        return {tau: sum(self.degrees[i] ** 2 for i in idx) for tau, idx in self.types.items()}

    def to_json(self) -> dict:
        G = self.subgroup.parent
        return {"center_generators": [G.label(g) for g in self.generators],
                "generator_orders": list(self.generator_orders),
                "types": [{"tau": list(tau), "characters": idx,
                           "degrees": [self.degrees[i] for i in idx]}
                          for tau, idx in sorted(self.types.items())]}


def spin_types(H: GroupTable, A: Subgroup, table: Optional[CharacterTable] = None) -> SpinTypePartition:
    """Partition the irreducibles of H by their central character on A."""
    if not A.issubset(center(H)):
        raise GroupError("spin types need a central subgroup")
    table = table or character_table(H)
    sub, emb = subgroup_table(A)
    gens = tuple(int(emb[g]) for g in minimal_generating_set(sub))
    orders = tuple(H.element_order(g) for g in gens)
    e = table.exponent
    types: dict[tuple[int, ...], list[int]] = {}
    for i, d in enumerate(table.degrees):
        key = []
        for g, o in zip(gens, orders):
            v = table.value(i, g)
            nz = np.flatnonzero(v)
            if len(nz) != 1 or v[nz[0]] != d:
                raise CharacterTableError("central element does not act as a scalar")
            key.append(int(nz[0]) // (e // o))
        types.setdefault(tuple(key), []).append(i)
    return SpinTypePartition(A, gens, orders, dict(sorted(types.items())), list(table.degrees))
