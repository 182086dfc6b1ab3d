"""Finite groups stored as exact Cayley tables.

Every group in the package ends up as a :class:`GroupTable`: an ``n x n``
integer array with ``table[i, j]`` the index of ``g_i * g_j``.  Tables are
immutable once built (the array is flagged read-only).
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np


class GroupError(ValueError):
    """Raised when data does not describe a group (or a valid construction)."""


def _index_dtype(n: int):
    return np.int16 if n < 2**15 else np.int32


@dataclass(frozen=True, eq=False)
class GroupTable:
    table: np.ndarray
    identity: int
    inverses: np.ndarray
    labels: Optional[tuple[str, ...]] = None
    name: str = ""
    # named elements (e.g. generators of a presentation) -> element index
    named: dict = field(default_factory=dict)

    @property
    def order(self) -> int:
        return int(self.table.shape[0])

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<GroupTable{tag} order={self.order}>"

    @classmethod
    def from_array(cls, table, labels: Optional[Sequence[str]] = None,
                   name: str = "", named: Optional[dict] = None) -> "GroupTable":
        """Build from a raw square array, locating identity and inverses.

        Raises :class:`GroupError` if no two-sided identity exists or some
        element lacks an inverse.  Associativity is *not* checked here; use
        :func:`verify_axioms`.
        """
        arr = np.asarray(table)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise GroupError("Cayley table must be a non-empty square array")
        n = arr.shape[0]
        if arr.min() < 0 or arr.max() >= n:
            raise GroupError("Cayley table entries out of range")
        arr = arr.astype(_index_dtype(n), copy=True)
        idx = np.arange(n)
        ident = None
        for e in range(n):
            if np.array_equal(arr[e], idx) and np.array_equal(arr[:, e], idx):
                ident = e
                break
        if ident is None:
            raise GroupError("no two-sided identity element")
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(arr == ident)
        inv[rows] = cols
        if (inv < 0).any():
            raise GroupError("some element has no right inverse")
        arr.setflags(write=False)
        inv = inv.astype(arr.dtype)
        inv.setflags(write=False)
        if labels is not None:
            labels = tuple(str(s) for s in labels)
            if len(labels) != n:
                raise GroupError("labels length does not match order")
        return cls(arr, int(ident), inv, labels, name, dict(named or {}))

    @classmethod
    def from_multiplication(cls, n: int, mul: Callable[[int, int], int],
                            labels=None, name: str = "", named=None) -> "GroupTable":
        arr = np.empty((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                arr[i, j] = mul(i, j)
        return cls.from_array(arr, labels, name, named)

    # element-level helpers
    def mul(self, *elements: int) -> int:
        acc = self.identity
        for g in elements:
            acc = int(self.table[acc, g])
        return acc

    def inv(self, g: int) -> int:
        return int(self.inverses[g])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inv(g), -k
        acc, base = self.identity, int(g)
        while k:
            if k & 1:
                acc = int(self.table[acc, base])
            base = int(self.table[base, base])
            k >>= 1
        return acc

    def element_order(self, g: int) -> int:
        k, acc = 1, int(g)
        while acc != self.identity:
            acc = int(self.table[acc, g])
            k += 1
        return k

    def label(self, g: int) -> str:
        return self.labels[g] if self.labels else str(g)

    def __getitem__(self, name: str) -> int:
        return self.named[name]

    def renamed(self, name: str) -> "GroupTable":
        return GroupTable(self.table, self.identity, self.inverses, self.labels,
                          name, dict(self.named))


@dataclass
class AxiomReport:
    identity: bool
    inverses: bool
    latin: bool
    associativity: bool
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.identity and self.inverses and self.latin and self.associativity

    def as_dict(self) -> dict:
        return {"identity": self.identity, "inverses": self.inverses,
                "latin": self.latin, "associativity": self.associativity,
                "ok": self.ok, "failures": list(self.failures)}


def verify_axioms(G: GroupTable) -> AxiomReport:
    """Check identity, inverses, Latin-square property and full associativity.

    Associativity is swept over every triple; the loop runs over the first
    factor with the remaining ``n x n`` block vectorised.
    """
    T = np.asarray(G.table)
    n = T.shape[0]
    failures = []
    idx = np.arange(n)
    ident_ok = bool(np.array_equal(T[G.identity], idx) and np.array_equal(T[:, G.identity], idx))
    if not ident_ok:
        failures.append(f"identity {G.identity} is not two-sided")
    inv = np.asarray(G.inverses)
    inv_ok = bool(np.all(T[idx, inv] == G.identity) and np.all(T[inv, idx] == G.identity))
    if not inv_ok:
        bad = int(np.nonzero((T[idx, inv] != G.identity) | (T[inv, idx] != G.identity))[0][0])
        failures.append(f"inverse table wrong at element {bad}")
    rows_ok = bool(np.all(np.sort(T, axis=1) == idx))
    cols_ok = bool(np.all(np.sort(T, axis=0) == idx[:, None]))
    latin = rows_ok and cols_ok
    if not latin:
        failures.append("a row or column is not a permutation")
    assoc = True
    for i in range(n):
        # (g_i g_j) g_k  vs  g_i (g_j g_k)
        left = T[T[i]]
        right = T[i][T]
        if not np.array_equal(left, right):
            j, k = (int(v[0]) for v in np.nonzero(left != right))
            failures.append(f"associativity fails at ({i},{j},{k})")
            assoc = False
            break
    return AxiomReport(ident_ok, inv_ok, latin, assoc, failures)


# ---------------------------------------------------------------- references

def cyclic_group(n: int) -> GroupTable:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    idx = np.arange(n)
    return GroupTable.from_array((idx[:, None] + idx[None, :]) % n,
                                 labels=[str(k) for k in range(n)], name=f"C{n}")


def abelian_group(invariants: Sequence[int]) -> GroupTable:
    G = cyclic_group(1)
    for d in invariants:
        G = direct_product(G, cyclic_group(d))
    return G.renamed("x".join(f"C{d}" for d in invariants) or "C1")


def symmetric_group(n: int) -> GroupTable:
    """S_n on points 0..n-1, elements in lexicographic order of images.

    Products compose right-to-left as functions: ``(p*q)(i) = p(q(i))``.
    """
    perms = list(itertools.permutations(range(n)))
    index = {p: i for i, p in enumerate(perms)}
    m = len(perms)
    arr = np.empty((m, m), dtype=np.int64)
    for i, p in enumerate(perms):
        for j, q in enumerate(perms):
            arr[i, j] = index[tuple(p[q[k]] for k in range(n))]
    named = {}
    for k in range(n - 1):
        s = list(range(n))
        s[k], s[k + 1] = s[k + 1], s[k]
        named[f"s{k + 1}"] = index[tuple(s)]
    labels = ["".join(str(v) for v in p) for p in perms]
    return GroupTable.from_array(arr, labels, name=f"S{n}", named=named)


def heisenberg_group(p: int = 3) -> GroupTable:
    """Upper unitriangular 3x3 matrices over F_p (extraspecial of order p^3)."""
    elems = [(a, b, c) for a in range(p) for b in range(p) for c in range(p)]
    index = {e: i for i, e in enumerate(elems)}

    def mul(i, j):
        a, b, c = elems[i]
        x, y, z = elems[j]
        # [[1,a,c],[0,1,b],[0,0,1]] @ [[1,x,z],[0,1,y],[0,0,1]]
        return index[((a + x) % p, (b + y) % p, (c + z + a * y) % p)]

    return GroupTable.from_multiplication(
        len(elems), mul, labels=[f"[{a},{b},{c}]" for a, b, c in elems],
        name=f"Heis({p})")


def direct_product(G1: GroupTable, G2: GroupTable) -> GroupTable:
    """Pairs (g1, g2) indexed ``g1 * |G2| + g2``."""
    n1, n2 = G1.order, G2.order
    T1 = np.asarray(G1.table, dtype=np.int64)
    T2 = np.asarray(G2.table, dtype=np.int64)
    arr = (T1[:, None, :, None] * n2 + T2[None, :, None, :]).reshape(n1 * n2, n1 * n2)
    labels = [f"({G1.label(a)},{G2.label(b)})" for a in range(n1) for b in range(n2)]
    name = f"{G1.name or 'G'}x{G2.name or 'H'}"
    return GroupTable.from_array(arr, labels, name=name)


@dataclass
class ActionSpec:
    """Left action of ``acting`` on ``acted`` by automorphisms.

    ``images[h, g]`` is the image of ``g`` under the automorphism attached to
    ``h``.
    """

    acting: GroupTable
    acted: GroupTable
    images: np.ndarray

    @classmethod
    def from_function(cls, acting: GroupTable, acted: GroupTable,
                      action: Callable[[int, int], int]) -> "ActionSpec":
        arr = np.array([[action(h, g) for g in range(acted.order)]
                        for h in range(acting.order)], dtype=np.int64)
        return cls(acting, acted, arr)

    @classmethod
    def from_generators(cls, acting: GroupTable, acted: GroupTable,
                        gen_images: dict[int, np.ndarray]) -> "ActionSpec":
        """Extend automorphisms given on generators of ``acting`` to all of it."""
        n = acted.order
        images = {acting.identity: np.arange(n)}
        frontier = [acting.identity]
        while frontier:
            nxt = []
            for h in frontier:
                for s, auto in gen_images.items():
                    hs = int(acting.table[h, s])
                    if hs not in images:
                        # phi(h s) = phi(h) o phi(s)
                        images[hs] = images[h][np.asarray(auto)]
                        nxt.append(hs)
            frontier = nxt
        if len(images) != acting.order:
            raise GroupError("action generators do not generate the acting group")
        arr = np.stack([images[h] for h in range(acting.order)])
        return cls(acting, acted, arr)

    def problems(self) -> list[str]:
        A = np.asarray(self.images)
        H, N = self.acting, self.acted
        TN = np.asarray(N.table)
        out = []
        n = N.order
        if not np.array_equal(A[H.identity], np.arange(n)):
            out.append("identity does not act trivially")
        for h in range(H.order):
            a = A[h]
            if len(set(a.tolist())) != n:
                out.append(f"action of {h} is not a bijection")
                break
            if not np.array_equal(a[TN], TN[a[:, None], a[None, :]]):
                out.append(f"action of {h} is not a homomorphism")
                break
        TH = np.asarray(H.table)
        # action(h1 h2, g) == action(h1, action(h2, g)), indexed [h1, h2, g]
        lhs = A[TH]
        rhs = A[np.arange(H.order)[:, None, None], A[None, :, :]]
        if not np.array_equal(lhs, rhs):
            out.append("action is not compatible with the product of the acting group")
        return out


def semidirect_product(N: GroupTable, H: GroupTable, action: ActionSpec) -> GroupTable:
    """N x| H with (n1,h1)(n2,h2) = (n1 * a(h1,n2), h1 h2); index ``n*|H| + h``."""
    if action.acting is not H or action.acted is not N:
        if action.acting.order != H.order or action.acted.order != N.order:
            raise GroupError("action does not match the given groups")
    probs = action.problems()
    if probs:
        raise GroupError("invalid action: " + "; ".join(probs))
    nN, nH = N.order, H.order
    TN = np.asarray(N.table, dtype=np.int64)
    TH = np.asarray(H.table, dtype=np.int64)
    A = np.asarray(action.images, dtype=np.int64)
    n1 = np.arange(nN)[:, None, None, None]
    h1 = np.arange(nH)[None, :, None, None]
    n2 = np.arange(nN)[None, None, :, None]
    h2 = np.arange(nH)[None, None, None, :]
    new_n = TN[n1, A[h1, n2]]
    new_h = TH[h1, h2]
    arr = (new_n * nH + new_h).reshape(nN * nH, nN * nH)
    labels = [f"({N.label(a)};{H.label(b)})" for a in range(nN) for b in range(nH)]
    return GroupTable.from_array(arr, labels, name=f"{N.name or 'N'}:{H.name or 'H'}")


def lcm_all(values) -> int:
    out = 1
    for v in values:
        out = math.lcm(out, int(v))
    return out
