"""Todd-Coxeter coset enumeration over the trivial subgroup.

HLT strategy: every live coset is scanned under every relator (filling
gaps by new definitions), then its row is completed.  Coincidences are
processed with a union-find queue.  The result is the regular
representation, from which the full Cayley table is read off.
"""
from __future__ import annotations

import os
from collections import deque
from typing import Optional

import numpy as np

from .presentation import Presentation, letters
from .tables import GroupTable

DEFAULT_MAX_COSETS = 200_000


class CosetLimitExceeded(RuntimeError):
    pass


def default_max_cosets() -> int:
    env = os.environ.get("FGX_MAX_COSETS")
    return int(env) if env else DEFAULT_MAX_COSETS


class _Enumeration:
    def __init__(self, ngens: int, relators: list[list[int]], max_cosets: int):
        self.ncols = 2 * ngens
        self.relators = relators
        self.max_cosets = max_cosets
        self.table: list[list[int]] = [[-1] * self.ncols]
        self.p = [0]
        self.live = 1
        self.queue: list[int] = []

    def inv(self, x: int) -> int:
        return x ^ 1

    def define(self, a: int, x: int) -> None:
        if self.live >= self.max_cosets:
            raise CosetLimitExceeded(
                f"coset limit {self.max_cosets} exceeded; the presentation may define "
                "an infinite or larger group (raise --max-cosets / FGX_MAX_COSETS)")
        b = len(self.table)
        self.table.append([-1] * self.ncols)
        self.p.append(b)
        self.live += 1
        self.table[a][x] = b
        self.table[b][x ^ 1] = a

    def rep(self, k: int) -> int:
        p = self.p
        root = k
        while p[root] != root:
            root = p[root]
        while p[k] != root:
            p[k], k = root, p[k]
        return root

    def merge(self, k: int, l: int) -> None:
        a, b = self.rep(k), self.rep(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            self.p[hi] = lo
            self.live -= 1
            self.queue.append(hi)

    def coincidence(self, a: int, b: int) -> None:
        self.queue = []
        self.merge(a, b)
        table = self.table
        i = 0
        while i < len(self.queue):
            g = self.queue[i]
            i += 1
            row = table[g]
            for x in range(self.ncols):
                d = row[x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = self.rep(g), self.rep(d)
                if table[mu][x] >= 0:
                    self.merge(nu, table[mu][x])
                elif table[nu][x ^ 1] >= 0:
                    self.merge(mu, table[nu][x ^ 1])
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def scan_and_fill(self, a: int, w: list[int]) -> None:
        table = self.table
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            self.define(f, w[i])

    def run(self) -> None:
        a = 0
        while a < len(self.table):
            if self.p[a] == a:
                for w in self.relators:
                    self.scan_and_fill(a, w)
                    if self.p[a] != a:
                        break
                if self.p[a] == a:
                    for x in range(self.ncols):
                        if self.table[a][x] < 0:
                            self.define(a, x)
            a += 1


def todd_coxeter(pres: Presentation, max_cosets: Optional[int] = None) -> GroupTable:
    """Enumerate cosets of the trivial subgroup and return the Cayley table.

    Elements are numbered in breadth-first (shortlex) order over the positive
    generators; labels are the corresponding words.  The table's ``named``
    map sends each generator name to its element.
    """
    if max_cosets is None:
        max_cosets = default_max_cosets()
    k = len(pres.generators)
    rels = []
    for w in pres.expanded_relators():
        rels.append([2 * g + (0 if s > 0 else 1) for g, s in letters(w)])
    en = _Enumeration(k, rels, max_cosets)
    en.run()

    live = [c for c in range(len(en.table)) if en.p[c] == c]
    rank = {c: i for i, c in enumerate(live)}
    act = np.array([[rank[en.rep(en.table[c][2 * g])] for c in live] for g in range(k)],
                   dtype=np.int64) if k else np.zeros((0, len(live)), dtype=np.int64)
    n = len(live)

    # standardise by BFS from the trivial coset
    order = [rank[en.rep(0)]]
    parent = {order[0]: (-1, -1)}
    dq = deque(order)
    while dq:
        c = dq.popleft()
        for g in range(k):
            d = int(act[g, c])
            if d not in parent:
                parent[d] = (c, g)
                order.append(d)
                dq.append(d)
    if len(order) != n:
        raise RuntimeError("coset table is not connected (internal error)")
    new = {c: i for i, c in enumerate(order)}
    act = np.array([[new[int(act[g, order_c])] for order_c in order] for g in range(k)],
                   dtype=np.int64).reshape(k, n)
    par = [(-1, -1)] + [(new[parent[c][0]], parent[c][1]) for c in order[1:]]

    T = np.empty((n, n), dtype=np.int64)
    T[:, 0] = np.arange(n)
    words = [""]
    names = pres.generators
    for j in range(1, n):
        pj, g = par[j]
        T[:, j] = act[g][T[:, pj]]
        words.append(f"{words[pj]}*{names[g]}" if words[pj] else names[g])
    labels = [w or "1" for w in words]
    named = {names[g]: int(act[g, 0]) for g in range(k)}
    return GroupTable.from_array(T, labels, name=pres.name, named=named)


def evaluate_word(G: GroupTable, word, generator_elements) -> int:
    """Evaluate a word given as (generator index, exponent) pairs."""
    acc = G.identity
    for g, e in word:
        acc = int(G.table[acc, G.power(generator_elements[g], e)])
    return acc
