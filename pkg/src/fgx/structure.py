"""Structural invariants of Cayley tables: subgroups, quotients, maps, isomorphism."""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .core.tables import GroupError, GroupTable, lcm_all


@dataclass(frozen=True, eq=False)
class Subgroup:
    parent: GroupTable
    elements: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return int(g) in self.as_set()

    def __iter__(self):
        return iter(self.elements)

    def __eq__(self, other) -> bool:
        if isinstance(other, Subgroup):
            return self.parent is other.parent and self.elements == other.elements
        return NotImplemented

    def __hash__(self):
        return hash((id(self.parent), self.elements))

    def __repr__(self) -> str:
        return f"<Subgroup of order {self.order} in {self.parent!r}>"

    def as_set(self) -> frozenset:
        return frozenset(self.elements)

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    def issubset(self, other: "Subgroup") -> bool:
        return self.as_set() <= other.as_set()

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.parent, tuple(sorted(self.as_set() & other.as_set())))

    def labels(self) -> list[str]:
        return [self.parent.label(g) for g in self.elements]


def _subgroup(G: GroupTable, mask: np.ndarray) -> Subgroup:
    return Subgroup(G, tuple(int(v) for v in np.nonzero(mask)[0]))


def trivial_subgroup(G: GroupTable) -> Subgroup:
    return Subgroup(G, (G.identity,))


def whole_group(G: GroupTable) -> Subgroup:
    return Subgroup(G, tuple(range(G.order)))


def commutator(G: GroupTable, x: int, y: int) -> int:
    """[x, y] = x y x^-1 y^-1."""
    T = G.table
    return int(T[T[x, y], T[G.inverses[x], G.inverses[y]]])


def commutator_table(G: GroupTable) -> np.ndarray:
    T = np.asarray(G.table)
    inv = np.asarray(G.inverses)
    return T[T, T[inv[:, None], inv[None, :]]]


def subgroup_generated(G: GroupTable, gens: Iterable[int]) -> Subgroup:
    gens = np.unique(np.asarray([int(g) for g in gens], dtype=np.int64))
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    if gens.size == 0:
        return _subgroup(G, mask)
    T = np.asarray(G.table)
    frontier = np.array([G.identity])
    while frontier.size:
        new = np.unique(T[frontier[:, None], gens[None, :]].ravel())
        new = new[~mask[new]]
        mask[new] = True
        frontier = new
    return _subgroup(G, mask)


def center(G: GroupTable) -> Subgroup:
    T = np.asarray(G.table)
    return _subgroup(G, np.all(T == T.T, axis=1))


def derived_subgroup(G: GroupTable) -> Subgroup:
    comms = np.unique(commutator_table(G))
    return subgroup_generated(G, comms)


def element_orders(G: GroupTable) -> np.ndarray:
    T = np.asarray(G.table)
    n = G.order
    idx = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    cur = idx.copy()
    k = 1
    while True:
        hit = (cur == G.identity) & (orders == 0)
        orders[hit] = k
        if orders.all():
            return orders
        cur = T[cur, idx]
        k += 1


def order_histogram(G: GroupTable) -> dict[int, int]:
    return dict(sorted(Counter(element_orders(G).tolist()).items()))


def exponent(G: GroupTable) -> int:
    return lcm_all(element_orders(G))


def power_table(G: GroupTable, upto: int) -> np.ndarray:
    """``P[g, k] = g^k`` for ``0 <= k <= upto``."""
    T = np.asarray(G.table)
    n = G.order
    P = np.empty((n, upto + 1), dtype=np.int64)
    P[:, 0] = G.identity
    for k in range(1, upto + 1):
        P[:, k] = T[P[:, k - 1], np.arange(n)]
    return P


def conjugacy_classes(G: GroupTable) -> list[tuple[int, ...]]:
    """Classes sorted by smallest member, the identity class first."""
    T = np.asarray(G.table)
    inv = np.asarray(G.inverses)
    n = G.order
    seen = np.zeros(n, dtype=bool)
    classes = []
    for x in range(n):
        if seen[x]:
            continue
        orbit = np.unique(T[T[:, x], inv])
        seen[orbit] = True
        classes.append(tuple(int(v) for v in orbit))
    classes.sort(key=lambda c: (G.identity not in c, c[0]))
    return classes


def class_index(G: GroupTable, classes=None) -> np.ndarray:
    classes = classes if classes is not None else conjugacy_classes(G)
    out = np.empty(G.order, dtype=np.int64)
    for i, c in enumerate(classes):
        out[list(c)] = i
    return out


def is_normal(G: GroupTable, N: Subgroup) -> bool:
    T = np.asarray(G.table)
    inv = np.asarray(G.inverses)
    els = np.asarray(N.elements)
    conj = T[T[:, els], inv[:, None]]
    return bool(N.mask()[conj].all())


def is_subgroup(G: GroupTable, elements: Iterable[int]) -> bool:
    els = np.asarray(sorted(set(int(e) for e in elements)))
    if els.size == 0 or G.identity not in els:
        return False
    T = np.asarray(G.table)
    mask = np.zeros(G.order, dtype=bool)
    mask[els] = True
    return bool(mask[T[els[:, None], els[None, :]]].all() and mask[np.asarray(G.inverses)[els]].all())


@dataclass(frozen=True, eq=False)
class Homomorphism:
    source: GroupTable
    target: GroupTable
    images: np.ndarray
    name: str = ""

    def __call__(self, g: int) -> int:
        return int(self.images[g])

    def verify(self) -> bool:
        return verify_homomorphism(self)

    def kernel(self) -> Subgroup:
        return kernel(self)

    def image(self) -> Subgroup:
        return image(self)

    def is_bijective(self) -> bool:
        return (self.source.order == self.target.order
                and len(set(np.asarray(self.images).tolist())) == self.source.order)

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """``self o other`` (apply ``other`` first)."""
        if other.target is not self.source and other.target.order != self.source.order:
            raise GroupError("maps are not composable")
        return Homomorphism(other.source, self.target,
                            np.asarray(self.images)[np.asarray(other.images)])

    @classmethod
    def from_generators(cls, source: GroupTable, target: GroupTable,
                        gen_images: dict[int, int], name: str = "") -> "Homomorphism":
        """Extend an assignment on generators; raises if it is not a homomorphism."""
        gens = list(gen_images)
        images = np.full(source.order, -1, dtype=np.int64)
        images[source.identity] = target.identity
        frontier = [source.identity]
        TS, TT = source.table, target.table
        while frontier:
            nxt = []
            for g in frontier:
                for s in gens:
                    h = int(TS[g, s])
                    if images[h] < 0:
                        images[h] = TT[images[g], gen_images[s]]
                        nxt.append(h)
            frontier = nxt
        if (images < 0).any():
            raise GroupError("given elements do not generate the source group")
        hom = cls(source, target, images, name)
        if not hom.verify():
            raise GroupError("generator assignment does not extend to a homomorphism")
        return hom


def verify_homomorphism(h: Homomorphism) -> bool:
    """Multiplicativity over all pairs of source elements."""
    im = np.asarray(h.images, dtype=np.int64)
    if im.shape != (h.source.order,) or im.min() < 0 or im.max() >= h.target.order:
        return False
    A = np.asarray(h.source.table)
    B = np.asarray(h.target.table)
    return bool(np.array_equal(im[A], B[im[:, None], im[None, :]]))


def kernel(h: Homomorphism) -> Subgroup:
    return _subgroup(h.source, np.asarray(h.images) == h.target.identity)


def image(h: Homomorphism) -> Subgroup:
    mask = np.zeros(h.target.order, dtype=bool)
    mask[np.asarray(h.images)] = True
    return _subgroup(h.target, mask)


def identity_map(G: GroupTable) -> Homomorphism:
    return Homomorphism(G, G, np.arange(G.order))


def quotient(G: GroupTable, N: Subgroup) -> tuple[GroupTable, Homomorphism]:
    """G/N with cosets numbered by their smallest element; returns (G/N, projection)."""
    if N.parent is not G and N.parent.order != G.order:
        raise GroupError("subgroup belongs to another group")
    if not is_subgroup(G, N.elements):
        raise GroupError("not a subgroup")
    if not is_normal(G, N):
        raise GroupError("subgroup is not normal")
    T = np.asarray(G.table)
    els = np.asarray(N.elements)
    reps_of = T[:, els].min(axis=1)
    reps = np.unique(reps_of)
    # identity coset first
    id_rep = reps_of[G.identity]
    reps = np.concatenate([[id_rep], reps[reps != id_rep]])
    pos = np.full(G.order, -1, dtype=np.int64)
    pos[reps] = np.arange(len(reps))
    proj = pos[reps_of]
    Q = proj[T[reps[:, None], reps[None, :]]]
    labels = [G.label(int(r)) for r in reps]
    Qt = GroupTable.from_array(Q, labels, name=f"{G.name}/N" if G.name else "")
    hom = Homomorphism(G, Qt, proj, "projection")
    if not verify_homomorphism(hom):
        raise GroupError("projection is not a homomorphism (internal error)")
    return Qt, hom


def subgroup_table(S: Subgroup) -> tuple[GroupTable, np.ndarray]:
    """The subgroup as a standalone table, plus the embedding into the parent."""
    els = np.asarray(S.elements)
    pos = np.full(S.parent.order, -1, dtype=np.int64)
    pos[els] = np.arange(len(els))
    T = np.asarray(S.parent.table)
    sub = pos[T[els[:, None], els[None, :]]]
    if (sub < 0).any():
        raise GroupError("element set is not closed under the product")
    return GroupTable.from_array(sub, [S.parent.label(int(g)) for g in els]), els


def _prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def invariants_from_orders(orders: Sequence[int]) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group from its element orders.

    Uses |A[p^k]| = p^(sum_i min(k, lambda_i)) for each prime p.
    """
    orders = np.asarray(orders)
    n = len(orders)
    parts = {}
    for p in _prime_factors(n):
        a = 0
        while n % p ** (a + 1) == 0:
            a += 1
        logs = [0]
        for k in range(1, a + 1):
            c = int(np.count_nonzero((p ** k) % orders == 0))
            e = 0
            while c % p == 0 and c > 1:
                c //= p
                e += 1
            logs.append(e)
        # r[k] = #{i : lambda_i >= k}
        r = [logs[k] - logs[k - 1] for k in range(1, a + 1)] + [0]
        lam = []
        for k in range(a):
            lam += [k + 1] * (r[k] - r[k + 1])
        parts[p] = sorted(lam, reverse=True)
    length = max((len(v) for v in parts.values()), default=0)
    factors = []
    for i in range(length):
        d = 1
        for p, lam in parts.items():
            if i < len(lam):
                d *= p ** lam[i]
        factors.append(d)
    return tuple(sorted(f for f in factors if f > 1))


def abelian_invariants(A: Union[GroupTable, Subgroup]) -> tuple[int, ...]:
    """Invariant factors d1 | d2 | ... of an abelian group (or subgroup)."""
    if isinstance(A, Subgroup):
        G = A.parent
        els = np.asarray(A.elements)
    else:
        G = A
        els = np.arange(G.order)
    T = np.asarray(G.table)
    block = T[els[:, None], els[None, :]]
    if not np.array_equal(block, block.T):
        raise GroupError("abelian_invariants needs an abelian group")
    orders = element_orders(G)[els]
    return invariants_from_orders(orders)


def abelianization(G: GroupTable) -> tuple[int, ...]:
    Q, _ = quotient(G, derived_subgroup(G))
    return abelian_invariants(Q)


def _cyclic_reps(G: GroupTable, orders: np.ndarray) -> list[int]:
    """One generator per cyclic subgroup (the smallest index among its generators)."""
    e = int(orders.max())
    P = power_table(G, e)
    reps = []
    for x in range(G.order):
        if x == G.identity:
            continue
        o = int(orders[x])
        gens = [int(P[x, k]) for k in range(1, o) if math.gcd(k, o) == 1]
        if x == min(gens):
            reps.append(x)
    return reps


def minimal_generating_set(G: GroupTable, prefer: Optional[Sequence[int]] = None,
                           max_size: int = 4) -> tuple[int, ...]:
    """A generating set of the smallest possible size (searched up to ``max_size``).

    Subsets are scanned in lexicographic order of ``prefer`` (default: by
    element order descending, then index); beyond ``max_size`` a greedy set
    is returned.
    """
    if G.order == 1:
        return ()
    orders = element_orders(G)
    cands = _cyclic_reps(G, orders)
    if prefer is not None:
        rank = {g: i for i, g in enumerate(prefer)}
        cands.sort(key=lambda g: rank.get(g, len(rank) + g))
    else:
        cands.sort(key=lambda g: (-int(orders[g]), g))
    n = G.order
    T = np.asarray(G.table)
    # |<S>| <= prod of orders only holds when the group is abelian
    abelian = bool(np.array_equal(T, T.T))
    for k in range(1, max_size + 1):
        for combo in itertools.combinations(cands, k):
            if abelian and math.prod(int(orders[g]) for g in combo) < n:
                continue
            if subgroup_generated(G, combo).order == n:
                return combo
    gens: list[int] = []
    H = trivial_subgroup(G)
    for g in cands:
        if g not in H:
            gens.append(g)
            H = subgroup_generated(G, gens)
            if H.order == n:
                break
    return tuple(gens)


@dataclass
class Fingerprint:
    order: int
    center_order: int
    derived_order: int
    abelianization: tuple[int, ...]
    class_count: int
    order_histogram: dict[int, int]
    irrep_degrees: Optional[tuple[int, ...]] = None

    def key(self):
        return (self.order, self.center_order, self.derived_order, self.abelianization,
                self.class_count, tuple(sorted(self.order_histogram.items())))

    def as_dict(self) -> dict:
        out = {"order": self.order, "center_order": self.center_order,
               "derived_order": self.derived_order,
               "abelianization": list(self.abelianization),
               "class_count": self.class_count,
               "order_histogram": {str(k): v for k, v in self.order_histogram.items()}}
        if self.irrep_degrees is not None:
            out["irrep_degrees"] = list(self.irrep_degrees)
        return out


def fingerprint(G: GroupTable) -> Fingerprint:
    D = derived_subgroup(G)
    Q, _ = quotient(G, D)
    return Fingerprint(G.order, center(G).order, D.order, abelian_invariants(Q),
                       len(conjugacy_classes(G)), order_histogram(G))


def analysis_report(G: GroupTable) -> dict:
    return fingerprint(G).as_dict()


def element_signatures(G: GroupTable) -> list[tuple]:
    """Isomorphism-invariant data per element."""
    orders = element_orders(G)
    classes = conjugacy_classes(G)
    csize = np.empty(G.order, dtype=np.int64)
    for c in classes:
        csize[list(c)] = len(c)
    Z = center(G).mask()
    D = derived_subgroup(G).mask()
    T = np.asarray(G.table)
    idx = np.arange(G.order)
    sq = T[idx, idx]
    cube = T[sq, idx]
    r2 = np.bincount(sq, minlength=G.order)
    r3 = np.bincount(cube, minlength=G.order)
    return [(int(orders[g]), int(csize[g]), bool(Z[g]), bool(D[g]), int(r2[g]), int(r3[g]))
            for g in range(G.order)]


def _bfs_levels(G: GroupTable, gens: Sequence[int]):
    """BFS of <gens> from the identity; levels of (children, parents, generator slot)."""
    seen = {G.identity}
    frontier = [G.identity]
    levels = []
    while frontier:
        ch, pa, sl = [], [], []
        for g in frontier:
            for i, s in enumerate(gens):
                h = int(G.table[g, s])
                if h not in seen:
                    seen.add(h)
                    ch.append(h)
                    pa.append(g)
                    sl.append(i)
        if ch:
            levels.append((np.array(ch), np.array(pa), np.array(sl)))
        frontier = ch
    return levels, np.array(sorted(seen))


def is_isomorphic(G1: GroupTable, G2: GroupTable) -> Optional[Homomorphism]:
    """An isomorphism G1 -> G2, or None if the groups are not isomorphic.

    Fingerprints and per-element signatures prune; a small generating set
    of G1 is chosen among elements with rare signatures, and images are
    assigned by backtracking with a consistency check on each generated
    prefix subgroup.
    """
    if G1.order != G2.order:
        return None
    n = G1.order
    if n == 1:
        return Homomorphism(G1, G2, np.array([G2.identity]))
    if fingerprint(G1).key() != fingerprint(G2).key():
        return None
    sig1 = element_signatures(G1)
    sig2 = element_signatures(G2)
    if Counter(sig1) != Counter(sig2):
        return None
    by_sig: dict[tuple, list[int]] = {}
    for g, s in enumerate(sig2):
        by_sig.setdefault(s, []).append(g)
    prefer = sorted(range(n), key=lambda g: (len(by_sig[sig1[g]]), g))
    gens = minimal_generating_set(G1, prefer=prefer)
    k = len(gens)
    T1 = np.asarray(G1.table)
    T2 = np.asarray(G2.table)
    prefixes = [_bfs_levels(G1, gens[: i + 1]) for i in range(k)]
    candidates = [by_sig[sig1[g]] for g in gens]
    phi = np.full(n, -1, dtype=np.int64)

    def consistent(i: int, t: list[int]) -> bool:
        levels, members = prefixes[i]
        phi.fill(-1)
        phi[G1.identity] = G2.identity
        tarr = np.asarray(t)
        for ch, pa, sl in levels:
            phi[ch] = T2[phi[pa], tarr[sl]]
        img = phi[members]
        if len(np.unique(img)) != len(members):
            return False
        for j in range(i + 1):
            if not np.array_equal(phi[T1[members, gens[j]]], T2[img, t[j]]):
                return False
        return True

    def search(i: int, t: list[int]) -> bool:
        if i == k:
            return True
        for c in candidates[i]:
            t.append(c)
            if consistent(i, t) and search(i + 1, t):
                return True
            t.pop()
        return False

    t: list[int] = []
    if not search(0, t):
        return None
    consistent(k - 1, t)
    hom = Homomorphism(G1, G2, phi.copy(), "isomorphism")
    if not (hom.is_bijective() and verify_homomorphism(hom)):
        raise GroupError("isomorphism search produced an invalid map (internal error)")
    return hom


def isomorphism_classes(groups: Sequence[GroupTable]) -> list[list[int]]:
    """Partition indices of ``groups`` into isomorphism classes."""
    classes: list[list[int]] = []
    keys: list = []
    for i, G in enumerate(groups):
        fk = fingerprint(G).key()
        for cls, key in zip(classes, keys):
            if key == fk and is_isomorphic(groups[cls[0]], G) is not None:
                cls.append(i)
                break
        else:
            classes.append([i])
            keys.append(fk)
    return classes
