"""Second cohomology with trivial cyclic coefficients and the Schur multiplier.

A normalized 2-cocycle f is determined by its values v(u, s) = f(u, s) for
u != 1 and s in a fixed generating set S: walking a spanning tree of the
Cayley graph, the cocycle identity with z = s gives

    f(x, w s) = f(x, w) + f(x w, s) - f(w, s).

Conversely the values v define a cocycle exactly when these extensions
satisfy the identity for every x, y and every z = s in S (the general case
follows by induction on word length).  So Z^2 is the kernel of an integer
matrix in the v-variables, solved one prime power at a time over Z/p^k.
"""
from __future__ import annotations

import itertools
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Sequence, Union

import numpy as np

from .core.tables import GroupError, GroupTable, lcm_all
from .linalg import LocalSmith, crt_idempotent, factorize, local_smith
from .structure import (Homomorphism, Subgroup, abelianization, minimal_generating_set)

DEFAULT_SIZE_CAP = 100


class CohomologyCapError(ValueError):
    """Group too large for the cocycle solver without an explicit override."""


class CocycleError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class CocycleTable:
    """Normalized 2-cocycle G x G -> Z_m as an n x n array."""
    modulus: int
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.int64) % self.modulus
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def order(self) -> int:
        return int(self.values.shape[0])

    def __add__(self, other: "CocycleTable") -> "CocycleTable":
        if other.modulus != self.modulus:
            raise CocycleError("moduli differ")
        return CocycleTable(self.modulus, self.values + other.values)

    def scaled(self, c: int) -> "CocycleTable":
        return CocycleTable(self.modulus, self.values * c)

    def problems(self, G: GroupTable) -> list[str]:
        return cocycle_problems(G, self.values, self.modulus)

    def is_cocycle(self, G: GroupTable) -> bool:
        return not self.problems(G)

    def to_json(self) -> dict:
        return {"modulus": self.modulus, "values": self.values.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "CocycleTable":
        return cls(int(data["modulus"]), np.asarray(data["values"], dtype=np.int64))


def cocycle_problems(G: GroupTable, f: np.ndarray, m: int) -> list[str]:
    """Empty list iff ``f`` is a normalized cocycle mod m (all |G|^3 triples)."""
    f = np.asarray(f, dtype=np.int64)
    n = G.order
    if f.shape != (n, n):
        return [f"cocycle shape {f.shape} does not match group order {n}"]
    f = f % m
    e = G.identity
    out = []
    if f[e].any() or f[:, e].any():
        out.append("cocycle is not normalized")
    T = np.asarray(G.table, dtype=np.int64)
    for x in range(n):
        lhs = f[x][:, None] + f[T[x]]
        rhs = f + f[x][T]
        bad = np.nonzero((lhs - rhs) % m)
        if bad[0].size:
            out.append(f"cocycle identity fails at (x,y,z)=({x},{int(bad[0][0])},{int(bad[1][0])})")
            break
    return out


def coboundary(G: GroupTable, t: Sequence[int], m: int) -> CocycleTable:
    """(dt)(x, y) = t(x) + t(y) - t(xy) for a function t with t(1) = 0."""
    t = np.asarray(t, dtype=np.int64)
    T = np.asarray(G.table, dtype=np.int64)
    return CocycleTable(m, t[:, None] + t[None, :] - t[T])


@dataclass
class AbelianStructure:
    """A finite abelian group by invariant factors d1 | d2 | ..., with generators."""
    invariants: tuple[int, ...]
    generators: list = field(default_factory=list)

    @property
    def order(self) -> int:
        return math.prod(self.invariants)

    @property
    def is_trivial(self) -> bool:
        return not self.invariants

    def __repr__(self) -> str:
        return f"AbelianStructure{self.invariants}"


class CocycleSystem:
    """The linear system for normalized cocycles of one group."""

    def __init__(self, G: GroupTable, gens: Optional[Sequence[int]] = None):
        self.G = G
        n = G.order
        self.n = n
        self.gens = tuple(int(s) for s in (gens if gens is not None else minimal_generating_set(G)))
        e = G.identity
        T = np.asarray(G.table, dtype=np.int64)
        self.T = T
        S = len(self.gens)
        nonid = [u for u in range(n) if u != e]
        pos = np.full(n, -1, dtype=np.int64)
        pos[nonid] = np.arange(n - 1)
        self.nvars = (n - 1) * S
        # unit vector of v(u, s); zero row for u = 1
        V = np.zeros((n, S, self.nvars), dtype=np.int64)
        for u in nonid:
            for si in range(S):
                V[u, si, pos[u] * S + si] = 1
        self._var_pos = pos
        # F[x, y] = coefficient vector of f(x, y) in the v-variables
        F = np.zeros((n, n, self.nvars), dtype=np.int64)
        seen = np.zeros(n, dtype=bool)
        seen[e] = True
        dq = deque([e])
        while dq:
            p = dq.popleft()
            for si, s in enumerate(self.gens):
                w = int(T[p, s])
                if seen[w]:
                    continue
                seen[w] = True
                F[:, w] = F[:, p] + V[T[:, p], si] - V[p, si]
                dq.append(w)
        if not seen.all():
            raise GroupError("generating set does not generate the group")
        self.F = F

    @cached_property
    def equations(self) -> np.ndarray:
        """Rows: the cocycle identity at (x, y, s) for every x, y and s in S."""
        F, T, n = self.F, self.T, self.n
        blocks = []
        X = np.repeat(np.arange(n), n)
        Y = np.tile(np.arange(n), n)
        XY = T[X, Y]
        for si, s in enumerate(self.gens):
            rows = F[Y, s] - F[XY, s] + F[X, T[Y, s]] - F[X, Y]
            rows = rows[(rows != 0).any(axis=1)]
            if rows.size:
                blocks.append(np.unique(rows, axis=0))
        if not blocks:
            return np.zeros((0, self.nvars), dtype=np.int64)
        return np.unique(np.concatenate(blocks), axis=0)

    @cached_property
    def coboundary_matrix(self) -> np.ndarray:
        """Column u: the v-coordinates of d(indicator of u), for u != 1."""
        n, T, e = self.n, self.T, self.G.identity
        S = len(self.gens)
        B = np.zeros((self.nvars, n - 1), dtype=np.int64)
        for u in range(n):
            if u == e:
                continue
            t = np.zeros(n, dtype=np.int64)
            t[u] = 1
            col = B[:, self._var_pos[u]]
            for w in range(n):
                if w == e:
                    continue
                for si, s in enumerate(self.gens):
                    col[self._var_pos[w] * S + si] = t[w] + t[s] - t[T[w, s]]
        return B

    def v_of(self, f: np.ndarray) -> np.ndarray:
        """Restrict a full cocycle table to the v-variables."""
        e = self.G.identity
        S = len(self.gens)
        v = np.zeros(self.nvars, dtype=np.int64)
        for u in range(self.n):
            if u != e:
                v[self._var_pos[u] * S: self._var_pos[u] * S + S] = f[u, list(self.gens)]
        return v

    def table_of(self, v: np.ndarray, m: int) -> np.ndarray:
        return (self.F @ np.asarray(v, dtype=np.int64)) % m

    def t_vector(self, t: np.ndarray) -> np.ndarray:
        """Full function on G (with t(1) = 0) from its values on non-identity elements."""
        full = np.zeros(self.n, dtype=np.int64)
        mask = np.arange(self.n) != self.G.identity
        full[mask] = t
        return full

    def prime_part(self, p: int, k: int) -> "_PrimePart":
        return _PrimePart(self, p, k)


class _PrimePart:
    """H^2(G, Z/p^k) and Hom(G, Z/p^k) for one prime power."""

    def __init__(self, system: CocycleSystem, p: int, k: int):
        self.system = system
        self.p, self.k, self.q = p, k, p ** k
        q = self.q
        self.z2: LocalSmith = local_smith(system.equations, p, k)
        self.kernel, korders = self.z2.kernel()
        bcoords = self.z2.kernel_coordinates(system.coboundary_matrix.T % q)
        g = len(korders)
        rel = np.concatenate([np.diag(np.asarray(korders, dtype=np.int64)) % q, bcoords]) \
            if g else np.zeros((0, 0), dtype=np.int64)
        self.h2: Optional[LocalSmith] = local_smith(rel, p, k) if g else None
        if self.h2 is not None:
            cgens, self.h2_orders = self.h2.cokernel()
            self.h2_vectors = (cgens @ self.kernel) % q if len(self.h2_orders) else \
                np.zeros((0, system.nvars), dtype=np.int64)
        else:
            self.h2_orders = []
            self.h2_vectors = np.zeros((0, system.nvars), dtype=np.int64)
        hs = local_smith(system.coboundary_matrix, p, k)
        self.hom_vectors, self.hom_orders = hs.kernel()

    def h2_coordinates(self, v: np.ndarray) -> np.ndarray:
        """Coordinates of cocycle v-vectors (rows) against the H^2 generators."""
        v = np.atleast_2d(np.asarray(v, dtype=np.int64)) % self.q
        if self.h2 is None or not len(self.h2_orders):
            return np.zeros((v.shape[0], 0), dtype=np.int64)
        kc = self.z2.kernel_coordinates(v)
        return self.h2.cokernel_coordinates(kc)


def _check_cap(G: GroupTable, force: bool, cap: int) -> None:
    if G.order > cap and not force:
        raise CohomologyCapError(
            f"group order {G.order} exceeds the cohomology size cap {cap}; "
            "pass force=True (CLI: --force) to run anyway")


@dataclass
class _Summand:
    order: int
    prime: int
    table: np.ndarray  # values mod p^k


def _assemble(summands: list[_Summand], m: int) -> list[tuple[int, np.ndarray]]:
    """Pair prime-power summands into invariant factors, lifting via CRT idempotents."""
    by_p: dict[int, list[_Summand]] = {}
    for s in summands:
        by_p.setdefault(s.prime, []).append(s)
    for lst in by_p.values():
        lst.sort(key=lambda s: -s.order)
    length = max((len(v) for v in by_p.values()), default=0)
    out = []
    for i in range(length):
        d, tab = 1, None
        for p, lst in by_p.items():
            if i < len(lst):
                s = lst[i]
                kp = dict(factorize(m))[p]
                piece = (s.table * crt_idempotent(m, p, kp)) % m
                tab = piece if tab is None else (tab + piece) % m
                d *= s.order
        out.append((d, tab))
    out.sort(key=lambda t: t[0])
    return out


class CohomologyComputation:
    """All per-prime data for H^2(G, Z_m), Hom(G, Z_m) and the Bockstein quotient."""

    def __init__(self, G: GroupTable, m: int, *, force: bool = False,
                 cap: int = DEFAULT_SIZE_CAP, system: Optional[CocycleSystem] = None):
        if m < 2:
            raise ValueError("coefficient modulus must be at least 2")
        _check_cap(G, force, cap)
        self.G, self.m = G, m
        self.system = system or CocycleSystem(G)
        self.parts = {p: self.system.prime_part(p, k) for p, k in factorize(m)}

    def h2(self) -> AbelianStructure:
        summands = []
        for p, part in self.parts.items():
            for o, v in zip(part.h2_orders, part.h2_vectors):
                summands.append(_Summand(o, p, self.system.table_of(v, part.q)))
        gens = _assemble(summands, self.m)
        cocycles = [CocycleTable(self.m, t) for _, t in gens]
        for c in cocycles:
            probs = c.problems(self.G)
            if probs:
                raise CocycleError("solver produced an invalid cocycle: " + probs[0])
        return AbelianStructure(tuple(d for d, _ in gens), cocycles)

    def homs(self) -> list[tuple[int, np.ndarray]]:
        """Generators of Hom(G, Z_m) as full value arrays (mod m), with orders."""
        out = []
        for p, part in self.parts.items():
            idem = crt_idempotent(self.m, p, part.k)
            for o, t in zip(part.hom_orders, part.hom_vectors):
                out.append((o, (self.system.t_vector(t) * idem) % self.m))
        return out

    @property
    def hom_size(self) -> int:
        return math.prod(o for o, _ in self.homs())

    def bockstein(self, chi: np.ndarray) -> CocycleTable:
        """Connecting image of a homomorphism G -> Z_m in H^2(G, Z_m)."""
        return bockstein(self.G, chi, self.m)

    def multiplier(self) -> AbelianStructure:
        boks = [self.system.v_of(self.bockstein(chi).values) for _, chi in self.homs()]
        summands = []
        for p, part in self.parts.items():
            if not len(part.h2_orders):
                continue
            q = part.q
            r = len(part.h2_orders)
            rel = [np.diag(np.asarray(part.h2_orders, dtype=np.int64)) % q]
            if boks:
                rel.append(part.h2_coordinates(np.array(boks) % q))
            ls = local_smith(np.concatenate(rel), part.p, part.k)
            cg, orders = ls.cokernel()
            for o, c in zip(orders, cg):
                v = (c @ part.h2_vectors) % q if r else np.zeros(self.system.nvars, dtype=np.int64)
                summands.append(_Summand(o, p, self.system.table_of(v, q)))
        gens = _assemble(summands, self.m)
        return AbelianStructure(tuple(d for d, _ in gens),
                                [CocycleTable(self.m, t) for _, t in gens])


def bockstein(G: GroupTable, chi, m: int) -> CocycleTable:
    lam = np.asarray(chi, dtype=np.int64) % m
    T = np.asarray(G.table, dtype=np.int64)
    if ((lam[:, None] + lam[None, :] - lam[T]) % m).any():
        raise CocycleError("not a homomorphism to Z_m")
    w = (lam[:, None] + lam[None, :] - lam[T]) // m
    return CocycleTable(m, w)


def h2_trivial_coefficients(G: GroupTable, m: int, force: bool = False,
                            cap: int = DEFAULT_SIZE_CAP) -> tuple[AbelianStructure, list[CocycleTable]]:
    """H^2(G, Z_m) with trivial action: invariant factors and generator cocycles."""
    comp = CohomologyComputation(G, m, force=force, cap=cap)
    h = comp.h2()
    return h, list(h.generators)


def default_modulus(G: GroupTable) -> int:
    return G.order


def schur_multiplier(G: GroupTable, m: Optional[int] = None, force: bool = False,
                     cap: int = DEFAULT_SIZE_CAP) -> AbelianStructure:
    """M(G) as H^2(G, Z_m) modulo Bockstein images of Hom(G, Z_m)."""
    if m is None:
        m = max(G.order, 2)
    check_multiplier_modulus(G, m)
    return CohomologyComputation(G, m, force=force, cap=cap).multiplier()


def check_multiplier_modulus(G: GroupTable, m: int) -> None:
    ab = abelianization(G)
    if ab and m % lcm_all(ab):
        raise ValueError(f"coefficient modulus {m} is not a multiple of exp(G^ab) = {lcm_all(ab)}")


def multiplier_report(G: GroupTable, m: Optional[int] = None, force: bool = False,
                      cap: int = DEFAULT_SIZE_CAP, name: str = "") -> dict:
    if m is None:
        m = max(G.order, 2)
    check_multiplier_modulus(G, m)
    comp = CohomologyComputation(G, m, force=force, cap=cap)
    h2 = comp.h2()
    mult = comp.multiplier()
    return {"group": name or G.name or f"order-{G.order}",
            "coeff_modulus": m,
            "h2_invariants": list(h2.invariants),
            "hom_size": comp.hom_size,
            "multiplier_invariants": list(mult.invariants)}


def extension_from_cocycle(G: GroupTable, m: int, f: Union[CocycleTable, np.ndarray],
                           name: str = "") -> tuple[GroupTable, Homomorphism, Subgroup]:
    """Central extension Z_m -> E -> G on pairs (a, g), indexed a * |G| + g.

    (a1, g1)(a2, g2) = (a1 + a2 + f(g1, g2), g1 g2).
    """
    vals = f.values if isinstance(f, CocycleTable) else np.asarray(f, dtype=np.int64)
    if isinstance(f, CocycleTable) and f.modulus != m:
        raise CocycleError(f"cocycle modulus {f.modulus} differs from {m}")
    probs = cocycle_problems(G, vals, m)
    if probs:
        raise CocycleError(probs[0])
    vals = np.asarray(vals, dtype=np.int64) % m
    n = G.order
    T = np.asarray(G.table, dtype=np.int64)
    idx = np.arange(m * n)
    a, g = idx // n, idx % n
    A = (a[:, None] + a[None, :] + vals[g[:, None], g[None, :]]) % m
    E = A * n + T[g[:, None], g[None, :]]
    labels = [f"({ai},{G.label(int(gi))})" for ai, gi in zip(a, g)]
    named = {k: int(v) for k, v in G.named.items()}
    named["z"] = n + G.identity if m > 1 else G.identity
    K = GroupTable.from_array(E, labels, name=name, named=named)
    proj = Homomorphism(K, G, g.copy(), "projection")
    Z = Subgroup(K, tuple(int(x) * n + G.identity for x in range(m)))
    return K, proj, Z


def h2_class_representatives(G: GroupTable, structure: AbelianStructure, m: int):
    """Yield (coefficients, cocycle) for every class of an H^2 structure."""
    for coeffs in itertools.product(*(range(d) for d in structure.invariants)):
        total = np.zeros((G.order, G.order), dtype=np.int64)
        for c, gen in zip(coeffs, structure.generators):
            total = (total + c * gen.values) % m
        yield coeffs, CocycleTable(m, total)
