"""Central extensions: efficiency, one-step witnesses and the stairway search."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from .cohomology import (DEFAULT_SIZE_CAP, AbelianStructure, CocycleTable, extension_from_cocycle,
                         h2_class_representatives, h2_trivial_coefficients, schur_multiplier)
from .core.catalogue import build_named, canonical_key, get_entry, decode, encode
from .core.tables import GroupError, GroupTable
from .structure import (Homomorphism, Subgroup, abelian_invariants, center, commutator,
                        derived_subgroup, element_orders, is_isomorphic, quotient,
                        subgroup_generated, verify_homomorphism)


@dataclass
class Check:
    name: str
    ok: bool
    detail: Any = None

    def as_dict(self) -> dict:
        return {"name": self.name, "ok": self.ok, "detail": self.detail}


@dataclass
class CheckReport:
    title: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def add(self, name: str, ok: bool, detail: Any = None) -> bool:
        self.checks.append(Check(name, bool(ok), detail))
        return bool(ok)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if not c.ok]

    def get(self, name: str) -> Check:
        return next(c for c in self.checks if c.name == name)

    def as_dict(self) -> dict:
        return {"title": self.title, "ok": self.ok, "checks": [c.as_dict() for c in self.checks]}


@dataclass
class EfficiencyReport:
    central_ok: bool
    derived_ok: bool
    quotient_iso_ok: Optional[bool] = None
    multiplier_match: Optional[bool] = None

    @property
    def efficient(self) -> bool:
        return self.central_ok and self.derived_ok

    def as_dict(self) -> dict:
        return {"central_ok": self.central_ok, "derived_ok": self.derived_ok,
                "quotient_iso_ok": self.quotient_iso_ok, "multiplier_match": self.multiplier_match,
                "efficient": self.efficient}


def is_efficient(H: GroupTable, A: Subgroup) -> EfficiencyReport:
    """A inside Z(H) and inside [H, H]."""
    return EfficiencyReport(A.issubset(center(H)), A.issubset(derived_subgroup(H)))


@dataclass
class ExtensionWitness:
    K: GroupTable
    alpha: Homomorphism
    xi: int
    eta: int
    z: int
    d: int

    def as_dict(self) -> dict:
        K = self.K
        return {"order": K.order, "xi": K.label(self.xi), "eta": K.label(self.eta),
                "z": K.label(self.z), "d": self.d}


def verify_one_step(w: ExtensionWitness, x: int, y: int) -> CheckReport:
    """Conditions (A) and (B) for a one-step efficient central extension K -> H."""
    K, alpha, H = w.K, w.alpha, w.alpha.target
    rep = CheckReport("one-step efficient central extension")
    ox, oy = H.element_order(x), H.element_order(y)
    rep.add("pair commutes", H.table[x, y] == H.table[y, x])
    rep.add("pair has equal order d > 1", ox == oy == w.d and w.d > 1,
            {"order_x": ox, "order_y": oy, "d": w.d})
    is_hom = verify_homomorphism(alpha)
    rep.add("alpha is a homomorphism", is_hom)
    rep.add("alpha is surjective", is_hom and alpha.image().order == H.order)
    Z = subgroup_generated(K, [w.z])
    ker = alpha.kernel() if is_hom else None
    rep.add("kernel equals <z>", ker is not None and ker.as_set() == Z.as_set(),
            {"kernel_order": ker.order if ker is not None else None, "z_order": Z.order})
    rep.add("(A) alpha(xi) = x", alpha(w.xi) == x)
    rep.add("(A) alpha(eta) = y", alpha(w.eta) == y)
    c = commutator(K, w.xi, w.eta)
    rep.add("(A) [xi, eta] = z", c == w.z, {"commutator": K.label(c), "z": K.label(w.z)})
    oz = K.element_order(w.z)
    rep.add("(A) order(z) = d", oz == w.d, {"order_z": oz})
    rep.add("(A) alpha(z) = 1", alpha(w.z) == H.identity)
    eff = is_efficient(K, Z)
    rep.add("(B) <z> in Z(K)", eff.central_ok)
    rep.add("(B) <z> in [K,K]", eff.derived_ok)
    return rep


def verify_representation_group(H: GroupTable, A: Subgroup, G: GroupTable,
                                multiplier: Optional[AbelianStructure] = None,
                                force: bool = False) -> CheckReport:
    """Schur's criterion: A inside Z(H) and [H,H], A = M(G), H/A = G."""
    rep = CheckReport("representation group")
    eff = is_efficient(H, A)
    rep.add("A in Z(H)", eff.central_ok)
    rep.add("A in [H,H]", eff.derived_ok)
    rep.add("|H| = |A| |G|", H.order == A.order * G.order,
            {"H": H.order, "A": A.order, "G": G.order})
    mult = multiplier if multiplier is not None else schur_multiplier(G, force=force)
    inv_a = abelian_invariants(A) if eff.central_ok else None
    rep.add("A = M(G)", inv_a is not None and tuple(inv_a) == tuple(mult.invariants),
            {"A": list(inv_a) if inv_a is not None else None, "M(G)": list(mult.invariants)})
    iso = None
    if eff.central_ok:
        Qt, _ = quotient(H, A)
        iso = is_isomorphic(Qt, G)
    rep.add("H/A = G", iso is not None)
    return rep


# ----------------------------------------------------------- catalogue maps

def _drop(positions: Sequence[int]):
    def f(t):
        return tuple(v for i, v in enumerate(t) if i not in positions)
    return f


_COVERS = {
    ("R54", "G20"): (0,),
    ("G81", "G39"): (0,),
    ("G243", "G81"): (1,),
}


def covering_map(source: str, target: str) -> Homomorphism:
    """The catalogue projections: forget z12 (R54, G81 and variants) or z23 (G243).

    RP54 -> G20 sends eta_i to a, b, c and zeta to 1.
    """
    src, tgt = canonical_key(source), canonical_key(target)
    K, H = build_named(src), build_named(tgt)
    if src == "RP54" and tgt == "G20":
        imgs = {K["eta1"]: H["a"], K["eta2"]: H["b"], K["eta3"]: H["c"], K["zeta"]: H.identity}
        return Homomorphism.from_generators(K, H, imgs, "projection")
    base = "G81" if src.startswith("G81") else src
    if (base, tgt) not in _COVERS:
        raise GroupError(f"no catalogue covering map {src} -> {tgt}")
    drop = _drop(_COVERS[(base, tgt)])
    ms, mt = get_entry(src).moduli, get_entry(tgt).moduli
    images = np.array([encode(drop(decode(i, ms)), mt) for i in range(K.order)], dtype=np.int64)
    hom = Homomorphism(K, H, images, "projection")
    if not verify_homomorphism(hom):
        raise GroupError(f"{src} -> {tgt} projection is not a homomorphism")
    return hom


def catalogue_witness(source: str, target: str, xi: str, eta: str, z: str,
                      d: int = 3) -> tuple[ExtensionWitness, int, int]:
    """Witness from named catalogue elements, with the base pair (alpha(xi), alpha(eta))."""
    alpha = covering_map(source, target)
    K = alpha.source
    w = ExtensionWitness(K, alpha, K[xi], K[eta], K[z], d)
    return w, alpha(w.xi), alpha(w.eta)


def chain_check(top: str = "G243", middle: str = "G81", bottom: str = "G39") -> CheckReport:
    """Compose two covering maps and check the kernel is central, inside [K,K], order 9."""
    upper = covering_map(top, middle)
    lower = covering_map(middle, bottom)
    comp = lower.compose(upper)
    K = comp.source
    rep = CheckReport(f"{top} -> {middle} -> {bottom}")
    rep.add("composite is a homomorphism", verify_homomorphism(comp))
    rep.add("composite is surjective", comp.image().order == comp.target.order)
    ker = comp.kernel()
    rep.add("kernel order 9", ker.order == 9, {"kernel_order": ker.order})
    eff = is_efficient(K, ker)
    rep.add("kernel central", eff.central_ok)
    rep.add("kernel in derived subgroup", eff.derived_ok)
    return rep


# ---------------------------------------------------------------- stairway

def commuting_pairs(G: GroupTable, d: int) -> list[tuple[int, int]]:
    """Unordered commuting pairs of elements of order d, one per conjugacy orbit.

    Pairs with y in <x> are skipped: their lifts always commute.
    """
    orders = element_orders(G)
    cand = [g for g in range(G.order) if orders[g] == d]
    T = np.asarray(G.table)
    inv = np.asarray(G.inverses)
    conj = T[T, inv[:, None]]
    # conj[g, x] = g x g^-1
    seen: set = set()
    out = []
    for i, x in enumerate(cand):
        cyc = subgroup_generated(G, [x]).as_set()
        for y in cand[i + 1:]:
            if T[x, y] != T[y, x] or y in cyc:
                continue
            key = frozenset((x, y))
            if key in seen:
                continue
            for g in range(G.order):
                seen.add(frozenset((int(conj[g, x]), int(conj[g, y]))))
            out.append((x, y))
    return out


@dataclass
class StairwayResult:
    witness: ExtensionWitness
    pair: tuple[int, int]
    cocycle: CocycleTable
    class_coefficients: tuple[int, ...]
    efficient: bool

    def as_dict(self, base: GroupTable) -> dict:
        return {"pair": [base.label(self.pair[0]), base.label(self.pair[1])],
                "extension_order": self.witness.K.order,
                "efficient": self.efficient,
                "cocycle_class": list(self.class_coefficients),
                "witness": self.witness.as_dict()}


def stairway_search(G: GroupTable, d: int, max_results: int = 50, force: bool = False,
                    cap: int = DEFAULT_SIZE_CAP) -> list[StairwayResult]:
    """One-step efficient central extensions of G by Z_d, up to isomorphism.

    Every class of H^2(G, Z_d) is scanned.  For commuting x, y the lifts
    (0, x), (0, y) in the extension have commutator f(x,y) - f(y,x), which
    depends only on the class; changing lifts within the kernel leaves it
    unchanged.  A class qualifies when this is a unit mod d for some pair.
    """
    if d < 2:
        raise ValueError("d must be at least 2")
    h2, _ = h2_trivial_coefficients(G, d, force=force, cap=cap)
    pairs = commuting_pairs(G, d)
    if not pairs or h2.is_trivial:
        return []
    n = G.order
    results: list[StairwayResult] = []
    for coeffs, f in h2_class_representatives(G, h2, d):
        vals = f.values
        hit = None
        for x, y in pairs:
            c = int(vals[x, y] - vals[y, x]) % d
            if math.gcd(c, d) == 1:
                hit = (x, y, c)
                break
        if hit is None:
            continue
        x, y, c = hit
        K, proj, _ = extension_from_cocycle(G, d, f, name=f"ext{list(coeffs)}")
        if any(is_isomorphic(r.witness.K, K) is not None for r in results):
            continue
        w = ExtensionWitness(K, proj, x, y, c * n + G.identity, d)
        report = verify_one_step(w, x, y)
        if not report.ok:
            raise GroupError(f"stairway candidate failed verification: {report.failures()}")
        results.append(StairwayResult(w, (x, y), f, tuple(coeffs),
                                      is_efficient(K, subgroup_generated(K, [w.z])).efficient))
        if len(results) >= max_results:
            break
    return results
