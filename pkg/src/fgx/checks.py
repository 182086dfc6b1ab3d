"""Registry of named verification checks run by ``fgx verify``.

Each check is a closure returning ``(ok, detail)``; ``detail`` is plain
JSON data and deterministic (timings are added by the runner only).
"""
from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .characters import character_table, irrep_degrees, spin_types
from .cohomology import coboundary, extension_from_cocycle, h2_trivial_coefficients, schur_multiplier
from .core.catalogue import build_named, catalogue_keys, cross_check
from .core.coset import todd_coxeter
from .core.presentation import Presentation
from .core.tables import (ActionSpec, GroupTable, abelian_group, cyclic_group,
                          semidirect_product, symmetric_group, verify_axioms)
from .extensions import (catalogue_witness, chain_check, is_efficient, stairway_search,
                         verify_one_step, verify_representation_group)
from .structure import (center, commutator, commutator_table, derived_subgroup,
                        exponent, is_isomorphic, isomorphism_classes, power_table, quotient,
                        subgroup_generated)

VARIANT_KEYS = [f"G81VAR({a},{b})" for a in range(3) for b in range(3)]


def _sub(G: GroupTable, *names: str):
    return subgroup_generated(G, [G[n] for n in names])


# ------------------------------------------------------- reference groups

def inversion_semidirect(N: GroupTable) -> GroupTable:
    """N x| C2 with the generator of C2 inverting the abelian group N."""
    C2 = cyclic_group(2)
    act = ActionSpec.from_generators(C2, N, {1: np.asarray(N.inverses)})
    return semidirect_product(N, C2, act)


def heisenberg_semidirect() -> GroupTable:
    """(C3 x C3) x| C3 with the generator sending (u, v) to (u, u + v)."""
    N = abelian_group([3, 3])
    C3 = cyclic_group(3)
    # N indexes (u, v) as 3u + v
    auto = np.array([3 * u + (u + v) % 3 for u in range(3) for v in range(3)])
    return semidirect_product(N, C3, ActionSpec.from_generators(C3, N, {1: auto}))


def quaternion_group() -> GroupTable:
    pres = Presentation.parse("ij", ["i^4", "i^2 = j^2", "j*i*j^-1 = i^-1"], name="Q8")
    return todd_coxeter(pres)


def small_reference_groups(max_order: int = 12) -> list[GroupTable]:
    """A deterministic set of groups of order <= max_order, several per order."""
    out = [cyclic_group(n) for n in range(2, max_order + 1)]
    out += [abelian_group(v) for v in ([2, 2], [2, 4], [2, 2, 2], [3, 3], [2, 6])]
    out.append(symmetric_group(3))
    out.append(inversion_semidirect(cyclic_group(4)).renamed("D4"))
    out.append(quaternion_group())
    out.append(inversion_semidirect(cyclic_group(5)).renamed("D5"))
    out.append(inversion_semidirect(cyclic_group(6)).renamed("D6"))
    V = abelian_group([2, 2])
    # cycle the three involutions of C2 x C2 (indexed 2a + b)
    rot = np.array([0, 3, 1, 2])
    out.append(semidirect_product(V, cyclic_group(3),
                                  ActionSpec.from_generators(cyclic_group(3), V, {1: rot})).renamed("A4"))
    C4 = cyclic_group(4)
    inv3 = np.array([0, 2, 1])
    act = ActionSpec.from_function(C4, cyclic_group(3),
                                   lambda h, g: int(inv3[g]) if h % 2 else g)
    out.append(semidirect_product(cyclic_group(3), C4, act).renamed("Dic3"))
    return [G for G in out if G.order <= max_order]


# ------------------------------------------------------------- the checks

def check_orders(include_slow: bool):
    expected = {"G20": 18, "R54": 54, "RP54": 54, "G39": 27, "G81": 81, "G243": 243,
                "TPRIME(4)": 48}
    expected.update({k: 81 for k in VARIANT_KEYS})
    detail, ok = {}, True
    for key, order in expected.items():
        G = build_named(key)
        rep = verify_axioms(G)
        good = G.order == order and rep.ok
        ok &= good
        detail[key] = {"order": G.order, "expected": order, "axioms": rep.ok}
    return ok, detail


def check_cross_construction(include_slow: bool):
    detail, ok = {}, True
    for key in ("G20", "R54", "G39", "G81", "G243"):
        try:
            images = cross_check(key)
            detail[key] = {"products_compared": len(images) ** 2, "agree": True}
        except AssertionError as exc:
            ok = False
            detail[key] = {"agree": False, "error": str(exc)}
    return ok, detail


def check_centers_derived(include_slow: bool):
    detail, ok = {}, True
    R = build_named("R54")
    G = build_named("G81")
    H = build_named("G243")
    cases = {
        "R54 center": (center(R), _sub(R, "z12"), 3),
        "G81 center": (center(G), _sub(G, "z12"), 3),
        "G81 derived": (derived_subgroup(G), _sub(G, "xi2", "z12"), 9),
        "G243 center": (center(H), _sub(H, "z12", "z23"), 9),
        "G243 derived": (derived_subgroup(H), _sub(H, "z12", "z23", "eta2"), 27),
    }
    for name, (got, want, order) in cases.items():
        good = got.as_set() == want.as_set() and got.order == order
        ok &= good
        detail[name] = {"order": got.order, "expected_order": order, "equal_sets": good}
    return ok, detail


def check_schur_multipliers(include_slow: bool):
    cases = {"G20": ((3,), build_named("G20"), False),
             "G39": ((3, 3), build_named("G39"), False),
             "S4": ((2,), symmetric_group(4), False)}
    if include_slow:
        cases["G81"] = ((3,), build_named("G81"), True)
    detail, ok = {}, True
    for name, (want, G, force) in cases.items():
        got = schur_multiplier(G, force=force).invariants
        ok &= tuple(got) == want
        detail[name] = {"multiplier": list(got), "expected": list(want)}
    if not include_slow:
        detail["G81"] = "skipped (run with --include-slow)"
    return ok, detail


def check_representation_groups(include_slow: bool):
    G20, G39 = build_named("G20"), build_named("G39")
    R, RP, H, G81 = (build_named(k) for k in ("R54", "RP54", "G243", "G81"))
    m20 = schur_multiplier(G20)
    m39 = schur_multiplier(G39)
    positive = {
        "R54 over G20": verify_representation_group(R, _sub(R, "z12"), G20, m20),
        "RP54 over G20": verify_representation_group(RP, _sub(RP, "zeta"), G20, m20),
        "G243 over G39": verify_representation_group(H, _sub(H, "z12", "z23"), G39, m39),
    }
    negative = verify_representation_group(G81, _sub(G81, "z12"), G39, m39)
    detail = {k: {"verdict": r.ok, "failed": r.failures()} for k, r in positive.items()}
    detail["G81 over G39"] = {"verdict": negative.ok, "failed": negative.failures()}
    ok = all(r.ok for r in positive.values()) and negative.failures() == ["A = M(G)"]
    return ok, detail


def check_one_step_witnesses(include_slow: bool):
    cases = {"R54 -> G20": ("R54", "G20", "xi1", "xi2", "z12"),
             "G81 -> G39": ("G81", "G39", "xi1", "xi2", "z12"),
             "G243 -> G81": ("G243", "G81", "eta2", "eta3", "z23")}
    detail, ok = {}, True
    for name, args in cases.items():
        w, x, y = catalogue_witness(*args)
        rep = verify_one_step(w, x, y)
        ok &= rep.ok
        detail[name] = {"pass": rep.ok, "failed": rep.failures(),
                        "x": w.alpha.target.label(x), "y": w.alpha.target.label(y)}
    # the x1 = ab, x2 = ca images for the first witness
    G20 = build_named("G20")
    w, x, y = catalogue_witness(*cases["R54 -> G20"])
    lifts = x == G20.mul(G20["a"], G20["b"]) and y == G20.mul(G20["c"], G20["a"])
    detail["R54 -> G20"]["lifts_ab_ca"] = lifts
    chain = chain_check()
    detail["G243 -> G81 -> G39 chain"] = {"pass": chain.ok, "failed": chain.failures()}
    return ok and lifts and chain.ok, detail


def check_structure_claims(include_slow: bool):
    G20, G39 = build_named("G20"), build_named("G39")
    detail = {}
    ref20 = inversion_semidirect(abelian_group([3, 3]))
    detail["G20 = (C3xC3):C2"] = is_isomorphic(G20, ref20) is not None
    detail["G39 = (C3xC3):C3"] = is_isomorphic(G39, heisenberg_semidirect()) is not None
    a, x1, x2 = G20["a"], G20["x1"], G20["x2"]
    detail["a inverts x1, x2 and [x1,x2] = 1"] = (
        G20.mul(a, x1, G20.inv(a)) == G20.inv(x1) and G20.mul(a, x2, G20.inv(a)) == G20.inv(x2)
        and commutator(G20, x1, x2) == G20.identity)
    a, b = G39["a"], G39["b"]
    c = commutator(G39, b, a)
    bab = G39.mul(b, a, G39.inv(b))
    aba = G39.mul(a, b, G39.inv(a))
    detail["c = [b,a] has c^3 = 1"] = G39.power(c, 3) == G39.identity and c != G39.identity
    detail["Z(G39) = <c>"] = center(G39).as_set() == subgroup_generated(G39, [c]).as_set()
    detail["bab^-1 commutes with a"] = commutator(G39, bab, a) == G39.identity
    detail["aba^-1 commutes with b"] = commutator(G39, aba, b) == G39.identity
    detail["c is the named x2"] = c == G39["c"]
    return all(detail.values()), detail


def check_variants(include_slow: bool):
    groups = [build_named(k) for k in VARIANT_KEYS]
    detail, ok = {}, True
    for key, V in zip(VARIANT_KEYS, groups):
        eff = is_efficient(V, _sub(V, "z12"))
        w, x, y = catalogue_witness(key, "G39", "xi1", "xi2", "z12")
        step = verify_one_step(w, x, y).ok
        good = V.order == 81 and eff.efficient and step
        ok &= good
        detail[key] = {"order": V.order, "efficient": eff.efficient, "one_step": step}
    classes = isomorphism_classes(groups)
    detail["isomorphism_classes"] = [[VARIANT_KEYS[i] for i in cls] for cls in classes]
    return ok, detail


def check_characters(include_slow: bool):
    detail, ok = {}, True
    sums = {}
    for key in catalogue_keys():
        G = build_named(key)
        t = character_table(G)
        sums[key] = sum(d * d for d in t.degrees) == G.order
    ok &= all(sums.values())
    detail["sum_of_squares"] = sums
    R = build_named("R54")
    st = spin_types(R, _sub(R, "z12"))
    r54_sums = st.degree_square_sums()
    good = len(r54_sums) == 3 and set(r54_sums.values()) == {18}
    ok &= good
    detail["R54 spin types"] = {"types": len(r54_sums), "sums": sorted(r54_sums.values())}
    H = build_named("G243")
    st = spin_types(H, _sub(H, "z12", "z23"))
    h_sums = st.degree_square_sums()
    good = len(h_sums) == 9 and set(h_sums.values()) == {27}
    ok &= good
    detail["G243 spin types"] = {"types": len(h_sums), "sums": sorted(h_sums.values())}
    deg39 = irrep_degrees(build_named("G39"))
    good = Counter(deg39) == Counter({1: 9, 3: 2})
    ok &= good
    detail["G39 degrees"] = deg39
    RP = build_named("RP54")
    dR, dRP = irrep_degrees(R), irrep_degrees(RP)
    iso = is_isomorphic(R, RP) is not None
    flags = {"R54 has degree 3": 3 in dR, "RP54 has degree 3": 3 in dRP,
             "R54 isomorphic to RP54": iso, "R54 degrees": dR, "RP54 degrees": dRP}
    # isomorphic groups must agree; non-isomorphic ones are expected to be told apart
    good = (dR == dRP) if iso else ((3 in dR) != (3 in dRP))
    ok &= good
    detail["R54 vs RP54"] = flags
    return ok, detail


def check_stairway(include_slow: bool):
    G20, G39 = build_named("G20"), build_named("G39")
    res20 = stairway_search(G20, 3)
    m20 = schur_multiplier(G20)
    reps = [verify_representation_group(r.witness.K, subgroup_generated(r.witness.K, [r.witness.z]),
                                        G20, m20).ok for r in res20]
    res39 = stairway_search(G39, 3)
    G81 = build_named("G81")
    hits = [is_isomorphic(r.witness.K, G81) is not None for r in res39]
    detail = {"G20 extensions": len(res20), "G20 representation groups": sum(reps),
              "G39 extensions": len(res39), "G39 contains G81": any(hits)}
    return any(reps) and any(hits), detail


def commutator_power_failures(G: GroupTable) -> tuple[int, int]:
    """(qualifying pairs, failures) for [x^m, y^n] = z^(mn) when z = [x,y] commutes with x and y."""
    T = np.asarray(G.table, dtype=np.int64)
    C = np.asarray(commutator_table(G), dtype=np.int64)
    n = G.order
    X, Y = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    X, Y = X.ravel(), Y.ravel()
    Z = C[X, Y]
    good = (T[Z, X] == T[X, Z]) & (T[Z, Y] == T[Y, Z])
    X, Y, Z = X[good], Y[good], Z[good]
    e = exponent(G)
    P = power_table(G, e * e)
    fails = 0
    for m in range(1, e + 1):
        for k in range(1, e + 1):
            fails += int((C[P[X, m], P[Y, k]] != P[Z, m * k]).sum())
    return int(good.sum()), fails


def coboundary_invariance_failures(groups, moduli=(2, 3, 4)) -> tuple[int, int]:
    """Extensions by f and by f + dt must be isomorphic; returns (cases, failures)."""
    cases = fails = 0
    for G in groups:
        for m in moduli:
            h2, gens = h2_trivial_coefficients(G, m)
            if not gens:
                continue
            total = gens[0]
            for g in gens[1:]:
                total = total + g
            t = np.array([(g * g + 1) % m for g in range(G.order)])
            t[G.identity] = 0
            for f in [*gens, total]:
                shifted = f + coboundary(G, t, m)
                E1, _, _ = extension_from_cocycle(G, m, f)
                E2, _, _ = extension_from_cocycle(G, m, shifted)
                cases += 1
                fails += is_isomorphic(E1, E2) is None
    return cases, fails


def check_property_suites(include_slow: bool):
    detail, ok = {}, True
    identity = {}
    for key in catalogue_keys():
        pairs, fails = commutator_power_failures(build_named(key))
        identity[key] = {"pairs": pairs, "failures": fails}
        ok &= fails == 0
    detail["commutator power identity"] = identity
    R, G20 = build_named("R54"), build_named("G20")
    H, G39 = build_named("G243"), build_named("G39")
    q1 = is_isomorphic(quotient(R, _sub(R, "z12"))[0], G20) is not None
    q2 = is_isomorphic(quotient(H, _sub(H, "z12", "z23"))[0], G39) is not None
    detail["R54/<z12> = G20"] = q1
    detail["G243/<z12,z23> = G39"] = q2
    cases, fails = coboundary_invariance_failures(small_reference_groups(12))
    detail["cocycle + coboundary extensions"] = {"cases": cases, "failures": fails}
    ok &= q1 and q2 and fails == 0 and cases > 0
    return ok, detail


@dataclass(frozen=True)
class CheckSpec:
    name: str
    claim: str
    fn: Callable[[bool], tuple]
    slow_part: bool = False


REGISTRY: list[CheckSpec] = [
    CheckSpec("orders", "catalogue orders and group axioms (full associativity)", check_orders),
    CheckSpec("cross-construction", "normal-form rule agrees with coset enumeration on all products",
              check_cross_construction),
    CheckSpec("centers-derived", "centers and derived subgroups as exact element sets",
              check_centers_derived),
    CheckSpec("schur-multipliers", "M(G20)=Z3, M(G39)=Z3xZ3, M(S4)=Z2, M(G81)=Z3 (slow)",
              check_schur_multipliers, slow_part=True),
    CheckSpec("representation-groups", "representation-group criterion for R54, RP54, G243; G81 fails on M",
              check_representation_groups),
    CheckSpec("one-step-witnesses", "one-step efficient extension witnesses and the G243->G39 chain",
              check_one_step_witnesses),
    CheckSpec("structure-claims", "semidirect decompositions of G20, G39 and identities in G39",
              check_structure_claims),
    CheckSpec("g81-variants", "nine variants: order 81, efficient over <z12>, isomorphism classes",
              check_variants),
    CheckSpec("characters", "degree sums, spin types of R54 and G243, degrees of G39, R54 vs RP54",
              check_characters),
    CheckSpec("stairway", "stairway search finds a representation group of G20 and G81 over G39",
              check_stairway),
    CheckSpec("property-suites", "commutator power identity, quotients, coboundary invariance",
              check_property_suites),
]


def check_names() -> list[str]:
    return [c.name for c in REGISTRY]


def get_check(name: str) -> CheckSpec:
    for c in REGISTRY:
        if c.name == name:
            return c
    raise KeyError(f"unknown check {name!r}; known: {', '.join(check_names())}")


@dataclass
class CheckResult:
    name: str
    claim: str
    ok: bool
    elapsed: float
    detail: object

    def as_dict(self, timing: bool = True) -> dict:
        out = {"name": self.name, "claim": self.claim, "status": "PASS" if self.ok else "FAIL",
               "detail": self.detail}
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


def run_check(spec: CheckSpec, include_slow: bool = False) -> CheckResult:
    t0 = time.perf_counter()
    try:
        ok, detail = spec.fn(include_slow)
    except Exception as exc:  # a crashing check is a failed check
        ok, detail = False, {"error": f"{type(exc).__name__}: {exc}"}
    return CheckResult(spec.name, spec.claim, bool(ok), time.perf_counter() - t0, detail)


def run_suite(names: Optional[list[str]] = None, include_slow: bool = False) -> dict:
    specs = REGISTRY if not names else [get_check(n) for n in names]
    results = [run_check(s, include_slow) for s in specs]
    return {"status": "PASS" if all(r.ok for r in results) else "FAIL",
            "include_slow": include_slow,
            "checks": [r.as_dict() for r in results]}
