import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fgx.checks import small_reference_groups
from fgx.cohomology import (CocycleError, CocycleTable, CohomologyCapError, CohomologyComputation,
                            bockstein, coboundary, extension_from_cocycle, h2_class_representatives,
                            h2_trivial_coefficients, schur_multiplier)
from fgx.core.catalogue import build_named
from fgx.core.tables import abelian_group, cyclic_group, direct_product, symmetric_group
from fgx.structure import abelianization, center, exponent, is_isomorphic

SMALL = {G.name: G for G in small_reference_groups(12)}


def _rank_mod_p(M: np.ndarray, p: int) -> int:
    A = np.array(M, dtype=np.int64) % p
    r = 0
    for c in range(A.shape[1]):
        piv = np.flatnonzero(A[r:, c])
        if not piv.size:
            continue
        i = r + piv[0]
        A[[r, i]] = A[[i, r]]
        A[r] = A[r] * pow(int(A[r, c]), -1, p) % p
        others = np.flatnonzero(A[:, c])
        others = others[others != r]
        A[others] = (A[others] - A[others, c][:, None] * A[r]) % p
        r += 1
        if r == A.shape[0]:
            break
    return r


def h2_order_mod_p(G, p):
    """|H^2(G, Z_p)| from the full cocycle system over all triples."""
    n = G.order
    T = np.asarray(G.table)
    e = G.identity
    var = {}
    for x in range(n):
        for y in range(n):
            if x != e and y != e:
                var[x, y] = len(var)
    rows = []
    for x, y, z in itertools.product(range(n), repeat=3):
        # f(x,y) + f(xy,z) - f(y,z) - f(x,yz) = 0
        row = np.zeros(len(var), dtype=np.int64)
        for (a, b), s in (((x, y), 1), ((T[x, y], z), 1), ((y, z), -1), ((x, T[y, z]), -1)):
            if (a, b) in var:
                row[var[a, b]] += s
        if row.any():
            rows.append(row)
    dim_z = len(var) - (_rank_mod_p(np.array(rows), p) if rows else 0)
    # coboundary map t -> dt on the non-identity elements
    nonid = [g for g in range(n) if g != e]
    D = np.zeros((len(var), len(nonid)), dtype=np.int64)
    col = {g: i for i, g in enumerate(nonid)}
    for (a, b), r in var.items():
        D[r, col[a]] += 1
        D[r, col[b]] += 1
        if T[a, b] != e:
            D[r, col[T[a, b]]] -= 1
    dim_b = _rank_mod_p(D, p)
    return p ** (dim_z - dim_b)


def test_brute_force_klein_four_mod_2():
    # enumerate all 2^9 normalized functions on C2 x C2
    G = abelian_group([2, 2])
    nonid = [1, 2, 3]
    cocycles = set()
    for bits in itertools.product(range(2), repeat=9):
        f = np.zeros((4, 4), dtype=np.int64)
        for (x, y), b in zip(itertools.product(nonid, nonid), bits):
            f[x, y] = b
        if CocycleTable(2, f).is_cocycle(G):
            cocycles.add(f.tobytes())
    boundaries = set()
    for ts in itertools.product(range(2), repeat=3):
        t = np.array((0,) + ts)
        boundaries.add(coboundary(G, t, 2).values.tobytes())
    assert len(cocycles) // len(boundaries) == 8
    h2, gens = h2_trivial_coefficients(G, 2)
    assert h2.invariants == (2, 2, 2)
    assert all(g.is_cocycle(G) for g in gens)


@pytest.mark.parametrize("name", sorted(SMALL))
@pytest.mark.parametrize("p", [2, 3])
def test_h2_order_matches_independent_rank_count(name, p):
    G = SMALL[name]
    h2, _ = h2_trivial_coefficients(G, p)
    assert h2.order == h2_order_mod_p(G, p)


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_cyclic_h2_is_cyclic_of_gcd(n, m):
    h2, _ = h2_trivial_coefficients(cyclic_group(n), m)
    g = math.gcd(n, m)
    assert h2.invariants == ((g,) if g > 1 else ())


def test_h2_c6_mod_6():
    h2, _ = h2_trivial_coefficients(cyclic_group(6), 6)
    assert h2.invariants == (6,)


KNOWN_MULTIPLIERS = {
    "C2xC2": (2,), "C2xC4": (2,), "C2xC2xC2": (2, 2, 2), "C3xC3": (3,), "C2xC6": (2,),
    "S3": (), "D4": (2,), "Q8": (), "D5": (), "D6": (2,), "A4": (2,), "Dic3": (),
}


@pytest.mark.parametrize("name", sorted(KNOWN_MULTIPLIERS))
def test_known_multipliers(name):
    assert schur_multiplier(SMALL[name]).invariants == KNOWN_MULTIPLIERS[name]


@pytest.mark.parametrize("n", range(2, 13))
def test_cyclic_multipliers_trivial(n):
    assert schur_multiplier(cyclic_group(n)).is_trivial


def test_s4_multiplier():
    assert schur_multiplier(symmetric_group(4)).invariants == (2,)


@pytest.mark.parametrize("key", ["G20", "G39", "R54", "RP54", "TPRIME(3)"])
def test_universal_coefficients(key):
    # with exp(G^ab) and exp(M) dividing m: |H^2(G, Z_m)| = |M(G)| |G^ab|
    G = build_named(key)
    comp = CohomologyComputation(G, G.order)
    ab = math.prod(abelianization(G))
    assert comp.hom_size == ab
    assert comp.h2().order == comp.multiplier().order * ab


@pytest.mark.parametrize("G", [build_named("G20"), build_named("G39"), symmetric_group(4),
                               SMALL["A4"], SMALL["D6"]], ids=lambda G: G.name)
def test_coefficient_modulus_override_is_stable(G):
    base = schur_multiplier(G).invariants
    assert schur_multiplier(G, m=3 * exponent(G)).invariants == base
    assert schur_multiplier(G, m=exponent(G) * G.order).invariants == base


def test_modulus_must_cover_abelianization():
    with pytest.raises(ValueError):
        schur_multiplier(build_named("G20"), m=3)


def test_size_cap():
    G = build_named("G243")
    with pytest.raises(CohomologyCapError):
        h2_trivial_coefficients(G, 3)
    with pytest.raises(CohomologyCapError):
        schur_multiplier(build_named("G20"), cap=10)
    assert schur_multiplier(build_named("G20"), cap=10, force=True).invariants == (3,)


def test_multiplier_of_g81_forced():
    assert schur_multiplier(build_named("G81"), force=True).invariants == (3,)


def test_bockstein_images_are_cocycles():
    G = build_named("G20")
    comp = CohomologyComputation(G, 6)
    for _, chi in comp.homs():
        assert bockstein(G, chi, 6).is_cocycle(G)
    with pytest.raises(CocycleError):
        bockstein(G, np.arange(G.order), 6)


def test_zero_cocycle_gives_direct_product():
    G = symmetric_group(3)
    K, proj, Z = extension_from_cocycle(G, 2, np.zeros((6, 6), dtype=np.int64))
    assert is_isomorphic(K, direct_product(cyclic_group(2), G)) is not None
    assert Z.issubset(center(K)) and proj.kernel().as_set() == Z.as_set()


def test_extension_rejects_non_cocycle():
    G = cyclic_group(3)
    f = np.zeros((3, 3), dtype=np.int64)
    f[1, 1] = 1
    f[1, 2] = 2
    with pytest.raises(CocycleError):
        extension_from_cocycle(G, 3, f)


def test_nontrivial_class_of_c2_gives_c4():
    G = cyclic_group(2)
    h2, gens = h2_trivial_coefficients(G, 2)
    K, _, _ = extension_from_cocycle(G, 2, gens[0])
    assert is_isomorphic(K, cyclic_group(4)) is not None


def test_class_representatives_enumerate_h2():
    G = abelian_group([2, 2])
    h2, _ = h2_trivial_coefficients(G, 2)
    reps = list(h2_class_representatives(G, h2, 2))
    assert len(reps) == 8
    assert not reps[0][1].values.any()
    assert all(f.is_cocycle(G) for _, f in reps)


def test_cocycle_json_roundtrip():
    G = cyclic_group(4)
    _, gens = h2_trivial_coefficients(G, 4)
    c = CocycleTable.from_json(gens[0].to_json())
    assert np.array_equal(c.values, gens[0].values) and c.modulus == 4


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["S3", "D4", "A4", "C2xC6"]), st.data())
def test_coboundaries_are_cocycles(name, data):
    G = SMALL[name]
    m = data.draw(st.sampled_from([2, 3, 4, 5]))
    t = data.draw(st.lists(st.integers(0, m - 1), min_size=G.order, max_size=G.order))
    t[G.identity] = 0
    d = coboundary(G, t, m)
    assert d.is_cocycle(G)
    _, gens = h2_trivial_coefficients(G, m)
    for g in gens:
        assert (g + d).is_cocycle(G) and g.scaled(m - 1).is_cocycle(G)
