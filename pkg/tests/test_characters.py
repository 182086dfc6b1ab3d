import cmath
import math

import numpy as np
import pytest

from fgx.characters import (CharacterTableError, character_table, cyclotomic_equal,
                            cyclotomic_is_zero, cyclotomic_polynomial, dixon_prime, irrep_degrees,
                            spin_types, to_complex)
from fgx.checks import quaternion_group, small_reference_groups
from fgx.core.catalogue import build_named, catalogue_keys
from fgx.core.tables import GroupError, abelian_group, cyclic_group, symmetric_group
from fgx.structure import (abelianization, center, derived_subgroup, quotient, subgroup_generated,
                           trivial_subgroup)

SMALL = {G.name: G for G in small_reference_groups(12)}


def test_c3_table():
    t = character_table(cyclic_group(3))
    w = cmath.exp(2j * math.pi / 3)
    X = t.complex_values()
    # classes are {0}, {1}, {2}; rows sorted with the trivial character first
    got = sorted(tuple(np.round(r, 9)) for r in X)
    want = sorted(tuple(np.round(r, 9)) for r in ([1, 1, 1], [1, w, w * w], [1, w * w, w]))
    assert got == want
    assert np.allclose(X[0], 1)


def test_s3_table():
    t = character_table(symmetric_group(3))
    assert t.degrees == [1, 1, 2]
    X = t.complex_values().real.round().astype(int)
    sizes = t.class_sizes
    two = X[2]
    assert {s: int(v) for s, v in zip(sizes, two)} == {1: 2, 3: 0, 2: -1}


@pytest.mark.parametrize("G,degrees", [
    (symmetric_group(4), [1, 1, 2, 3, 3]),
    (quaternion_group(), [1, 1, 1, 1, 2]),
    (SMALL["A4"], [1, 1, 1, 3]),
    (SMALL["D5"], [1, 1, 2, 2]),
    (abelian_group([2, 6]), [1] * 12),
], ids=["S4", "Q8", "A4", "D5", "C2xC6"])
def test_known_degrees(G, degrees):
    assert irrep_degrees(G) == degrees


@pytest.mark.parametrize("key", catalogue_keys())
def test_catalogue_tables_are_orthogonal(key):
    G = build_named(key)
    t = character_table(G)
    assert not t.orthogonality_problems()
    assert sum(d * d for d in t.degrees) == G.order
    assert all(G.order % d == 0 for d in t.degrees)
    # linear characters correspond to elements of the abelianization
    assert t.degrees.count(1) == math.prod(abelianization(G))


@pytest.mark.parametrize("name", sorted(SMALL))
def test_complex_orthogonality(name):
    G = SMALL[name]
    t = character_table(G)
    X = t.complex_values()
    h = np.array(t.class_sizes)
    gram = (X * h) @ X.conj().T
    assert np.allclose(gram, G.order * np.eye(len(X)))


def test_g39_degrees():
    assert irrep_degrees(build_named("G39")) == [1] * 9 + [3, 3]


def test_tampered_table_is_rejected():
    t = character_table(symmetric_group(3))
    t.values = t.values.copy()
    t.values[2, 1, 0] += 1
    with pytest.raises(CharacterTableError):
        t.verify()


def test_dixon_prime():
    # smallest p = 1 mod e with p > 2 sqrt(n)
    assert dixon_prime(18, 6) == 13
    assert dixon_prime(4, 2) == 5
    assert dixon_prime(243, 9) == 37


def test_cyclotomic_arithmetic():
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    # 1 + zeta + zeta^2 = 0 for a primitive cube root
    assert cyclotomic_is_zero(np.array([1, 1, 1]), 3)
    # for e = 6: zeta^3 = -1 = zeta^2 + zeta^4
    assert cyclotomic_equal(np.array([0, 0, 0, 1, 0, 0]), np.array([-1, 0, 0, 0, 0, 0]), 6)
    assert cyclotomic_equal(np.array([0, 0, 1, 0, 1, 0]), np.array([0, 0, 0, 1, 0, 0]), 6)
    assert not cyclotomic_equal(np.array([0, 1, 0, 0, 0, 0]), np.array([0, 0, 0, 0, 0, 1]), 6)
    assert abs(to_complex([0, 1, 0]) - cmath.exp(2j * math.pi / 3)) < 1e-12


def test_spin_types_r54():
    R = build_named("R54")
    st = spin_types(R, subgroup_generated(R, [R["z12"]]))
    sums = st.degree_square_sums()
    assert len(sums) == 3 and set(sums.values()) == {18}
    # trivial type reproduces the quotient's degrees
    Q, _ = quotient(R, subgroup_generated(R, [R["z12"]]))
    trivial = [st.degrees[i] for i in st.types[(0,)]]
    assert sorted(trivial) == irrep_degrees(Q)


def test_spin_types_g243():
    H = build_named("G243")
    st = spin_types(H, subgroup_generated(H, [H["z12"], H["z23"]]))
    sums = st.degree_square_sums()
    assert len(sums) == 9 and set(sums.values()) == {27}


def test_spin_types_of_trivial_subgroup():
    G = symmetric_group(4)
    st = spin_types(G, trivial_subgroup(G))
    assert len(st.types) == 1
    assert sorted(next(iter(st.types.values()))) == list(range(5))


def test_spin_types_need_central_subgroup():
    G = symmetric_group(4)
    with pytest.raises(GroupError):
        spin_types(G, derived_subgroup(G))


def test_schur_cover_spin_degrees_of_g20():
    # any cover of G20 by Z3 splits 54 as 18 + 18 + 18 with faithful spin
    # types free of linear characters
    for key in ("R54", "RP54"):
        K = build_named(key)
        st = spin_types(K, center(K))
        for tau, idx in st.types.items():
            if any(tau):
                assert sorted(st.degrees[i] for i in idx) == [3, 3]
