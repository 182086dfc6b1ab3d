import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fgx.checks import quaternion_group, small_reference_groups
from fgx.core.catalogue import build_named
from fgx.core.tables import GroupError, GroupTable, abelian_group, cyclic_group, symmetric_group
from fgx.structure import (Homomorphism, abelian_invariants, abelianization, analysis_report,
                           center, commutator, conjugacy_classes, derived_subgroup, element_orders,
                           exponent, is_isomorphic, is_normal, isomorphism_classes,
                           minimal_generating_set, power_table, quotient, subgroup_generated,
                           subgroup_table, verify_homomorphism)


def relabel(G: GroupTable, perm: np.ndarray) -> GroupTable:
    """The same group with element g renamed perm[g]."""
    inv = np.argsort(perm)
    T = np.asarray(G.table)
    return GroupTable.from_array(perm[T[inv[:, None], inv[None, :]]])


def test_s4_structure():
    S4 = symmetric_group(4)
    assert center(S4).order == 1
    assert derived_subgroup(S4).order == 12
    assert len(conjugacy_classes(S4)) == 5
    assert abelianization(S4) == (2,)
    assert exponent(S4) == 12


def test_quaternion_and_dihedral_differ():
    Q8 = quaternion_group()
    D4 = next(G for G in small_reference_groups(8) if G.name == "D4")
    for G in (Q8, D4):
        assert center(G).order == 2
        assert derived_subgroup(G).order == 2
        assert abelianization(G) == (2, 2)
    assert is_isomorphic(Q8, D4) is None
    assert sorted(element_orders(Q8).tolist()).count(4) == 6
    assert sorted(element_orders(D4).tolist()).count(4) == 2


def test_abelian_invariants():
    assert abelian_invariants(abelian_group([4, 6])) == (2, 12)
    assert abelian_invariants(abelian_group([2, 3])) == (6,)
    assert abelian_invariants(cyclic_group(1)) == ()
    with pytest.raises(GroupError):
        abelian_invariants(symmetric_group(3))


def test_quotient_and_subgroup_table():
    S4 = symmetric_group(4)
    D = derived_subgroup(S4)
    assert is_normal(S4, D)
    Q, proj = quotient(S4, D)
    assert Q.order == 2 and verify_homomorphism(proj)
    assert proj.kernel().as_set() == D.as_set()
    A4, emb = subgroup_table(D)
    assert A4.order == 12 and len(conjugacy_classes(A4)) == 4
    H = subgroup_generated(S4, [1])
    if not is_normal(S4, H):
        with pytest.raises(GroupError):
            quotient(S4, H)


def test_minimal_generating_sets():
    assert len(minimal_generating_set(cyclic_group(12))) == 1
    assert len(minimal_generating_set(abelian_group([2, 2, 2]))) == 3
    assert len(minimal_generating_set(symmetric_group(4))) == 2
    assert len(minimal_generating_set(build_named("G39"))) == 2
    assert minimal_generating_set(cyclic_group(1)) == ()


def test_power_table():
    G = cyclic_group(5)
    P = power_table(G, 6)
    assert P[2].tolist() == [0, 2, 4, 1, 3, 0, 2]


def test_homomorphism_from_generators():
    C6, C3 = cyclic_group(6), cyclic_group(3)
    h = Homomorphism.from_generators(C6, C3, {1: 1})
    assert verify_homomorphism(h)
    assert h.kernel().order == 2


def test_analysis_report_g243():
    rep = analysis_report(build_named("G243"))
    assert rep["order"] == 243
    assert rep["center_order"] == 9
    assert rep["derived_order"] == 27


def test_isomorphism_classes_of_small_groups():
    groups = small_reference_groups(12)
    order12 = [G for G in groups if G.order == 12]
    # C12, C2xC6, D6, A4, Dic3 are pairwise non-isomorphic
    assert len(order12) == 5
    assert len(isomorphism_classes(order12)) == 5


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(["S4", "G20", "G39", "Q8"]), st.randoms(use_true_random=False))
def test_relabelled_groups_are_isomorphic(which, rnd):
    G = {"S4": symmetric_group(4), "Q8": quaternion_group()}.get(which) or build_named(which)
    perm = np.arange(G.order)
    rnd.shuffle(perm)
    H = relabel(G, perm)
    iso = is_isomorphic(G, H)
    assert iso is not None
    assert verify_homomorphism(iso) and iso.is_bijective()


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["S4", "G20", "R54"]), st.data())
def test_commutator_identities(which, data):
    G = symmetric_group(4) if which == "S4" else build_named(which)
    x = data.draw(st.integers(0, G.order - 1))
    y = data.draw(st.integers(0, G.order - 1))
    assert commutator(G, x, y) == G.inv(commutator(G, y, x))
    assert commutator(G, x, y) in derived_subgroup(G)
