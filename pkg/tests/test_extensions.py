import pytest

from fgx.checks import VARIANT_KEYS, small_reference_groups
from fgx.cohomology import schur_multiplier
from fgx.core.catalogue import build_named
from fgx.core.tables import GroupError, abelian_group, cyclic_group
from fgx.extensions import (ExtensionWitness, catalogue_witness, chain_check, commuting_pairs,
                            covering_map, is_efficient, stairway_search, verify_one_step,
                            verify_representation_group)
from fgx.structure import (center, derived_subgroup, is_isomorphic, isomorphism_classes,
                           subgroup_generated, verify_homomorphism)


def sub(G, *names):
    return subgroup_generated(G, [G[n] for n in names])


@pytest.mark.parametrize("src,tgt", [("R54", "G20"), ("RP54", "G20"), ("G81", "G39"),
                                     ("G243", "G81"), ("G81VAR(2,1)", "G39")])
def test_covering_maps_are_surjective_homomorphisms(src, tgt):
    h = covering_map(src, tgt)
    assert verify_homomorphism(h)
    assert h.image().order == h.target.order
    assert h.kernel().order * h.target.order == h.source.order


def test_no_covering_map_between_unrelated_groups():
    with pytest.raises(GroupError):
        covering_map("G39", "G20")


def test_efficiency():
    R = build_named("R54")
    assert is_efficient(R, sub(R, "z12")).efficient
    # C2 x C2 sits in no derived subgroup of an abelian group
    V = abelian_group([2, 2])
    assert not is_efficient(V, subgroup_generated(V, [1])).derived_ok


@pytest.mark.parametrize("args", [("R54", "G20", "xi1", "xi2", "z12"),
                                  ("G81", "G39", "xi1", "xi2", "z12"),
                                  ("G243", "G81", "eta2", "eta3", "z23")])
def test_catalogue_witnesses_pass(args):
    w, x, y = catalogue_witness(*args)
    rep = verify_one_step(w, x, y)
    assert rep.ok, rep.failures()


def test_witness_with_wrong_z_fails():
    w, x, y = catalogue_witness("R54", "G20", "xi1", "xi2", "z12")
    bad = ExtensionWitness(w.K, w.alpha, w.xi, w.eta, w.K.identity, w.d)
    fails = set(verify_one_step(bad, x, y).failures())
    assert {"kernel equals <z>", "(A) [xi, eta] = z", "(A) order(z) = d"} <= fails


def test_witness_with_non_commuting_pair_fails():
    w, x, y = catalogue_witness("R54", "G20", "xi1", "xi2", "z12")
    G20 = w.alpha.target
    rep = verify_one_step(w, G20["a"], y)
    assert not rep.get("pair commutes").ok


def test_chain():
    rep = chain_check()
    assert rep.ok, rep.failures()


def test_representation_groups():
    G20, G39 = build_named("G20"), build_named("G39")
    R, RP, H, G81 = (build_named(k) for k in ("R54", "RP54", "G243", "G81"))
    assert verify_representation_group(R, sub(R, "z12"), G20).ok
    assert verify_representation_group(RP, sub(RP, "zeta"), G20).ok
    assert verify_representation_group(H, sub(H, "z12", "z23"), G39).ok
    rep = verify_representation_group(G81, sub(G81, "z12"), G39)
    assert rep.failures() == ["A = M(G)"]


def test_representation_group_of_klein_four():
    # D4 and Q8 are both Schur covers of C2 x C2
    V = abelian_group([2, 2])
    groups = {G.name: G for G in small_reference_groups(8)}
    for name in ("D4", "Q8"):
        G = groups[name]
        assert verify_representation_group(G, center(G), V).ok
    # C2 x C4 over its C2 is central but not inside the derived subgroup
    A = abelian_group([2, 4])
    rep = verify_representation_group(A, derived_subgroup(A), V)
    assert not rep.ok


def test_variants_are_efficient_order_81():
    groups = [build_named(k) for k in VARIANT_KEYS]
    for V in groups:
        assert V.order == 81 and is_efficient(V, sub(V, "z12")).efficient
    classes = isomorphism_classes(groups)
    assert sum(len(c) for c in classes) == 9
    assert any(0 in c for c in classes)


def test_commuting_pairs_are_commuting_and_distinct():
    G = build_named("G39")
    pairs = commuting_pairs(G, 3)
    assert pairs
    for x, y in pairs:
        assert G.mul(x, y) == G.mul(y, x)
        assert y not in subgroup_generated(G, [x])


def test_stairway_over_g20():
    res = stairway_search(build_named("G20"), 3)
    assert len(res) == 1
    K = res[0].witness.K
    assert K.order == 54 and is_isomorphic(K, build_named("R54")) is not None
    assert res[0].efficient


def test_stairway_over_g39_finds_g81():
    res = stairway_search(build_named("G39"), 3)
    G81 = build_named("G81")
    assert any(is_isomorphic(r.witness.K, G81) is not None for r in res)
    # results are pairwise non-isomorphic
    assert len(isomorphism_classes([r.witness.K for r in res])) == len(res)
    for r in res:
        assert verify_one_step(r.witness, *r.pair).ok


def test_stairway_on_cyclic_group_is_empty():
    # every pair in C5 lies in one cyclic subgroup, so lifts commute
    assert stairway_search(cyclic_group(5), 5) == []


def test_stairway_over_c3_squared_reaches_heisenberg():
    res = stairway_search(abelian_group([3, 3]), 3)
    assert any(r.witness.K.order == 27 and center(r.witness.K).order == 3 for r in res)


def test_stairway_over_klein_four_reaches_a_cover():
    V = abelian_group([2, 2])
    res = stairway_search(V, 2)
    M = schur_multiplier(V)
    assert res
    assert all(verify_representation_group(r.witness.K, subgroup_generated(r.witness.K, [r.witness.z]),
                                           V, M).ok for r in res)


def test_stairway_rejects_bad_order():
    with pytest.raises(ValueError):
        stairway_search(cyclic_group(4), 1)
