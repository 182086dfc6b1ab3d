import numpy as np
import pytest

from fgx.core.catalogue import (CatalogueError, build_named, canonical_key, catalogue_keys,
                                cross_check, decode, encode)
from fgx.core.coset import CosetLimitExceeded, default_max_cosets, todd_coxeter
from fgx.core.presentation import Presentation, PresentationError, parse_word
from fgx.core.tables import (GroupError, GroupTable, abelian_group, cyclic_group, direct_product,
                             heisenberg_group, symmetric_group, verify_axioms)


def test_cyclic_table_is_addition_mod_n():
    G = cyclic_group(7)
    assert G.order == 7 and G.identity == 0
    assert G.mul(3, 5) == 1
    assert G.inv(2) == 5
    assert G.power(3, 4) == 5
    assert G.element_order(3) == 7


def test_reference_orders():
    assert symmetric_group(4).order == 24
    assert abelian_group([2, 3, 4]).order == 24
    assert heisenberg_group(3).order == 27
    assert direct_product(cyclic_group(2), symmetric_group(3)).order == 12
    for G in (symmetric_group(4), heisenberg_group(3), abelian_group([2, 2])):
        assert verify_axioms(G).ok


def test_table_is_read_only():
    G = cyclic_group(4)
    with pytest.raises(ValueError):
        G.table[0, 0] = 1


def test_from_array_rejects_non_groups():
    with pytest.raises(GroupError):
        GroupTable.from_array([[1, 0], [1, 0]])
    with pytest.raises(GroupError):
        GroupTable.from_array([[0, 1], [1, 2]])
    with pytest.raises(GroupError):
        GroupTable.from_array(np.zeros((2, 3), dtype=int))


def test_verify_axioms_catches_non_associative_loop():
    # a Latin square with identity 0 that is not associative (order-5 loop)
    T = np.array([[0, 1, 2, 3, 4],
                  [1, 0, 3, 4, 2],
                  [2, 4, 0, 1, 3],
                  [3, 2, 4, 0, 1],
                  [4, 3, 1, 2, 0]])
    G = GroupTable.from_array(T)
    rep = verify_axioms(G)
    assert rep.latin and rep.identity and rep.inverses
    assert not rep.associativity and not rep.ok
    assert rep.failures


def test_parse_word_and_relations():
    assert parse_word("a^2*b^-1", ["a", "b"]) == ((0, 2), (1, -1))
    assert parse_word("[a,b]", ["a", "b"]) == ((0, 1), (1, 1), (0, -1), (1, -1))
    assert parse_word("a*b = b*a", ["a", "b"]) == parse_word("[a,b]", ["a", "b"])
    with pytest.raises(PresentationError):
        parse_word("a*c", ["a", "b"])


def test_todd_coxeter_small_groups():
    assert todd_coxeter(Presentation.parse("a", ["a^6"])).order == 6
    S3 = todd_coxeter(Presentation.parse("st", ["s^2", "t^3", "(s*t)^2"]))
    assert S3.order == 6 and verify_axioms(S3).ok
    A5 = todd_coxeter(Presentation.parse("ab", ["a^2", "b^3", "(a*b)^5"]))
    assert A5.order == 60
    Q8 = todd_coxeter(Presentation.parse("ij", ["i^4", "i^2 = j^2", "j*i*j^-1 = i^-1"]))
    assert Q8.order == 8
    assert Q8.element_order(Q8["i"]) == 4


def test_todd_coxeter_central_generators():
    # <a, z | a^3, z^2, z central> is C6
    pres = Presentation.parse("az", ["a^3", "z^2"], central=["z"])
    G = todd_coxeter(pres)
    assert G.order == 6
    assert G.mul(G["a"], G["z"]) == G.mul(G["z"], G["a"])


def test_coset_cap(monkeypatch):
    free_abelian = Presentation.parse("ab", ["[a,b]"])
    with pytest.raises(CosetLimitExceeded):
        todd_coxeter(free_abelian, max_cosets=500)
    monkeypatch.setenv("FGX_MAX_COSETS", "321")
    assert default_max_cosets() == 321


def test_encode_decode_roundtrip():
    moduli = (3, 3, 2)
    for i in range(18):
        assert encode(decode(i, moduli), moduli) == i
    assert encode((0, 0, 0), moduli) == 0


def test_canonical_keys():
    assert canonical_key("g20") == "G20"
    assert canonical_key("TPRIME", 4) == "TPRIME(4)"
    assert canonical_key("G81VAR(1, 2)") == "G81VAR(1,2)"
    for bad in ("G99", "TPRIME(9)", "G81VAR(3,0)", "G20(1)"):
        with pytest.raises(CatalogueError):
            canonical_key(bad)


@pytest.mark.parametrize("key,order", [("G20", 18), ("R54", 54), ("RP54", 54), ("G39", 27),
                                       ("G81", 81), ("G243", 243), ("TPRIME(4)", 48)])
def test_catalogue_orders(key, order):
    G = build_named(key)
    assert G.order == order
    assert verify_axioms(G).ok


def test_catalogue_keys_all_build():
    for key in catalogue_keys():
        assert build_named(key).order > 1


def test_tprime_three_has_order_twelve():
    # with n = 3 the relator family tying zeta to commutators is empty
    assert build_named("TPRIME(3)").order == 12


def test_cross_check_returns_bijection():
    images = cross_check("G20")
    assert sorted(images.tolist()) == list(range(18))
