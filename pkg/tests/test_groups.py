"""Group core: group laws, word evaluation, literals and the factory."""

import math

import pytest

from src.errors import UnsupportedOperation, UsageError
from src.groups import get_group
from src.groups.matrices import det, elementary


def test_heisenberg_defining_relation(heis):
    x = heis.parse_element("h:1,0,0")
    y = heis.parse_element("h:0,1,0")
    assert heis.multiply(x, y).payload == (1, 1, 1)
    assert heis.multiply(y, x).payload == (1, 1, 0)


def test_free_inverse_cancels(free2):
    a = free2.parse_element("w:a")
    a_inv = free2.parse_element("w:A")
    assert free2.multiply(a, a_inv) == free2.identity
    assert free2.format_element(free2.identity) == "w:"


def test_free_abelian_addition(zd2):
    g = zd2.multiply(zd2.parse_element("v:3,4"), zd2.parse_element("v:-1,2"))
    assert g.payload == (2, 6)


def test_mixed_group_operands_rejected(zd2, free2):
    with pytest.raises(UsageError):
        zd2.multiply(zd2.identity, free2.identity)


def test_sl3_commutator_word(sl3z):
    word = [sl3z.index_of(n) for n in ("E12+", "E23+", "E12-", "E23-")]
    assert sl3z.eval_word(word).payload == elementary(3, 1, 3, 1)


def test_empty_word_is_identity(zd2, heis, sl3z):
    for group in (zd2, heis, sl3z):
        assert group.eval_word([]) == group.identity


def test_free_abelian_word(zd2):
    e1, e2 = zd2.index_of("e1+"), zd2.index_of("e2+")
    assert zd2.eval_word([e1, e1, e2]).payload == (2, 1)


def test_invalid_index_rejected(zd2):
    with pytest.raises(UsageError):
        zd2.eval_word([zd2.num_generators])


def test_inverse_indices_pair_up(sl3z, free2):
    for group in (sl3z, free2):
        for i in range(group.num_generators):
            j = group.inverse_index(i)
            assert group.multiply(group.generator(i), group.generator(j)) == group.identity


def test_dist_proxy_values(sl3z):
    assert sl3z.dist_proxy(sl3z.identity) == 1.0
    e13 = sl3z.parse_element("m:1,0,7;0,1,0;0,0,1")
    assert sl3z.dist_proxy(e13) == pytest.approx(3.0)


def test_dist_proxy_grows_with_entries(sl3z):
    g = sl3z.eval_word(sl3z.random_word(40, 3))
    assert sl3z.dist_proxy(g) > 0
    assert sl3z.dist_proxy(sl3z.parse_element("m:1,0,1000;0,1,0;0,0,1")) == pytest.approx(math.log2(1001))


def test_dist_proxy_needs_matrix_group(zd2):
    with pytest.raises(UnsupportedOperation):
        zd2.dist_proxy(zd2.identity)


def test_random_word_is_deterministic(sl3z):
    assert sl3z.random_word(0, 1) == []
    assert sl3z.random_word(5, 42) == sl3z.random_word(5, 42)
    assert det(sl3z.eval_word(sl3z.random_word(40, 11)).payload) == 1


def test_literal_round_trip(zd2, heis, sl3z):
    for group, text in ((zd2, "v:3,-4"), (heis, "h:1,0,2"), (sl3z, "m:1,0,5;0,1,3;0,0,1")):
        assert group.format_element(group.parse_element(text)) == text


def test_generator_word_literal(sl3z):
    g = sl3z.parse_element("g:E12+,E23-,P12+")
    expected = sl3z.eval_word([sl3z.index_of(n) for n in ("E12+", "E23-", "P12+")])
    assert g == expected


def test_bad_literals(zd2, sl3z):
    with pytest.raises(UsageError):
        zd2.parse_element("v:1,2,3")
    with pytest.raises(UsageError):
        zd2.parse_element("h:1,0,0")
    with pytest.raises(UsageError):
        sl3z.parse_element("m:2,0,0;0,1,0;0,0,1")


def test_unknown_spec():
    with pytest.raises(UsageError):
        get_group("lattice:7")


def test_product_group():
    group = get_group("prod(zd:1,free:2)")
    g = group.parse_element("p:v:3|w:ab")
    assert group.word_length(g) == 5
    assert group.format_element(g) == "p:v:3|w:ab"


def test_diagonal_generating_set():
    group = get_group("zd:2+diag")
    assert group.num_generators == 8
    assert group.eval_word([group.index_of("p12+")]).payload == (1, 1)
