import pytest
from hypothesis import given, strategies as st

from pnilpotent import collect
from pnilpotent.catalog import build_E
from pnilpotent.presentation import PcPresentation, PresentationError
from pnilpotent.rank2 import Rank2Params, build_group

from strategies import small_presentations


def g312(p=2):
    return build_group(Rank2Params.type1(3, 1, 2), p)


def test_from_relations_shapes():
    pres = g312()
    assert pres.names == ("b", "a")
    assert pres.order_exp == 4
    assert pres.rel_orders == (2, 8)


def test_commutator_in_either_order():
    a = PcPresentation.from_relations(3, [("a", 1), ("b", 1), ("c", 1)], {}, [("a", "b", [("c", 1)])])
    b = PcPresentation.from_relations(3, [("a", 1), ("b", 1), ("c", 1)], {}, [("b", "a", [("c", 2)])])
    assert a == b


def test_tail_condition_rejected():
    with pytest.raises(PresentationError, match="tail"):
        PcPresentation.from_relations(3, [("a", 1), ("b", 1), ("c", 1)], {}, [("b", "c", [("a", 1)])])


def test_json_round_trip():
    pres = build_E(8, 3).presentation
    assert PcPresentation.from_json(pres.to_json()) == pres


def test_commutator_convention():
    # [a, b] = a^-1 b^-1 a b = a^4 in G(3,1,2) at p = 2
    pres = g312()
    a, b = pres.generator("a"), pres.generator("b")
    assert pres.format_element(collect.commutator(pres, a, b)) == "a^4"
    assert collect.order_of(pres, a) == 8


def test_normal_form_of_conjugate():
    pres = g312()
    # a b = b a^5
    ab = collect.normalize(pres, [(1, 1), (0, 1)])
    assert pres.format_element(ab) == "b*a^5"


@given(small_presentations(), st.data())
def test_normalize_idempotent(pres, data):
    k = pres.rank
    word = data.draw(st.lists(st.tuples(st.integers(0, k - 1), st.integers(-3, 3)), max_size=8))
    x = collect.normalize(pres, word)
    assert collect.normalize(pres, pres.word_from_exponents(x)) == x


@given(small_presentations(), st.data())
def test_inverse_and_power(pres, data):
    k = pres.rank
    word = data.draw(st.lists(st.tuples(st.integers(0, k - 1), st.integers(1, 3)), max_size=6))
    x = collect.normalize(pres, word)
    assert collect.multiply(pres, x, collect.inverse(pres, x)) == pres.identity()
    o = collect.order_of(pres, x)
    assert collect.power(pres, x, o) == pres.identity()
