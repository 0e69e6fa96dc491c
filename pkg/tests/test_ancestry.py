import json

import pytest

from pnilpotent import props
from pnilpotent.ancestry import (
    AbelianA,
    AbelianB,
    center_pow,
    chain_edges,
    descendant,
    descendant_rule,
    direct_ancestors,
    edges_dot,
    edges_json,
    infinite_branch,
    parse_descriptor,
    verify_descendant,
)
from pnilpotent.group import group_of
from pnilpotent.rank2 import Rank2Params, build_group, enumerate_rank2

T1, T2 = Rank2Params.type1, Rank2Params.type2


def test_descendant_examples():
    assert descendant(T1(3, 2, 2)) == AbelianA(2) and descendant_rule(T1(3, 2, 2)) == "a"
    assert descendant(T1(3, 1, 2)) == AbelianB(1) and descendant_rule(T1(3, 1, 2)) == "b"
    assert descendant(T1(4, 2, 2)) == T1(3, 2, 2)
    assert descendant(T1(5, 1, 4)) == AbelianB(1)
    assert descendant(T2(5, 4, 3, 2)) == T1(3, 4, 2) and descendant_rule(T2(5, 4, 3, 2)) == "d"


def test_center_pow_examples():
    zp = center_pow(T1(3, 1, 2), 2)
    G = group_of(build_group(T1(3, 1, 2), 2))
    assert zp.size == 2 and G.power(G.gen("a"), 4) in zp
    zp = center_pow(T1(4, 2, 2), 3)
    G = group_of(build_group(T1(4, 2, 2), 3))
    assert zp.size == 3 and G.power(G.gen("a"), 27) in zp


def test_ancestor_examples():
    assert direct_ancestors(AbelianA(2), 6) == sorted([T1(3, 2, 2), T1(3, 3, 2), T1(4, 2, 3)])
    assert direct_ancestors(AbelianB(1), 4) == [T1(3, 1, 2)]
    assert direct_ancestors(T2(5, 4, 3, 2), 40) == []


def _all_params(bound):
    for x in range(4, bound + 1):
        en = enumerate_rank2(x)
        yield from en.type1 + en.type2


def test_ancestors_invert_descendant():
    bound = 12
    targets = {descendant(q) for q in _all_params(bound)}
    for t in targets:
        pre = sorted(q for q in _all_params(bound) if descendant(q) == t)
        assert direct_ancestors(t, bound) == pre
    assert not any(isinstance(t, Rank2Params) and t.variant == "II" for t in targets)


def test_infinite_branch():
    br = infinite_branch(2, 2, 3)
    assert br == [AbelianA(2), T1(3, 3, 2), T1(4, 4, 2), T1(5, 5, 2)]
    assert all(descendant(b) == a for a, b in zip(br, br[1:]))
    assert infinite_branch(3, 4, 0) == [AbelianA(3)]
    with pytest.raises(ValueError):
        infinite_branch(3, 2, 2)


@pytest.mark.parametrize("q", [T1(5, 1, 4), T2(5, 4, 3, 2), T1(4, 3, 2), T1(4, 4, 2)])
def test_verify_descendant(q):
    chk = verify_descendant(q, 3)
    assert chk.ok, chk.message
    assert chk.parent_class == chk.child_class + 1
    assert (chk.parent_coclass == chk.child_coclass) == (chk.center_pow_exp == 1)


def test_parse_descriptor():
    assert parse_descriptor("A(3)") == AbelianA(3)
    assert parse_descriptor("Ab(2,3)") == AbelianB(2)
    assert parse_descriptor("G(5,4,3,2)") == T2(5, 4, 3, 2)
    with pytest.raises(ValueError):
        parse_descriptor("Z(1)")


def test_outputs():
    edges = chain_edges(infinite_branch(2, 2, 2))
    data = json.loads(edges_json(edges))
    assert {e["child"] for e in data["edges"]} == {"A(2)", "G(3,3,2)"}
    node = {n["id"]: n for n in data["nodes"]}["G(4,4,2)"]
    G = group_of(build_group(T1(4, 4, 2), 3))
    assert node["class"] == props.powerful_class(G)
    dot = edges_dot(edges)
    assert dot.startswith("digraph") and '"G(3,3,2)" -> "A(2)" [label="a"]' in dot
