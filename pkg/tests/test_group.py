import numpy as np
import pytest
from hypothesis import given, strategies as st

from pnilpotent import collect, kernels, props
from pnilpotent.group import (
    NotNormal,
    consistency_check,
    group_of,
    quotient,
    subgroup_closure,
)
from pnilpotent.presentation import PcPresentation
from pnilpotent.rank2 import Rank2Params, build_group

from strategies import small_presentations


def elements(G, data, n=3):
    return [data.draw(st.integers(0, G.size - 1)) for _ in range(n)]


@given(small_presentations(), st.data())
def test_associativity_and_identity(pres, data):
    G = group_of(pres)
    x, y, z = elements(G, data)
    assert G.mul(G.mul(x, y), z) == G.mul(x, G.mul(y, z))
    assert G.mul(x, 0) == x and G.mul(0, x) == x
    assert G.mul(x, G.inv(x)) == 0


@given(small_presentations(), st.data())
def test_tables_agree_with_collector(pres, data):
    G = group_of(pres)
    x, y = elements(G, data, 2)
    prod = collect.multiply(pres, G.tuple_of(x), G.tuple_of(y))
    assert G.element(prod) == G.mul(x, y)


@given(small_presentations(), st.data())
def test_lagrange(pres, data):
    G = group_of(pres)
    gens = elements(G, data, data.draw(st.integers(1, 2)))
    H = subgroup_closure(G, gens)
    assert G.size % H.size == 0
    assert all(G.size % G.order_of(g) == 0 for g in gens)


@given(small_presentations())
def test_quotient_orders(pres):
    G = group_of(pres)
    for N in (props.center(G), props.derived_subgroup(G), props.agemo(G, 1)):
        Q = quotient(G, N)
        assert Q.size * N.size == G.size
        x = Q.generators[0] if Q.generators else 0
        assert Q.mul(x, Q.inv(x)) == 0


@given(small_presentations(), st.data())
def test_backends_agree(pres, data):
    if not kernels.CYTHON_AVAILABLE:
        pytest.skip("compiled kernels not built")
    k = pres.rank
    word = data.draw(st.lists(st.tuples(st.integers(0, k - 1), st.integers(1, pres.prime - 1 or 1)), max_size=10))
    prev = kernels.use_backend("python")
    try:
        py = kernels.collect(pres.data, [0] * k, word)
    finally:
        kernels.use_backend(prev)
    prev = kernels.use_backend("cython")
    try:
        cy = kernels.collect(pres.data, [0] * k, word)
    finally:
        kernels.use_backend(prev)
    assert py == cy


def test_python_fallback_builds_groups():
    prev = kernels.use_backend("python")
    try:
        pres = build_group(Rank2Params.type1(4, 2, 3), 3)
        assert consistency_check(pres)
    finally:
        kernels.use_backend(prev)


def test_consistency_failure_detected():
    # [a, b] = a in a group of order p^2 cannot hold
    bad = PcPresentation.from_relations(3, [("b", 1), ("a", 1)], {}, [("a", "b", [("a", 1)])])
    rep = consistency_check(bad)
    assert not rep and rep.relation


def test_g312_at_two():
    G = group_of(build_group(Rank2Params.type1(3, 1, 2), 2))
    a, b = G.gen("a"), G.gen("b")
    assert G.size == 16
    assert G.order_of(a) == 8 and G.order_of(b) == 2
    assert G.mul(a, b) == G.mul(b, int(G.power(a, 5)))
    assert G.comm(a, b) == G.power(a, 4)


def test_quotient_requires_normal():
    G = group_of(build_group(Rank2Params.type1(3, 1, 2), 2))
    H = subgroup_closure(G, [G.gen("b")])
    with pytest.raises(NotNormal):
        quotient(G, H)


def test_subgroup_masks():
    G = group_of(build_group(Rank2Params.type1(3, 1, 2), 3))
    Z = props.center(G)
    assert Z.is_normal() and Z.is_abelian()
    assert np.all(G.comm(Z.elements, G.gen("b")) == 0)
