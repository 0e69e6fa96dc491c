import itertools

import numpy as np
import pytest

from pnilpotent.catalog import (
    build_B331_display,
    build_E,
    build_family_A,
    catalog_for_order,
    excluded_at_2,
    _e_lambda,
)
from pnilpotent.group import group_of, subgroup_closure
from pnilpotent.isomorphism import (
    BudgetExceeded,
    is_isomorphism,
    iso_search,
    minimal_generators,
    substitution_check,
    verify_distinct,
    verify_lambda_square,
)
from pnilpotent.presentation import PcPresentation


def brute_isomorphic(G, H) -> bool:
    """Try every image tuple for a generating set of G (vectorised over tuples)."""
    if G.size != H.size:
        return False
    gens = minimal_generators(G)
    assert subgroup_closure(G, gens).size == G.size
    d = len(gens)
    tuples = np.array(list(itertools.product(range(H.size), repeat=d)), dtype=np.intp)
    imgs = [tuples[:, j] for j in range(d)]
    f = np.full((G.size, len(tuples)), -1, dtype=np.intp)
    f[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for j, s in enumerate(gens):
                y = int(G.mul(x, s))
                if f[y, 0] < 0:
                    f[y] = H.mul(f[x], imgs[j])
                    nxt.append(y)
        frontier = nxt
    ok = np.ones(len(tuples), dtype=bool)
    for j, s in enumerate(gens):
        for x in range(G.size):
            ok &= f[int(G.mul(x, s))] == H.mul(f[x], imgs[j])
    srt = np.sort(f[:, ok], axis=0)
    return bool(np.any(np.all(srt == np.arange(G.size)[:, None], axis=0)))


def _extra_16():
    # D8 x C2 and Q8 x C2 style groups of order 16 that are not powerful
    d8 = PcPresentation.from_relations(2, [("s", 1), ("r", 2), ("z", 1)], {}, [("r", "s", [("r", 2)])])
    q8 = PcPresentation.from_relations(
        2, [("i", 1), ("j", 1), ("m", 1), ("z", 1)], {"i": [("m", 1)], "j": [("m", 1)]}, [("i", "j", [("m", 1)])]
    )
    # G(3,1,2) rewritten with b -> b a^2, and C4 x C2 x C2 with a power relation
    g312b = PcPresentation.from_relations(2, [("b", 1), ("a", 3)], {"b": [("a", 4)]}, [("a", "b", [("a", 4)])])
    c4 = PcPresentation.from_relations(2, [("x", 1), ("y", 1), ("z", 1), ("w", 1)], {"x": [("y", 1)]}, [])
    return [group_of(d8), group_of(q8), group_of(g312b), group_of(c4)]


def test_against_brute_force_order_16():
    groups = [e.group for e in catalog_for_order(2, 4) + excluded_at_2(4)] + _extra_16()
    groups = [G for G in groups if len(minimal_generators(G)) <= 3]
    assert len(groups) >= 6
    positives = 0
    for G, H in itertools.combinations_with_replacement(groups, 2):
        res = iso_search(G, H)
        assert (res is not None) == brute_isomorphic(G, H)
        if res is not None:
            assert is_isomorphism(G, H, res)
            positives += G is not H
    assert positives >= 2


def test_against_brute_force_order_81():
    groups = [e.group for e in catalog_for_order(3, 4) if len(minimal_generators(e.group)) <= 2]
    groups.append(group_of(build_family_A(2, 2, 1, 3).presentation))
    for G, H in itertools.combinations_with_replacement(groups, 2):
        assert (iso_search(G, H) is not None) == brute_isomorphic(G, H)


def test_identity_map():
    G = build_E(7, 3).group
    res = iso_search(G, G)
    assert res is not None and is_isomorphism(G, G, res)


def test_e8_e9_exhausted_at_three():
    stats = {}
    assert iso_search(build_E(8, 3).group, build_E(9, 3).group, stats=stats) is None
    assert stats["decided_by"] == "search" and stats["nodes"] > 0


def test_lambda_rescaling_at_five():
    for lam in range(1, 5):
        for rho in range(1, 5):
            G = group_of(_e_lambda(5, lam))
            H = group_of(_e_lambda(5, lam * rho * rho % 5))
            res = iso_search(G, H)
            assert res is not None and is_isomorphism(G, H, res)


def test_b331_display_matches_template():
    for p in (2, 3):
        D = group_of(build_B331_display(p))
        A = build_family_A(3, 3, 1, p).group
        res = iso_search(D, A)
        assert res is not None and is_isomorphism(D, A, res)


def test_budget_exceeded():
    with pytest.raises(BudgetExceeded):
        iso_search(build_E(8, 5).group, build_E(9, 5).group, budget=3)


def test_verify_distinct_reports():
    rep = verify_distinct(catalog_for_order(3, 4))
    assert rep.ok and rep.by_invariants == 21
    dup = catalog_for_order(3, 4)[:2] * 2
    assert not verify_distinct(dup).ok


@pytest.mark.parametrize("p,squares", [(3, {1}), (5, {1, 4})])
def test_lambda_classes(p, squares):
    rep = verify_lambda_square(p, samples=None if p == 3 else 5000)
    assert rep.ok
    assert {lam for lam, r in rep.class_of.items() if r == 1} == squares


def test_substitution_rule_detects_wrong_lambda():
    # the predicted parameter is r^2 lam; a wrong lam must produce mismatches
    checked, valid, bad = substitution_check(3, 1)
    assert bad == 0 and valid > 0
    import pnilpotent.isomorphism as iso

    orig = iso.group_of_cached
    try:
        iso.group_of_cached = lambda pres: orig(_e_lambda(3, 2))
        assert substitution_check(3, 1)[2] > 0
    finally:
        iso.group_of_cached = orig
