import pytest

from pnilpotent import props
from pnilpotent.group import group_of, quotient, subgroup_closure
from pnilpotent.rank2 import (
    NotRank2,
    Rank2Params,
    build_group,
    count_brute,
    count_closed,
    enumerate_rank2,
    structure_invariants,
    type1_closed,
    type2_erratum_report,
    validate,
)
from pnilpotent.catalog import build_abelian

T1, T2 = Rank2Params.type1, Rank2Params.type2


def test_validate_examples():
    assert validate(T1(3, 1, 2))
    assert not validate(T1(2, 1, 2))
    assert validate(T2(5, 4, 3, 2))
    assert validate(T2(4, 4, 3, 2))


def test_enumerate_small_orders():
    en = enumerate_rank2(6)
    assert en.abelian == [(5, 1), (4, 2), (3, 3)]
    assert set(en.type1) == {T1(3, 3, 2), T1(4, 2, 2), T1(4, 2, 3), T1(5, 1, 4)}
    assert en.type2 == []
    en3 = enumerate_rank2(3)
    assert en3.abelian == [(2, 1)] and not en3.type1 and not en3.type2


def test_first_type2_group():
    # brute force over the constraint system, independent of enumerate_rank2
    found = [
        (n, m, l, r)
        for n in range(1, 8)
        for m in range(1, 8)
        for l in range(1, 8)
        for r in range(1, 8)
        if n + m == 8 and 2 <= r < l <= n - 1 and n - r <= l < m
    ]
    assert found == [(4, 4, 3, 2)]
    assert enumerate_rank2(8).type2 == [T2(4, 4, 3, 2)]
    assert all(not enumerate_rank2(x).type2 for x in range(1, 8))


@pytest.mark.parametrize("x,total", [(4, 3), (5, 4), (6, 7), (7, 9), (8, 14), (9, 18), (10, 25)])
def test_count_spot_values(x, total):
    assert count_closed(x).total == total == count_brute(x).total


def test_count_breakdowns():
    c = count_brute(10)
    assert (c.abelian, c.type1, c.type2, c.total) == (5, 16, 4, 25)
    assert c.abelian + c.type1 + c.type2 == c.total
    assert type1_closed(5) == 2
    assert count_brute(7).type2 == 0


def test_type2_display_has_no_errata():
    assert type2_erratum_report(8, 120) == {}


@pytest.mark.parametrize("q", [T1(4, 2, 3), T2(5, 4, 3, 2), T2(4, 4, 3, 2), T1(3, 3, 2)])
def test_round_trip(q):
    assert structure_invariants(group_of(build_group(q, 3))) == q


def test_abelian_rejected():
    with pytest.raises(NotRank2):
        structure_invariants(build_abelian((2, 2), 3).group)


def test_groups_are_metacyclic_and_pn():
    for x in range(4, 9):
        en = enumerate_rank2(x)
        for q in en.type1 + en.type2:
            G = group_of(build_group(q, 3 if x <= 8 else 2))
            A = subgroup_closure(G, [G.gen("a")])
            assert A.is_normal()
            Q = quotient(G, A)
            assert any(Q.order_of(g) == Q.size for g in Q.elements)
            assert props.is_powerfully_nilpotent(G) and props.is_strongly_powerful(G)


def test_type2_separated_from_type1():
    for x in range(8, 11):
        en = enumerate_rank2(x)
        for q in en.type2:
            G = group_of(build_group(q, 3))
            assert props.agemo(G, q.m).order_exp > max(q.n - q.m, 0)
        for q in en.type1:
            G = group_of(build_group(q, 3))
            assert props.agemo(G, q.m).order_exp <= max(q.n - q.m, 0)
