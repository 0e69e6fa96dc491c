import pytest

from pnilpotent import props
from pnilpotent.catalog import (
    build_B331_display,
    build_E,
    build_family_A,
    build_family_B,
    catalog_for_order,
    excluded_at_2,
    fingerprint,
    least_nonsquare,
    type_1t_n_check,
)
from pnilpotent.group import consistency_check, power_subgroup


def labels(p, x):
    return [e.label for e in catalog_for_order(p, x)]


def test_order_p4():
    got = labels(3, 4)
    assert len(got) == 7
    assert sum(lab.startswith("Ab") for lab in got) == 5
    assert "A(2,2,1)" in got and "G(3,1,2)" in got


def test_order_64_list():
    non_abelian = [lab for lab in labels(2, 6) if not lab.startswith("Ab")]
    assert sorted(non_abelian) == sorted(
        ["E3", "E4", "E5", "A(3,3,1)", "A(4,2,1)", "B(3,3,0)", "B(3,3,1)", "B(4,2,0)",
         "G(3,3,2)", "G(5,1,4)", "G(4,2,2)", "G(4,2,3)"]
    )


@pytest.mark.parametrize("p,counts", [(2, [1, 2, 3, 6, 11, 23]), (3, [1, 2, 3, 7, 13, 33])])
def test_counts(p, counts):
    assert [len(catalog_for_order(p, x)) for x in range(1, 7)] == counts


def test_unsupported_order():
    with pytest.raises(ValueError):
        catalog_for_order(3, 7)


def test_excluded_at_two_are_not_powerful():
    for x in (4, 5, 6):
        for e in excluded_at_2(x):
            assert not props.is_powerful(e.group), e.label


def test_builders():
    e = build_family_A(2, 2, 1, 3)
    G = e.group
    assert G.order_exp == 4 and consistency_check(e.presentation)
    assert props.center(G).order_exp == 2
    e9 = build_E(9, 5, 2)
    assert e9.params == (9, 2) and least_nonsquare(5) == 2 and least_nonsquare(7) == 3
    with pytest.raises(ValueError):
        build_family_B(2, 2, 0, 3)
    with pytest.raises(ValueError):
        build_family_A(2, 3, 2, 3)


def test_family_sizes():
    for t in range(2, 6):
        assert len({build_family_A(2, t, s, 3).label for s in range(1, t // 2 + 1)}) == t // 2
        assert len({build_family_B(3, t, s, 3).label for s in range((t - 1) // 2 + 1)}) == (t + 1) // 2


def test_b_needs_n_at_least_three():
    G = build_family_B(2, 2, 0, 3, allow_small=True).group
    assert power_subgroup(props.center(G), 3).size == 1
    assert not props.is_powerfully_nilpotent(G)


def test_b331_display_consistent():
    assert consistency_check(build_B331_display(3))


def test_e10_center_power():
    for p in (3, 5):
        G = build_E(10, p).group
        assert power_subgroup(props.center(G), p).order_exp == 2


def test_e2_unique_222():
    for p in (3, 5):
        hits = [e.label for e in catalog_for_order(p, 6)
                if props.type_signature(e.group).as_tuple() == (2, 2, 2) and not e.group.is_abelian()]
        assert hits == ["E2"]


def test_type_1t_n_entries():
    for x in (4, 5, 6):
        for e in catalog_for_order(3, x):
            t = e.declared_type()
            if not e.group.is_abelian() and t[:-1] == (1,) * (len(t) - 1):
                assert type_1t_n_check(e), e.label


def test_fingerprints():
    a = build_family_A(2, 2, 1, 3).group
    g = [e for e in catalog_for_order(3, 4) if e.label == "G(3,1,2)"][0].group
    assert fingerprint(a).abelianization == (1, 1, 1)
    assert fingerprint(g).abelianization == (2, 1)
    assert fingerprint(build_E(8, 3).group) == fingerprint(build_E(9, 3).group)
    assert fingerprint(a) == fingerprint(build_family_A(2, 2, 1, 3).group)


def test_catalog_sorted_and_serialisable():
    es = catalog_for_order(3, 6)
    assert [e.sort_key for e in es] == sorted(e.sort_key for e in es)
    d = es[0].to_dict(with_properties=True)
    assert d["properties"]["is_pn"]
