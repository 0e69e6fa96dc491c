"""Acceptance criteria 1-10, one test each.

Every test prints a single ``[PASS]`` / ``[FAIL]`` line; the lines are also
repeated in the pytest terminal summary.  Run standalone with
``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import time

import pytest

from pnilpotent import suites
from pnilpotent.catalog import is_square_mod

RESULTS: list[str] = []


def report(number: int, title: str, ok: bool, seconds: float, note: str = "") -> None:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2}: {title} ({seconds:.1f}s){' - ' + note if note else ''}"
    RESULTS.append(line)
    print(line)


def test_criterion_01_count_equivalence():
    r = suites.count_equivalence(4, 200)
    ok = r.ok and r.seconds < 5.0
    report(1, "closed count = brute count for 4 <= x <= 200, under 5 s", ok, r.seconds,
           f"mismatches {r.details['mismatches']}, spot mismatches {r.details['spot_mismatches']}")
    assert ok, r.details


def test_criterion_02_type1_formula():
    r = suites.type1_formula(4, 200)
    ok = r.ok and r.details["parities"] == [0, 1]
    report(2, "type-I closed form = brute type-I counts, both parities", ok, r.seconds)
    assert ok, r.details


def test_criterion_03_type2_display():
    r = suites.type2_display(8, 200)
    note = "display agrees with brute counts" if r.details["agrees"] else f"erratum at x = {sorted(r.details['errata'])}"
    report(3, "type-II closed display shadow test for 8 <= x <= 200", r.ok, r.seconds, note)
    assert r.ok


def test_criterion_04_catalog_counts():
    r = suites.catalog_counts((2, 3, 5), range(4, 7))
    ok = r.ok and r.seconds < 60
    report(4, "catalog sizes 7/13/33 (p = 3, 5) and 6/11/23 (p = 2), under 1 min", ok, r.seconds,
           ", ".join(f"{k}: {v}" for k, v in r.details["counts"].items()))
    assert ok, r.details


def test_criterion_05_membership():
    r = suites.membership((2, 3), range(1, 7))
    ok = r.ok and r.seconds < 600
    report(5, "consistent, powerful, powerfully nilpotent (+ strongly powerful where required)", ok, r.seconds,
           f"{r.details['checked']} entries, {len(r.details['failures'])} failures")
    assert ok, r.details


def test_criterion_06_distinctness():
    r = suites.distinctness((2, 3, 5), range(4, 7), (3, 5, 7))
    lam = r.details["lambda"]
    e89 = lam["3"]["distinct_proven"] and lam["3"]["distinct_decided_by"] == "search"
    classes_ok = all(
        {int(k) for k, v in lam[str(p)]["class_of"].items() if v == 1} == {x for x in range(1, p) if is_square_mod(x, p)}
        and len(lam[str(p)]["class_of"]) == p - 1
        for p in (3, 5, 7)
    )
    ok = r.ok and e89 and classes_ok and r.seconds < 1800
    searched = sum(len(c["pairs_by_search"]) for c in r.details["catalogs"].values())
    report(6, "catalogs pairwise distinct, E8 vs E9 exhausted at p = 3, square classes at p = 3, 5, 7", ok,
           r.seconds, f"{searched} pairs settled by iso_search, E8/E9 search nodes {lam['3']['distinct_nodes']}")
    assert ok, r.details


def test_criterion_07_round_trip():
    r = suites.round_trip(3, 12)
    report(7, "structure_invariants(build_group(q)) = q for x <= 12, p = 3", r.ok, r.seconds,
           f"{r.details['tuples']} tuples, {len(r.details['failures'])} failures")
    assert r.ok, r.details


def test_criterion_08_descendants():
    r = suites.descendant_sweep((2, 3), 10)
    report(8, "descendants match concrete quotients for n+m <= 10, p = 2, 3, with class/coclass relations",
           r.ok, r.seconds, f"{r.details['checked']} checks, {len(r.details['failures'])} failures")
    assert r.ok, r.details


def test_criterion_09_structure():
    r = suites.structural_spot_checks(3, 10)
    report(9, "center of type I; |[G,G]| and |G^(p^m)| of type II (x <= 10, p = 3)", r.ok, r.seconds,
           f"{r.details['type1']} type I, {r.details['type2']} type II")
    assert r.ok, r.details


def test_criterion_10_properties():
    r = suites.property_suite((2, 3), range(1, 7))
    report(10, "upper series, first term = center, no small non-abelian examples, type signatures", r.ok,
           r.seconds, f"{r.details['checked']} catalog entries")
    assert r.ok, r.details


if __name__ == "__main__":
    t0 = time.perf_counter()
    failed = 0
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    print(f"{10 - failed}/10 criteria passed in {time.perf_counter() - t0:.1f}s")
    raise SystemExit(1 if failed else 0)
