"""Powerfully nilpotent groups of order ``p^x`` for ``x <= 6``.

Families:

* ``A(n, t, s)``: ``a_1 .. a_t`` of order ``p``, central ``b`` of order
  ``p^n``, ``[a_{2i-1}, a_{2i}] = b^{p^{n-1}}`` for ``i <= s``.
* ``B(n, t, s)``: as ``A`` but ``[a_{2s+1}, b] = b^{p^{n-1}}``.
* ``E1 .. E12``: sporadic groups of orders ``p^5`` and ``p^6``.
* ``G(...)``: rank-2 groups (see :mod:`pnilpotent.rank2`).
* abelian groups, one per partition of ``x``.

For ``p = 2`` only the groups that stay powerful are listed.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from . import props
from .group import FiniteGroup, group_of, power_subgroup
from .presentation import PcPresentation
from .rank2 import Rank2Params, build_group, enumerate_rank2

FAMILY_RANK = {"abelian": 0, "A": 1, "B": 2, "E": 3, "G": 4}


@dataclass(frozen=True)
class CatalogEntry:
    family: str  # abelian, A, B, E or G
    params: tuple
    presentation: PcPresentation = field(compare=False, repr=False)

    @property
    def order_exp(self) -> int:
        return self.presentation.order_exp

    @property
    def p(self) -> int:
        return self.presentation.prime

    @property
    def label(self) -> str:
        if self.family == "abelian":
            return "Ab(" + ",".join(str(v) for v in self.params) + ")"
        if self.family == "E":
            idx, lam = self.params
            return f"E{idx}" if idx != 9 else f"E9[lambda={lam}]"
        if self.family == "G":
            return "G(" + ",".join(str(v) for v in self.params) + ")"
        return f"{self.family}(" + ",".join(str(v) for v in self.params) + ")"

    @property
    def sort_key(self) -> tuple:
        return (FAMILY_RANK[self.family], self.params)

    @property
    def group(self) -> FiniteGroup:
        return group_of(self.presentation)

    def display_generators(self) -> list[str]:
        """Generators of the displayed presentation (``bp`` only refines the pc series)."""
        return [g for g in self.presentation.names if g != "bp"]

    def declared_type(self) -> tuple[int, ...]:
        """Orders (as exponents of ``p``) of the displayed generators, increasing."""
        G = self.group
        return tuple(sorted(G.order_exp_of(G.gen(g)) for g in self.display_generators()))

    def to_dict(self, with_properties: bool = False) -> dict[str, Any]:
        d: dict[str, Any] = {
            "label": self.label,
            "family": self.family,
            "params": list(self.params),
            "order_exp": self.order_exp,
            "presentation": self.presentation.to_dict(),
        }
        if with_properties:
            d["properties"] = props.property_report(self.group)
        return d


# -- builders ----------------------------------------------------------------------


def build_abelian(partition, p: int) -> CatalogEntry:
    parts = tuple(sorted((int(v) for v in partition), reverse=True))
    if not parts or min(parts) < 1:
        raise ValueError("partition parts must be positive")
    gens = [(f"g{i + 1}", e) for i, e in enumerate(parts)]
    return CatalogEntry("abelian", parts, PcPresentation.from_relations(p, gens))


def _a_names(t: int) -> list[str]:
    return [f"a{i + 1}" for i in range(t)]


def build_family_A(n: int, t: int, s: int, p: int) -> CatalogEntry:
    if n < 2 or t < 2 or not 1 <= s <= t // 2:
        raise ValueError(f"A({n},{t},{s}) needs n >= 2, t >= 2, 1 <= s <= t/2")
    names = _a_names(t)
    top = [("b", p ** (n - 1))]
    comms = [(names[2 * i], names[2 * i + 1], top) for i in range(s)]
    gens = [(a, 1) for a in names] + [("b", n)]
    return CatalogEntry("A", (n, t, s), PcPresentation.from_relations(p, gens, {}, comms))


def build_family_B(n: int, t: int, s: int, p: int, *, allow_small: bool = False) -> CatalogEntry:
    """``B(n, t, s)``; ``allow_small`` admits ``n = 2`` for negative checks."""
    if (n < 3 and not allow_small) or n < 2 or t < 2 or not 0 <= s <= (t - 1) // 2:
        raise ValueError(f"B({n},{t},{s}) needs n >= 3, t >= 2, 0 <= s <= (t-1)/2")
    names = _a_names(t)
    top = [("b", p ** (n - 1))]
    comms = [(names[2 * i], names[2 * i + 1], top) for i in range(s)]
    comms.append((names[2 * s], "b", top))
    gens = [(a, 1) for a in names] + [("b", n)]
    return CatalogEntry("B", (n, t, s), PcPresentation.from_relations(p, gens, {}, comms))


def build_B331_display(p: int) -> PcPresentation:
    """Variant of ``B(3,3,1)`` with ``[a, b] = [a, d] = d^{p^2}``.

    This differs from the ``B(n, t, s)`` template, where the ``b``-commutator
    sits on ``a_3``, and turns out to be isomorphic to ``A(3,3,1)``.
    """
    top = [("d", p**2)]
    return PcPresentation.from_relations(
        p,
        [("a", 1), ("b", 1), ("c", 1), ("d", 3)],
        {},
        [("a", "b", top), ("a", "d", top)],
    )


def least_nonsquare(p: int) -> int:
    if p == 2:
        raise ValueError("every unit is a square mod 2")
    for v in range(2, p):
        if pow(v, (p - 1) // 2, p) == p - 1:
            return v
    raise AssertionError("unreachable")


def is_square_mod(v: int, p: int) -> bool:
    return pow(v % p, (p - 1) // 2, p) == 1


def _e_lambda(p: int, lam: int) -> PcPresentation:
    # generators a, b, c and bp = b^p; bp after c keeps [a, c] = b^p in the tail
    return PcPresentation.from_relations(
        p,
        [("a", 1), ("b", 1), ("c", 3), ("bp", 1)],
        {"b": [("bp", 1)]},
        [("a", "b", [("c", p**2 * lam)]), ("a", "c", [("bp", 1)])],
    )


def build_E(index: int, p: int, lam: int | None = None) -> CatalogEntry:
    """Sporadic groups ``E1 .. E12``; ``lam`` is only used by ``E9``."""
    P = p
    abc_1_2_3 = [("a", 1), ("b", 2), ("c", 3)]
    if index == 1:
        pres = PcPresentation.from_relations(
            P, [("a", 1), ("b", 2), ("c", 2)], {}, [("a", "b", [("c", P)])]
        )
    elif index == 2:
        pres = PcPresentation.from_relations(
            P, [("a", 2), ("b", 2), ("c", 2)], {}, [("a", "b", [("c", P)])]
        )
    elif index == 3:
        pres = PcPresentation.from_relations(P, abc_1_2_3, {}, [("b", "c", [("c", P**2)])])
    elif index == 4:
        pres = PcPresentation.from_relations(P, abc_1_2_3, {}, [("a", "c", [("c", P**2)])])
    elif index == 5:
        pres = PcPresentation.from_relations(P, abc_1_2_3, {}, [("a", "b", [("c", P**2)])])
    elif index == 6:
        pres = PcPresentation.from_relations(
            P, [("a", 1), ("c", 3), ("b", 2)], {}, [("a", "c", [("b", P)])]
        )
    elif index == 7:
        pres = PcPresentation.from_relations(
            P,
            [("a", 1), ("b", 1), ("c", 3), ("bp", 1)],
            {"b": [("bp", 1)]},
            [("a", "c", [("bp", 1)]), ("b", "c", [("c", P**2)])],
        )
    elif index == 8:
        lam = 1
        pres = _e_lambda(P, 1)
    elif index == 9:
        if lam is None:
            lam = least_nonsquare(P)
        if lam % P == 0:
            raise ValueError("lambda must be a unit mod p")
        pres = _e_lambda(P, lam % P)
    elif index in (10, 11, 12):
        gens = [("a", 1), ("b", 1), ("c", 2), ("d", 2)]
        comms = {
            10: [("a", "b", [("c", P)])],
            11: [("b", "c", [("d", P)])],
            12: [("a", "b", [("c", P)]), ("a", "c", [("d", P)])],
        }[index]
        pres = PcPresentation.from_relations(P, gens, {}, comms)
    else:
        raise ValueError(f"no group E{index}")
    return CatalogEntry("E", (index, lam if index == 9 else None), pres)


def build_G(params: Rank2Params | tuple, p: int) -> CatalogEntry:
    if not isinstance(params, Rank2Params):
        params = Rank2Params.type1(*params) if len(params) == 3 else Rank2Params.type2(*params)
    key = (params.n, params.m, params.r) if params.variant == "I" else (params.n, params.m, params.l, params.r)
    return CatalogEntry("G", key, build_group(params, p))


# -- the lists ---------------------------------------------------------------------


def partitions(x: int, largest: int | None = None):
    if largest is None:
        largest = x
    if x == 0:
        yield ()
        return
    for first in range(min(x, largest), 0, -1):
        for rest in partitions(x - first, first):
            yield (first,) + rest


# nonabelian, non rank-2 entries by order exponent; (family, params)
_SPORADIC = {
    4: [("A", (2, 2, 1))],
    5: [("A", (2, 3, 1)), ("A", (3, 2, 1)), ("B", (3, 2, 0)), ("E", 1)],
    6: [
        ("A", (2, 4, 1)),
        ("A", (2, 4, 2)),
        ("A", (3, 3, 1)),
        ("A", (4, 2, 1)),
        ("B", (3, 3, 0)),
        ("B", (3, 3, 1)),
        ("B", (4, 2, 0)),
    ]
    + [("E", i) for i in range(2, 13)],
}

# entries that are not powerful when p = 2 (exponent-4 obstruction)
_EXCLUDED_AT_2 = {("A", (2, 2, 1)), ("A", (2, 3, 1)), ("A", (2, 4, 1)), ("A", (2, 4, 2))} | {
    ("E", i) for i in (1, 2, 6, 7, 8, 9, 10, 11, 12)
}


def sporadic_entries(p: int, x: int, include_excluded: bool = False) -> list[CatalogEntry]:
    out = []
    for fam, par in _SPORADIC.get(x, []):
        if p == 2 and not include_excluded and (fam, par) in _EXCLUDED_AT_2:
            continue
        if fam == "A":
            out.append(build_family_A(*par, p))
        elif fam == "B":
            out.append(build_family_B(*par, p))
        elif p == 2 and par in (8, 9):
            continue  # no nonsquares mod 2
        else:
            out.append(build_E(par, p))
    return out


def catalog_for_order(p: int, x: int) -> list[CatalogEntry]:
    """Every powerfully nilpotent group of order ``p^x``, ``1 <= x <= 6``."""
    if x < 1 or x > 6:
        raise ValueError("orders p^1 .. p^6 are supported")
    if p < 2 or any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    entries = [build_abelian(part, p) for part in partitions(x)]
    entries += sporadic_entries(p, x)
    rk = enumerate_rank2(x)
    entries += [build_G(q, p) for q in rk.type1 + rk.type2]
    return sorted(entries, key=lambda e: e.sort_key)


def excluded_at_2(x: int) -> list[CatalogEntry]:
    """The odd-p entries that are dropped at ``p = 2`` (for negative checks)."""
    return [
        e
        for e in sporadic_entries(2, x, include_excluded=True)
        if (e.family, e.params if e.family != "E" else e.params[0]) in _EXCLUDED_AT_2
    ]


# -- fingerprints --------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    order_exp: int
    abelianization: tuple[int, ...]
    exponent: int
    center_exp: int
    center_pow_exp: int
    derived_exp: int
    agemo: tuple[int, ...]
    omega: tuple[int, ...]
    order_histogram: tuple[tuple[int, int], ...]
    powerful_class: int | None
    coclass: int | None
    type: tuple[int, ...] | None

    def as_tuple(self) -> tuple:
        return tuple(self.__dict__.values())


def fingerprint(G: FiniteGroup) -> Fingerprint:
    info = props.upper_series(G)
    try:
        typ = props.type_signature(G).as_tuple() if props.is_powerful(G) else None
    except props.NotPowerful:
        typ = None
    z = props.center(G)
    hist = Counter(int(v) for v in G.orders)
    return Fingerprint(
        G.order_exp,
        props.abelianization(G),
        G.exponent,
        z.order_exp,
        power_subgroup(z, G.p).order_exp,
        props.derived_subgroup(G).order_exp,
        props.agemo_exps(G),
        props.omega_exps(G),
        tuple(sorted(hist.items())),
        info.powerful_class,
        info.powerful_coclass,
        typ,
    )


def type_1t_n_check(entry: CatalogEntry) -> bool:
    """For type ``(1^t, n)`` groups: ``G^p`` is cyclic and central."""
    G = entry.group
    gp = props.agemo(G, 1)
    cyclic = bool(np.any(G.orders[gp.elements] == gp.size))
    return cyclic and gp <= props.center(G)
