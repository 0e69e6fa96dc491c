"""Characteristic subgroups and powerful / powerfully nilpotent properties.

All functions take any :class:`~pnilpotent.group.FiniteGroup` (pc groups and
quotients alike).  Results are cached on the group object since the groups are
immutable.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .group import (
    FiniteGroup,
    Subgroup,
    normal_closure,
    power_subgroup,
    quotient,
    subgroup_of_set,
    trivial,
    whole,
)


class NotPowerful(ValueError):
    """Raised when an operation needs a powerful group."""


def _cached(fn):
    @functools.wraps(fn)
    def wrapper(G, *args):
        cache = G.__dict__.setdefault("_props_cache", {})
        key = (fn.__name__,) + args
        if key not in cache:
            cache[key] = fn(G, *args)
        return cache[key]

    return wrapper


# -- subgroups -------------------------------------------------------------------


@_cached
def agemo(G: FiniteGroup, k: int) -> Subgroup:
    """``G^{p^k}``, generated by all ``p^k``-th powers."""
    if k == 0:
        return whole(G)
    return subgroup_of_set(G, G.power_pk(G.elements, k))


@_cached
def derived_subgroup(G: FiniteGroup) -> Subgroup:
    gens = G.generators
    comms = [int(G.comm(a, b)) for i, a in enumerate(gens) for b in gens[i + 1 :]]
    return normal_closure(G, comms)


@_cached
def center(G: FiniteGroup) -> Subgroup:
    x = G.elements
    mask = np.ones(G.size, dtype=bool)
    for g in G.generators:
        mask &= G.comm(x, g) == 0
    return Subgroup(G, mask)


@_cached
def omega(G: FiniteGroup, k: int) -> Subgroup:
    """``Omega_k(G)``, generated by the elements of order dividing ``p^k``."""
    return subgroup_of_set(G, np.flatnonzero(G.orders <= G.p**k))


def commutator_with_group(G: FiniteGroup, H: Subgroup) -> Subgroup:
    """``[H, G]``; ``H`` need not be normal."""
    h = H.elements
    comms = np.concatenate([G.comm(h, g) for g in G.generators]) if G.generators else h[:0]
    return normal_closure(G, np.unique(comms))


def abelian_invariants(G: FiniteGroup) -> tuple[int, ...]:
    """Exponents ``(l_1 >= l_2 >= ...)`` with ``G = prod C_{p^{l_i}}`` (G abelian)."""
    if not G.is_abelian():
        raise ValueError("group is not abelian")
    return _partition_from_counts(agemo_exps(G))


def _partition_from_counts(d: Sequence[int]) -> tuple[int, ...]:
    # d[k] - d[k+1] counts the cyclic factors of order > p^k
    counts = [d[k] - d[k + 1] for k in range(len(d) - 1)] + [d[-1]]
    lam = []
    for k in range(len(counts) - 1):
        lam.extend([k + 1] * (counts[k] - counts[k + 1]))
    return tuple(sorted(lam, reverse=True))


@_cached
def abelianization(G: FiniteGroup) -> tuple[int, ...]:
    return abelian_invariants(quotient(G, derived_subgroup(G)))


@_cached
def agemo_exps(G: FiniteGroup) -> tuple[int, ...]:
    """``(log_p |G^{p^k}|)_{k >= 0}`` up to and including the first zero."""
    out = []
    k = 0
    while True:
        e = agemo(G, k).order_exp
        out.append(e)
        if e == 0:
            return tuple(out)
        k += 1


@_cached
def omega_exps(G: FiniteGroup) -> tuple[int, ...]:
    out = []
    k = 1
    while True:
        e = omega(G, k).order_exp
        out.append(e)
        if e == G.order_exp:
            return tuple(out)
        k += 1


# -- powerful properties --------------------------------------------------------


@_cached
def is_powerful(G: FiniteGroup) -> bool:
    """``[G,G] <= G^p`` (odd p) or ``[G,G] <= G^4`` (p = 2)."""
    return derived_subgroup(G) <= agemo(G, 2 if G.p == 2 else 1)


@_cached
def is_strongly_powerful(G: FiniteGroup) -> bool:
    return derived_subgroup(G) <= agemo(G, 2)


@dataclass
class PowerfulChain:
    subgroups: list[Subgroup]

    @property
    def length(self) -> int:
        return len(self.subgroups) - 1

    def is_full(self) -> bool:
        if not self.subgroups:
            return False
        return self.subgroups[0].size == 1 and self.subgroups[-1].size == self.subgroups[-1].group.size


def is_powerfully_central_chain(G: FiniteGroup, chain: PowerfulChain | Sequence[Subgroup]) -> bool:
    """Check ascent and ``[H_i, G] <= H_{i-1}^p`` for every layer."""
    subs = chain.subgroups if isinstance(chain, PowerfulChain) else list(chain)
    for lo, hi in zip(subs, subs[1:]):
        if not lo <= hi:
            return False
        if not commutator_with_group(G, hi) <= power_subgroup(lo, G.p):
            return False
    return True


@dataclass
class ClassInfo:
    is_powerfully_nilpotent: bool
    powerful_class: int | None
    powerful_coclass: int | None
    upper_series: list[Subgroup] = field(repr=False)


@_cached
def upper_series(G: FiniteGroup) -> ClassInfo:
    """Upper powerfully central series, iterated until it stabilises."""
    series = [trivial(G)]
    x = G.elements
    while series[-1].size < G.size:
        below = power_subgroup(series[-1], G.p)
        if below.is_normal():
            mask = np.ones(G.size, dtype=bool)
            for g in G.generators:
                mask &= below.mask[G.comm(x, g)]
        else:
            mask = np.ones(G.size, dtype=bool)
            for g in G.elements:
                mask &= below.mask[G.comm(x, g)]
        nxt = Subgroup(G, mask)
        if nxt.size == series[-1].size:
            break
        series.append(nxt)
    reaches = series[-1].size == G.size
    pn = reaches and is_powerful(G)
    cls = len(series) - 1 if pn else None
    return ClassInfo(pn, cls, None if cls is None else G.order_exp - cls, series)


def is_powerfully_nilpotent(G: FiniteGroup) -> bool:
    return upper_series(G).is_powerfully_nilpotent


def powerful_class(G: FiniteGroup) -> int | None:
    return upper_series(G).powerful_class


def powerful_coclass(G: FiniteGroup) -> int | None:
    return upper_series(G).powerful_coclass


@dataclass(frozen=True)
class TypeSignature:
    multiplicities: dict[int, int]

    def as_tuple(self) -> tuple[int, ...]:
        """Generator order exponents in increasing order, e.g. ``(1, 2, 3)``."""
        return tuple(k for k in sorted(self.multiplicities) for _ in range(self.multiplicities[k]))

    @property
    def total(self) -> int:
        return sum(k * n for k, n in self.multiplicities.items())


def type_from_agemo(d: Sequence[int]) -> TypeSignature:
    d = list(d) + [0, 0]
    mult = {}
    for j in range(1, len(d) - 1):
        n = d[j - 1] - 2 * d[j] + d[j + 1]
        if n < 0:
            raise NotPowerful(f"negative multiplicity at order p^{j}")
        if n:
            mult[j] = n
    return TypeSignature(mult)


@_cached
def type_signature(G: FiniteGroup) -> TypeSignature:
    return type_from_agemo(agemo_exps(G))


def property_report(G: FiniteGroup) -> dict:
    info = upper_series(G)
    powerful = is_powerful(G)
    try:
        typ = list(type_signature(G).as_tuple()) if powerful else None
    except NotPowerful:
        typ = None
    return {
        "order_exp": G.order_exp,
        "is_powerful": powerful,
        "is_strongly_powerful": is_strongly_powerful(G),
        "is_pn": info.is_powerfully_nilpotent,
        "class": info.powerful_class,
        "coclass": info.powerful_coclass,
        "type": typ,
        "center_order_exp": center(G).order_exp,
        "derived_order_exp": derived_subgroup(G).order_exp,
        "agemo_orders": list(agemo_exps(G)),
    }
