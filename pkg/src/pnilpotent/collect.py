"""Element arithmetic on exponent tuples via collection.

These functions work directly on a presentation, without building tables, and
serve as the independent reference for :class:`pnilpotent.group.PcGroup`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import group as _group
from .presentation import PcPresentation, collect_word, inverse_exponents

Element = tuple[int, ...]


def _check_word(pres: PcPresentation, word) -> list[tuple[int, int]]:
    out = []
    for g, e in word:
        g = int(g)
        if not 0 <= g < pres.rank:
            raise IndexError(f"generator index {g} out of range")
        out.append((g, int(e)))
    return out


def normalize(pres: PcPresentation, word: Iterable[tuple[int, int]]) -> Element:
    """Normal form of a word of ``(generator index, exponent)`` pairs."""
    return collect_word(pres.data, pres.identity(), _check_word(pres, word))


def multiply(pres: PcPresentation, x: Sequence[int], y: Sequence[int]) -> Element:
    return collect_word(pres.data, x, pres.word_from_exponents(y))


def inverse(pres: PcPresentation, x: Sequence[int]) -> Element:
    return inverse_exponents(pres.data, x)


def power(pres: PcPresentation, x: Sequence[int], n: int) -> Element:
    if n < 0:
        x, n = inverse(pres, x), -n
    out = pres.identity()
    base = tuple(x)
    while n:
        if n & 1:
            out = multiply(pres, out, base)
        n >>= 1
        if n:
            base = multiply(pres, base, base)
    return out


def commutator(pres: PcPresentation, x: Sequence[int], y: Sequence[int]) -> Element:
    """``[x, y] = x^-1 y^-1 x y``."""
    return multiply(pres, inverse(pres, multiply(pres, y, x)), multiply(pres, x, y))


def order_of(pres: PcPresentation, x: Sequence[int]) -> int:
    n, cur = 1, tuple(x)
    ident = pres.identity()
    while cur != ident:
        cur = power(pres, cur, pres.prime)
        n *= pres.prime
    return n


def subgroup_closure(pres: PcPresentation, gens: Iterable[Sequence[int]]) -> "_group.Subgroup":
    g = _group.group_of(pres)
    return _group.subgroup_closure(g, [g.element(x) for x in gens])


def quotient(pres: PcPresentation, normal: "_group.Subgroup") -> "_group.QuotientGroup":
    return _group.quotient(_group.group_of(pres), normal)


def consistency_check(pres: PcPresentation) -> "_group.ConsistencyReport":
    return _group.consistency_check(pres)
