"""Powerfully nilpotent groups of rank 2: parameters, groups and counts.

Two families, with ``[a, b] = a^{p^r}`` and ``o(a) = p^n`` throughout:

* type I   ``G(n, m, r)``:    ``b^{p^m} = 1``,        ``n - r <= m``, ``2 <= r <= n - 1``
* type II  ``G(n, m, l, r)``: ``b^{p^m} = a^{p^l}``,  ``2 <= r < l <= n - 1``, ``n - r <= l < m``

Presentations put ``b`` first so that ``<a>`` is the normal tail.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .group import FiniteGroup
from .presentation import PcPresentation
from . import props


class NotRank2(ValueError):
    """The group matches no valid rank-2 parameter tuple."""


@dataclass(frozen=True, order=True)
class Rank2Params:
    variant: str  # "I" or "II"
    n: int
    m: int
    r: int
    l: int | None = None

    @classmethod
    def type1(cls, n: int, m: int, r: int) -> "Rank2Params":
        return cls("I", n, m, r)

    @classmethod
    def type2(cls, n: int, m: int, l: int, r: int) -> "Rank2Params":
        return cls("II", n, m, r, l)

    @property
    def order_exp(self) -> int:
        return self.n + self.m

    @property
    def label(self) -> str:
        if self.variant == "I":
            return f"G({self.n},{self.m},{self.r})"
        return f"G({self.n},{self.m},{self.l},{self.r})"

    def __str__(self) -> str:
        return self.label

    def to_dict(self) -> dict:
        d = {"variant": self.variant, "n": self.n, "m": self.m, "r": self.r}
        if self.l is not None:
            d["l"] = self.l
        return d

    @classmethod
    def parse(cls, text: str) -> "Rank2Params":
        """Parse ``G(n,m,r)`` or ``G(n,m,l,r)`` (the ``G`` is optional)."""
        body = text.strip()
        if body[:1] in "Gg":
            body = body[1:]
        body = body.strip().strip("()")
        try:
            vals = [int(v) for v in body.split(",")]
        except ValueError:
            raise ValueError(f"cannot parse rank-2 parameters {text!r}") from None
        if len(vals) == 3:
            return cls.type1(*vals)
        if len(vals) == 4:
            return cls.type2(*vals)
        raise ValueError(f"cannot parse rank-2 parameters {text!r}")


def validate(params: Rank2Params) -> bool:
    n, m, r, l = params.n, params.m, params.r, params.l
    if params.variant == "I":
        return l is None and n - r <= m and 2 <= r <= n - 1 and m >= 1
    if params.variant == "II":
        return l is not None and 2 <= r < l <= n - 1 and n - r <= l < m
    return False


def build_group(params: Rank2Params, p: int) -> PcPresentation:
    if not validate(params):
        raise ValueError(f"invalid parameters {params}")
    powers = {}
    if params.variant == "II":
        powers["b"] = [("a", p**params.l)]
    return PcPresentation.from_relations(
        p,
        [("b", params.m), ("a", params.n)],
        powers,
        [("a", "b", [("a", p**params.r)])],
    )


def structure_invariants(G: FiniteGroup) -> Rank2Params:
    """Recover the parameters of a non-abelian rank-2 powerfully nilpotent group."""
    if G.is_abelian():
        raise NotRank2("group is abelian")
    d = props.agemo_exps(G)
    if len(d) < 2 or d[0] - d[1] != 2:
        raise NotRank2("group is not 2-generated")
    der = props.derived_subgroup(G)
    r = 0
    while r + 1 < len(d) and der <= props.agemo(G, r + 1):
        r += 1
    n = r + der.order_exp
    x = G.order_exp
    m = x - n
    if m < 1:
        raise NotRank2("invariants give no valid tuple")
    gm = props.agemo(G, m).order_exp
    if gm > max(n - m, 0):
        params = Rank2Params.type2(n, m, n - gm, r)
    else:
        params = Rank2Params.type1(n, m, r)
    if not validate(params):
        raise NotRank2(f"invariants {params} violate the parameter constraints")
    return params


# -- enumeration and counting ------------------------------------------------------


@dataclass(frozen=True)
class Rank2Enumeration:
    x: int
    abelian: list[tuple[int, int]]
    type1: list[Rank2Params]
    type2: list[Rank2Params]


def enumerate_rank2(x: int) -> Rank2Enumeration:
    """All rank-2 powerfully nilpotent groups of order ``p^x`` (by parameters)."""
    abelian = [(x - n2, n2) for n2 in range(1, x // 2 + 1)]
    t1, t2 = [], []
    for n in range(1, x):
        m = x - n
        for r in range(2, n):
            p1 = Rank2Params.type1(n, m, r)
            if validate(p1):
                t1.append(p1)
            for l in range(r + 1, n):
                p2 = Rank2Params.type2(n, m, l, r)
                if validate(p2):
                    t2.append(p2)
    return Rank2Enumeration(x, abelian, t1, t2)


@dataclass(frozen=True)
class CountBreakdown:
    x: int
    abelian: int
    type1: int
    type2: int
    total: int
    method: str

    def to_dict(self) -> dict:
        return {
            "x": self.x,
            "abelian": self.abelian,
            "type1": self.type1,
            "type2": self.type2,
            "total": self.total,
            "method": self.method,
        }


@lru_cache(maxsize=8)
def _lattice(nmax: int):
    """All (n, r) and (n, r, l) satisfying the constraints that do not involve m."""
    n, r = np.meshgrid(np.arange(1, nmax + 1), np.arange(1, nmax + 1), indexing="ij")
    ok = (r >= 2) & (r <= n - 1)
    pairs = (n[ok], r[ok])
    ns, rs, ls = [], [], []
    l = np.arange(1, nmax + 1, dtype=np.int32)
    for nn, rr in zip(*pairs):
        keep = (rr < l) & (l <= nn - 1) & (nn - rr <= l)
        cnt = int(keep.sum())
        if cnt:
            ns.append(np.full(cnt, nn, dtype=np.int32))
            rs.append(np.full(cnt, rr, dtype=np.int32))
            ls.append(l[keep])
    triples = tuple(np.concatenate(v) for v in (ns, rs, ls))
    return pairs, triples


def count_brute(x: int) -> CountBreakdown:
    """Count by scanning every parameter tuple of order ``p^x``."""
    if x < 1:
        raise ValueError("x must be positive")
    nmax = max(8, 1 << (max(x - 1, 1) - 1).bit_length())
    (n, r), (n3, r3, l3) = _lattice(nmax)
    m = x - n
    type1 = int(np.count_nonzero((m >= 1) & (n - r <= m)))
    m3 = x - n3
    type2 = int(np.count_nonzero((m3 >= 1) & (n3 - r3 <= l3) & (l3 < m3)))
    abelian = sum(1 for n2 in range(1, x) if x - n2 >= n2)
    return CountBreakdown(x, abelian, type1, type2, abelian + type1 + type2, "brute")


def abelian_closed(x: int) -> int:
    return x // 2


def type1_closed(x: int) -> int:
    """Sum of ``x - 1 - 2y`` over ``1 <= y <= (x-2)/2``, in closed form."""
    if x % 2 == 0:
        return (x - 2) ** 2 // 4
    return (x - 3) * (x - 1) // 4


def type1_sum(x: int) -> int:
    return sum(x - 1 - 2 * y for y in range(1, (x - 2) // 2 + 1))


def type2_sum(x: int) -> int:
    """Type II count as the nested sum over ``l`` and ``n``."""
    t = x // 3
    h = (x - 2) // 2
    total = 0
    for l in range(3, t + 1):
        total += sum(2 * l - n for n in range(l + 2, 2 * l)) + (l - 2)
    for l in range(t + 1, h + 1):
        total += sum(2 * l - n for n in range(l + 2, x - l)) + (l - 2)
    return total


def type2_display(x: int) -> Fraction:
    """The floor-function closed form for the type II count, evaluated exactly."""
    A = Fraction((x - 6) // 2)
    B = Fraction((x - 4) // 2)
    C = Fraction((x - 6) // 3)
    D = Fraction((x - 3) // 3)
    X = Fraction(x)
    return (
        A * (X - 6) * (7 - X) / 2
        + A * B * (3 * X - 18) / 2
        - 4 * A * B * (2 * A + 1) / 6
        + C * (X - 6) * (X - 7) / 2
        + C * D * (-6 * X + 39) / 4
        + Fraction(9, 2) * C * D * (2 * C + 1) / 6
    )


_TOTAL_CONSTANTS = {0: (-60, 216), 1: (-69, 200), 2: (-60, 208), 3: (-69, 216), 4: (-60, 200), 5: (-69, 208)}


def total_closed(x: int) -> Fraction:
    """Total number of rank-2 groups of order ``p^x`` (valid for ``x >= 4``)."""
    c1, c0 = _TOTAL_CONSTANTS[x % 6]
    return Fraction(x**3 + 12 * x**2 + c1 * x + c0, 72)


def _as_int(v: Fraction, what: str, x: int) -> int:
    if v.denominator != 1:
        raise ArithmeticError(f"{what} is not an integer at x={x}: {v}")
    return int(v)


def count_closed(x: int) -> CountBreakdown:
    """Count via the closed forms; below ``x = 4`` falls back to brute force."""
    if x < 4:
        b = count_brute(x)
        return CountBreakdown(x, b.abelian, b.type1, b.type2, b.total, "closed")
    t2 = _as_int(type2_display(x), "type II display", x)
    return CountBreakdown(
        x,
        abelian_closed(x),
        type1_closed(x),
        t2,
        _as_int(total_closed(x), "total", x),
        "closed",
    )


def type2_erratum_report(lo: int = 8, hi: int = 200) -> dict[int, tuple[Fraction, int]]:
    """``{x: (display value, brute count)}`` for every ``x`` where they differ."""
    out = {}
    for x in range(lo, hi + 1):
        disp = type2_display(x)
        brute = count_brute(x).type2
        if disp != brute:
            out[x] = (disp, brute)
    return out
