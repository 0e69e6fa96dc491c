"""Ancestry tree of rank-2 powerfully nilpotent groups.

The direct descendant of a non-abelian group ``G`` is ``G / Z(G)^p``.  For the
rank-2 families it is computed symbolically by four rules; every rule can be
cross-checked against the concrete quotient with :func:`verify_descendant`.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Union

from . import props
from .group import Subgroup, group_of, power_subgroup, quotient
from .rank2 import NotRank2, Rank2Params, build_group, structure_invariants, validate


@dataclass(frozen=True, order=True)
class AbelianPair:
    """``C_{p^n1} x C_{p^n2}`` with ``n1 >= n2 >= 0``."""

    n1: int
    n2: int

    @property
    def order_exp(self) -> int:
        return self.n1 + self.n2

    @property
    def label(self) -> str:
        return f"Ab({self.n1},{self.n2})"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, order=True)
class AbelianA:
    """``C_{p^n} x C_{p^n}``, ``n >= 2``."""

    nbar: int

    def __post_init__(self):
        if self.nbar < 2:
            raise ValueError("A(n) needs n >= 2")

    @property
    def invariants(self) -> tuple[int, int]:
        return (self.nbar, self.nbar)

    @property
    def order_exp(self) -> int:
        return 2 * self.nbar

    @property
    def label(self) -> str:
        return f"A({self.nbar})"

    def __str__(self) -> str:
        return self.label


@dataclass(frozen=True, order=True)
class AbelianB:
    """``C_{p^(n+1)} x C_{p^n}``, ``n >= 1``."""

    nbar: int

    def __post_init__(self):
        if self.nbar < 1:
            raise ValueError("B(n) needs n >= 1")

    @property
    def invariants(self) -> tuple[int, int]:
        return (self.nbar + 1, self.nbar)

    @property
    def order_exp(self) -> int:
        return 2 * self.nbar + 1

    @property
    def label(self) -> str:
        return f"B({self.nbar})"

    def __str__(self) -> str:
        return self.label


GroupDescriptor = Union[AbelianA, AbelianB, AbelianPair, Rank2Params]


def abelian_descriptor(n1: int, n2: int) -> GroupDescriptor:
    """Canonical descriptor for ``C_{p^n1} x C_{p^n2}``."""
    n1, n2 = max(n1, n2), min(n1, n2)
    if n1 == n2 and n1 >= 2:
        return AbelianA(n1)
    if n1 == n2 + 1 and n2 >= 1:
        return AbelianB(n2)
    return AbelianPair(n1, n2)


def is_abelian_descriptor(d: GroupDescriptor) -> bool:
    return not isinstance(d, Rank2Params)


def invariants_of(d: GroupDescriptor) -> tuple[int, int]:
    if isinstance(d, AbelianPair):
        return (d.n1, d.n2)
    if isinstance(d, (AbelianA, AbelianB)):
        return d.invariants
    raise TypeError(f"{d} is not abelian")


def parse_descriptor(text: str) -> GroupDescriptor:
    """Parse ``A(n)``, ``B(n)``, ``Ab(n1,n2)``, ``G(n,m,r)`` or ``G(n,m,l,r)``."""
    s = text.replace(" ", "")
    mt = re.fullmatch(r"(A|B|Ab|G)\(([\d,]+)\)", s)
    if not mt:
        raise ValueError(f"cannot parse group descriptor {text!r}")
    kind, vals = mt.group(1), [int(v) for v in mt.group(2).split(",")]
    if kind == "A" and len(vals) == 1:
        return AbelianA(vals[0])
    if kind == "B" and len(vals) == 1:
        return AbelianB(vals[0])
    if kind == "Ab" and len(vals) == 2:
        return abelian_descriptor(*vals)
    if kind == "G":
        return Rank2Params.parse(s)
    raise ValueError(f"cannot parse group descriptor {text!r}")


# -- descendants ------------------------------------------------------------------


def descendant_rule(params: Rank2Params) -> str:
    y = params.n - params.r
    if params.variant == "I":
        return "a" if params.m > y else "b"
    return "c" if y < params.l else "d"


def descendant(params: Rank2Params) -> GroupDescriptor:
    """Symbolic ``G / Z(G)^p`` for a valid rank-2 parameter tuple."""
    if not validate(params):
        raise ValueError(f"invalid parameters {params}")
    r = params.r
    y = params.n - r
    rule = descendant_rule(params)
    if rule in ("a", "c"):
        return AbelianA(y + 1) if r >= y + 1 else Rank2Params.type1(y + 1, y + 1, r)
    if rule == "b":
        return AbelianB(y) if r >= y + 1 else Rank2Params.type1(y + 1, y, r)
    return Rank2Params.type1(y, y + 1, r)


def center_pow(params: Rank2Params, p: int) -> Subgroup:
    """``Z(G)^p`` computed in the concrete group."""
    G = group_of(build_group(params, p))
    return power_subgroup(props.center(G), p)


def symbolic_class(d: GroupDescriptor) -> int:
    """Powerful class along the descendant chain (abelian groups have class 1)."""
    c = 1
    while isinstance(d, Rank2Params):
        d = descendant(d)
        c += 1
    return c


# -- ancestors -------------------------------------------------------------------


def direct_ancestors(desc: GroupDescriptor, max_order_exp: int) -> list[Rank2Params]:
    """All rank-2 groups of order at most ``p^max_order_exp`` descending to ``desc``."""
    out: list[Rank2Params] = []
    B = max_order_exp
    if isinstance(desc, AbelianA):
        nb = desc.nbar
        for r in range(nb, B):
            n = nb + r - 1
            for m in range(nb, B - n + 1):
                out.append(Rank2Params.type1(n, m, r))
                for l in range(max(nb, r + 1), min(nb + r - 2, m - 1) + 1):
                    out.append(Rank2Params.type2(n, m, l, r))
    elif isinstance(desc, AbelianB):
        nb = desc.nbar
        for r in range(nb + 1, B):
            if 2 * nb + r <= B:
                out.append(Rank2Params.type1(nb + r, nb, r))
    elif isinstance(desc, Rank2Params) and desc.variant == "I":
        n0, m0, r = desc.n, desc.m, desc.r
        if n0 == m0:  # G(nb, nb, r)
            nb = n0
            n = nb + r - 1
            for m in range(nb, B - n + 1):
                out.append(Rank2Params.type1(n, m, r))
                for l in range(max(nb, r + 1), min(nb + r - 2, m - 1) + 1):
                    out.append(Rank2Params.type2(n, m, l, r))
        elif n0 == m0 + 1:  # G(nb + 1, nb, r)
            nb = m0
            if 2 * nb + r <= B:
                out.append(Rank2Params.type1(nb + r, nb, r))
        elif m0 == n0 + 1:  # G(nb, nb + 1, r)
            nb = n0
            n = nb + r
            for m in range(nb + 1, B - n + 1):
                out.append(Rank2Params.type2(n, m, nb, r))
    out = [q for q in out if validate(q) and q.order_exp <= B]
    return sorted(set(out))


def infinite_branch(nbar: int, r: int, depth: int) -> list[GroupDescriptor]:
    """``A(nbar) <- G(nbar+(r-1), nbar+(r-1), r) <- G(nbar+2(r-1), ...) <- ...``.

    Each entry is the direct descendant of the next one.  This needs
    ``r >= nbar``; for smaller ``r`` the first group descends to
    ``G(nbar, nbar, r)`` instead of ``A(nbar)``.
    """
    if nbar < 2 or r < 2 or depth < 0:
        raise ValueError("need nbar >= 2, r >= 2 and depth >= 0")
    if r < nbar:
        raise ValueError(f"r = {r} < nbar = {nbar}: the branch does not start at A({nbar})")
    out: list[GroupDescriptor] = [AbelianA(nbar)]
    for i in range(1, depth + 1):
        k = nbar + i * (r - 1)
        out.append(Rank2Params.type1(k, k, r))
    return out


def descent_chain(params: Rank2Params) -> list[GroupDescriptor]:
    """``params`` followed by its iterated descendants down to an abelian group."""
    chain: list[GroupDescriptor] = [params]
    while isinstance(chain[-1], Rank2Params):
        chain.append(descendant(chain[-1]))
    return chain


# -- concrete cross-check ---------------------------------------------------------


@dataclass
class DescendantCheck:
    params: Rank2Params
    p: int
    expected: GroupDescriptor
    found: GroupDescriptor | None
    center_pow_exp: int
    parent_class: int | None
    child_class: int | None
    parent_coclass: int | None
    child_coclass: int | None
    message: str = ""

    @property
    def ok(self) -> bool:
        return self.found == self.expected

    def __bool__(self) -> bool:
        return self.ok


def verify_descendant(params: Rank2Params, p: int) -> DescendantCheck:
    """Compare ``descendant(params)`` with the concrete quotient ``G / Z(G)^p``."""
    expected = descendant(params)
    G = group_of(build_group(params, p))
    zp = power_subgroup(props.center(G), p)
    Q = quotient(G, zp)
    msg = ""
    found: GroupDescriptor | None
    if Q.is_abelian():
        inv = props.abelian_invariants(Q)
        if len(inv) > 2:
            found, msg = None, f"quotient has invariants {inv}"
        else:
            inv = tuple(inv) + (0,) * (2 - len(inv))
            found = abelian_descriptor(*inv)
    else:
        try:
            found = structure_invariants(Q)
        except NotRank2 as exc:
            found, msg = None, str(exc)
    if found is not None and found != expected:
        msg = f"expected {expected}, quotient is {found}"
    gi, qi = props.upper_series(G), props.upper_series(Q)
    return DescendantCheck(
        params,
        p,
        expected,
        found,
        zp.order_exp,
        gi.powerful_class,
        qi.powerful_class,
        gi.powerful_coclass,
        qi.powerful_coclass,
        msg,
    )


# -- output ---------------------------------------------------------------------------


def _node(d: GroupDescriptor) -> dict:
    c = symbolic_class(d)
    return {"id": d.label, "order_exp": d.order_exp, "class": c, "coclass": d.order_exp - c}


def edges_json(edges: list[tuple[GroupDescriptor, GroupDescriptor, str]]) -> str:
    """``edges`` holds ``(child, parent, rule)`` triples."""
    nodes = {}
    for child, parent, _ in edges:
        nodes[child.label] = _node(child)
        nodes[parent.label] = _node(parent)
    return json.dumps(
        {
            "nodes": [nodes[k] for k in sorted(nodes)],
            "edges": [
                {"child": c.label, "parent": q.label, "rule": rule} for c, q, rule in edges
            ],
        },
        indent=2,
    )


def edges_dot(edges: list[tuple[GroupDescriptor, GroupDescriptor, str]], name: str = "ancestry") -> str:
    nodes = {}
    for child, parent, _ in edges:
        nodes[child.label] = child
        nodes[parent.label] = parent
    lines = [f"digraph {name} {{", "  rankdir=BT;"]
    for key in sorted(nodes):
        n = _node(nodes[key])
        lines.append(f'  "{key}" [label="{key}\\nclass {n["class"]}, coclass {n["coclass"]}"];')
    for child, parent, rule in edges:
        lines.append(f'  "{parent.label}" -> "{child.label}" [label="{rule}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def chain_edges(chain: list[GroupDescriptor]) -> list[tuple[GroupDescriptor, GroupDescriptor, str]]:
    """Edges of a list ordered child-first or parent-first along descendants."""
    out = []
    for a, b in zip(chain, chain[1:]):
        parent, child = (a, b) if isinstance(a, Rank2Params) and descendant(a) == b else (b, a)
        out.append((child, parent, descendant_rule(parent)))
    return out
