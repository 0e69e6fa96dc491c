"""Finite groups as index sets with vectorised multiplication.

``PcGroup`` numbers the normal forms of a pc presentation in mixed radix
(first generator most significant) and stores, for every generator ``g_i`` and
digit position ``d``, the permutation ``x -> x * g_i**(p**d)``.  A product
``x * y`` is then a short sequence of array gathers driven by the base-p digits
of ``y``.  ``QuotientGroup`` and ``Subgroup`` sit on top of any such group.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .presentation import PcPresentation, collect_word


class ConsistencyFailure(ValueError):
    """The presentation does not define a group of the expected order."""


class NotNormal(ValueError):
    """A quotient was requested by a subgroup that is not normal."""


def _as_index(x) -> np.ndarray:
    return np.asarray(x, dtype=np.intp)


class FiniteGroup:
    """Common interface: elements are integers ``0 .. size-1``, identity is 0."""

    p: int
    size: int
    identity = 0

    # subclasses provide mul, inv and generators
    def mul(self, x, y) -> np.ndarray:
        raise NotImplementedError

    @property
    def generators(self) -> list[int]:
        raise NotImplementedError

    @property
    def elements(self) -> np.ndarray:
        return np.arange(self.size, dtype=np.intp)

    @property
    def order_exp(self) -> int:
        return _log_p(self.size, self.p)

    def power(self, x, n: int) -> np.ndarray:
        x = _as_index(x)
        if n < 0:
            x, n = self.inv(x), -n
        out = np.zeros_like(x)
        while n:
            if n & 1:
                out = self.mul(out, x)
            n >>= 1
            if n:
                x = self.mul(x, x)
        return out

    @cached_property
    def inv_table(self) -> np.ndarray:
        return self._inv(self.elements)

    def inv(self, x) -> np.ndarray:
        return self.inv_table[_as_index(x)]

    def _inv(self, x) -> np.ndarray:
        raise NotImplementedError

    def comm(self, x, y) -> np.ndarray:
        """``[x, y] = x^-1 y^-1 x y``."""
        return self.mul(self.inv(self.mul(y, x)), self.mul(x, y))

    def conj(self, x, g) -> np.ndarray:
        """``x^g = g^-1 x g``."""
        return self.mul(self.inv(g), self.mul(x, g))

    @cached_property
    def pth_powers(self) -> np.ndarray:
        """Table of ``x -> x**p``."""
        return self.power(self.elements, self.p)

    def power_pk(self, x, k: int) -> np.ndarray:
        """``x**(p**k)`` through the cached p-th power table."""
        x = _as_index(x)
        t = self.pth_powers
        for _ in range(k):
            x = t[x]
        return x

    @cached_property
    def orders(self) -> np.ndarray:
        """Order of every element."""
        out = np.ones(self.size, dtype=np.int64)
        cur = self.elements
        t = self.pth_powers
        while True:
            live = cur != 0
            if not live.any():
                return out
            out[live] *= self.p
            cur = t[cur]

    def order_of(self, x: int) -> int:
        return int(self.orders[int(x)])

    def order_exp_of(self, x: int) -> int:
        return _log_p(self.order_of(x), self.p)

    @cached_property
    def exponent(self) -> int:
        return int(self.orders.max())

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            int(self.comm(g, h)) == 0 for i, g in enumerate(gens) for h in gens[i + 1 :]
        )

    def format(self, x: int) -> str:
        return str(int(x))


def _log_p(n: int, p: int) -> int:
    e = 0
    while n > 1:
        if n % p:
            raise ValueError(f"{n} is not a power of {p}")
        n //= p
        e += 1
    return e


@dataclass
class ConsistencyReport:
    ok: bool
    relation: str | None = None
    element: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "consistent"
        return f"relation {self.relation} fails at element {self.element}"


class PcGroup(FiniteGroup):
    """Group of normal forms of a (consistent) pc presentation."""

    def __init__(self, pres: PcPresentation, check: bool = True):
        self.pres = pres
        self.p = pres.prime
        self.k = pres.rank
        self.rel = np.array(pres.rel_orders, dtype=np.int64)
        self.size = int(np.prod(self.rel)) if self.k else 1
        # place value of generator i (size of the tail after it)
        place = np.ones(self.k, dtype=np.int64)
        for i in range(self.k - 2, -1, -1):
            place[i] = place[i + 1] * self.rel[i + 1]
        self.place = place
        self.levels = [(i, d) for i in range(self.k) for d in range(pres.exps[i])]
        self._level_of = {lv: n for n, lv in enumerate(self.levels)}
        self.rp = self._build_tables()
        idx = np.arange(self.size, dtype=np.int64)
        self.digits = np.empty((len(self.levels), self.size), dtype=np.int8)
        for n, (i, d) in enumerate(self.levels):
            self.digits[n] = (idx // place[i] // self.p**d) % self.p
        if check:
            rep = self.check_consistency()
            if not rep:
                raise ConsistencyFailure(str(rep))

    # -- construction -----------------------------------------------------
    def word_index(self, word) -> int:
        """Index of a *normal* word (increasing generators, reduced exponents)."""
        return int(sum(e * self.place[g] for g, e in word))

    def _build_tables(self) -> np.ndarray:
        p, k, rel, place = self.p, self.k, self.rel, self.place
        pres = self.pres
        exps = pres.exps
        # tabs[j][d] acts on the current tail T_{i+1} = <g_{i+1}, ..., g_k>
        tabs: dict[int, list[np.ndarray]] = {}

        def mul_tail(lo, u, v):
            out = np.array(u, dtype=np.intp, copy=True)
            v = np.asarray(v, dtype=np.int64)
            for j in range(lo, k):
                vj = (v // place[j]) % rel[j]
                for d in range(exps[j]):
                    dig = (vj // p**d) % p
                    t = tabs[j][d]
                    for c in range(1, p):
                        m = dig >= c
                        if not m.any():
                            break
                        out = np.where(m, t[out], out)
            return out

        for i in range(k - 1, -1, -1):
            ms = int(place[i])  # |T_{i+1}|
            # conjugation by g_i restricted to the tail, built generator by generator
            phi = np.zeros(1, dtype=np.intp)
            for j in range(k - 1, i, -1):
                c = self.word_index(pres.conjugates[i][j])
                pw = np.zeros(1, dtype=np.intp)
                step = np.array([c], dtype=np.intp)  # c ** len(pw)
                while len(pw) < rel[j]:
                    pw = np.concatenate([pw, mul_tail(i + 1, pw, np.repeat(step, len(pw)))])
                    step = mul_tail(i + 1, step, step)
                pw = pw[: rel[j]]
                n_in = len(phi)
                phi = mul_tail(
                    i + 1, np.repeat(pw, n_in), np.tile(phi, int(rel[j]))
                )
            pidx = self.word_index(pres.powers[i])
            r = np.empty(int(rel[i]) * ms, dtype=np.intp)
            body = (np.arange(1, rel[i], dtype=np.intp)[:, None] * ms + phi[None, :])
            r[: (rel[i] - 1) * ms] = body.ravel()
            r[(rel[i] - 1) * ms :] = mul_tail(i + 1, np.full(ms, pidx, dtype=np.intp), phi)
            # extend tables of later generators to T_i
            shift = (np.arange(rel[i], dtype=np.intp) * ms)[:, None]
            for j in tabs:
                tabs[j] = [(shift + t[None, :]).ravel() for t in tabs[j]]
            lv = [r]
            for _ in range(1, exps[i]):
                prev = lv[-1]
                nxt = np.arange(len(prev), dtype=np.intp)
                for _ in range(p):
                    nxt = prev[nxt]
                lv.append(nxt)
            tabs[i] = lv
        if k == 0:
            return np.zeros((0, 1), dtype=np.intp)
        return np.stack([tabs[i][d] for i, d in self.levels])

    # -- element conversion -----------------------------------------------
    def exps_of(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self.place) % self.rel

    def index_of(self, exps) -> np.ndarray:
        return _as_index(np.asarray(exps, dtype=np.int64) @ self.place)

    def element(self, exps: Sequence[int]) -> int:
        return int(np.dot(np.asarray(exps, dtype=np.int64), self.place))

    def tuple_of(self, x: int) -> tuple[int, ...]:
        return tuple(int(v) for v in self.exps_of(int(x)))

    def format(self, x: int) -> str:
        return self.pres.format_element(self.tuple_of(x))

    @property
    def generators(self) -> list[int]:
        return [int(self.place[i]) for i in range(self.k)]

    def gen(self, name: str | int) -> int:
        i = name if isinstance(name, int) else self.pres.index_of(name)
        return int(self.place[i])

    # -- arithmetic ---------------------------------------------------------
    def mul(self, x, y) -> np.ndarray:
        y = _as_index(y)
        if y.ndim == 0:
            out = _as_index(x)
            for n, c in enumerate(self.digits[:, int(y)]):
                t = self.rp[n]
                for _ in range(c):
                    out = t[out]
            return out
        x, y = np.broadcast_arrays(_as_index(x), y)
        out = np.array(x, copy=True)
        dig = self.digits[:, y]
        p = self.p
        for n in range(len(self.levels)):
            t = self.rp[n]
            dn = dig[n]
            for c in range(1, p):
                m = dn >= c
                if not m.any():
                    break
                out = np.where(m, t[out], out)
        return out

    def mul_gen_power(self, x, i: int, n) -> np.ndarray:
        """``x * g_i**n`` with ``0 <= n < p**e_i`` (``n`` may vary per element)."""
        out = np.array(_as_index(x), copy=True)
        n = np.broadcast_to(np.asarray(n, dtype=np.int64), out.shape)
        for d in range(self.pres.exps[i]):
            t = self.rp[self._level_of[(i, d)]]
            dig = (n // self.p**d) % self.p
            for c in range(1, self.p):
                m = dig >= c
                if not m.any():
                    break
                out = np.where(m, t[out], out)
        return out

    def _inv(self, x) -> np.ndarray:
        z = _as_index(x)
        out = np.zeros_like(z)
        for i in range(self.k):
            zi = (z // self.place[i]) % self.rel[i]
            e = (self.rel[i] - zi) % self.rel[i]
            out = out + e * self.place[i]
            z = self.mul_gen_power(z, i, e)
        return out

    # -- consistency ----------------------------------------------------------
    def check_consistency(self) -> ConsistencyReport:
        """Check the defining relations on the right-regular action.

        The maps ``x -> x g_i`` built from the tables must be permutations that
        satisfy every power and conjugate relation; then the presented group
        acts transitively on the ``p**sum(e)`` normal forms and has exactly
        that order.  Products of generator pairs are also cross-checked
        against the collector.
        """
        pres, names = self.pres, self.pres.names
        n = self.size
        allx = self.elements
        for i in range(self.k):
            r = self.rp[self._level_of[(i, 0)]]
            if len(np.unique(r)) != n:
                dup = np.flatnonzero(np.bincount(r, minlength=n) != 1)[0]
                return ConsistencyReport(
                    False, f"x -> x*{names[i]} is not injective", self.tuple_of(dup)
                )
        ident = self.mul(0, allx)
        bad = np.flatnonzero(ident != allx)
        if len(bad):
            return ConsistencyReport(False, "1*x = x", self.tuple_of(bad[0]))
        for i in range(self.k):
            top = self.rp[self._level_of[(i, pres.exps[i] - 1)]]
            lhs = allx
            for _ in range(self.p):
                lhs = top[lhs]
            rhs = self.mul(allx, self.word_index(pres.powers[i]))
            bad = np.flatnonzero(lhs != rhs)
            if len(bad):
                return ConsistencyReport(
                    False,
                    f"{names[i]}^{self.rel[i]} = {pres.format_element(self.tuple_of(self.word_index(pres.powers[i])))}",
                    self.tuple_of(bad[0]),
                )
        for i in range(self.k):
            ri = self.rp[self._level_of[(i, 0)]]
            for j in range(i + 1, self.k):
                rj = self.rp[self._level_of[(j, 0)]]
                lhs = ri[rj]
                rhs = self.mul(ri, self.word_index(pres.conjugates[i][j]))
                bad = np.flatnonzero(lhs != rhs)
                if len(bad):
                    return ConsistencyReport(
                        False, f"{names[j]}^{names[i]}", self.tuple_of(bad[0])
                    )
        # collector agrees with the tables on generator pairs
        data = pres.data
        for i in range(self.k):
            for j in range(self.k):
                w = collect_word(data, pres.identity(), [(i, 1), (j, 1)])
                lhs = self.rp[self._level_of[(j, 0)]][self.rp[self._level_of[(i, 0)]]]
                rhs = self.mul(allx, self.element(w))
                bad = np.flatnonzero(lhs != rhs)
                if len(bad):
                    return ConsistencyReport(
                        False,
                        f"(x*{names[i]})*{names[j]} = x*({names[i]}{names[j]})",
                        self.tuple_of(bad[0]),
                    )
        return ConsistencyReport(True)


def consistency_check(pres: PcPresentation) -> ConsistencyReport:
    """True iff ``pres`` defines a group of order ``p**sum(exps)``."""
    return PcGroup(pres, check=False).check_consistency()


_GROUP_CACHE: dict[PcPresentation, PcGroup] = {}


def group_of(pres: PcPresentation) -> PcGroup:
    """Cached consistent ``PcGroup`` for a presentation."""
    g = _GROUP_CACHE.get(pres)
    if g is None:
        if len(_GROUP_CACHE) > 256:
            _GROUP_CACHE.clear()
        g = _GROUP_CACHE[pres] = PcGroup(pres)
    return g


# -- subgroups -----------------------------------------------------------------


class Subgroup:
    """A subgroup stored as a boolean mask over its ambient group."""

    def __init__(self, group: FiniteGroup, mask: np.ndarray, gens: Iterable[int] | None = None):
        self.group = group
        self.mask = mask
        self._gens = None if gens is None else [int(g) for g in gens]

    @property
    def size(self) -> int:
        return int(self.mask.sum())

    @property
    def order_exp(self) -> int:
        return _log_p(self.size, self.group.p)

    @property
    def elements(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __contains__(self, x) -> bool:
        return bool(self.mask[int(x)])

    def __len__(self) -> int:
        return self.size

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and np.array_equal(other.mask, self.mask)
        )

    def __le__(self, other: "Subgroup") -> bool:
        return bool(np.all(other.mask[self.mask]))

    def __repr__(self) -> str:
        return f"Subgroup(size={self.size})"

    @property
    def generators(self) -> list[int]:
        """A small generating set, chosen greedily by decreasing element order."""
        if self._gens is None:
            cand = self.elements
            cand = cand[np.argsort(-self.group.orders[cand], kind="stable")]
            self._gens = _greedy_gens(self.group, cand, self.size)
        return self._gens

    def is_normal(self) -> bool:
        g = self.group
        for h in self.generators:
            for x in g.generators:
                if not self.mask[int(g.conj(h, x))]:
                    return False
        return True

    def is_abelian(self) -> bool:
        gens = self.generators
        g = self.group
        return all(int(g.comm(a, b)) == 0 for i, a in enumerate(gens) for b in gens[i + 1 :])


def _closure_mask(group: FiniteGroup, gens: Sequence[int], start: np.ndarray | None = None) -> np.ndarray:
    mask = np.zeros(group.size, dtype=bool)
    if start is not None:
        mask |= start
    mask[0] = True
    gens = [int(g) for g in gens if g]
    if not gens:
        return mask
    frontier = np.flatnonzero(mask)
    while len(frontier):
        new = []
        for g in gens:
            y = group.mul(frontier, g)
            y = y[~mask[y]]
            if len(y):
                y = np.unique(y)
                mask[y] = True
                new.append(y)
        frontier = np.concatenate(new) if new else np.zeros(0, dtype=np.intp)
    return mask


def _greedy_gens(group: FiniteGroup, cand: np.ndarray, target: int) -> list[int]:
    gens: list[int] = []
    mask = np.zeros(group.size, dtype=bool)
    mask[0] = True
    for x in cand:
        if mask.sum() == target:
            break
        if not mask[x]:
            gens.append(int(x))
            mask = _closure_mask(group, gens, mask)
    return gens


def subgroup_closure(group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    """Least subgroup containing ``gens``."""
    gens = [int(g) for g in np.atleast_1d(np.asarray(list(gens), dtype=np.intp))]
    mask = np.zeros(group.size, dtype=bool)
    mask[0] = True
    used: list[int] = []
    for g in gens:
        if not mask[g]:
            used.append(g)
            mask = _closure_mask(group, used, mask)
    return Subgroup(group, mask, used)


def subgroup_of_set(group: FiniteGroup, elements) -> Subgroup:
    """Subgroup generated by an arbitrary (possibly large) set of elements."""
    elements = np.unique(_as_index(elements))
    if len(elements) and len(elements) > 64:
        order = np.argsort(-group.orders[elements], kind="stable")
        elements = elements[order]
    return subgroup_closure(group, elements)


def whole(group: FiniteGroup) -> Subgroup:
    return Subgroup(group, np.ones(group.size, dtype=bool), group.generators)


def trivial(group: FiniteGroup) -> Subgroup:
    mask = np.zeros(group.size, dtype=bool)
    mask[0] = True
    return Subgroup(group, mask, [])


def normal_closure(group: FiniteGroup, gens: Iterable[int]) -> Subgroup:
    h = subgroup_closure(group, gens)
    while True:
        extra = [
            int(c)
            for c in (group.conj(x, g) for x in h.generators for g in group.generators)
            if not h.mask[int(c)]
        ]
        if not extra:
            return h
        h = subgroup_closure(group, list(h.generators) + extra)


def commutator_subgroup(group: FiniteGroup, a: Subgroup, b: Subgroup) -> Subgroup:
    """``[A, B]`` for normal subgroups ``A`` and ``B``."""
    comms = [int(group.comm(x, y)) for x in a.generators for y in b.generators]
    return normal_closure(group, comms)


def power_subgroup(h: Subgroup, q: int) -> Subgroup:
    """``<x**q : x in H>``."""
    g = h.group
    if q == g.p:
        return subgroup_of_set(g, g.pth_powers[h.elements])
    return subgroup_of_set(g, g.power(h.elements, q))


# -- quotients -------------------------------------------------------------------


class QuotientGroup(FiniteGroup):
    """``G/N`` on canonical coset representatives (least index in the coset)."""

    def __init__(self, parent: FiniteGroup, normal: Subgroup):
        if normal.group is not parent:
            raise ValueError("subgroup belongs to a different group")
        if not normal.is_normal():
            raise NotNormal("subgroup is not normal")
        self.parent = parent
        self.normal = normal
        self.p = parent.p
        n = parent.size
        gens = [g for g in normal.generators if g]
        if gens:
            src = np.tile(parent.elements, len(gens))
            dst = np.concatenate([parent.mul(parent.elements, g) for g in gens])
            adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
            ncomp, comp = connected_components(adj, directed=True, connection="weak")
        else:
            ncomp, comp = n, np.arange(n)
        rep = np.full(ncomp, n, dtype=np.intp)
        np.minimum.at(rep, comp, parent.elements)
        order = np.argsort(rep)
        self.reps = rep[order]
        relabel = np.empty(ncomp, dtype=np.intp)
        relabel[order] = np.arange(ncomp)
        self.label = relabel[comp]
        self.size = int(ncomp)
        if self.size * normal.size != n:
            raise AssertionError("coset computation went wrong")

    def lift(self, x) -> np.ndarray:
        return self.reps[_as_index(x)]

    def project(self, x) -> np.ndarray:
        return self.label[_as_index(x)]

    def mul(self, x, y) -> np.ndarray:
        return self.label[self.parent.mul(self.reps[_as_index(x)], self.reps[_as_index(y)])]

    def _inv(self, x) -> np.ndarray:
        return self.label[self.parent.inv(self.reps[_as_index(x)])]

    @property
    def generators(self) -> list[int]:
        out = []
        for g in self.parent.generators:
            q = int(self.label[g])
            if q and q not in out:
                out.append(q)
        return out

    def format(self, x: int) -> str:
        return self.parent.format(int(self.reps[int(x)])) + "N"


def quotient(group: FiniteGroup, normal: Subgroup) -> QuotientGroup:
    return QuotientGroup(group, normal)
