"""Isomorphism testing between pc groups by pruned backtracking.

A homomorphism from a pc group ``G`` is determined by the images of a minimal
generating set ``s_1 .. s_d`` (pc generators independent modulo the Frattini
subgroup).  Every pc generator of ``G`` is a fixed word in the ``s_j``, so a
choice of images defines a homomorphism exactly when all pc relations hold
for the induced images.  The search assigns images one generator at a time:

* candidates must share an element-invariant key with their source generator
  and lie outside ``<Phi(H), earlier images>``;
* candidates are reduced to orbit representatives under conjugation by the
  centraliser of the earlier images and under source automorphisms
  ``s_t -> s_t^u``;
* intermediate assignments must extend to an injective homomorphism on the
  subgroup generated so far;
* the last generator is filtered against all pc relations at once.

An exhausted search proves non-isomorphism; hitting the node budget raises
:class:`BudgetExceeded` instead.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import gcd

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import props
from .group import FiniteGroup, PcGroup, Subgroup, subgroup_closure, subgroup_of_set


class BudgetExceeded(RuntimeError):
    """The search was cut off; isomorphism is undecided."""


# -- invariants ---------------------------------------------------------------------


def class_sizes(G: FiniteGroup) -> np.ndarray:
    """Size of the conjugacy class of every element."""
    cache = G.__dict__.setdefault("_iso_cache", {})
    if "class_sizes" not in cache:
        n = G.size
        x = G.elements
        gens = G.generators
        if gens:
            src = np.tile(x, len(gens))
            dst = np.concatenate([G.conj(x, g) for g in gens])
            adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
            _, comp = connected_components(adj, directed=True, connection="weak")
        else:
            comp = x
        cache["class_sizes"] = np.bincount(comp)[comp]
    return cache["class_sizes"]


def frattini(G: FiniteGroup) -> Subgroup:
    cache = G.__dict__.setdefault("_iso_cache", {})
    if "frattini" not in cache:
        gens = list(props.agemo(G, 1).generators) + list(props.derived_subgroup(G).generators)
        cache["frattini"] = subgroup_closure(G, gens)
    return cache["frattini"]


def element_keys(G: FiniteGroup) -> np.ndarray:
    """Isomorphism-invariant features of every element (one row each)."""
    cache = G.__dict__.setdefault("_iso_cache", {})
    if "keys" not in cache:
        z = props.center(G)
        cols = [
            G.orders,
            G.size // class_sizes(G),
            z.mask,
            props.derived_subgroup(G).mask,
            props.agemo(G, 1).mask,
            props.agemo(G, 2).mask,
            props.omega(G, 1).mask,
            props.omega(G, 2).mask,
            subgroup_of_set(G, G.pth_powers[z.elements]).mask,
            frattini(G).mask,
        ]
        cache["keys"] = np.stack([np.asarray(c, dtype=np.int64) for c in cols], axis=1)
    return cache["keys"]


def key_histogram(G: FiniteGroup) -> Counter:
    return Counter(map(tuple, element_keys(G).tolist()))


def minimal_generators(G: FiniteGroup) -> list[int]:
    """Generators independent modulo the Frattini subgroup, taken from ``G.generators``."""
    phi = frattini(G)
    mask = phi.mask.copy()
    out: list[int] = []
    for g in G.generators:
        if not mask[g]:
            out.append(int(g))
            mask = subgroup_closure(G, list(phi.generators) + out).mask
    return out


# -- relation evaluation -------------------------------------------------------------


@dataclass
class _Program:
    """Words for the pc generators of ``G`` in a minimal generating set."""

    gens: list[int]  # minimal generators s_j (element indices)
    steps: list[tuple[int, int]] = field(default_factory=list)  # (parent node, s index)
    pc_node: list[int] = field(default_factory=list)  # node of each pc generator


def _build_program(G: PcGroup, gens: list[int]) -> _Program:
    n = G.size
    parent = np.full(n, -1, dtype=np.intp)
    via = np.full(n, -1, dtype=np.intp)
    seen = np.zeros(n, dtype=bool)
    seen[0] = True
    frontier = np.array([0], dtype=np.intp)
    targets = set(G.generators)
    while len(frontier) and not all(seen[t] for t in targets):
        nxt = []
        for j, s in enumerate(gens):
            y = G.mul(frontier, s)
            new = ~seen[y]
            y, src = y[new], frontier[new]
            y, first = np.unique(y, return_index=True)
            seen[y] = True
            parent[y] = src[first]
            via[y] = j
            nxt.append(y)
        frontier = np.concatenate(nxt)
    prog = _Program(list(gens))
    node_of = {0: 0}
    for t in G.generators:
        path = []
        x = t
        while x not in node_of:
            path.append(x)
            x = int(parent[x])
        for y in reversed(path):
            prog.steps.append((node_of[int(parent[y])], int(via[y])))
            node_of[y] = len(prog.steps)
        prog.pc_node.append(node_of[t])
    return prog


def _relation_filter(G: PcGroup, prog: _Program, H: FiniteGroup, images: list, vary: int, cand: np.ndarray) -> np.ndarray:
    """Candidates for generator ``vary`` for which every pc relation holds."""
    cand = np.asarray(cand, dtype=np.intp)
    pres = G.pres
    k = pres.rank

    def evaluate(cur):
        imgs = [cur if j == vary else int(im) for j, im in enumerate(images)]
        nodes = [np.zeros(len(cur), dtype=np.intp)]
        for par, j in prog.steps:
            nodes.append(H.mul(nodes[par], imgs[j]))
        return [nodes[v] for v in prog.pc_node]

    def word_value(vals, word, m):
        out = np.zeros(m, dtype=np.intp)
        for g, e in word:
            out = H.mul(out, H.power(vals[g], e))
        return out

    cur = cand
    vals = evaluate(cur)
    checks = [("pow", i, None) for i in range(k)] + [
        ("conj", i, j) for i in range(k) for j in range(i + 1, k)
    ]
    for kind, i, j in checks:
        if not len(cur):
            break
        m = len(cur)
        if kind == "pow":
            lhs = H.power(vals[i], int(G.rel[i]))
            rhs = word_value(vals, pres.powers[i], m)
        else:
            lhs = H.conj(vals[j], vals[i])
            rhs = word_value(vals, pres.conjugates[i][j], m)
        ok = lhs == rhs
        if not ok.all():
            cur = cur[ok]
            vals = [v[ok] for v in vals]
    return cur


def _partial_map(G: FiniteGroup, H: FiniteGroup, src: list[int], dst: list[int]) -> np.ndarray | None:
    """Injective homomorphism ``<src> -> H`` with ``src -> dst``, or None."""
    img = np.full(G.size, -1, dtype=np.intp)
    pre = np.full(H.size, -1, dtype=np.intp)
    img[0], pre[0] = 0, 0
    fg = np.array([0], dtype=np.intp)
    fh = np.array([0], dtype=np.intp)
    while len(fg):
        ng = np.concatenate([G.mul(fg, s) for s in src])
        nh = np.concatenate([H.mul(fh, h) for h in dst])
        known = img[ng] >= 0
        if np.any(img[ng[known]] != nh[known]):
            return None
        knownh = pre[nh] >= 0
        if np.any(pre[nh[knownh]] != ng[knownh]):
            return None
        if np.any(known != knownh):
            return None
        ng, nh = ng[~known], nh[~known]
        if not len(ng):
            break
        order = np.lexsort((nh, ng))
        ng, nh = ng[order], nh[order]
        dup = np.concatenate([[False], ng[1:] == ng[:-1]])
        if np.any(nh[1:][dup[1:]] != nh[:-1][dup[1:]]):
            return None
        ng, nh = ng[~dup], nh[~dup]
        if len(np.unique(nh)) != len(nh):
            return None
        img[ng], pre[nh] = nh, ng
        fg, fh = ng, nh
    return img


def is_isomorphism(G: FiniteGroup, H: FiniteGroup, genmap: dict[int, int]) -> bool:
    """Check that ``genmap`` extends to an isomorphism ``G -> H``."""
    if G.size != H.size:
        return False
    src = list(genmap)
    img = _partial_map(G, H, src, [genmap[s] for s in src])
    return img is not None and bool(np.all(img >= 0))


# -- search ---------------------------------------------------------------------------


def _unit_generators(units: list[int], mod: int) -> list[int]:
    gens: list[int] = []
    span = {1 % mod}
    for u in units:
        if u in span:
            continue
        gens.append(u)
        frontier = list(span)
        while frontier:
            new = []
            for a in frontier:
                for g in gens:
                    b = a * g % mod
                    if b not in span:
                        span.add(b)
                        new.append(b)
            frontier = new
    return gens


def _source_units(G: PcGroup, prog: _Program, t: int, cap: int = 2000) -> list[int]:
    """Units ``u`` such that ``s_t -> s_t^u`` (others fixed) is an automorphism."""
    s = prog.gens[t]
    o = G.order_of(s)
    units = [u for u in range(2, o) if gcd(u, G.p) == 1][:cap]
    if not units:
        return []
    imgs = np.array([int(G.power(s, u)) for u in units], dtype=np.intp)
    ok = _relation_filter(G, prog, G, list(prog.gens), t, imgs)
    good = set(int(v) for v in ok)
    valid = [u for u, im in zip(units, imgs) if int(im) in good]
    return _unit_generators(valid, o)


def _orbit_reps(H: FiniteGroup, cand: np.ndarray, conj_by: list[int], units: list[int]) -> np.ndarray:
    if not len(cand) or (not conj_by and not units):
        return cand
    n = H.size
    src, dst = [], []
    for z in conj_by:
        src.append(cand)
        dst.append(H.conj(cand, z))
    for u in units:
        src.append(cand)
        dst.append(H.power(cand, u))
    src, dst = np.concatenate(src), np.concatenate(dst)
    adj = coo_matrix((np.ones(len(src), dtype=np.int8), (src, dst)), shape=(n, n))
    _, comp = connected_components(adj, directed=True, connection="weak")
    cc = comp[cand]
    _, first = np.unique(cc, return_index=True)
    return np.sort(cand[first])


@dataclass
class _SearchState:
    budget: int
    nodes: int = 0

    def tick(self, n: int = 1):
        self.nodes += n
        if self.nodes > self.budget:
            raise BudgetExceeded(f"search exceeded {self.budget} nodes")


def iso_search(
    G: FiniteGroup, H: FiniteGroup, budget: int = 200_000, stats: dict | None = None
) -> dict[int, int] | None:
    """Find an isomorphism ``G -> H`` as a map on minimal generators of ``G``.

    Returns None when the groups are proven non-isomorphic.  If ``stats`` is
    given it receives ``decided_by`` (``"order"``, ``"keys"`` or ``"search"``)
    and the number of search ``nodes``.
    """
    if stats is None:
        stats = {}
    stats.update(decided_by="order", nodes=0)
    if not isinstance(G, PcGroup):
        raise TypeError("the source group must be a PcGroup")
    if G.size != H.size or G.p != H.p:
        return None
    stats["decided_by"] = "keys"
    if key_histogram(G) != key_histogram(H) or frattini(G).size != frattini(H).size:
        return None
    stats["decided_by"] = "search"
    gens = minimal_generators(G)
    d = len(gens)
    if d == 0:
        return {}
    kg, kh = element_keys(G), element_keys(H)
    cand_all = [np.flatnonzero(np.all(kh == kg[s], axis=1)) for s in gens]
    sizes = [len(c) for c in cand_all]
    asc = sorted(range(d), key=lambda i: (sizes[i], i))
    order = asc if d <= 2 else [asc[0]] + sorted(asc[2:], key=lambda i: (-sizes[i], i)) + [asc[1]]
    gens = [gens[i] for i in order]
    cand_all = [cand_all[i] for i in order]
    prog = _build_program(G, gens)
    units = [_source_units(G, prog, t) for t in range(d)]
    phi_h = frattini(H)
    state = _SearchState(budget)

    def candidates(t: int, chosen: list[int]) -> np.ndarray:
        c = cand_all[t]
        if chosen:
            span = subgroup_closure(H, list(phi_h.generators) + chosen).mask
        else:
            span = phi_h.mask
        return c[~span[c]]

    def centraliser_gens(chosen: list[int]) -> list[int]:
        if not chosen:
            return list(H.generators)
        x = H.elements
        mask = np.ones(H.size, dtype=bool)
        for h in chosen:
            mask &= H.comm(x, h) == 0
        return Subgroup(H, mask).generators

    def rec(t: int, chosen: list[int]):
        c = candidates(t, chosen)
        if t == d - 1:
            state.tick()
            images = chosen + [0]
            ok = _relation_filter(G, prog, H, images, t, c)
            for h in ok:
                full = chosen + [int(h)]
                if subgroup_closure(H, full).size == H.size:
                    return full
            return None
        reps = _orbit_reps(H, c, centraliser_gens(chosen), units[t])
        for h in reps:
            state.tick()
            full = chosen + [int(h)]
            if t > 0 and _partial_map(G, H, gens[: t + 1], full) is None:
                continue
            res = rec(t + 1, full)
            if res is not None:
                return res
        return None

    try:
        res = rec(0, [])
    finally:
        stats["nodes"] = state.nodes
    if res is None:
        return None
    return dict(zip(gens, res))


def are_isomorphic(G: FiniteGroup, H: FiniteGroup, budget: int = 200_000) -> bool:
    return iso_search(G, H, budget) is not None


# -- catalog-level checks ------------------------------------------------------------


@dataclass
class DistinctReport:
    """Outcome of a pairwise distinctness check over a list of groups."""

    labels: list[str]
    by_invariants: int = 0
    by_search: list[tuple[str, str]] = field(default_factory=list)
    isomorphic: list[tuple[str, str]] = field(default_factory=list)
    unresolved: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.isomorphic and not self.unresolved

    def to_dict(self) -> dict:
        return {
            "groups": len(self.labels),
            "pairs_by_invariants": self.by_invariants,
            "pairs_by_search": [list(x) for x in self.by_search],
            "isomorphic": [list(x) for x in self.isomorphic],
            "unresolved": [list(x) for x in self.unresolved],
            "ok": self.ok,
        }


def verify_distinct(entries, budget: int = 200_000) -> DistinctReport:
    """Check that catalog entries are pairwise non-isomorphic.

    Pairs with different fingerprints are separated by invariants; the rest
    go through :func:`iso_search`.
    """
    from .catalog import fingerprint

    entries = list(entries)
    rep = DistinctReport([e.label for e in entries])
    fps = [fingerprint(e.group).as_tuple() for e in entries]
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            if fps[i] != fps[j]:
                rep.by_invariants += 1
                continue
            pair = (entries[i].label, entries[j].label)
            try:
                res = iso_search(entries[i].group, entries[j].group, budget)
            except BudgetExceeded:
                rep.unresolved.append(pair)
                continue
            (rep.by_search if res is None else rep.isomorphic).append(pair)
    return rep


@dataclass
class LambdaReport:
    p: int
    nonsquare: int
    class_of: dict[int, int]  # lambda -> representative it is isomorphic to
    failures: list[int]  # lambdas with no isomorphism to their representative
    distinct_proven: bool  # E(1) and E(nonsquare) proven non-isomorphic
    distinct_nodes: int
    distinct_decided_by: str
    substitution_exhaustive: bool
    substitution_checked: int
    substitution_valid: int
    substitution_mismatches: int

    @property
    def ok(self) -> bool:
        return not self.failures and self.distinct_proven and self.substitution_mismatches == 0

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["class_of"] = {str(k): v for k, v in self.class_of.items()}
        d["ok"] = self.ok
        return d


def substitution_check(p: int, lam: int = 1, samples: int | None = None, seed: int = 0) -> tuple[int, int, int]:
    """Test generator substitutions in ``E(lam)``.

    Take ``A = a^r b^(ps) c^(p^2 t)``, ``B = b^g c^(ph)`` and ``C = b^(pj) c^k``
    with ``r``, ``g``, ``k`` units.  Whenever ``[A, C] = B^p`` and ``[B, C] = 1``
    hold we need ``g = r k (mod p)`` and ``[A, B] = C^(p^2 mu)`` with
    ``mu = r^2 lam (mod p)``; moreover every unit ``r`` must occur.

    Returns ``(checked, valid, mismatches)``.  Every combination is tried when
    ``samples`` is None, otherwise a seeded random sample.
    """
    from .catalog import _e_lambda

    G = group_of_cached(_e_lambda(p, lam))
    a, b, c = G.gen("a"), G.gen("b"), G.gen("c")
    pa = np.array([int(G.power(a, e)) for e in range(p)])
    pb = np.array([int(G.power(b, e)) for e in range(p**2)])
    pc = np.array([int(G.power(c, e)) for e in range(p**3)])
    ranges = {
        "r": range(1, p),
        "s": range(p),
        "t": range(p),
        "g": [u for u in range(p**2) if u % p],
        "h": range(p**2),
        "j": range(p),
        "k": [u for u in range(p**3) if u % p],
    }
    if samples is None:
        grids = np.meshgrid(*[np.array(list(v)) for v in ranges.values()], indexing="ij")
        vals = {n: g.ravel() for n, g in zip(ranges, grids)}
    else:
        rng = np.random.default_rng(seed)
        vals = {n: rng.choice(np.array(list(v)), size=samples) for n, v in ranges.items()}
    r, k = vals["r"], vals["k"]
    A = G.mul(G.mul(pa[r], pb[p * vals["s"]]), pc[p**2 * vals["t"]])
    B = G.mul(pb[vals["g"]], pc[p * vals["h"]])
    C = G.mul(pb[p * vals["j"]], pc[k])
    holds = (G.comm(A, C) == G.pth_powers[B]) & (G.comm(B, C) == 0)
    bad = holds & ((vals["g"] - r * k) % p != 0)
    # C^(p^2 mu) = (c^(p^2 k))^mu since b^(p j) has order dividing p
    cp2 = G.power_pk(C, 2)
    mu = (r * r * lam) % p
    expected = np.zeros(len(C), dtype=np.intp)
    for e in range(1, p):
        sel = mu == e
        expected[sel] = G.power(cp2[sel], e)
    bad |= holds & (G.comm(A, B) != expected)
    missing = set(range(1, p)) - set(np.unique(r[holds]).tolist())
    return len(A), int(np.count_nonzero(holds)), int(np.count_nonzero(bad)) + len(missing)


def group_of_cached(pres):
    from .group import group_of

    return group_of(pres)


def verify_lambda_square(
    p: int, budget: int = 200_000, samples: int | None = None, seed: int = 0
) -> LambdaReport:
    """``E(lam)`` depends only on whether ``lam`` is a square mod ``p``.

    Every ``E(lam)`` is matched to ``E(1)`` or ``E(n)`` (``n`` the least
    non-square) by an explicit isomorphism, and ``E(1)`` is proven
    non-isomorphic to ``E(n)`` by exhaustive search.  The substitution check
    is exhaustive unless ``samples`` is given.
    """
    from .catalog import _e_lambda, is_square_mod, least_nonsquare

    if p == 2:
        raise ValueError("needs an odd prime")
    n = least_nonsquare(p)
    reps = {1: group_of_cached(_e_lambda(p, 1)), n: group_of_cached(_e_lambda(p, n))}
    class_of, failures = {}, []
    for lam in range(1, p):
        rep = 1 if is_square_mod(lam, p) else n
        G = group_of_cached(_e_lambda(p, lam))
        m = iso_search(G, reps[rep], budget)
        if m is None or not is_isomorphism(G, reps[rep], m):
            failures.append(lam)
        else:
            class_of[lam] = rep
    stats: dict = {}
    distinct = iso_search(reps[1], reps[n], budget, stats=stats) is None
    checked, valid, bad = substitution_check(p, 1, samples, seed)
    return LambdaReport(
        p, n, class_of, failures, distinct, stats["nodes"], stats["decided_by"], samples is None, checked, valid, bad
    )
