"""Power-commutator presentations of finite p-groups.

A presentation stores generators ``g_0 .. g_{k-1}`` where ``g_i`` has relative
order ``p**exps[i]``.  Relations are kept in the form consumed by collection:

* ``powers[i]``   -- normal word equal to ``g_i ** (p**exps[i])`` (gens > i)
* ``conjugates[i][j]`` (i < j) -- normal word equal to ``g_j ** g_i`` (gens >= j)

Words are tuples of ``(generator index, exponent)`` pairs.  A *normal* word
has strictly increasing generator indices and exponents in ``1 .. p**e - 1``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from . import kernels

Word = tuple[tuple[int, int], ...]

STEP_BUDGET = 10**6


class PresentationError(ValueError):
    """Malformed presentation data (unknown generator, tail condition, ...)."""


@dataclass(frozen=True)
class CollectorData:
    """Relation tables in the shapes both kernel backends expect."""

    rel: tuple[int, ...]
    powers: tuple[Word, ...]
    conj: tuple[tuple[Word, ...], ...]

    @property
    def k(self) -> int:
        return len(self.rel)


@dataclass(frozen=True)
class PcPresentation:
    prime: int
    names: tuple[str, ...]
    exps: tuple[int, ...]
    powers: tuple[Word, ...]
    conjugates: tuple[tuple[Word, ...], ...]
    _data: CollectorData = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        k = len(self.names)
        if len(self.exps) != k or len(self.powers) != k or len(self.conjugates) != k:
            raise PresentationError("relation tables do not match generator count")
        if len(set(self.names)) != k:
            raise PresentationError("duplicate generator names")
        if any(e < 1 for e in self.exps):
            raise PresentationError("relative order exponents must be >= 1")
        rel = tuple(self.prime**e for e in self.exps)
        for i, w in enumerate(self.powers):
            _check_normal(w, rel, lo=i + 1, what=f"power relation of {self.names[i]}")
        for i in range(k):
            for j, w in enumerate(self.conjugates[i]):
                if j <= i:
                    if w:
                        raise PresentationError("conjugate table must be upper triangular")
                    continue
                _check_normal(w, rel, lo=j, what=f"{self.names[j]}^{self.names[i]}")
        object.__setattr__(
            self, "_data", CollectorData(rel, self.powers, self.conjugates)
        )

    # -- basic data -------------------------------------------------------
    @property
    def rank(self) -> int:
        """Number of pc generators (not the minimal number of generators)."""
        return len(self.names)

    @property
    def order_exp(self) -> int:
        return sum(self.exps)

    @property
    def rel_orders(self) -> tuple[int, ...]:
        return self._data.rel

    @property
    def data(self) -> CollectorData:
        return self._data

    def index_of(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise PresentationError(f"unknown generator {name!r}") from None

    def identity(self) -> tuple[int, ...]:
        return (0,) * self.rank

    def generator(self, name: str | int) -> tuple[int, ...]:
        i = name if isinstance(name, int) else self.index_of(name)
        x = [0] * self.rank
        x[i] = 1
        return tuple(x)

    def word_from_exponents(self, exps: Sequence[int]) -> Word:
        return tuple((i, int(e)) for i, e in enumerate(exps) if e)

    def format_element(self, exps: Sequence[int]) -> str:
        parts = []
        for name, e in zip(self.names, exps):
            if e == 1:
                parts.append(name)
            elif e:
                parts.append(f"{name}^{e}")
        return "*".join(parts) or "1"

    # -- construction -----------------------------------------------------
    @classmethod
    def from_relations(
        cls,
        p: int,
        generators: Sequence[tuple[str, int]],
        powers: Mapping[str, Iterable[tuple[str, int]]] | None = None,
        commutators: Iterable[tuple[str, str, Iterable[tuple[str, int]]]] = (),
    ) -> "PcPresentation":
        """Build a presentation from human-style relations.

        ``commutators`` holds triples ``(x, y, w)`` meaning ``[x, y] = w`` with
        ``[x, y] = x^-1 y^-1 x y``.  Either argument order is accepted; words
        may use negative exponents.  Missing relations are trivial.
        """
        names = tuple(n for n, _ in generators)
        exps = tuple(int(e) for _, e in generators)
        k = len(names)
        idx = {n: i for i, n in enumerate(names)}
        if len(idx) != k:
            raise PresentationError("duplicate generator names")

        def resolve(word):
            out = []
            for name, e in word:
                if name not in idx:
                    raise PresentationError(f"unknown generator {name!r}")
                out.append((idx[name], int(e)))
            return out

        raw_pow: list[list[tuple[int, int]]] = [[] for _ in range(k)]
        for name, word in (powers or {}).items():
            if name not in idx:
                raise PresentationError(f"unknown generator {name!r}")
            i = idx[name]
            w = resolve(word)
            if any(g <= i for g, _ in w):
                raise PresentationError(
                    f"power relation of {name} must use later generators only"
                )
            raw_pow[i] = w

        raw_conj: dict[tuple[int, int], list[tuple[int, int]]] = {}
        for left, right, word in commutators:
            if left not in idx or right not in idx:
                raise PresentationError(f"unknown generator in [{left},{right}]")
            i, j = idx[left], idx[right]
            if i == j:
                raise PresentationError(f"[{left},{right}] is not a valid relation")
            w = resolve(word)
            if i < j:
                # [g_i, g_j] = w  =>  [g_j, g_i] = w^-1
                i, j = j, i
                w = [(g, -e) for g, e in reversed(w)]
            # now [g_i, g_j] with i > j (later, earlier):  g_i^{g_j} = g_i * w
            later, earlier = i, j
            if any(g < later for g, _ in w):
                raise PresentationError(
                    f"[{names[later]},{names[earlier]}] must lie in the tail "
                    f"generated by {names[later]} and later generators"
                )
            raw_conj[(earlier, later)] = [(later, 1)] + w

        rel = tuple(p**e for e in exps)
        pow_n: list[Word] = [()] * k
        conj_n: list[list[Word]] = [[()] * k for _ in range(k)]
        # normalise bottom-up: relations of g_i only need generators > i
        for i in reversed(range(k)):
            data = CollectorData(rel, tuple(pow_n), tuple(tuple(r) for r in conj_n))
            pow_n[i] = _normal_word(data, raw_pow[i])
            for j in range(i + 1, k):
                w = raw_conj.get((i, j), [(j, 1)])
                conj_n[i][j] = _normal_word(data, w)
        return cls(p, names, exps, tuple(pow_n), tuple(tuple(r) for r in conj_n))

    # -- JSON -------------------------------------------------------------
    def commutator_word(self, i: int, j: int) -> Word:
        """Normal word for ``[g_j, g_i]`` (i < j), derived from the conjugate."""
        gj = [0] * self.rank
        gj[j] = 1
        inv = inverse_exponents(self.data, gj)
        e = collect_word(self.data, inv, self.conjugates[i][j])
        return self.word_from_exponents(e)

    def to_dict(self) -> dict:
        def named(w):
            return [[self.names[g], e] for g, e in w]

        comms = []
        for i in range(self.rank):
            for j in range(i + 1, self.rank):
                w = self.commutator_word(i, j)
                if w:
                    comms.append(
                        {"left": self.names[j], "right": self.names[i], "value": named(w)}
                    )
        return {
            "p": self.prime,
            "generators": [
                {"name": n, "order_exp": e} for n, e in zip(self.names, self.exps)
            ],
            "power_relations": [
                {"generator": self.names[i], "value": named(w)}
                for i, w in enumerate(self.powers)
                if w
            ],
            "commutator_relations": comms,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_dict(cls, d: Mapping) -> "PcPresentation":
        try:
            gens = [(g["name"], int(g["order_exp"])) for g in d["generators"]]
            powers = {r["generator"]: r["value"] for r in d.get("power_relations", [])}
            comms = [
                (r["left"], r["right"], r["value"])
                for r in d.get("commutator_relations", [])
            ]
            p = int(d["p"])
        except (KeyError, TypeError) as exc:
            raise PresentationError(f"malformed presentation JSON: {exc}") from None
        return cls.from_relations(p, gens, powers, comms)

    @classmethod
    def from_json(cls, s: str) -> "PcPresentation":
        return cls.from_dict(json.loads(s))


def _check_normal(w: Word, rel, lo: int, what: str):
    last = lo - 1
    for g, e in w:
        if g < lo:
            raise PresentationError(f"{what}: generator {g} violates the tail condition")
        if g <= last:
            raise PresentationError(f"{what}: word is not in normal form")
        if not 0 < e < rel[g]:
            raise PresentationError(f"{what}: exponent {e} out of range")
        last = g


# -- collection wrappers ---------------------------------------------------


def collect_word(data: CollectorData, exps, word, budget: int = STEP_BUDGET):
    """Multiply the normal form ``exps`` by ``word`` (negative exponents ok)."""
    out = list(exps)
    pending: list[tuple[int, int]] = []
    for g, e in word:
        e = int(e)
        if e >= 0:
            pending.append((g, e))
            continue
        if pending:
            out = kernels.collect(data, out, pending, budget)
            pending = []
        h = kernels.collect(data, [0] * data.k, [(g, -e)], budget)
        hinv = inverse_exponents(data, h, budget)
        out = kernels.collect(
            data, out, [(i, x) for i, x in enumerate(hinv) if x], budget
        )
    if pending:
        out = kernels.collect(data, out, pending, budget)
    return tuple(out)


def inverse_exponents(data: CollectorData, exps, budget: int = STEP_BUDGET):
    """Exponents of the inverse, solved one position at a time."""
    z = list(exps)
    out = [0] * data.k
    for i in range(data.k):
        if z[i]:
            e = data.rel[i] - z[i]
            out[i] = e
            z = kernels.collect(data, z, [(i, e)], budget)
    if any(z):
        raise kernels.CollectionError("inverse did not reduce to the identity")
    return tuple(out)


def _normal_word(data: CollectorData, word) -> Word:
    e = collect_word(data, [0] * data.k, word)
    return tuple((i, x) for i, x in enumerate(e) if x)
