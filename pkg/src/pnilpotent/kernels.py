"""Backend selection for the collector.

The compiled extension is used when it was built; otherwise the pure-Python
collector takes over.  ``use_backend`` switches explicitly (tests, benchmarks).
"""

from __future__ import annotations

import numpy as np

from . import _pykernels
from ._pykernels import CollectionError

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

CYTHON_AVAILABLE = _ckernels is not None
_backend = "cython" if CYTHON_AVAILABLE else "python"

__all__ = ["CollectionError", "CYTHON_AVAILABLE", "backend", "use_backend", "collect"]


def backend() -> str:
    return _backend


def use_backend(name: str) -> str:
    """Select ``"python"`` or ``"cython"``; returns the previous backend."""
    global _backend
    if name not in ("python", "cython"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "cython" and not CYTHON_AVAILABLE:
        raise RuntimeError("compiled kernels are not available")
    old, _backend = _backend, name
    return old


def _flatten(data):
    flat = getattr(data, "_flat", None)
    if flat is not None:
        return flat
    k = len(data.rel)
    wg: list[int] = []
    we: list[int] = []
    pow_off = np.zeros(k, dtype=np.int_)
    pow_len = np.zeros(k, dtype=np.int_)
    conj_off = np.zeros(k * k, dtype=np.int_)
    conj_len = np.zeros(k * k, dtype=np.int_)
    for i, w in enumerate(data.powers):
        pow_off[i], pow_len[i] = len(wg), len(w)
        for g, e in w:
            wg.append(g)
            we.append(e)
    for i in range(k):
        for j in range(i + 1, k):
            w = data.conj[i][j]
            conj_off[i * k + j], conj_len[i * k + j] = len(wg), len(w)
            for g, e in w:
                wg.append(g)
                we.append(e)
    flat = (
        np.asarray(data.rel, dtype=np.int_),
        pow_off,
        pow_len,
        conj_off,
        conj_len,
        np.asarray(wg, dtype=np.int_),
        np.asarray(we, dtype=np.int_),
    )
    object.__setattr__(data, "_flat", flat)
    return flat


def collect(data, exps, word, budget: int = 10**6) -> list[int]:
    """Return the normal form of ``exps * word`` (non-negative exponents)."""
    if _backend == "cython":
        return _ckernels.collect_flat(*_flatten(data), exps, list(word), budget)
    return _pykernels.collect(data, exps, word, budget)
