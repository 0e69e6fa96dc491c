"""Compare the compiled and pure-Python collectors.

Usage: python benchmarks/bench_kernels.py [--words 300] [--length 40] [--seed 1]

Each case collects the same random words with both backends, checks that the
normal forms agree and reports words per second.  Collection from the left
grows quickly with the prime and the generator orders, so the cases stay at
sizes where the Python collector finishes in seconds.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from pnilpotent import kernels
from pnilpotent.catalog import build_E, build_family_B
from pnilpotent.rank2 import Rank2Params, build_group

CASES = [
    ("G(6,5,3) p=3", lambda: build_group(Rank2Params.type1(6, 5, 3), 3)),
    ("G(7,6,5,3) p=3", lambda: build_group(Rank2Params.type2(7, 6, 5, 3), 3)),
    ("E8 p=7", lambda: build_E(8, 7).presentation),
    ("B(4,2,0) p=7", lambda: build_family_B(4, 2, 0, 7).presentation),
]


def random_words(pres, count: int, length: int, rng) -> list[list[tuple[int, int]]]:
    k = pres.rank
    rel = pres.rel_orders
    out = []
    for _ in range(count):
        gens = rng.integers(0, k, size=length)
        out.append([(int(g), int(rng.integers(1, min(rel[g], pres.prime)))) for g in gens])
    return out


def run_backend(name: str, data, words, k: int) -> tuple[float, list]:
    prev = kernels.use_backend(name)
    try:
        t0 = time.perf_counter()
        res = [kernels.collect(data, [0] * k, w) for w in words]
        return time.perf_counter() - t0, res
    finally:
        kernels.use_backend(prev)


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--words", type=int, default=300)
    ap.add_argument("--length", type=int, default=20)
    ap.add_argument("--seed", type=int, default=1)
    args = ap.parse_args(argv)
    if not kernels.CYTHON_AVAILABLE:
        print("compiled kernels not built; only the Python collector is available")
    rng = np.random.default_rng(args.seed)
    print(f"{'case':<16} {'python w/s':>12} {'cython w/s':>12} {'speedup':>8}")
    status = 0
    for label, make in CASES:
        pres = make()
        words = random_words(pres, args.words, args.length, rng)
        data, k = pres.data, pres.rank
        tp, rp = run_backend("python", data, words, k)
        if kernels.CYTHON_AVAILABLE:
            tc, rc = run_backend("cython", data, words, k)
            if rp != rc:
                print(f"{label}: backends disagree")
                status = 1
            print(f"{label:<16} {len(words) / tp:>12.0f} {len(words) / tc:>12.0f} {tp / tc:>7.1f}x")
        else:
            print(f"{label:<16} {len(words) / tp:>12.0f} {'-':>12} {'-':>8}")
    return status


if __name__ == "__main__":
    raise SystemExit(main())
