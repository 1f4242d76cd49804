"""Benchmark the compiled alignment kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_align.py [--pairs N] [--repeat K]
"""

import argparse
import random
import time

from normforge import _align_py
from normforge.align import BACKEND

try:
    from normforge import _speedups
except ImportError:
    _speedups = None


def make_pairs(n, rng):
    alphabet = "abcdefghijklmnopqrstuvwxyzé'"
    pairs = []
    for _ in range(n):
        norm = "".join(rng.choice(alphabet) for _ in range(rng.randint(3, 12)))
        raw = list(norm)
        for _ in range(rng.randint(0, 3)):
            kind = rng.randrange(3)
            pos = rng.randrange(len(raw))
            if kind == 0:
                raw[pos] = rng.choice(alphabet)
            elif kind == 1 and len(raw) > 1:
                del raw[pos]
            else:
                raw.insert(pos, rng.choice(alphabet))
        pairs.append(("".join(raw) or "a", norm))
    return pairs


def bench(label, fn, pairs, repeat):
    best = min(
        time_once(fn, pairs) for _ in range(repeat)
    )
    rate = len(pairs) / best
    print(f"{label:24s} {best * 1e3:8.1f} ms   {rate:12,.0f} pairs/s")
    return best


def time_once(fn, pairs):
    start = time.perf_counter()
    for raw, norm in pairs:
        fn(raw, norm)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--pairs", type=int, default=20_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    pairs = make_pairs(args.pairs, random.Random(0))
    print(f"{args.pairs} pairs, best of {args.repeat} (active backend: {BACKEND})\n")

    py_dist = bench("distance (python)", _align_py.distance, pairs, args.repeat)
    py_align = bench("align (python)", _align_py.align, pairs, args.repeat)
    if _speedups is not None:
        c_dist = bench("distance (compiled)", _speedups.distance, pairs, args.repeat)
        c_align = bench("align (compiled)", _speedups.align, pairs, args.repeat)
        print(
            f"\nspeedup: distance {py_dist / c_dist:.1f}x, "
            f"align {py_align / c_align:.1f}x"
        )
        sample = pairs[: 1000]
        for raw, norm in sample:
            assert _speedups.distance(raw, norm) == _align_py.distance(raw, norm)
            assert _speedups.align(raw, norm) == _align_py.align(raw, norm)
        print("backends agree on a 1000-pair sample")
    else:
        print("\ncompiled backend not available")


if __name__ == "__main__":
    main()
