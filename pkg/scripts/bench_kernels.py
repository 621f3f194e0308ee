#!/usr/bin/env python3
"""Benchmark the compiled sequence kernels against the pure-Python fallback.

Usage: python scripts/bench_kernels.py [--traces N] [--length L] [--alphabet K]
"""

import argparse
import random
import time

from devmine import kernels
from devmine.kernels import _pyimpl


def make_corpus(n_traces, length, alphabet, seed=0):
    rng = random.Random(seed)
    return [[rng.randrange(alphabet) for _ in range(length)] for _ in range(n_traces)]


def bench(label, fn, corpus, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = [fn(seq) for seq in corpus]
        best = min(best, time.perf_counter() - t0)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--traces", type=int, default=400)
    parser.add_argument("--length", type=int, default=60)
    parser.add_argument("--alphabet", type=int, default=8)
    args = parser.parse_args()

    corpus = make_corpus(args.traces, args.length, args.alphabet)
    pattern = [0, 1, 2]
    window = [0, 1, 2]

    cases = [
        ("tandem_runs", lambda seq: kernels.tandem_runs(seq),
         lambda seq: _pyimpl.tandem_runs(seq)),
        ("window_tandem_runs", lambda seq: kernels.window_tandem_runs(seq),
         lambda seq: _pyimpl.window_tandem_runs(seq)),
        ("count_occurrences", lambda seq: kernels.count_occurrences(seq, pattern),
         lambda seq: _pyimpl.count_occurrences(seq, pattern)),
        ("count_window_occurrences", lambda seq: kernels.count_window_occurrences(seq, window),
         lambda seq: _pyimpl.count_window_occurrences(seq, window)),
    ]

    print(f"corpus: {args.traces} traces x {args.length} events, "
          f"alphabet {args.alphabet}; compiled extension: {kernels.HAVE_SPEEDUPS}")
    print(f"{'kernel':28} {'compiled':>10} {'pure':>10} {'speedup':>8}")
    for name, fast, slow in cases:
        t_fast, r_fast = bench(name, fast, corpus)
        t_slow, r_slow = bench(name, slow, corpus)
        assert r_fast == r_slow, f"{name}: implementations disagree"
        ratio = t_slow / t_fast if t_fast > 0 else float("inf")
        print(f"{name:28} {t_fast * 1e3:9.1f}ms {t_slow * 1e3:9.1f}ms {ratio:7.1f}x")


if __name__ == "__main__":
    main()
