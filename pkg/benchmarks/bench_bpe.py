#!/usr/bin/env python3
"""Compare the compiled and pure-Python BPE training kernels.

Usage:
    python3 benchmarks/bench_bpe.py                  # synthetic workload
    python3 benchmarks/bench_bpe.py --corpus F.txt   # real corpus

Both kernels must produce identical merge lists; the benchmark fails if
they diverge.
"""

from __future__ import annotations

import argparse
import random
import string
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from fitclams._kernels import bpe as selected, bpe_py
from fitclams.corpus import load_corpus

try:
    from fitclams._kernels import _bpe_cy as bpe_cy
except ImportError:
    bpe_cy = None


def synthetic_word_counts(n_types: int, seed: int = 7) -> dict[str, int]:
    """Zipf-weighted word soup over a 26-letter alphabet."""
    rng = random.Random(seed)
    counts = {}
    while len(counts) < n_types:
        length = rng.randint(2, 12)
        word = "".join(rng.choice(string.ascii_lowercase) for _ in range(length))
        if word not in counts:
            counts[word] = max(1, int(1000 / (len(counts) + 1) ** 0.7))
    return counts


def prepare(word_counts):
    alphabet = sorted({"▁"} | {ch for w in word_counts for ch in w})
    sym_id = {s: i for i, s in enumerate(alphabet)}
    types = sorted(word_counts)
    return alphabet, sym_id, types


def run(impl, word_counts, num_merges):
    alphabet, sym_id, types = prepare(word_counts)
    symbols = list(alphabet)
    words = [[sym_id["▁"]] + [sym_id[ch] for ch in w] for w in types]
    counts = [word_counts[w] for w in types]
    start = time.perf_counter()
    merges = impl.train_merges(words, counts, symbols, num_merges)
    return time.perf_counter() - start, merges


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--corpus", default=None,
                        help="sentence-per-line corpus; default: synthetic")
    parser.add_argument("--types", type=int, default=6000,
                        help="synthetic word-type count")
    parser.add_argument("--vocab-size", type=int, default=3000)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if args.corpus:
        corpus = load_corpus(args.corpus)
        word_counts = {}
        for sent in corpus.sentences:
            for token in sent.tokens:
                word_counts[token] = word_counts.get(token, 0) + 1
        label = args.corpus
    else:
        word_counts = synthetic_word_counts(args.types)
        label = f"synthetic ({args.types} types)"

    alphabet, _, types = prepare(word_counts)
    num_merges = max(0, args.vocab_size - len(alphabet))
    print(f"corpus: {label}")
    print(f"word types: {len(types)}, alphabet: {len(alphabet)}, "
          f"merges requested: {num_merges}")
    print(f"selected kernel at import: {selected.IMPL}")

    impls = [("python", bpe_py)]
    if bpe_cy is not None:
        impls.append(("cython", bpe_cy))
    rows = []
    reference = None
    for name, impl in impls:
        best = float("inf")
        merges = None
        for _ in range(args.repeat):
            elapsed, merges = run(impl, word_counts, num_merges)
            best = min(best, elapsed)
        rows.append((name, best))
        if reference is None:
            reference = merges
        elif merges != reference:
            print(f"ERROR: {name} kernel produced a different merge list")
            return 1

    base = dict(rows)["python"]
    for name, elapsed in rows:
        print(f"{name:8s} {elapsed * 1000:9.1f} ms   "
              f"speedup x{base / elapsed:5.2f}")
    if bpe_cy is None:
        print("compiled kernel not built; rerun after "
              "`pip install -e . --no-build-isolation` with Cython available")
    else:
        print("merge lists identical across kernels")
    return 0


if __name__ == "__main__":
    sys.exit(main())
