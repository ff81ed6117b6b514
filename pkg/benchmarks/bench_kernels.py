"""Compare the numba and numpy training kernels.

Runs the raw pair-count / merge kernels on a synthetic word table, then a
full end-to-end training run, and prints wall times for both backends.

    python3 benchmarks/bench_kernels.py --words 200000 --target 1000
"""

import argparse
import random
import time

import numpy as np

from morphpiece._kernels import apply_merge, count_pairs, resolve_backend
from morphpiece.bpe import train


def synthetic_csr(n_words: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    lens = rng.integers(1, 12, size=n_words).astype(np.int32)
    starts = np.zeros(n_words, dtype=np.int32)
    np.cumsum(lens[:-1], out=starts[1:])
    flat = rng.integers(0, 256, size=int(lens.sum())).astype(np.int32)
    freqs = rng.integers(1, 50, size=n_words).astype(np.int64)
    return flat, starts, lens, freqs


def synthetic_corpus(n_docs: int, seed: int = 7) -> list[str]:
    rng = random.Random(seed)
    stems = ["walk", "talk", "jump", "paint", "read", "plant", "work", "rest"]
    affixes = ["ing", "ed", "er", "s", ""]
    docs = []
    for _ in range(n_docs):
        words = [
            rng.choice(stems) + rng.choice(affixes)
            for _ in range(rng.randint(4, 12))
        ]
        docs.append(" ".join(words))
    return docs


def bench_kernels(n_words: int, reps: int) -> None:
    flat, starts, lens, freqs = synthetic_csr(n_words)
    print(f"raw kernels: {n_words} words, {flat.shape[0]} symbols, {reps} reps")
    for backend in ("numpy", "numba"):
        try:
            resolve_backend(backend)
        except ValueError as exc:
            print(f"  {backend:6s}  unavailable ({exc})")
            continue
        # first call pays any JIT cost; keep it out of the timed loop
        keys, counts = count_pairs(flat, starts, lens, freqs, backend=backend)
        best = int(keys[np.argmax(counts)])
        left, right = best >> 32, best & 0xFFFFFFFF
        apply_merge(flat, starts, lens, left, right, 256, backend=backend)

        t0 = time.perf_counter()
        for _ in range(reps):
            count_pairs(flat, starts, lens, freqs, backend=backend)
        t_count = (time.perf_counter() - t0) / reps

        t0 = time.perf_counter()
        for _ in range(reps):
            apply_merge(flat, starts, lens, left, right, 256, backend=backend)
        t_merge = (time.perf_counter() - t0) / reps
        print(f"  {backend:6s}  count_pairs {t_count * 1e3:8.2f} ms   apply_merge {t_merge * 1e3:8.2f} ms")


def bench_train(n_docs: int, target: int) -> None:
    corpus = synthetic_corpus(n_docs)
    print(f"full training: {n_docs} docs, target size {target}")
    merges = {}
    for backend in ("numpy", "numba"):
        try:
            resolve_backend(backend)
        except ValueError as exc:
            print(f"  {backend:6s}  unavailable ({exc})")
            continue
        train(corpus[:50], 280, backend=backend)  # warm-up
        t0 = time.perf_counter()
        model = train(corpus, target, backend=backend)
        elapsed = time.perf_counter() - t0
        merges[backend] = model.merges
        print(f"  {backend:6s}  {elapsed:6.2f} s   ({len(model.merges)} merges)")
    if len(merges) == 2:
        assert merges["numpy"] == merges["numba"], "backends disagree"
        print("  backends produce identical merge lists")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--words", type=int, default=200_000)
    parser.add_argument("--reps", type=int, default=20)
    parser.add_argument("--docs", type=int, default=20_000)
    parser.add_argument("--target", type=int, default=1000)
    args = parser.parse_args()
    bench_kernels(args.words, args.reps)
    bench_train(args.docs, args.target)


if __name__ == "__main__":
    main()
