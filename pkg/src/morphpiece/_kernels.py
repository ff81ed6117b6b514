"""Hot inner loops of the BPE trainer.

Words live in a flattened int32 array indexed by (starts, lens); each word
carries an int64 frequency.  Adjacent symbol pairs are packed into a single
int64 key (left << 32 | right).

Two interchangeable backends: a numba-jitted one and a pure numpy one.  The
MORPHPIECE_BACKEND environment variable picks the default ("numba", "numpy",
or unset/"auto" meaning numba when importable), and every entry point also
accepts an explicit backend argument so both paths stay testable.
"""

from __future__ import annotations

import os

import numpy as np

BACKEND_ENV = "MORPHPIECE_BACKEND"

_jit_cache: dict[str, object] = {}


def _numba_available() -> bool:
    try:
        import numba  # noqa: F401
    except ImportError:
        return False
    return True


def resolve_backend(backend: str | None = None) -> str:
    """Map an explicit or environment-configured choice to a backend name."""
    choice = backend if backend is not None else os.environ.get(BACKEND_ENV, "auto")
    choice = choice.strip().lower() or "auto"
    if choice == "auto":
        return "numba" if _numba_available() else "numpy"
    if choice == "numpy":
        return "numpy"
    if choice == "numba":
        if not _numba_available():
            raise RuntimeError("numba backend requested but numba is not importable")
        return "numba"
    raise ValueError(f"unknown backend {choice!r} (expected numba, numpy or auto)")


def _compiled():
    """Compile the jitted kernels once and memoize them."""
    if "count" in _jit_cache:
        return _jit_cache["count"], _jit_cache["merge"]

    from numba import njit, types
    from numba.typed import Dict

    int64 = types.int64

    @njit(cache=True)
    def _count(flat, starts, lens, freqs):  # pragma: no cover (jitted)
        counts = Dict.empty(key_type=int64, value_type=int64)
        for w in range(starts.shape[0]):
            s = starts[w]
            e = s + lens[w]
            f = freqs[w]
            for i in range(s, e - 1):
                key = (np.int64(flat[i]) << 32) | np.int64(flat[i + 1])
                if key in counts:
                    counts[key] += f
                else:
                    counts[key] = f
        n = len(counts)
        keys = np.empty(n, np.int64)
        vals = np.empty(n, np.int64)
        i = 0
        for k, v in counts.items():
            keys[i] = k
            vals[i] = v
            i += 1
        return keys, vals

    @njit(cache=True)
    def _merge(flat, starts, lens, left, right, new_id):  # pragma: no cover (jitted)
        out_flat = np.empty_like(flat)
        out_starts = np.empty_like(starts)
        out_lens = np.empty_like(lens)
        pos = 0
        for w in range(starts.shape[0]):
            s = starts[w]
            e = s + lens[w]
            out_starts[w] = pos
            i = s
            while i < e:
                if i + 1 < e and flat[i] == left and flat[i + 1] == right:
                    out_flat[pos] = new_id
                    i += 2
                else:
                    out_flat[pos] = flat[i]
                    i += 1
                pos += 1
            out_lens[w] = pos - out_starts[w]
        return out_flat[:pos].copy(), out_starts, out_lens

    _jit_cache["count"] = _count
    _jit_cache["merge"] = _merge
    return _count, _merge


def _word_ids(lens: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(lens.shape[0], dtype=np.int64), lens)


def _count_pairs_np(flat, starts, lens, freqs):
    if flat.shape[0] < 2:
        empty = np.empty(0, np.int64)
        return empty, empty.copy()
    wid = _word_ids(lens)
    mask = wid[:-1] == wid[1:]
    if not mask.any():
        empty = np.empty(0, np.int64)
        return empty, empty.copy()
    packed = (flat[:-1].astype(np.int64) << 32) | flat[1:].astype(np.int64)
    packed = packed[mask]
    weights = np.repeat(freqs, lens)[:-1][mask]
    order = np.argsort(packed, kind="stable")
    packed = packed[order]
    weights = weights[order]
    bounds = np.flatnonzero(np.r_[True, packed[1:] != packed[:-1]])
    return packed[bounds], np.add.reduceat(weights, bounds)


def _apply_merge_np(flat, starts, lens, left, right, new_id):
    if flat.shape[0] < 2:
        return flat, starts, lens
    wid = _word_ids(lens)
    hits = np.flatnonzero(
        (flat[:-1] == left) & (flat[1:] == right) & (wid[:-1] == wid[1:])
    )
    if hits.size == 0:
        return flat, starts, lens
    if left == right:
        # Runs like "aaa" match at overlapping positions; merge left to right.
        keep = []
        prev = -2
        for p in hits.tolist():
            if p == prev + 1:
                continue
            keep.append(p)
            prev = p
        hits = np.asarray(keep, dtype=np.int64)
    out = flat.copy()
    out[hits] = new_id
    out = np.delete(out, hits + 1)
    new_lens = lens - np.bincount(wid[hits], minlength=lens.shape[0])
    new_starts = np.zeros_like(new_lens)
    np.cumsum(new_lens[:-1], out=new_starts[1:])
    return out, new_starts, new_lens


def count_pairs(flat, starts, lens, freqs, backend: str | None = None):
    """Count weighted adjacent pairs.  Returns (packed_keys, counts) arrays.

    Key order is backend-dependent; callers must treat the result as a map.
    """
    if resolve_backend(backend) == "numba":
        count, _ = _compiled()
        return count(flat, starts, lens, freqs)
    return _count_pairs_np(flat, starts, lens, freqs)


def apply_merge(flat, starts, lens, left, right, new_id, backend: str | None = None):
    """Replace every in-word (left, right) occurrence with new_id, greedily
    left to right, and return the rebuilt (flat, starts, lens)."""
    if resolve_backend(backend) == "numba":
        _, merge = _compiled()
        return merge(
            flat,
            starts,
            lens,
            np.int32(left),
            np.int32(right),
            np.int32(new_id),
        )
    return _apply_merge_np(flat, starts, lens, left, right, new_id)
