"""Byte-level BPE: training with an exclusion set, encoding, byte decoding.

Every pretoken is remapped to the printable byte alphabet (leading space
becoming the SPACE_MARKER character) before merges apply.  Token ids are
dense: 0..255 for the base alphabet in byte order, then one id per merge
that produces a new token string.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Collection, Iterable, Sequence

import numpy as np

from . import _kernels
from .bytemap import (
    DEFAULT_BYTE_MAP,
    byte_to_char_table,
    char_to_byte_table,
)
from .errors import AlphabetError, EmptyEffectiveCorpusError, ParseError
from .pretokenize import Pretoken, pretokenize

MODEL_HEADER = "bpe-v1"


def _base_alphabet(byte_map: str) -> list[str]:
    table = byte_to_char_table(byte_map)
    return [table[b] for b in range(256)]


class BpeModel:
    """An ordered merge list and the token ids it induces."""

    def __init__(self, merges: Sequence[tuple[str, str]], byte_map: str = DEFAULT_BYTE_MAP):
        self.byte_map = byte_map
        self.merges: list[tuple[str, str]] = []
        self._byte_to_char = byte_to_char_table(byte_map)
        self._char_to_byte = char_to_byte_table(byte_map)
        vocab: dict[str, int] = {}
        for token in _base_alphabet(byte_map):
            vocab[token] = len(vocab)
        ranks: dict[tuple[str, str], int] = {}
        for left, right in merges:
            if left not in vocab or right not in vocab:
                raise ValueError(f"merge ({left!r}, {right!r}) references an unknown token")
            pair = (left, right)
            if pair in ranks:
                raise ValueError(f"duplicate merge {pair!r}")
            ranks[pair] = len(self.merges)
            self.merges.append(pair)
            vocab.setdefault(left + right, len(vocab))
        self.vocab = vocab
        self._ranks = ranks
        self._cache: dict[str, tuple[str, ...]] = {}

    # -- encoding ---------------------------------------------------------

    def remap(self, raw: str) -> str:
        """UTF-8 encode raw text and remap each byte to the printable alphabet."""
        table = self._byte_to_char
        return "".join(table[b] for b in raw.encode("utf-8"))

    def _segments(self, word: str) -> tuple[str, ...]:
        cached = self._cache.get(word)
        if cached is not None:
            return cached
        parts: list[str] = list(word)
        ranks = self._ranks
        while len(parts) > 1:
            best_rank: int | None = None
            for i in range(len(parts) - 1):
                rank = ranks.get((parts[i], parts[i + 1]))
                if rank is not None and (best_rank is None or rank < best_rank):
                    best_rank = rank
            if best_rank is None:
                break
            left, right = self.merges[best_rank]
            merged = left + right
            rebuilt: list[str] = []
            i = 0
            while i < len(parts):
                if i + 1 < len(parts) and parts[i] == left and parts[i + 1] == right:
                    rebuilt.append(merged)
                    i += 2
                else:
                    rebuilt.append(parts[i])
                    i += 1
            parts = rebuilt
        result = tuple(parts)
        self._cache[word] = result
        return result

    def encode_pretoken(self, pretoken: Pretoken) -> list[str]:
        """BPE-split one pretoken; an absorbed leading space becomes the marker."""
        return list(self._segments(self.remap(pretoken.raw)))

    def encode(self, text: str) -> list[str]:
        """Pretokenize and BPE-split a whole text."""
        out: list[str] = []
        for pretoken in pretokenize(text):
            out.extend(self._segments(self.remap(pretoken.raw)))
        return out

    def decode(self, tokens: Iterable[str]) -> str:
        """Concatenate tokens, undo the byte remap and decode UTF-8.

        Raises AlphabetError when a token holds characters outside the map;
        byte sequences that are not valid UTF-8 decode with replacement.
        """
        table = self._char_to_byte
        buf = bytearray()
        for token in tokens:
            for ch in token:
                b = table.get(ch)
                if b is None:
                    raise AlphabetError(
                        f"token {token!r} contains {ch!r} which is outside the byte alphabet"
                    )
                buf.append(b)
        return bytes(buf).decode("utf-8", errors="replace")

    # -- persistence ------------------------------------------------------

    def save(self, merges_path: str, vocab_path: str) -> None:
        with open(merges_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(f"{MODEL_HEADER} {len(self.vocab)} {self.byte_map}\n")
            for left, right in self.merges:
                fh.write(f"{left} {right}\n")
        with open(vocab_path, "w", encoding="utf-8", newline="\n") as fh:
            for token, idx in sorted(self.vocab.items(), key=lambda kv: kv[1]):
                fh.write(f"{token}\t{idx}\n")

    @classmethod
    def load(cls, merges_path: str, vocab_path: str | None = None) -> "BpeModel":
        """Load a model file, validating structure line by line."""
        with open(merges_path, encoding="utf-8") as fh:
            lines = fh.read().split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        if not lines:
            raise ParseError(merges_path, 1, "empty model file")
        header = lines[0].split(" ")
        if len(header) != 3 or header[0] != MODEL_HEADER:
            raise ParseError(merges_path, 1, f"bad header (expected '{MODEL_HEADER} <size> <bytemap>')")
        try:
            declared = int(header[1])
        except ValueError:
            raise ParseError(merges_path, 1, f"vocab size {header[1]!r} is not an integer") from None
        try:
            known = set(_base_alphabet(header[2]))
        except ValueError:
            raise ParseError(merges_path, 1, f"unknown byte map {header[2]!r}") from None
        merges: list[tuple[str, str]] = []
        seen_pairs: set[tuple[str, str]] = set()
        for offset, line in enumerate(lines[1:], start=2):
            fields = line.split(" ")
            if len(fields) != 2 or not fields[0] or not fields[1]:
                raise ParseError(merges_path, offset, "merge line must be 'left right'")
            pair = (fields[0], fields[1])
            if pair in seen_pairs:
                raise ParseError(merges_path, offset, f"duplicate merge {pair!r}")
            if pair[0] not in known or pair[1] not in known:
                raise ParseError(merges_path, offset, f"merge {pair!r} references an unknown token")
            seen_pairs.add(pair)
            known.add(pair[0] + pair[1])
            merges.append(pair)
        model = cls(merges, byte_map=header[2])
        if len(model.vocab) != declared:
            raise ParseError(
                merges_path, 1,
                f"header declares {declared} tokens but merges induce {len(model.vocab)}",
            )
        if vocab_path is not None:
            _check_vocab_file(model, vocab_path)
        return model


def _check_vocab_file(model: BpeModel, vocab_path: str) -> None:
    seen: dict[str, int] = {}
    with open(vocab_path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(vocab_path, line_no, "vocab line must be 'token<TAB>id'")
            try:
                idx = int(fields[1])
            except ValueError:
                raise ParseError(vocab_path, line_no, f"id {fields[1]!r} is not an integer") from None
            if fields[0] in seen:
                raise ParseError(vocab_path, line_no, f"duplicate token {fields[0]!r}")
            seen[fields[0]] = idx
    if seen != model.vocab:
        raise ParseError(vocab_path, 1, "vocab file disagrees with the merge list")


def _pair_sort_key(tokens: list[str]):
    def key(packed: int):
        left = tokens[packed >> 32]
        right = tokens[packed & 0xFFFFFFFF]
        return (left + right, left, right)

    return key


def train(
    corpus: Iterable[str],
    target_size: int,
    exclusion: Collection[str] = frozenset(),
    *,
    byte_map: str = DEFAULT_BYTE_MAP,
    backend: str | None = None,
) -> BpeModel:
    """Train a BPE model.

    Pretokens whose space-stripped surface is in the exclusion set never feed
    pair counts.  Merges are chosen by highest count; ties go to the pair
    whose concatenation (then left side, then right side) sorts first.
    Training stops at target_size or when no pair occurs at least twice.
    """
    if target_size < 256:
        raise ValueError(f"target_size must be at least 256, got {target_size}")
    byte_table = byte_to_char_table(byte_map)
    char_to_byte = char_to_byte_table(byte_map)

    word_freqs: Counter[str] = Counter()
    for doc in corpus:
        for pretoken in pretokenize(doc):
            if pretoken.text in exclusion:
                continue
            data = pretoken.raw.encode("utf-8")
            word_freqs["".join(byte_table[b] for b in data)] += 1
    if not word_freqs:
        raise EmptyEffectiveCorpusError("no trainable pretokens after exclusion")

    words = sorted(word_freqs)
    lens = np.array([len(w) for w in words], dtype=np.int64)
    starts = np.zeros_like(lens)
    np.cumsum(lens[:-1], out=starts[1:])
    flat = np.empty(int(lens.sum()), dtype=np.int32)
    pos = 0
    for word in words:
        for ch in word:
            flat[pos] = char_to_byte[ch]
            pos += 1
    freqs = np.array([word_freqs[w] for w in words], dtype=np.int64)

    tokens = _base_alphabet(byte_map)
    token_ids = {t: i for i, t in enumerate(tokens)}
    merges: list[tuple[str, str]] = []
    vocab_count = len(tokens)

    while vocab_count < target_size:
        keys, counts = _kernels.count_pairs(flat, starts, lens, freqs, backend=backend)
        if keys.size == 0:
            break
        best = int(counts.max())
        if best < 2:
            break
        candidates = keys[counts == best].tolist()
        chosen = min(candidates, key=_pair_sort_key(tokens))
        left_id = chosen >> 32
        right_id = chosen & 0xFFFFFFFF
        left, right = tokens[left_id], tokens[right_id]
        merged = left + right
        merges.append((left, right))
        new_id = token_ids.get(merged)
        if new_id is None:
            new_id = len(tokens)
            tokens.append(merged)
            token_ids[merged] = new_id
            vocab_count += 1
        flat, starts, lens = _kernels.apply_merge(
            flat, starts, lens, left_id, right_id, new_id, backend=backend
        )
    return BpeModel(merges, byte_map=byte_map)


def load_published_merges(path: str) -> BpeModel:
    """Load an external merge list in the common published format.

    Accepts an optional leading "#version" comment line.  The resulting
    model uses the standard byte map, not the morphsafe one.
    """
    merges: list[tuple[str, str]] = []
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line or (line_no == 1 and line.startswith("#version")):
                continue
            fields = line.split(" ")
            if len(fields) != 2:
                raise ParseError(path, line_no, "merge line must be 'left right'")
            merges.append((fields[0], fields[1]))
    try:
        return BpeModel(merges, byte_map="gpt2")
    except ValueError as exc:
        raise ParseError(path, 1, str(exc)) from None
