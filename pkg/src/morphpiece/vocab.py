"""Merged vocabulary: morpheme tokens, BPE tokens and specials in one id space.

Id layout: special tokens first in their given order, then the morpheme
inventory sorted lexicographically, then the remaining BPE tokens in BPE id
order.  Every token carries a source tag; tokens present on both sides are
tagged shared and consume a single id, which gives the size identity

    len(vocab) == len(inventory) + len(bpe) - overlap + len(specials)
"""

from __future__ import annotations

import enum
from collections.abc import Iterable, Sequence

from .errors import DuplicateTokenError, ParseError, UnknownTokenError

END_OF_TEXT = "<|endoftext|>"
NO_SPACE_JOINER = "<|nospace|>"
DEFAULT_SPECIALS = (END_OF_TEXT, NO_SPACE_JOINER)

SEPARATOR = "#"


class SourceTag(enum.Enum):
    MORPH_AFFIX = "morph-affix"
    MORPH_STEM = "morph-stem"
    BPE = "bpe"
    SHARED = "shared"
    SPECIAL = "special"


_TAG_NAMES = {tag.value: tag for tag in SourceTag}


class MergedVocabulary:
    def __init__(self, id_to_token: Sequence[str], tags: Sequence[SourceTag], specials: Sequence[str]):
        if len(id_to_token) != len(tags):
            raise ValueError("token list and tag list differ in length")
        self.id_to_token: tuple[str, ...] = tuple(id_to_token)
        self.tags: tuple[SourceTag, ...] = tuple(tags)
        self.specials: tuple[str, ...] = tuple(specials)
        self.token_to_id: dict[str, int] = {}
        for idx, token in enumerate(self.id_to_token):
            if token in self.token_to_id:
                raise DuplicateTokenError(f"token {token!r} assigned twice")
            self.token_to_id[token] = idx

    def __len__(self) -> int:
        return len(self.id_to_token)

    def __contains__(self, token: str) -> bool:
        return token in self.token_to_id

    def id_of(self, token: str) -> int:
        idx = self.token_to_id.get(token)
        if idx is None:
            raise UnknownTokenError(f"unknown token {token!r}")
        return idx

    def token_of(self, idx: int) -> str:
        if not 0 <= idx < len(self.id_to_token):
            raise UnknownTokenError(f"id {idx} out of range")
        return self.id_to_token[idx]

    def tag_of(self, token: str) -> SourceTag:
        return self.tags[self.id_of(token)]


def merge_vocabularies(
    inventory: Iterable[str],
    bpe_tokens: Sequence[str],
    specials: Sequence[str] = DEFAULT_SPECIALS,
) -> MergedVocabulary:
    """Combine a morpheme inventory with an (id-ordered) BPE token list.

    Specials must not appear in either source; duplicates inside a source
    raise DuplicateTokenError.
    """
    specials = tuple(specials)
    if len(set(specials)) != len(specials):
        raise DuplicateTokenError("duplicate special token")
    morph = sorted(set(inventory))
    bpe_set = set(bpe_tokens)
    if len(bpe_set) != len(bpe_tokens):
        raise DuplicateTokenError("duplicate token in BPE vocabulary")
    morph_set = set(morph)
    for special in specials:
        if special in morph_set or special in bpe_set:
            raise DuplicateTokenError(f"special token {special!r} collides with a source token")

    id_to_token: list[str] = list(specials)
    tags: list[SourceTag] = [SourceTag.SPECIAL] * len(specials)
    for token in morph:
        id_to_token.append(token)
        if token in bpe_set:
            tags.append(SourceTag.SHARED)
        elif SEPARATOR in token:
            tags.append(SourceTag.MORPH_AFFIX)
        else:
            tags.append(SourceTag.MORPH_STEM)
    for token in bpe_tokens:
        if token in morph_set:
            continue
        id_to_token.append(token)
        tags.append(SourceTag.BPE)
    return MergedVocabulary(id_to_token, tags, specials)


def serialize(vocab: MergedVocabulary, path: str) -> None:
    """Write token<TAB>id<TAB>tag lines in id order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for idx, token in enumerate(vocab.id_to_token):
            fh.write(f"{token}\t{idx}\t{vocab.tags[idx].value}\n")


def deserialize(path: str) -> MergedVocabulary:
    """Read a vocabulary file, validating ids are dense and tokens unique."""
    rows: list[tuple[str, int, SourceTag]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(path, line_no, "expected 'token<TAB>id<TAB>tag'")
            token, id_text, tag_text = fields
            if not token:
                raise ParseError(path, line_no, "empty token")
            try:
                idx = int(id_text)
            except ValueError:
                raise ParseError(path, line_no, f"id {id_text!r} is not an integer") from None
            tag = _TAG_NAMES.get(tag_text)
            if tag is None:
                raise ParseError(path, line_no, f"unknown source tag {tag_text!r}")
            if token in seen:
                raise ParseError(path, line_no, f"duplicate token {token!r}")
            seen.add(token)
            rows.append((token, idx, tag))
    if not rows:
        raise ParseError(path, 1, "empty vocabulary file")
    rows.sort(key=lambda r: r[1])
    for expect, (token, idx, _) in enumerate(rows):
        if idx != expect:
            raise ParseError(path, 1, f"ids are not dense: expected {expect}, found {idx} ({token!r})")
    id_to_token = [r[0] for r in rows]
    tags = [r[2] for r in rows]
    specials = tuple(r[0] for r in rows if r[2] is SourceTag.SPECIAL)
    return MergedVocabulary(id_to_token, tags, specials)
