"""Token stream to text: classification, word grouping, reverse lookup.

Tokens are labelled by surface shape (a trailing "#" marks a prefix, a
leading "#" a suffix, a lone "#" a compound separator, a leading space
marker a BPE token) with the vocabulary source tag deciding bare tokens.
A small transition table then groups the stream into morph words and BPE
runs.  Morph words are reversed through the table when possible; otherwise
markers are stripped and the pieces concatenated, and the group is flagged
as unverified.
"""

from __future__ import annotations

import enum
from collections.abc import Sequence
from dataclasses import dataclass, field

from .bpe import BpeModel
from .bytemap import SPACE_MARKER
from .morphtable import SEPARATOR, ReverseMorphTable
from .vocab import END_OF_TEXT, NO_SPACE_JOINER, MergedVocabulary, SourceTag


class TokenLabel(enum.Enum):
    PREFIX = "prefix"
    STEM = "stem"
    SUFFIX = "suffix"
    HASH = "hash"
    BPE = "bpe"


class GroupKind(enum.Enum):
    MORPH_WORD = "morph-word"
    BPE_RUN = "bpe-run"


@dataclass
class WordGroup:
    tokens: tuple[str, ...]
    kind: GroupKind
    tainted: bool = False
    verified: bool = False


def classify(tokens: Sequence[str], vocab: MergedVocabulary) -> list[TokenLabel]:
    """Label each token.  Raises UnknownTokenError for tokens outside the
    vocabulary and ValueError for special tokens (strip those first)."""
    labels: list[TokenLabel] = []
    for token in tokens:
        tag = vocab.tag_of(token)
        if tag is SourceTag.SPECIAL:
            raise ValueError(f"special token {token!r} cannot be classified")
        if token == SEPARATOR:
            labels.append(TokenLabel.HASH)
        elif token.endswith(SEPARATOR):
            labels.append(TokenLabel.PREFIX)
        elif token.startswith(SEPARATOR):
            labels.append(TokenLabel.SUFFIX)
        elif token.startswith(SPACE_MARKER):
            labels.append(TokenLabel.BPE)
        elif tag is SourceTag.MORPH_STEM:
            labels.append(TokenLabel.STEM)
        else:
            labels.append(TokenLabel.BPE)
    return labels


class _Action(enum.Enum):
    CONTINUE = 0
    BOUNDARY = 1
    INVALID = 2


_CONTINUE_EDGES = {
    (TokenLabel.PREFIX, TokenLabel.PREFIX),
    (TokenLabel.PREFIX, TokenLabel.STEM),
    (TokenLabel.PREFIX, TokenLabel.SUFFIX),
    (TokenLabel.STEM, TokenLabel.SUFFIX),
    (TokenLabel.STEM, TokenLabel.HASH),
    (TokenLabel.SUFFIX, TokenLabel.SUFFIX),
    (TokenLabel.HASH, TokenLabel.STEM),
    (TokenLabel.BPE, TokenLabel.BPE),
}

_INVALID_EDGES = {
    (TokenLabel.PREFIX, TokenLabel.HASH),
    (TokenLabel.PREFIX, TokenLabel.BPE),
    (TokenLabel.HASH, TokenLabel.PREFIX),
    (TokenLabel.HASH, TokenLabel.SUFFIX),
    (TokenLabel.HASH, TokenLabel.HASH),
    (TokenLabel.HASH, TokenLabel.BPE),
}

# Group openers that cannot begin a well-formed morph word.
_TAINTED_OPENERS = {TokenLabel.SUFFIX, TokenLabel.HASH}


def segment(
    labels: Sequence[TokenLabel],
    tokens: Sequence[str],
    reverse_table: ReverseMorphTable,
) -> list[WordGroup]:
    """Partition a labelled stream into word groups.

    Adjacent stems stay in one group only while the extended sequence is
    still a prefix of some reverse-table key; an invalid transition closes
    the current group as tainted so it renders through the fallback.
    """
    if len(labels) != len(tokens):
        raise ValueError("labels and tokens differ in length")
    groups: list[WordGroup] = []
    cur: list[str] = []
    cur_label: TokenLabel | None = None
    tainted = False

    def close(force_taint: bool = False) -> None:
        nonlocal cur, cur_label, tainted
        if cur:
            kind = GroupKind.BPE_RUN if cur_label is TokenLabel.BPE else GroupKind.MORPH_WORD
            groups.append(WordGroup(tuple(cur), kind, tainted=tainted or force_taint))
        cur = []
        cur_label = None
        tainted = False

    prev: TokenLabel | None = None
    for label, token in zip(labels, tokens):
        if prev is None:
            cur = [token]
            cur_label = label
            tainted = label in _TAINTED_OPENERS
            prev = label
            continue
        if prev is TokenLabel.STEM and label is TokenLabel.STEM:
            action = (
                _Action.CONTINUE
                if reverse_table.is_key_prefix((*cur, token))
                else _Action.BOUNDARY
            )
        elif (prev, label) in _CONTINUE_EDGES:
            action = _Action.CONTINUE
        elif (prev, label) in _INVALID_EDGES:
            action = _Action.INVALID
        else:
            action = _Action.BOUNDARY
        if action is _Action.CONTINUE:
            cur.append(token)
            cur_label = label if label is not TokenLabel.BPE else cur_label
        else:
            close(force_taint=action is _Action.INVALID)
            cur = [token]
            cur_label = label
            tainted = label in _TAINTED_OPENERS
        prev = label
    close()
    return groups


def _strip_markers(token: str) -> str:
    if token == SEPARATOR:
        return ""
    if token.endswith(SEPARATOR):
        return token[:-1]
    if token.startswith(SEPARATOR):
        return token[1:]
    return token


def reverse_word(group: WordGroup, reverse_table: ReverseMorphTable) -> str:
    """Turn a morph word group back into a written word.

    Sets group.verified: True when the exact sequence is a reverse-table
    key, False when the marker-stripping fallback had to run.
    """
    if group.kind is not GroupKind.MORPH_WORD:
        raise ValueError("reverse_word expects a morph word group")
    if not group.tainted:
        surface = reverse_table.lookup(group.tokens)
        if surface is not None:
            group.verified = True
            return surface
    group.verified = False
    return "".join(_strip_markers(t) for t in group.tokens)


def _split_on(tokens: Sequence[str], marker: str) -> list[list[str]]:
    parts: list[list[str]] = [[]]
    for token in tokens:
        if token == marker:
            parts.append([])
        else:
            parts[-1].append(token)
    return parts


@dataclass
class DetokenReport:
    groups: list[WordGroup] = field(default_factory=list)
    unverified: int = 0


def detokenize_verbose(
    tokens: Sequence[str],
    reverse_table: ReverseMorphTable,
    model: BpeModel,
    vocab: MergedVocabulary,
) -> tuple[str, DetokenReport]:
    """Render a token stream back to text and report per-group outcomes."""
    report = DetokenReport()
    rendered_segments: list[str] = []
    for segment_tokens in _split_on(tokens, END_OF_TEXT):
        content: list[str] = []
        joined: set[int] = set()
        for token in segment_tokens:
            if token == NO_SPACE_JOINER:
                joined.add(len(content))
            else:
                content.append(token)
        if not content:
            continue
        labels = classify(content, vocab)
        groups = segment(labels, content, reverse_table)
        pieces: list[str] = []
        position = 0
        for group in groups:
            start = position
            position += len(group.tokens)
            if group.kind is GroupKind.BPE_RUN:
                group.verified = True
                pieces.append(model.decode(group.tokens))
                continue
            word = reverse_word(group, reverse_table)
            if not group.verified:
                report.unverified += 1
            if not word:
                continue
            if pieces and start not in joined:
                pieces.append(" ")
            pieces.append(word)
        report.groups.extend(groups)
        rendered_segments.append("".join(pieces))
    return "".join(rendered_segments), report


def detokenize(
    tokens: Sequence[str],
    reverse_table: ReverseMorphTable,
    model: BpeModel,
    vocab: MergedVocabulary,
) -> str:
    """Token stream to text; spacing follows group boundaries and joiners."""
    text, _ = detokenize_verbose(tokens, reverse_table, model, vocab)
    return text
