"""Regex pre-tokenizer with GPT-2 splitting semantics.

Splits text into contraction pieces, letter runs, digit runs, punctuation
runs and whitespace runs.  A single leading space is absorbed into the
following word and recorded on the pretoken, so joining the raw forms
reproduces the input exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import regex

SPLIT_PATTERN = r"""'s|'t|'re|'ve|'m|'ll|'d| ?\p{L}+| ?\p{N}+| ?[^\s\p{L}\p{N}]+|\s+(?!\S)|\s+"""

_SPLIT_RE = regex.compile(SPLIT_PATTERN)


@dataclass(frozen=True)
class Pretoken:
    """One pre-tokenization unit.

    text holds the surface with any absorbed leading space removed;
    had_leading_space records whether that space was absorbed.  Whitespace
    runs keep their characters verbatim and never set the flag.
    """

    text: str
    had_leading_space: bool

    @property
    def raw(self) -> str:
        """The exact slice of input this pretoken came from."""
        return " " + self.text if self.had_leading_space else self.text


def pretokenize(text: str) -> list[Pretoken]:
    """Split text into pretokens.  Concatenating .raw restores the input."""
    out: list[Pretoken] = []
    for piece in _SPLIT_RE.findall(text):
        if piece.startswith(" ") and len(piece) > 1 and not piece[1].isspace():
            out.append(Pretoken(piece[1:], True))
        else:
            out.append(Pretoken(piece, False))
    return out
