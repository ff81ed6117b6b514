"""Two-path tokenizer: morpheme table lookup first, byte-level BPE otherwise.

A pretoken whose space-stripped surface has a table entry emits that entry's
rendered morphemes; everything else goes through BPE.  A morph hit that is
not preceded by a space (and is not at the start of the text) would lose its
spacing, so it is preceded by the no-space joiner token; with the joiner
disabled such pretokens fall back to BPE to stay lossless.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field

from .bpe import BpeModel
from .errors import ArtifactMissingError, MorphPieceError
from .morphtable import MorphTable, load_table
from .pretokenize import Pretoken, pretokenize
from .vocab import (
    DEFAULT_SPECIALS,
    END_OF_TEXT,
    NO_SPACE_JOINER,
    MergedVocabulary,
    deserialize,
)

MORPHTABLE_FILE = "morphtable.tsv"
BPE_MERGES_FILE = "bpe.model"
BPE_VOCAB_FILE = "bpe.vocab"
VOCAB_FILE = "vocab.tsv"

ARTIFACT_FILES = (MORPHTABLE_FILE, BPE_MERGES_FILE, BPE_VOCAB_FILE, VOCAB_FILE)


class Route(enum.Enum):
    """How one pretoken was handled."""

    MORPH_TABLE = "morphtable"
    BPE_WHOLE = "bpe-whole"
    BPE_SPLIT = "bpe-split"


@dataclass(frozen=True)
class TokenizerConfig:
    case_policy: str = "exact"
    use_joiner: bool = True

    def __post_init__(self):
        if self.case_policy != "exact":
            raise ValueError(f"unsupported case policy {self.case_policy!r}")


@dataclass(frozen=True)
class EncodedSequence:
    ids: tuple[int, ...]
    tokens: tuple[str, ...]


@dataclass(frozen=True)
class PretokenTrace:
    pretoken: Pretoken
    route: Route
    tokens: tuple[str, ...]


class MorphPieceTokenizer:
    def __init__(
        self,
        table: MorphTable,
        model: BpeModel,
        vocab: MergedVocabulary,
        config: TokenizerConfig = TokenizerConfig(),
    ):
        self.table = table
        self.model = model
        self.vocab = vocab
        self.config = config
        if config.use_joiner and NO_SPACE_JOINER not in vocab:
            raise MorphPieceError(
                f"joiner enabled but {NO_SPACE_JOINER!r} is not in the vocabulary"
            )
        missing = [t for t in table.inventory if t not in vocab]
        missing += [t for t in model.vocab if t not in vocab]
        if missing:
            raise MorphPieceError(
                f"vocabulary does not cover {len(missing)} producible tokens, "
                f"e.g. {sorted(missing)[:3]!r}"
            )

    @classmethod
    def from_dir(cls, artifact_dir: str, config: TokenizerConfig = TokenizerConfig()) -> "MorphPieceTokenizer":
        """Load the artifact files from a directory."""
        paths = {name: os.path.join(artifact_dir, name) for name in ARTIFACT_FILES}
        for path in paths.values():
            if not os.path.isfile(path):
                raise ArtifactMissingError(path)
        table = load_table(paths[MORPHTABLE_FILE])
        model = BpeModel.load(paths[BPE_MERGES_FILE], paths[BPE_VOCAB_FILE])
        vocab = deserialize(paths[VOCAB_FILE])
        if NO_SPACE_JOINER not in vocab and config.use_joiner:
            config = TokenizerConfig(config.case_policy, use_joiner=False)
        return cls(table, model, vocab, config)

    # -- core routing -------------------------------------------------------

    def _trace(self, text: str) -> list[PretokenTrace]:
        out: list[PretokenTrace] = []
        for position, pretoken in enumerate(pretokenize(text)):
            rendered = self.table.lookup(pretoken.text)
            needs_joiner = not pretoken.had_leading_space and position > 0
            # A leading space at text start has no morph rendering; BPE keeps it.
            representable = not (pretoken.had_leading_space and position == 0)
            if (
                rendered is not None
                and representable
                and (not needs_joiner or self.config.use_joiner)
            ):
                tokens = (NO_SPACE_JOINER, *rendered) if needs_joiner else rendered
                out.append(PretokenTrace(pretoken, Route.MORPH_TABLE, tokens))
                continue
            pieces = tuple(self.model.encode_pretoken(pretoken))
            route = Route.BPE_WHOLE if len(pieces) == 1 else Route.BPE_SPLIT
            out.append(PretokenTrace(pretoken, route, pieces))
        return out

    def tokenize(self, text: str) -> list[str]:
        """Token strings for a text; lossless under detokenization."""
        tokens: list[str] = []
        for trace in self._trace(text):
            tokens.extend(trace.tokens)
        return tokens

    def encode(self, text: str) -> EncodedSequence:
        tokens = self.tokenize(text)
        ids = tuple(self.vocab.id_of(t) for t in tokens)
        return EncodedSequence(ids, tuple(tokens))

    def coverage_trace(self, text: str) -> list[PretokenTrace]:
        """Per-pretoken routing decisions, in input order."""
        return self._trace(text)
