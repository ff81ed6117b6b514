"""Morphology-aware subword tokenization.

Words with a known morphological analysis become marked morpheme tokens;
everything else falls back to a byte-level BPE trained with those words
excluded.  A reverse table plus a small transition machine turns token
streams back into text.
"""

from .bpe import BpeModel, train
from .detokenizer import (
    GroupKind,
    TokenLabel,
    WordGroup,
    classify,
    detokenize,
    detokenize_verbose,
    reverse_word,
    segment,
)
from .errors import (
    AlphabetError,
    ArtifactMissingError,
    DuplicateTokenError,
    EmptyCorpusError,
    EmptyEffectiveCorpusError,
    MorphPieceError,
    ParseError,
    UnknownTokenError,
    ZeroValidRecordsError,
)
from .morphtable import (
    ColumnMap,
    MorphEntry,
    Morpheme,
    MorphTable,
    ReverseMorphTable,
    Role,
    build_reverse,
    ingest,
    load_table,
    morph_histogram,
    save_table,
    trim,
)
from .pretokenize import Pretoken, pretokenize
from .tokenizer import (
    EncodedSequence,
    MorphPieceTokenizer,
    Route,
    TokenizerConfig,
)
from .vocab import (
    END_OF_TEXT,
    NO_SPACE_JOINER,
    MergedVocabulary,
    SourceTag,
    deserialize,
    merge_vocabularies,
    serialize,
)

__version__ = "0.1.0"

__all__ = [
    "BpeModel",
    "ColumnMap",
    "EncodedSequence",
    "GroupKind",
    "MergedVocabulary",
    "MorphEntry",
    "Morpheme",
    "MorphPieceError",
    "MorphPieceTokenizer",
    "MorphTable",
    "Pretoken",
    "ReverseMorphTable",
    "Role",
    "Route",
    "SourceTag",
    "TokenLabel",
    "TokenizerConfig",
    "WordGroup",
    "build_reverse",
    "classify",
    "detokenize",
    "detokenize_verbose",
    "deserialize",
    "ingest",
    "load_table",
    "merge_vocabularies",
    "morph_histogram",
    "pretokenize",
    "reverse_word",
    "save_table",
    "segment",
    "serialize",
    "train",
    "trim",
    "END_OF_TEXT",
    "NO_SPACE_JOINER",
]
