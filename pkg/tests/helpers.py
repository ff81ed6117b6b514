"""Hand-assembled fixture models shared across test modules."""

from __future__ import annotations

from morphpiece.bpe import BpeModel
from morphpiece.detokenizer import ReverseMorphTable
from morphpiece.morphtable import MorphEntry, Morpheme, MorphTable, Role, build_reverse
from morphpiece.tokenizer import MorphPieceTokenizer, TokenizerConfig
from morphpiece.vocab import merge_vocabularies

P, S, X = Role.PREFIX, Role.STEM, Role.SUFFIX


def entry(surface: str, *parts: tuple[str, Role], breaks: tuple[int, ...] = ()) -> MorphEntry:
    return MorphEntry(
        surface=surface,
        morphemes=tuple(Morpheme(text, role) for text, role in parts),
        compound_breaks=frozenset(breaks),
    )


def demo_table() -> MorphTable:
    """Five reference words plus a compound and a plain-stem pair."""
    return MorphTable(
        [
            entry("batting", ("bat", S), ("ing", X)),
            entry("disengage", ("dis", P), ("en", P), ("gage", S)),
            entry("archeologists", ("archaeo", P), ("logy", X), ("ist", X), ("s", X)),
            entry("decompress", ("de", P), ("compress", S)),
            entry("photographers", ("photo", P), ("graph", X), ("er", X), ("s", X)),
            entry("investigating", ("in", P), ("vestigate", S), ("ing", X)),
            entry("diligently", ("diligent", S), ("ly", X)),
            entry("football", ("foot", S), ("ball", S), breaks=(1,)),
            entry("output", ("out", S), ("put", S)),
        ]
    )


def stream_bpe() -> BpeModel:
    """Tiny model able to spell the worked-example stream."""
    return BpeModel([("H", "e"), ("Ġ", "w"), ("a", "s"), ("Ġw", "as")])


def bpe_tokens_by_id(model: BpeModel) -> list[str]:
    return [t for t, _ in sorted(model.vocab.items(), key=lambda kv: kv[1])]


def demo_tokenizer(use_joiner: bool = True) -> MorphPieceTokenizer:
    table = demo_table()
    model = stream_bpe()
    vocab = merge_vocabularies(table.inventory, bpe_tokens_by_id(model))
    return MorphPieceTokenizer(
        table, model, vocab, TokenizerConfig(use_joiner=use_joiner)
    )


def demo_reverse(table: MorphTable | None = None) -> ReverseMorphTable:
    return build_reverse(table if table is not None else demo_table())
