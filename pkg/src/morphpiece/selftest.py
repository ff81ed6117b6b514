"""Built-in pipeline check against the bundled sample data.

Builds artifacts in a temporary directory, then exercises tokenization,
round trips, classification and rebuild determinism.  Used by the
``morphpiece selftest`` subcommand and mirrored by the test suite.
"""

from __future__ import annotations

import hashlib
import os
import random
import tempfile
from importlib import resources

from . import analysis
from .bpe import BpeModel, train
from .detokenizer import classify, detokenize, segment
from .morphtable import ReverseMorphTable, build_reverse, ingest, load_table, trim
from .tokenizer import (
    ARTIFACT_FILES,
    BPE_MERGES_FILE,
    BPE_VOCAB_FILE,
    MORPHTABLE_FILE,
    VOCAB_FILE,
    MorphPieceTokenizer,
)
from .vocab import DEFAULT_SPECIALS, merge_vocabularies, serialize

SELFTEST_BPE_SIZE = 320

EXPECTED_RENDERINGS = {
    "batting": ("bat", "#ing"),
    "disengage": ("dis#", "en#", "gage"),
    "archeologists": ("archaeo#", "#logy", "#ist", "#s"),
    "decompress": ("de#", "compress"),
    "photographers": ("photo#", "#graph", "#er", "#s"),
    "investigating": ("in#", "vestigate", "#ing"),
    "diligently": ("diligent", "#ly"),
    "football": ("foot", "#", "ball"),
    "output": ("out", "put"),
}

_FILLER = [
    "the", "a", "an", "and", "was", "is", "were", "will", "she", "he",
    "they", "we", "it", "this", "that", "then", "there", "when", "while",
    "morning", "evening", "night", "river", "stone", "light", "window",
    "bridge", "paper", "letter", "music", "story", "rain", "snow", "tree",
    "bird", "wind", "cloud", "hill", "lake", "road", "town", "house",
    "door", "small", "round", "sound", "ground", "train", "village",
    "quiet", "slowly", "carefully", "dark", "deep", "cold", "warm",
    "old", "new", "long", "short", "first", "last", "voice", "words",
]

_UNICODE_WORDS = ["café", "naïve", "Zürich", "señor", "héron", "døren"]

_CONTRACTIONS = ["don't", "it's", "they'll", "we've", "he'd", "she's"]

_PUNCT = [".", ",", "!", "?", ";", ":", "-", "#", "@", "%"]


def data_path(name: str) -> str:
    """Filesystem path of a bundled data file."""
    return str(resources.files("morphpiece").joinpath("data", name))


def build_artifacts(out_dir: str, backend: str | None = None, target_size: int = SELFTEST_BPE_SIZE) -> None:
    """Run the full build pipeline over the bundled sample data."""
    table, _report = ingest(data_path("morphology.tsv"))
    table = trim(table, 1)
    os.makedirs(out_dir, exist_ok=True)
    from .morphtable import save_table

    save_table(table, os.path.join(out_dir, MORPHTABLE_FILE))
    with open(data_path("corpus.txt"), encoding="utf-8") as fh:
        docs = [line.rstrip("\n") for line in fh]
    model = train(docs, target_size, frozenset(table.surfaces()), backend=backend)
    model.save(os.path.join(out_dir, BPE_MERGES_FILE), os.path.join(out_dir, BPE_VOCAB_FILE))
    bpe_tokens = [t for t, _ in sorted(model.vocab.items(), key=lambda kv: kv[1])]
    vocab = merge_vocabularies(table.inventory, bpe_tokens, DEFAULT_SPECIALS)
    serialize(vocab, os.path.join(out_dir, VOCAB_FILE))


def roundtrippable_surfaces(tokenizer: MorphPieceTokenizer, reverse: ReverseMorphTable) -> list[str]:
    """Table surfaces that survive a standalone encode/decode loop."""
    out = []
    for surface in tokenizer.table.surfaces():
        tokens = tokenizer.tokenize(surface)
        if tuple(tokens) != tokenizer.table.lookup(surface):
            continue
        if detokenize(tokens, reverse, tokenizer.model, tokenizer.vocab) == surface:
            out.append(surface)
    return out


def generate_sentences(
    morph_words: list[str],
    n: int,
    seed: int = 0,
    table_surfaces: frozenset[str] = frozenset(),
) -> list[str]:
    """Deterministic mixed-content sentences for round-trip checks.

    Sentences combine morph table words, plain words, numbers, punctuation,
    contractions and non-ascii words, with occasional no-space joins and
    double spaces.  Never emits newlines.
    """
    rng = random.Random(seed)
    sentences = []
    for _ in range(n):
        chunks: list[str] = []
        for _ in range(rng.randint(3, 10)):
            kind = rng.random()
            if kind < 0.35 and morph_words:
                word = rng.choice(morph_words)
            elif kind < 0.60:
                word = rng.choice(_FILLER)
            elif kind < 0.70:
                word = str(rng.randint(0, 99999))
            elif kind < 0.78:
                word = rng.choice(_UNICODE_WORDS)
            elif kind < 0.86:
                word = rng.choice(_CONTRACTIONS)
            elif kind < 0.93:
                word = "".join(rng.choice("bcdfghjklmnpqrstvwz") for _ in range(rng.randint(2, 7)))
                if word in table_surfaces:
                    word = word + "x"
            else:
                word = rng.choice(_PUNCT)
            glue = rng.random()
            if chunks and glue < 0.12:
                chunks[-1] += word  # no-space join
            elif chunks and glue < 0.17:
                chunks.append(" " + word)  # double space once joined
            else:
                chunks.append(word)
        sentence = " ".join(chunks)
        if rng.random() < 0.10:
            sentence = sentence + rng.choice([".", "!", "?"])
        sentences.append(sentence)
    return sentences


def _hash_dir(directory: str) -> dict[str, str]:
    out = {}
    for name in ARTIFACT_FILES:
        with open(os.path.join(directory, name), "rb") as fh:
            out[name] = hashlib.sha256(fh.read()).hexdigest()
    return out


def _checks(backend: str | None):
    with tempfile.TemporaryDirectory(prefix="morphpiece-selftest-") as tmp:
        first = os.path.join(tmp, "a")
        second = os.path.join(tmp, "b")
        build_artifacts(first, backend=backend)
        build_artifacts(second, backend=backend)
        yield "artifact rebuild is byte-identical", _hash_dir(first) == _hash_dir(second), ""

        tokenizer = MorphPieceTokenizer.from_dir(first)
        reverse = build_reverse(tokenizer.table)

        bad = [
            w
            for w, expect in EXPECTED_RENDERINGS.items()
            if tuple(tokenizer.tokenize(w)) != expect
        ]
        yield "reference words render through the table", not bad, ", ".join(bad)

        usable = roundtrippable_surfaces(tokenizer, reverse)
        missing = sorted(set(EXPECTED_RENDERINGS) - set(usable))
        yield "reference words survive the round trip", not missing, ", ".join(missing)

        with open(data_path("corpus.txt"), encoding="utf-8") as fh:
            docs = [line.rstrip("\n") for line in fh]
        failures = 0
        for doc in docs:
            tokens = tokenizer.tokenize(doc)
            if detokenize(tokens, reverse, tokenizer.model, tokenizer.vocab) != doc:
                failures += 1
        yield "bundled corpus round-trips", failures == 0, f"{failures} lines failed"

        sentences = generate_sentences(
            usable, 200, seed=11, table_surfaces=frozenset(tokenizer.table.surfaces())
        )
        failures = 0
        for sentence in sentences:
            tokens = tokenizer.tokenize(sentence)
            if detokenize(tokens, reverse, tokenizer.model, tokenizer.vocab) != sentence:
                failures += 1
        yield "generated sentences round-trip", failures == 0, f"{failures} of 200 failed"

        # Stream-level grouping on a hand-built model so the check does not
        # depend on what the trained merges happen to contain.
        fixed = BpeModel([("H", "e"), ("Ġ", "w"), ("a", "s"), ("Ġw", "as")])
        bpe_tokens = [t for t, _ in sorted(fixed.vocab.items(), key=lambda kv: kv[1])]
        fixed_vocab = merge_vocabularies(tokenizer.table.inventory, bpe_tokens, DEFAULT_SPECIALS)
        stream = ["He", "Ġwas", "in#", "vestigate", "#ing", "diligent", "#ly"]
        labels = [l.value for l in classify(stream, fixed_vocab)]
        ok_labels = labels == ["bpe", "bpe", "prefix", "stem", "suffix", "stem", "suffix"]
        yield "stream classification labels", ok_labels, " ".join(labels)
        groups = segment(classify(stream, fixed_vocab), stream, reverse)
        ok_groups = [g.tokens for g in groups] == [
            ("He", "Ġwas"),
            ("in#", "vestigate", "#ing"),
            ("diligent", "#ly"),
        ]
        yield "stream grouping", ok_groups, repr([g.tokens for g in groups])
        text = detokenize(stream, reverse, fixed, fixed_vocab)
        yield "stream detokenization", text == "He was investigating diligently", repr(text)

        report = analysis.fertility(docs, [analysis.WhitespaceAdapter()])
        yield "whitespace fertility is exactly 1", report.rows[0].fertility == 1.0, ""

        cov = analysis.coverage(docs, tokenizer)
        conserved = sum(sum(c.values()) for c in cov.by_length.values()) == cov.total_pretokens
        hits = cov.route_totals()
        yield "coverage counts are conserved", conserved, ""
        yield "morph path fires on the corpus", hits[analysis.Route.MORPH_TABLE] > 0, ""


def run_selftest(backend: str | None = None) -> int:
    """Print one line per check; return 0 when all pass, 3 otherwise."""
    failed = 0
    for name, ok, detail in _checks(backend):
        status = "PASS" if ok else "FAIL"
        suffix = f" ({detail})" if detail and not ok else ""
        print(f"{status}  {name}{suffix}")
        if not ok:
            failed += 1
    if failed:
        print(f"{failed} check(s) failed")
        return 3
    print("all checks passed")
    return 0
