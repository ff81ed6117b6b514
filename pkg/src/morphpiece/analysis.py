"""Corpus statistics: fertility, table coverage, unsplit-token ranking.

Fertility is total tokens divided by total whitespace words, so the
whitespace tokenizer itself always scores exactly 1.  Coverage walks the
two-path tokenizer's per-pretoken routing and aggregates by word length;
the unsplit ranking counts pretokens that BPE kept whole, with relative
frequency against all pretokens seen.
"""

from __future__ import annotations

import json
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from .bpe import BpeModel
from .errors import EmptyCorpusError
from .tokenizer import MorphPieceTokenizer, Route


class WhitespaceAdapter:
    name = "whitespace"

    def tokenize(self, text: str) -> list[str]:
        return text.split()


class MorphPieceAdapter:
    name = "morphpiece"

    def __init__(self, tokenizer: MorphPieceTokenizer):
        self._tokenizer = tokenizer

    def tokenize(self, text: str) -> list[str]:
        return self._tokenizer.tokenize(text)


class BpeAdapter:
    """Pure byte-level BPE over every pretoken (no morph path)."""

    name = "bpe"

    def __init__(self, model: BpeModel, name: str = "bpe"):
        self._model = model
        self.name = name

    def tokenize(self, text: str) -> list[str]:
        return self._model.encode(text)


class WordPieceAdapter:
    """Greedy longest-match wordpiece with "##" continuations.

    The vocabulary file holds one token per line.  Words longer than
    max_chars, and words with an unmatchable remainder, become the unknown
    token.  Intended for corpus comparisons, not for lossless round trips.
    """

    name = "wordpiece"

    def __init__(self, vocab: Iterable[str], lowercase: bool = False, max_chars: int = 100):
        self._vocab = set(vocab)
        self._lowercase = lowercase
        self._max_chars = max_chars

    @classmethod
    def from_file(cls, path: str, lowercase: bool = False) -> "WordPieceAdapter":
        with open(path, encoding="utf-8") as fh:
            tokens = [line.rstrip("\n") for line in fh if line.strip()]
        return cls(tokens, lowercase=lowercase)

    def _split_word(self, word: str) -> list[str]:
        if len(word) > self._max_chars:
            return ["[UNK]"]
        pieces: list[str] = []
        start = 0
        while start < len(word):
            end = len(word)
            piece = None
            while start < end:
                candidate = word[start:end]
                if start > 0:
                    candidate = "##" + candidate
                if candidate in self._vocab:
                    piece = candidate
                    break
                end -= 1
            if piece is None:
                return ["[UNK]"]
            pieces.append(piece)
            start = end
        return pieces

    def tokenize(self, text: str) -> list[str]:
        if self._lowercase:
            text = text.lower()
        out: list[str] = []
        for chunk in text.split():
            word = ""
            for ch in chunk:
                if ch.isalnum():
                    word += ch
                else:
                    if word:
                        out.extend(self._split_word(word))
                        word = ""
                    out.extend(self._split_word(ch))
            if word:
                out.extend(self._split_word(word))
        return out


@dataclass(frozen=True)
class FertilityRow:
    tokenizer: str
    documents: int
    total_tokens: int
    avg_tokens_per_doc: float
    fertility: float


@dataclass(frozen=True)
class FertilityReport:
    rows: tuple[FertilityRow, ...]
    documents: int
    whitespace_words: int


def fertility(docs: Iterable[str], adapters: Sequence) -> FertilityReport:
    """Single-pass fertility comparison across adapters.

    Documents without a single whitespace word are skipped; a corpus with
    none at all raises EmptyCorpusError.
    """
    names = [a.name for a in adapters]
    if len(set(names)) != len(names):
        raise ValueError("adapter names must be unique")
    token_totals = {name: 0 for name in names}
    documents = 0
    ws_words = 0
    for doc in docs:
        words = len(doc.split())
        if words == 0:
            continue
        documents += 1
        ws_words += words
        for adapter in adapters:
            token_totals[adapter.name] += len(adapter.tokenize(doc))
    if documents == 0:
        raise EmptyCorpusError("no non-empty documents")
    rows = tuple(
        FertilityRow(
            tokenizer=name,
            documents=documents,
            total_tokens=token_totals[name],
            avg_tokens_per_doc=token_totals[name] / documents,
            fertility=token_totals[name] / ws_words,
        )
        for name in names
    )
    return FertilityReport(rows, documents, ws_words)


_ROUTE_COLUMNS = (
    (Route.MORPH_TABLE, "morphtable"),
    (Route.BPE_WHOLE, "bpe_whole"),
    (Route.BPE_SPLIT, "bpe_split"),
)


@dataclass(frozen=True)
class UnsplitRow:
    rank: int
    token: str
    count: int
    relative_frequency: float


@dataclass
class CoverageReport:
    by_length: dict[int, dict[Route, int]]
    unsplit_counts: Counter
    total_pretokens: int

    def route_totals(self) -> dict[Route, int]:
        totals = {route: 0 for route, _ in _ROUTE_COLUMNS}
        for counts in self.by_length.values():
            for route, n in counts.items():
                totals[route] += n
        return totals

    def top_unsplit(self, k: int) -> list[UnsplitRow]:
        if k < 0:
            raise ValueError("k must be non-negative")
        ordered = sorted(self.unsplit_counts.items(), key=lambda kv: (-kv[1], kv[0]))
        return [
            UnsplitRow(i + 1, token, count, count / self.total_pretokens)
            for i, (token, count) in enumerate(ordered[:k])
        ]


@dataclass(frozen=True)
class UnsplitReport:
    rows: tuple[UnsplitRow, ...]
    total_pretokens: int


def coverage(docs: Iterable[str], tokenizer: MorphPieceTokenizer) -> CoverageReport:
    """Aggregate per-pretoken routing over a corpus."""
    by_length: dict[int, dict[Route, int]] = {}
    unsplit: Counter = Counter()
    total = 0
    for doc in docs:
        for trace in tokenizer.coverage_trace(doc):
            total += 1
            length = len(trace.pretoken.text)
            slot = by_length.setdefault(length, {route: 0 for route, _ in _ROUTE_COLUMNS})
            slot[trace.route] += 1
            if trace.route is Route.BPE_WHOLE:
                unsplit[trace.pretoken.text] += 1
    if total == 0:
        raise EmptyCorpusError("corpus produced no pretokens")
    return CoverageReport(by_length, unsplit, total)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def _tsv(header: Sequence[str], rows: Iterable[Sequence[str]]) -> str:
    lines = ["\t".join(header)]
    lines.extend("\t".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def emit_report(report, fmt: str, path: str | None = None) -> str:
    """Serialize a report as "tsv" or "json" with a stable field order.

    Returns the text; when path is given the same bytes are also written
    there.  Re-running on identical inputs is byte-identical.
    """
    if fmt not in ("tsv", "json"):
        raise ValueError(f"unknown report format {fmt!r}")
    if isinstance(report, FertilityReport):
        name = "fertility"
        header = ["tokenizer", "documents", "total_tokens", "avg_tokens_per_doc", "fertility"]
        tsv_rows = [
            [r.tokenizer, str(r.documents), str(r.total_tokens), _fmt(r.avg_tokens_per_doc), _fmt(r.fertility)]
            for r in report.rows
        ]
        json_rows = [
            {
                "tokenizer": r.tokenizer,
                "documents": r.documents,
                "total_tokens": r.total_tokens,
                "avg_tokens_per_doc": r.avg_tokens_per_doc,
                "fertility": r.fertility,
            }
            for r in report.rows
        ]
    elif isinstance(report, CoverageReport):
        name = "coverage"
        header = ["length"] + [col for _, col in _ROUTE_COLUMNS]
        tsv_rows = [
            [str(length)] + [str(report.by_length[length][route]) for route, _ in _ROUTE_COLUMNS]
            for length in sorted(report.by_length)
        ]
        json_rows = [
            {"length": length, **{col: report.by_length[length][route] for route, col in _ROUTE_COLUMNS}}
            for length in sorted(report.by_length)
        ]
    elif isinstance(report, UnsplitReport):
        name = "unsplit"
        header = ["rank", "token", "count", "relative_frequency"]
        tsv_rows = [
            [str(r.rank), json.dumps(r.token, ensure_ascii=False), str(r.count), _fmt(r.relative_frequency)]
            for r in report.rows
        ]
        json_rows = [
            {
                "rank": r.rank,
                "token": r.token,
                "count": r.count,
                "relative_frequency": r.relative_frequency,
            }
            for r in report.rows
        ]
    else:
        raise TypeError(f"cannot emit {type(report).__name__}")

    if fmt == "tsv":
        text = _tsv(header, tsv_rows)
    else:
        text = json.dumps({"report": name, "rows": json_rows}, ensure_ascii=False, indent=2) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text


def plot_coverage(report: CoverageReport, path: str) -> None:
    """Stacked bar chart of routing counts by word length."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    lengths = sorted(report.by_length)
    bottom = [0] * len(lengths)
    fig, ax = plt.subplots(figsize=(8, 4.5))
    for route, label in _ROUTE_COLUMNS:
        values = [report.by_length[n][route] for n in lengths]
        ax.bar(lengths, values, bottom=bottom, label=label)
        bottom = [b + v for b, v in zip(bottom, values)]
    ax.set_xlabel("word length (characters)")
    ax.set_ylabel("pretokens")
    ax.set_title("tokenizer path by word length")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)
