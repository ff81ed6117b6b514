"""Morpheme lookup table: ingestion, trimming, rendering, reverse lookup.

An entry maps a written word to an ordered morpheme sequence.  Rendering
marks roles on the surface: prefixes end with "#", suffixes start with "#",
stems stay bare, and a standalone "#" separates the stems of a compound.

Canonical source format (UTF-8, one word per line):

    surface<TAB>stem<TAB>morpheme:role(,morpheme:role)*

The stem column is "-" when the word has no primary stem (affix-only
analyses).  Roles are prefix, suffix, stem and cstem; cstem marks a further
compound stem that gets a "#" separator in front of it.  Prefixes must come
before all other third-column morphemes; the assembled order is prefixes,
then the stem column, then the remaining morphemes in file order.
"""

from __future__ import annotations

import enum
from collections import Counter
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from .errors import ParseError, ZeroValidRecordsError

SEPARATOR = "#"


class Role(enum.Enum):
    PREFIX = "prefix"
    STEM = "stem"
    SUFFIX = "suffix"


@dataclass(frozen=True)
class Morpheme:
    text: str
    role: Role

    def rendered(self) -> str:
        """Surface form with the role marker applied."""
        if self.role is Role.PREFIX:
            return self.text + SEPARATOR
        if self.role is Role.SUFFIX:
            return SEPARATOR + self.text
        return self.text


@dataclass(frozen=True)
class MorphEntry:
    """One word analysis.

    compound_breaks holds indices i such that a separator token sits between
    morphemes[i-1] and morphemes[i]; both neighbours must be stems.
    """

    surface: str
    morphemes: tuple[Morpheme, ...]
    compound_breaks: frozenset[int] = frozenset()

    def __post_init__(self):
        if len(self.morphemes) < 2:
            raise ValueError(f"{self.surface!r}: an entry needs at least two morphemes")
        for i in self.compound_breaks:
            if not 1 <= i < len(self.morphemes):
                raise ValueError(f"{self.surface!r}: compound break {i} out of range")
            if self.morphemes[i - 1].role is not Role.STEM or self.morphemes[i].role is not Role.STEM:
                raise ValueError(f"{self.surface!r}: compound break {i} must sit between stems")

    def rendered(self) -> tuple[str, ...]:
        """Marked morpheme sequence including separator tokens."""
        out: list[str] = []
        for i, morpheme in enumerate(self.morphemes):
            if i in self.compound_breaks:
                out.append(SEPARATOR)
            out.append(morpheme.rendered())
        return tuple(out)


@dataclass
class IngestReport:
    lines: int = 0
    malformed: int = 0
    duplicates: int = 0
    entries: int = 0
    examples: list[tuple[int, str]] = field(default_factory=list)

    def note_malformed(self, line_no: int, reason: str, cap: int = 20) -> None:
        self.malformed += 1
        if len(self.examples) < cap:
            self.examples.append((line_no, reason))


class MorphTable:
    """Immutable-by-convention word -> MorphEntry map with usage counts.

    counts covers rendered morphemes (separator tokens excluded); inventory
    is every distinct rendered token including the separator.
    """

    def __init__(self, entries: Iterable[MorphEntry]):
        table: dict[str, MorphEntry] = {}
        for entry in entries:
            if entry.surface in table:
                raise ValueError(f"duplicate surface {entry.surface!r}")
            table[entry.surface] = entry
        self._entries = table
        counts: Counter[str] = Counter()
        inventory: set[str] = set()
        for entry in table.values():
            for token in entry.rendered():
                if token == SEPARATOR:
                    inventory.add(token)
                else:
                    counts[token] += 1
                    inventory.add(token)
        self.counts: dict[str, int] = dict(counts)
        self.inventory: frozenset[str] = frozenset(inventory)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    def __eq__(self, other) -> bool:
        if not isinstance(other, MorphTable):
            return NotImplemented
        return self._entries == other._entries

    def __iter__(self):
        return iter(self._entries.values())

    def lookup(self, word: str) -> tuple[str, ...] | None:
        """Rendered morpheme sequence for an exact surface match, else None."""
        entry = self._entries.get(word)
        return entry.rendered() if entry is not None else None

    def entry(self, word: str) -> MorphEntry | None:
        return self._entries.get(word)

    def surfaces(self) -> list[str]:
        return sorted(self._entries)


_ROLE_NAMES = {"prefix": Role.PREFIX, "stem": Role.STEM, "suffix": Role.SUFFIX, "cstem": Role.STEM}


def _valid_morph_text(text: str) -> bool:
    return bool(text) and SEPARATOR not in text and not any(c.isspace() for c in text)


def _parse_canonical_line(line: str) -> MorphEntry:
    """Parse one canonical line; raises ValueError with a reason on bad input."""
    fields = line.split("\t")
    if len(fields) != 3:
        raise ValueError("expected 3 tab-separated fields")
    surface, stem, items = fields
    if not surface or not surface.isalpha():
        raise ValueError(f"surface {surface!r} is not a word")
    morphemes: list[Morpheme] = []
    breaks: set[int] = set()
    if stem != "-":
        if not _valid_morph_text(stem):
            raise ValueError(f"bad stem {stem!r}")
    prefixes: list[Morpheme] = []
    rest: list[tuple[Morpheme, bool]] = []
    if not items:
        raise ValueError("empty morpheme list")
    for item in items.split(","):
        text, sep, role_name = item.partition(":")
        if not sep or role_name not in _ROLE_NAMES:
            raise ValueError(f"bad morpheme item {item!r}")
        if not _valid_morph_text(text):
            raise ValueError(f"bad morpheme text {text!r}")
        role = _ROLE_NAMES[role_name]
        if role is Role.PREFIX:
            if rest:
                raise ValueError("prefix after a non-prefix morpheme")
            prefixes.append(Morpheme(text, role))
        else:
            rest.append((Morpheme(text, role), role_name == "cstem"))
    morphemes.extend(prefixes)
    if stem != "-":
        morphemes.append(Morpheme(stem, Role.STEM))
    for morpheme, is_cstem in rest:
        if is_cstem:
            if not morphemes or morphemes[-1].role is not Role.STEM:
                raise ValueError("cstem must follow a stem")
            breaks.add(len(morphemes))
        morphemes.append(morpheme)
    if len(morphemes) < 2:
        raise ValueError("an entry needs at least two morphemes")
    return MorphEntry(surface, tuple(morphemes), frozenset(breaks))


@dataclass(frozen=True)
class ColumnMap:
    """Adapter for generic tab-separated morphology dumps.

    surface_col and segmentation_col are zero-based column indices; separator
    splits the segmentation cell.  convention is "stem-first" (first piece is
    the stem, the rest are suffixes) or "rendered" (pieces already carry "#"
    markers; adjacent bare stems get a compound separator).
    """

    surface_col: int
    segmentation_col: int
    separator: str = "|"
    convention: str = "stem-first"

    def __post_init__(self):
        if self.surface_col < 0 or self.segmentation_col < 0:
            raise ValueError("column indices must be non-negative")
        if not self.separator:
            raise ValueError("separator must be non-empty")
        if self.convention not in ("stem-first", "rendered"):
            raise ValueError(f"unknown convention {self.convention!r}")


def _parse_mapped_line(line: str, colmap: ColumnMap) -> MorphEntry:
    fields = line.split("\t")
    needed = max(colmap.surface_col, colmap.segmentation_col)
    if len(fields) <= needed:
        raise ValueError(f"expected at least {needed + 1} columns")
    surface = fields[colmap.surface_col]
    if not surface or not surface.isalpha():
        raise ValueError(f"surface {surface!r} is not a word")
    pieces = fields[colmap.segmentation_col].split(colmap.separator)
    if len(pieces) < 2:
        raise ValueError("segmentation has fewer than two pieces")
    morphemes: list[Morpheme] = []
    breaks: set[int] = set()
    if colmap.convention == "stem-first":
        for i, piece in enumerate(pieces):
            if not _valid_morph_text(piece):
                raise ValueError(f"bad piece {piece!r}")
            morphemes.append(Morpheme(piece, Role.STEM if i == 0 else Role.SUFFIX))
    else:
        for piece in pieces:
            if piece.startswith(SEPARATOR) and len(piece) > 1:
                morpheme = Morpheme(piece[1:], Role.SUFFIX)
            elif piece.endswith(SEPARATOR) and len(piece) > 1:
                morpheme = Morpheme(piece[:-1], Role.PREFIX)
            else:
                morpheme = Morpheme(piece, Role.STEM)
            if not _valid_morph_text(morpheme.text):
                raise ValueError(f"bad piece {piece!r}")
            if (
                morpheme.role is Role.STEM
                and morphemes
                and morphemes[-1].role is Role.STEM
            ):
                breaks.add(len(morphemes))
            morphemes.append(morpheme)
    return MorphEntry(surface, tuple(morphemes), frozenset(breaks))


def _better_entry(a: MorphEntry, b: MorphEntry) -> MorphEntry:
    """Duplicate-surface resolution: fewer morphemes, then lexicographically
    smaller rendered sequence."""
    ka = (len(a.morphemes), a.rendered())
    kb = (len(b.morphemes), b.rendered())
    return a if ka <= kb else b


def ingest(path: str, fmt: str | ColumnMap = "canonical") -> tuple[MorphTable, IngestReport]:
    """Read a morphology source file.

    Malformed lines are skipped and counted; duplicate surfaces are resolved
    in favour of the shorter analysis.  Raises ZeroValidRecordsError when
    nothing usable remains.
    """
    if isinstance(fmt, str):
        if fmt != "canonical":
            raise ValueError(f"unknown format {fmt!r}")
        parse = _parse_canonical_line
    else:
        parse = lambda line: _parse_mapped_line(line, fmt)  # noqa: E731
    report = IngestReport()
    entries: dict[str, MorphEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            report.lines += 1
            try:
                entry = parse(line)
            except ValueError as exc:
                report.note_malformed(line_no, str(exc))
                continue
            old = entries.get(entry.surface)
            if old is not None:
                report.duplicates += 1
                entries[entry.surface] = _better_entry(old, entry)
            else:
                entries[entry.surface] = entry
    if not entries:
        raise ZeroValidRecordsError(f"{path}: no valid morphology records")
    report.entries = len(entries)
    return MorphTable(entries.values()), report


def trim(table: MorphTable, min_count: int) -> MorphTable:
    """Keep entries whose every morpheme occurs at least min_count times
    across the original table.  Counts and inventory are recomputed."""
    if min_count < 1:
        raise ValueError(f"min_count must be at least 1, got {min_count}")
    survivors = [
        entry
        for entry in table
        if all(
            table.counts[m] >= min_count
            for m in entry.rendered()
            if m != SEPARATOR
        )
    ]
    return MorphTable(survivors)


def morph_histogram(table: MorphTable) -> dict[int, int]:
    """Morphemes-per-entry histogram; separator tokens do not count."""
    hist: Counter[int] = Counter(len(entry.morphemes) for entry in table)
    return dict(sorted(hist.items()))


@dataclass(frozen=True)
class Collision:
    sequence: tuple[str, ...]
    kept: str
    dropped: str


class ReverseMorphTable:
    """Rendered morpheme sequence -> surface, with prefix queries."""

    def __init__(self, mapping: dict[tuple[str, ...], str], collisions: Sequence[Collision]):
        self._map = mapping
        self.collisions: tuple[Collision, ...] = tuple(collisions)
        prefixes: set[tuple[str, ...]] = set()
        for key in mapping:
            for i in range(1, len(key) + 1):
                prefixes.add(key[:i])
        self._prefixes = prefixes

    def __len__(self) -> int:
        return len(self._map)

    def lookup(self, sequence: Sequence[str]) -> str | None:
        return self._map.get(tuple(sequence))

    def is_key_prefix(self, sequence: Sequence[str]) -> bool:
        """True when sequence is a (possibly complete) prefix of some key."""
        return tuple(sequence) in self._prefixes


def build_reverse(table: MorphTable) -> ReverseMorphTable:
    """Invert the table.  Colliding sequences keep the lexicographically
    smallest surface; every collision is recorded."""
    mapping: dict[tuple[str, ...], str] = {}
    collisions: list[Collision] = []
    for surface in table.surfaces():
        key = table.lookup(surface)
        assert key is not None
        held = mapping.get(key)
        if held is None:
            mapping[key] = surface
        elif surface < held:
            collisions.append(Collision(key, surface, held))
            mapping[key] = surface
        else:
            collisions.append(Collision(key, held, surface))
    return ReverseMorphTable(mapping, collisions)


def save_table(table: MorphTable, path: str) -> None:
    """Write the rendered-table artifact: surface<TAB>tokens, surface-sorted."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for surface in table.surfaces():
            rendered = table.lookup(surface)
            assert rendered is not None
            fh.write(surface + "\t" + " ".join(rendered) + "\n")


def _entry_from_rendered(surface: str, tokens: Sequence[str]) -> MorphEntry:
    morphemes: list[Morpheme] = []
    breaks: set[int] = set()
    for token in tokens:
        if token == SEPARATOR:
            breaks.add(len(morphemes))
            continue
        if token.startswith(SEPARATOR):
            morpheme = Morpheme(token[1:], Role.SUFFIX)
        elif token.endswith(SEPARATOR):
            morpheme = Morpheme(token[:-1], Role.PREFIX)
        else:
            morpheme = Morpheme(token, Role.STEM)
        if not _valid_morph_text(morpheme.text):
            raise ValueError(f"bad rendered morpheme {token!r}")
        morphemes.append(morpheme)
    return MorphEntry(surface, tuple(morphemes), frozenset(breaks))


def load_table(path: str) -> MorphTable:
    """Read back a rendered-table artifact written by save_table."""
    entries: dict[str, MorphEntry] = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(path, line_no, "expected 'surface<TAB>rendered morphemes'")
            surface, rendered = fields
            tokens = rendered.split(" ")
            if not surface or not tokens or any(not t for t in tokens):
                raise ParseError(path, line_no, "empty surface or morpheme")
            if surface in entries:
                raise ParseError(path, line_no, f"duplicate surface {surface!r}")
            try:
                entries[surface] = _entry_from_rendered(surface, tokens)
            except ValueError as exc:
                raise ParseError(path, line_no, str(exc)) from None
    if not entries:
        raise ZeroValidRecordsError(f"{path}: empty morphology artifact")
    return MorphTable(entries.values())
